#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "normop/model.hpp"

namespace normop {

using ScalarFunction = std::function<Complex(Complex)>;

/// f(T) as a model, together with the coordinate map from the source.
struct CalculusResult {
  SpectralModel model;
  std::vector<std::uint32_t> block_map;  // source block -> image block
  std::vector<std::uint64_t> offset;     // coordinate shift inside the image block

  ModelVector map_vector(const ModelVector& v) const;
};

/// Replaces every eigenvalue lambda by f(lambda); blocks whose images
/// coincide merge and their multiplicities add. The label defaults to the
/// source label.
CalculusResult functional_calculus_map(const SpectralModel& m, const ScalarFunction& f,
                                       std::string label = {});
SpectralModel functional_calculus(const SpectralModel& m, const ScalarFunction& f,
                                  std::string label = {});

/// p(z, conj z) = sum of c_{jk} z^j conj(z)^k.
struct Polynomial {
  std::map<std::pair<int, int>, Complex> coeffs;

  Complex operator()(Complex z) const;
  int degree() const;
};

/// Bernstein polynomial of degree n for a real function of Re z on [a, b],
/// expanded in z and conj z.
Polynomial bernstein_polynomial(const std::function<double(double)>& f, double a, double b, int n);

/// ||f(T) - p(T, T*)|| = max over the spectrum of |f(lambda) - p(lambda)|.
double polynomial_approx_check(const SpectralModel& m, const ScalarFunction& f,
                               const Polynomial& p);

struct SeparatedProjection {
  DiagonalOperator projection;  // E(K1)
  DiagonalOperator bump;        // f(T) for the bump f
  double sigma = 0.0;           // bump width
  double bump_error = 0.0;      // ||f(T) - E(K1)||
  int witness_degree = -1;      // Chebyshev degree reaching the target, -1 if none did
  double witness_error = 0.0;   // ||p(T, T*) - E(K1)|| at that degree
};

/// E(K1) for regions K1, K2 that split the spectrum with separation > eps,
/// realized as a smooth bump of T and witnessed by a polynomial.
SeparatedProjection separated_projection(const SpectralModel& m, const Region& k1,
                                         const Region& k2, double eps, double target = 1e-6,
                                         int max_degree = 512);

/// Value at z of the tensor Chebyshev interpolant of `f` of degree `degree`
/// on the box [x0, x1] x [y0, y1]; a degenerate side uses one node.
class ChebyshevInterpolant {
 public:
  ChebyshevInterpolant(const ScalarFunction& f, double x0, double x1, double y0, double y1,
                       int degree);
  Complex operator()(Complex z) const;

 private:
  std::vector<double> xs_, ys_, wx_, wy_;
  std::vector<Complex> values_;  // row-major over (x node, y node)
};

}  // namespace normop
