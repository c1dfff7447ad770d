#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "normop/linalg.hpp"
#include "normop/model.hpp"

namespace normop::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }
  double gauss() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Complex cgauss() { return {gauss(), gauss()}; }
  /// Uniform point of the closed unit disk.
  Complex disk(double radius = 1.0) {
    const double r = radius * std::sqrt(uniform());
    const double t = uniform(0.0, 2.0 * M_PI);
    return std::polar(r, t);
  }

 private:
  std::mt19937_64 gen_;
};

/// Haar-ish random unitary: Gram-Schmidt of a complex Gaussian matrix.
inline linalg::ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  linalg::ComplexMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> v(n);
    for (auto& z : v) z = rng.cgauss();
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, k);
      }
    }
    double nrm = 0.0;
    for (auto& z : v) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / nrm;
  }
  return q;
}

inline linalg::ComplexMatrix conjugate(const linalg::ComplexMatrix& u, const std::vector<Complex>& d) {
  return u * linalg::ComplexMatrix::diagonal(d) * u.adjoint();
}

/// Distinct points of the unit disk with pairwise distance >= sep.
inline std::vector<Complex> separated_points(Rng& rng, std::size_t n, double sep,
                                             double radius = 1.0) {
  std::vector<Complex> pts;
  while (pts.size() < n) {
    const Complex z = rng.disk(radius);
    bool ok = true;
    for (Complex w : pts)
      if (std::abs(z - w) < sep) ok = false;
    if (ok) pts.push_back(z);
  }
  return pts;
}

/// Model with the given eigenvalues; multiplicities drawn from {1, 2, 3, INF}
/// with at least `min_inf` infinite blocks, and `fresh` coordinates
/// allocated in every infinite block.
inline SpectralModel random_model(Rng& rng, const std::vector<Complex>& lambdas,
                                  std::size_t min_inf, std::uint64_t fresh,
                                  const std::string& label = "M") {
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const bool inf = i < min_inf || rng.uniform() < 0.3;
    Block b{lambdas[i], inf ? Multiplicity::infinite() : Multiplicity::finite(1 + rng.index(3)), 0};
    if (inf) b.allocated = fresh;
    blocks.push_back(b);
  }
  return SpectralModel(label, std::move(blocks));
}

/// Random vector supported on every allocated coordinate, each coordinate
/// kept with probability `density`.
inline ModelVector random_vector(Rng& rng, const SpectralModel& m, double density = 1.0) {
  ModelVector v(m.label());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::uint64_t j = 0; j < m.block(i).allocated; ++j)
      if (rng.uniform() < density) v.set({static_cast<std::uint32_t>(i), j}, rng.cgauss());
  return v;
}

inline ModelVector unit_random_vector(Rng& rng, const SpectralModel& m, double density = 1.0) {
  ModelVector v = random_vector(rng, m, density);
  while (v.is_zero()) v = random_vector(rng, m, density);
  return Complex(1.0 / v.norm()) * v;
}

}  // namespace normop::testing
