#pragma once

#include <cmath>
#include <compare>
#include <complex>
#include <stdexcept>
#include <string>

namespace normop {

using Complex = std::complex<double>;

enum class ErrorKind {
  Dimension,
  Precondition,
  Convergence,
  NotNormal,
  ModelMismatch,
  Partition,
  DuplicateEigenvalue,
  Capacity,
  Positivity,
  Size,
  Budget,
  InconsistentType,
  Arity,
  Realization,
  NoAlignment,
  Divergence,
  Separation,
  EmptySet,
  Input,
};

const char* to_string(ErrorKind kind);

/// Library error. `value()` carries the quantitative payload some kinds
/// report: the normality residual, the achievable epsilon of a net, the best
/// partial alignment bound, the oscillation witness of a divergent sequence.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double value = 0.0)
      : std::runtime_error(what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

/// Eigenvalue identity: both parts rounded to 12 decimal places.
struct CanonicalPoint {
  double re = 0.0;
  double im = 0.0;

  auto operator<=>(const CanonicalPoint&) const = default;
};

inline double canonical_component(double x) {
  double r = std::nearbyint(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // fold -0
}

inline CanonicalPoint canonical(Complex z) {
  return {canonical_component(z.real()), canonical_component(z.imag())};
}

inline bool same_point(Complex a, Complex b) {
  return canonical(a) == canonical(b);
}

/// Lexicographic (real, imaginary) order.
inline bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace normop
