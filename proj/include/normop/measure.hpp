#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "normop/common.hpp"

namespace normop {

/// Finitely supported complex Borel measure on the plane. Atoms are keyed by
/// canonical point identity; exact zero masses are never stored.
class AtomicMeasure {
 public:
  struct Atom {
    Complex point;
    Complex mass;
  };

  AtomicMeasure() = default;

  static AtomicMeasure dirac(Complex point, Complex mass = 1.0);

  /// Adds mass at `point`, merging with an existing atom at the same point.
  void add(Complex point, Complex mass);

  Complex mass_at(Complex point) const;
  Complex total_mass() const;
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  /// Atoms in canonical (Re, Im) order.
  std::vector<Atom> atoms() const;
  std::vector<Complex> support() const;

  /// Real, nonnegative masses up to `tol` on the imaginary part and sign.
  bool is_positive(double tol = 1e-12) const;

  AtomicMeasure conj() const;
  AtomicMeasure scaled(Complex s) const;

  friend AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b);
  friend AtomicMeasure operator-(const AtomicMeasure& a, const AtomicMeasure& b);

 private:
  std::map<CanonicalPoint, Atom> atoms_;
};

/// Atomwise comparison of masses at absolute tolerance.
bool measures_close(const AtomicMeasure& a, const AtomicMeasure& b, double tol = 1e-9);

double total_variation(const AtomicMeasure& mu);

/// Sum over the union of supports of (sqrt mu{l} - sqrt nu{l})^2.
double hellinger_sq(const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Largest atom count accepted by the partition enumeration (Bell(10) = 115975).
inline constexpr std::size_t kPartitionOracleMaxAtoms = 10;

/// sum over cells of |sqrt mu(cell) - sqrt nu(cell)|^2 for one partition of
/// the combined support, given as a cell index per support point (the order
/// of `partition_support`).
double partition_sum(const AtomicMeasure& mu, const AtomicMeasure& nu,
                     const std::vector<std::size_t>& cell_of);

/// Combined support of two measures in canonical order.
std::vector<Complex> partition_support(const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Supremum of `partition_sum` over every set partition of the combined
/// support, by restricted-growth-string enumeration.
double partition_sup_oracle(const AtomicMeasure& mu, const AtomicMeasure& nu);

struct DyadicSquare {
  int level = 0;
  long long kx = 0;  // [kx/2^level, (kx+1)/2^level)
  long long ky = 0;  // [ky/2^level, (ky+1)/2^level)

  bool contains(Complex z) const;
  auto operator<=>(const DyadicSquare&) const = default;
};

DyadicSquare dyadic_square_of(Complex z, int level);

struct SquareResidual {
  DyadicSquare square;
  double residual = 0.0;  // |tail(square) - limit(square)|
};

struct WeakStarReport {
  bool converged = false;
  double max_residual = 0.0;
  std::vector<SquareResidual> residuals;
};

inline constexpr int kMaxDyadicLevel = 8;

/// Compares the tail element of `seq` with `limit` on every half-open dyadic
/// square of levels 1..level that meets the union of all supports.
WeakStarReport weakstar_converged(const std::vector<AtomicMeasure>& seq,
                                  const AtomicMeasure& limit, int level, double tol);

/// Every atom of `mu` with nonzero mass carries nonzero `nu` mass.
bool abs_continuous(const AtomicMeasure& mu, const AtomicMeasure& nu);

}  // namespace normop
