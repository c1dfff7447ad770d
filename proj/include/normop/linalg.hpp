#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "normop/common.hpp"

namespace normop::linalg {

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  double max_abs() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;  // sorted lexicographically (Re, Im)
  ComplexMatrix unitary;             // column j is the eigenvector of eigenvalues[j]
  double cluster_tolerance = 0.0;

  /// U diag(lambda) U*.
  ComplexMatrix reconstruct() const;
};

/// ||TT* - T*T||_F.
double normality_residual(const ComplexMatrix& t);

/// Cyclic Jacobi on a Hermitian matrix. `tol` bounds ||A - A*||_F relative
/// to max(1, ||A||_F).
SpectralDecomposition hermitian_eigen(const ComplexMatrix& a, double tol = 1e-10);

/// Spectral decomposition of a normal matrix via simultaneous
/// diagonalization of its Hermitian and skew-Hermitian parts. The cluster
/// tolerance defaults to 1e-7 * max(1, ||T||_F) when `cluster_tol` < 0.
SpectralDecomposition decompose_normal(const ComplexMatrix& t, double tol = 1e-8,
                                       double cluster_tol = -1.0);

inline constexpr int kJacobiSweepBudget = 30;

}  // namespace normop::linalg
