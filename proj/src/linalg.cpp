#include "normop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace normop::linalg {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::Dimension, "matrix entry count " + std::to_string(data_.size()) +
                                          " != " + std::to_string(rows_) + "x" +
                                          std::to_string(cols_));
  }
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::Input, "matrix has a non-finite entry");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::Dimension, "matrix product shape mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorKind::Dimension, "matrix sum shape mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a + Complex(-1.0) * b;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (Complex& z : out.data_) z *= s;
  return out;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return unitary * ComplexMatrix::diagonal(eigenvalues) * unitary.adjoint();
}

double normality_residual(const ComplexMatrix& t) {
  if (!t.square()) throw Error(ErrorKind::Dimension, "normality residual needs a square matrix");
  const ComplexMatrix ts = t.adjoint();
  return (t * ts - ts * t).frobenius_norm();
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zeroes a(p,q) with the unitary J = diag(1, e^{-i phi}) * [[c, s], [-s, c]],
// applying a <- J^H a J and v <- v J.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const Complex phase = apq / g;  // e^{i phi}
  const double alpha = a(p, p).real();
  const double beta = a(q, q).real();
  const double tau = (beta - alpha) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex aip = a(i, p);
    const Complex aiq = a(i, q);
    a(i, p) = aip * jpp + aiq * jqp;
    a(i, q) = aip * jpq + aiq * jqq;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Complex apj = a(p, j);
    const Complex aqj = a(q, j);
    a(p, j) = std::conj(jpp) * apj + std::conj(jqp) * aqj;
    a(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t i = 0; i < v.rows(); ++i) {
    const Complex vip = v(i, p);
    const Complex viq = v(i, q);
    v(i, p) = vip * jpp + viq * jqp;
    v(i, q) = vip * jpq + viq * jqq;
  }
}

// Reorders eigenpairs so that eigenvalues are lexicographic (Re, Im).
void sort_pairs(std::vector<Complex>& values, ComplexMatrix& vectors) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return lex_less(values[i], values[j]); });
  std::vector<Complex> sorted(values.size());
  ComplexMatrix permuted(vectors.rows(), vectors.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted[k] = values[order[k]];
    for (std::size_t r = 0; r < vectors.rows(); ++r) permuted(r, k) = vectors(r, order[k]);
  }
  values = std::move(sorted);
  vectors = std::move(permuted);
}

}  // namespace

SpectralDecomposition hermitian_eigen(const ComplexMatrix& input, double tol) {
  if (!input.square()) throw Error(ErrorKind::Dimension, "eigensolver needs a square matrix");
  const std::size_t n = input.rows();
  const double scale = std::max(1.0, input.frobenius_norm());
  const double skew = (input - input.adjoint()).frobenius_norm();
  if (skew > tol * scale) {
    throw Error(ErrorKind::Precondition,
                "matrix is not Hermitian: ||A - A*||_F = " + std::to_string(skew), skew);
  }

  ComplexMatrix a = Complex(0.5) * (input + input.adjoint());
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double target = 1e-14 * scale;
  double off = off_diagonal_norm(a);
  for (int sweep = 0; sweep < kJacobiSweepBudget && off > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    off = off_diagonal_norm(a);
  }
  if (off > 1e-10 * scale) {
    throw Error(ErrorKind::Convergence,
                "Jacobi did not converge in " + std::to_string(kJacobiSweepBudget) +
                    " sweeps (off-diagonal norm " + std::to_string(off) + ")",
                off);
  }

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i).real();
  sort_pairs(out.eigenvalues, v);
  out.unitary = std::move(v);
  out.cluster_tolerance = 0.0;
  return out;
}

SpectralDecomposition decompose_normal(const ComplexMatrix& t, double tol, double cluster_tol) {
  if (!t.square()) throw Error(ErrorKind::Dimension, "decomposition needs a square matrix");
  const std::size_t n = t.rows();
  const double scale = std::max(1.0, t.frobenius_norm());
  const double residual = normality_residual(t);
  if (residual > tol * scale) {
    throw Error(ErrorKind::NotNormal,
                "matrix is not normal: ||TT* - T*T||_F = " + std::to_string(residual), residual);
  }
  if (cluster_tol < 0.0) cluster_tol = 1e-7 * scale;

  const ComplexMatrix ts = t.adjoint();
  const ComplexMatrix re_part = Complex(0.5) * (t + ts);
  const ComplexMatrix im_part = Complex(0.0, -0.5) * (t - ts);

  SpectralDecomposition da = hermitian_eigen(re_part, 1e-10);
  ComplexMatrix u = da.unitary;

  // Resolve each cluster of the real part with the imaginary part.
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && da.eigenvalues[end].real() - da.eigenvalues[end - 1].real() <= cluster_tol)
      ++end;
    const std::size_t k = end - start;
    if (k > 1) {
      ComplexMatrix basis(n, k);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < k; ++c) basis(r, c) = u(r, start + c);
      ComplexMatrix restricted = basis.adjoint() * im_part * basis;
      restricted = Complex(0.5) * (restricted + restricted.adjoint());
      const SpectralDecomposition db = hermitian_eigen(restricted, 1e-8);
      const ComplexMatrix rotated = basis * db.unitary;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < k; ++c) u(r, start + c) = rotated(r, c);
    }
    start = end;
  }

  // Rayleigh quotients u_j* T u_j.
  std::vector<Complex> lambda(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      Complex tu = 0.0;
      for (std::size_t c = 0; c < n; ++c) tu += t(r, c) * u(c, j);
      acc += std::conj(u(r, j)) * tu;
    }
    lambda[j] = acc;
  }
  sort_pairs(lambda, u);

  SpectralDecomposition out;
  out.eigenvalues = std::move(lambda);
  out.unitary = std::move(u);
  out.cluster_tolerance = cluster_tol;
  return out;
}

}  // namespace normop::linalg
