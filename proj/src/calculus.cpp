#include "normop/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace normop {

ModelVector CalculusResult::map_vector(const ModelVector& v) const {
  ModelVector out(model.label());
  for (const auto& [c, z] : v.coords())
    out.set({block_map.at(c.block), c.index + offset.at(c.block)}, z);
  return out;
}

CalculusResult functional_calculus_map(const SpectralModel& m, const ScalarFunction& f,
                                       std::string label) {
  if (label.empty()) label = m.label();
  std::vector<Block> blocks;
  CalculusResult out;
  for (const Block& b : m.blocks()) {
    const Complex image = f(b.lambda);
    if (!std::isfinite(image.real()) || !std::isfinite(image.imag()))
      throw Error(ErrorKind::Input, "function is not finite on the spectrum");
    auto it = std::find_if(blocks.begin(), blocks.end(),
                           [&](const Block& x) { return same_point(x.lambda, image); });
    if (it == blocks.end()) {
      out.block_map.push_back(static_cast<std::uint32_t>(blocks.size()));
      out.offset.push_back(0);
      blocks.push_back({image, b.mult, b.allocated});
    } else {
      out.block_map.push_back(static_cast<std::uint32_t>(it - blocks.begin()));
      out.offset.push_back(it->allocated);
      it->mult = it->mult + b.mult;
      it->allocated += b.allocated;
    }
  }
  out.model = SpectralModel(std::move(label), std::move(blocks));
  return out;
}

SpectralModel functional_calculus(const SpectralModel& m, const ScalarFunction& f,
                                  std::string label) {
  return functional_calculus_map(m, f, std::move(label)).model;
}

Complex Polynomial::operator()(Complex z) const {
  Complex s = 0.0;
  for (const auto& [jk, c] : coeffs)
    s += c * std::pow(z, jk.first) * std::pow(std::conj(z), jk.second);
  return s;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [jk, c] : coeffs)
    if (c != Complex{}) d = std::max(d, jk.first + jk.second);
  return d;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Coefficients (ascending) of a product of two real polynomials.
std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

Polynomial bernstein_polynomial(const std::function<double(double)>& f, double a, double b,
                                int n) {
  if (n < 0 || !(b > a)) throw Error(ErrorKind::Precondition, "Bernstein needs n >= 0 and a < b");
  // t = (x - a) / (b - a) and 1 - t as polynomials in x.
  const std::vector<double> t{-a / (b - a), 1.0 / (b - a)};
  const std::vector<double> one_minus_t{1.0 + a / (b - a), -1.0 / (b - a)};
  std::vector<double> in_x(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const double node = n == 0 ? a : a + (b - a) * k / n;
    std::vector<double> term{binomial(n, k) * f(node)};
    for (int i = 0; i < k; ++i) term = multiply(term, t);
    for (int i = 0; i < n - k; ++i) term = multiply(term, one_minus_t);
    for (std::size_t i = 0; i < term.size(); ++i) in_x[i] += term[i];
  }
  // x = (z + conj z) / 2.
  Polynomial p;
  for (int j = 0; j <= n; ++j) {
    if (in_x[j] == 0.0) continue;
    const double scale = in_x[j] / std::pow(2.0, j);
    for (int k = 0; k <= j; ++k) p.coeffs[{k, j - k}] += scale * binomial(j, k);
  }
  return p;
}

double polynomial_approx_check(const SpectralModel& m, const ScalarFunction& f,
                               const Polynomial& p) {
  double worst = 0.0;
  for (const Block& b : m.blocks()) worst = std::max(worst, std::abs(f(b.lambda) - p(b.lambda)));
  return worst;
}

namespace {

void chebyshev_nodes(double lo, double hi, int degree, std::vector<double>& nodes,
                     std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  if (!(hi > lo) || degree == 0) {
    nodes.push_back(0.5 * (lo + hi));
    weights.push_back(1.0);
    return;
  }
  for (int k = 0; k <= degree; ++k) {
    const double c = std::cos(std::numbers::pi * k / degree);
    nodes.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * c);
    double w = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k == degree) w *= 0.5;
    weights.push_back(w);
  }
}

// Lagrange basis values at x for barycentric nodes.
std::vector<double> lagrange_row(const std::vector<double>& nodes, const std::vector<double>& w,
                                 double x) {
  std::vector<double> row(nodes.size(), 0.0);
  if (nodes.size() == 1) {
    row[0] = 1.0;
    return row;
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (x == nodes[k]) {
      row[k] = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    row[k] = w[k] / (x - nodes[k]);
    denom += row[k];
  }
  for (double& r : row) r /= denom;
  return row;
}

}  // namespace

ChebyshevInterpolant::ChebyshevInterpolant(const ScalarFunction& f, double x0, double x1,
                                           double y0, double y1, int degree) {
  chebyshev_nodes(x0, x1, degree, xs_, wx_);
  chebyshev_nodes(y0, y1, degree, ys_, wy_);
  values_.reserve(xs_.size() * ys_.size());
  for (double x : xs_)
    for (double y : ys_) values_.push_back(f(Complex(x, y)));
}

Complex ChebyshevInterpolant::operator()(Complex z) const {
  const std::vector<double> lx = lagrange_row(xs_, wx_, z.real());
  const std::vector<double> ly = lagrange_row(ys_, wy_, z.imag());
  Complex s = 0.0;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (lx[i] == 0.0) continue;
    Complex row = 0.0;
    for (std::size_t j = 0; j < ys_.size(); ++j) row += ly[j] * values_[i * ys_.size() + j];
    s += lx[i] * row;
  }
  return s;
}

SeparatedProjection separated_projection(const SpectralModel& m, const Region& k1,
                                         const Region& k2, double eps, double target,
                                         int max_degree) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Precondition, "separation eps must be positive");
  std::vector<Complex> in1, in2;
  std::vector<bool> first(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Complex l = m.block(i).lambda;
    const bool a = k1.contains(l);
    const bool b = k2.contains(l);
    if (a == b) {
      throw Error(ErrorKind::Partition, "eigenvalue (" + std::to_string(l.real()) + ", " +
                                            std::to_string(l.imag()) +
                                            (a ? ") lies in both regions" : ") lies in neither region"));
    }
    first[i] = a;
    (a ? in1 : in2).push_back(l);
  }
  for (Complex a : in1) {
    for (Complex b : in2) {
      const double d = std::abs(a - b);
      if (d <= eps) {
        throw Error(ErrorKind::Separation,
                    "atoms (" + std::to_string(a.real()) + ", " + std::to_string(a.imag()) +
                        ") and (" + std::to_string(b.real()) + ", " + std::to_string(b.imag()) +
                        ") are " + std::to_string(d) + " apart, not more than eps",
                    d);
      }
    }
  }

  SeparatedProjection out;
  out.projection.model = out.bump.model = m.label();
  for (std::size_t i = 0; i < m.size(); ++i) out.projection.multipliers.push_back(first[i] ? 1.0 : 0.0);

  // Product of Gaussian dips: exactly 1 on K1, at most 1e-9 beyond eps.
  const double n1 = static_cast<double>(std::max<std::size_t>(1, in1.size()));
  out.sigma = eps / std::sqrt(2.0 * std::log(n1 * 1e9));
  const double two_sigma_sq = 2.0 * out.sigma * out.sigma;
  const ScalarFunction bump = [&](Complex z) -> Complex {
    double prod = 1.0;
    for (Complex a : in1) prod *= 1.0 - std::exp(-std::norm(z - a) / two_sigma_sq);
    return 1.0 - prod;
  };
  for (std::size_t i = 0; i < m.size(); ++i) out.bump.multipliers.push_back(bump(m.block(i).lambda));
  out.bump_error = operator_distance(out.bump, out.projection);

  if (m.size() == 0) {
    out.witness_degree = 0;
    return out;
  }
  double x0 = m.block(0).lambda.real(), x1 = x0;
  double y0 = m.block(0).lambda.imag(), y1 = y0;
  for (const Block& b : m.blocks()) {
    x0 = std::min(x0, b.lambda.real());
    x1 = std::max(x1, b.lambda.real());
    y0 = std::min(y0, b.lambda.imag());
    y1 = std::max(y1, b.lambda.imag());
  }
  for (int degree = 2; degree <= max_degree; degree *= 2) {
    const ChebyshevInterpolant p(bump, x0, x1, y0, y1, degree);
    double err = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      err = std::max(err, std::abs(p(m.block(i).lambda) - out.projection.multipliers[i]));
    out.witness_error = err;
    if (err <= target) {
      out.witness_degree = degree;
      break;
    }
  }
  return out;
}

}  // namespace normop
