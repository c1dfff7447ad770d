#include "normop/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace normop {

AtomicMeasure AtomicMeasure::dirac(Complex point, Complex mass) {
  AtomicMeasure mu;
  mu.add(point, mass);
  return mu;
}

void AtomicMeasure::add(Complex point, Complex mass) {
  const CanonicalPoint key = canonical(point);
  auto it = atoms_.find(key);
  if (it == atoms_.end()) {
    if (mass != Complex{}) atoms_.emplace(key, Atom{point, mass});
    return;
  }
  it->second.mass += mass;
  if (it->second.mass == Complex{}) atoms_.erase(it);
}

Complex AtomicMeasure::mass_at(Complex point) const {
  auto it = atoms_.find(canonical(point));
  return it == atoms_.end() ? Complex{} : it->second.mass;
}

Complex AtomicMeasure::total_mass() const {
  Complex s = 0.0;
  for (const auto& [key, atom] : atoms_) s += atom.mass;
  return s;
}

std::vector<AtomicMeasure::Atom> AtomicMeasure::atoms() const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const auto& [key, atom] : atoms_) out.push_back(atom);
  return out;
}

std::vector<Complex> AtomicMeasure::support() const {
  std::vector<Complex> out;
  out.reserve(atoms_.size());
  for (const auto& [key, atom] : atoms_) out.push_back(atom.point);
  return out;
}

bool AtomicMeasure::is_positive(double tol) const {
  return std::all_of(atoms_.begin(), atoms_.end(), [tol](const auto& entry) {
    const Complex m = entry.second.mass;
    return std::abs(m.imag()) <= tol && m.real() >= -tol;
  });
}

AtomicMeasure AtomicMeasure::conj() const {
  AtomicMeasure out;
  for (const auto& [key, atom] : atoms_) out.add(atom.point, std::conj(atom.mass));
  return out;
}

AtomicMeasure AtomicMeasure::scaled(Complex s) const {
  AtomicMeasure out;
  for (const auto& [key, atom] : atoms_) out.add(atom.point, s * atom.mass);
  return out;
}

AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b) {
  AtomicMeasure out = a;
  for (const auto& [key, atom] : b.atoms_) out.add(atom.point, atom.mass);
  return out;
}

AtomicMeasure operator-(const AtomicMeasure& a, const AtomicMeasure& b) {
  return a + b.scaled(-1.0);
}

bool measures_close(const AtomicMeasure& a, const AtomicMeasure& b, double tol) {
  for (const auto& atom : (a - b).atoms())
    if (std::abs(atom.mass) > tol) return false;
  return true;
}

double total_variation(const AtomicMeasure& mu) {
  double s = 0.0;
  for (const auto& atom : mu.atoms()) s += std::abs(atom.mass);
  return s;
}

namespace {

void require_positive(const AtomicMeasure& mu, const char* name) {
  if (!mu.is_positive()) {
    throw Error(ErrorKind::Positivity, std::string(name) + " is not a positive measure");
  }
}

double positive_mass(Complex m) { return std::max(0.0, m.real()); }

}  // namespace

double hellinger_sq(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  require_positive(mu, "first measure");
  require_positive(nu, "second measure");
  double s = 0.0;
  for (Complex point : partition_support(mu, nu)) {
    const double d = std::sqrt(positive_mass(mu.mass_at(point))) -
                     std::sqrt(positive_mass(nu.mass_at(point)));
    s += d * d;
  }
  return s;
}

std::vector<Complex> partition_support(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  std::map<CanonicalPoint, Complex> points;
  for (Complex p : mu.support()) points.emplace(canonical(p), p);
  for (Complex p : nu.support()) points.emplace(canonical(p), p);
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& [key, p] : points) out.push_back(p);
  return out;
}

double partition_sum(const AtomicMeasure& mu, const AtomicMeasure& nu,
                     const std::vector<std::size_t>& cell_of) {
  const std::vector<Complex> points = partition_support(mu, nu);
  if (cell_of.size() != points.size())
    throw Error(ErrorKind::Partition, "partition labels do not match the combined support");
  const std::size_t cells =
      cell_of.empty() ? 0 : *std::max_element(cell_of.begin(), cell_of.end()) + 1;
  std::vector<double> mu_cell(cells, 0.0), nu_cell(cells, 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    mu_cell[cell_of[i]] += positive_mass(mu.mass_at(points[i]));
    nu_cell[cell_of[i]] += positive_mass(nu.mass_at(points[i]));
  }
  double s = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double d = std::sqrt(mu_cell[c]) - std::sqrt(nu_cell[c]);
    s += d * d;
  }
  return s;
}

double partition_sup_oracle(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  require_positive(mu, "first measure");
  require_positive(nu, "second measure");
  const std::vector<Complex> points = partition_support(mu, nu);
  const std::size_t n = points.size();
  if (n > kPartitionOracleMaxAtoms) {
    throw Error(ErrorKind::Size, "partition oracle supports at most " +
                                     std::to_string(kPartitionOracleMaxAtoms) + " atoms, got " +
                                     std::to_string(n));
  }
  if (n == 0) return 0.0;

  std::vector<double> mu_mass(n), nu_mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu_mass[i] = positive_mass(mu.mass_at(points[i]));
    nu_mass[i] = positive_mass(nu.mass_at(points[i]));
  }

  // Restricted growth strings: rgs[0] = 0, rgs[i] <= max(rgs[0..i-1]) + 1.
  std::vector<std::size_t> rgs(n, 0), prefix_max(n, 0);
  std::vector<double> mu_cell(n), nu_cell(n);
  double best = 0.0;
  while (true) {
    std::fill(mu_cell.begin(), mu_cell.end(), 0.0);
    std::fill(nu_cell.begin(), nu_cell.end(), 0.0);
    std::size_t cells = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mu_cell[rgs[i]] += mu_mass[i];
      nu_cell[rgs[i]] += nu_mass[i];
      cells = std::max(cells, rgs[i] + 1);
    }
    double s = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      const double d = std::sqrt(mu_cell[c]) - std::sqrt(nu_cell[c]);
      s += d * d;
    }
    best = std::max(best, s);

    // Advance to the next string.
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
  return best;
}

bool DyadicSquare::contains(Complex z) const {
  return dyadic_square_of(z, level) == *this;
}

DyadicSquare dyadic_square_of(Complex z, int level) {
  const double scale = std::ldexp(1.0, level);
  return {level, static_cast<long long>(std::floor(z.real() * scale)),
          static_cast<long long>(std::floor(z.imag() * scale))};
}

WeakStarReport weakstar_converged(const std::vector<AtomicMeasure>& seq,
                                  const AtomicMeasure& limit, int level, double tol) {
  if (level > kMaxDyadicLevel)
    throw Error(ErrorKind::Precondition, "dyadic level exceeds " + std::to_string(kMaxDyadicLevel));
  if (seq.empty()) throw Error(ErrorKind::Precondition, "empty measure sequence");

  std::set<DyadicSquare> squares;
  auto mark = [&](const AtomicMeasure& mu) {
    for (Complex p : mu.support())
      for (int n = 1; n <= level; ++n) squares.insert(dyadic_square_of(p, n));
  };
  for (const AtomicMeasure& mu : seq) mark(mu);
  mark(limit);

  auto mass_in = [](const AtomicMeasure& mu, const DyadicSquare& sq) {
    Complex s = 0.0;
    for (const auto& atom : mu.atoms())
      if (sq.contains(atom.point)) s += atom.mass;
    return s;
  };

  WeakStarReport report;
  const AtomicMeasure& tail = seq.back();
  for (const DyadicSquare& sq : squares) {
    const double r = std::abs(mass_in(tail, sq) - mass_in(limit, sq));
    report.residuals.push_back({sq, r});
    report.max_residual = std::max(report.max_residual, r);
  }
  report.converged = report.max_residual <= tol;
  return report;
}

bool abs_continuous(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  for (const auto& atom : mu.atoms())
    if (atom.mass != Complex{} && nu.mass_at(atom.point) == Complex{}) return false;
  return true;
}

}  // namespace normop
