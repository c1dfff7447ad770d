#include "normop/typespace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace normop {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ||v - w|| on raw coordinates; descriptors over the same parameters may
// come from different models.
double coord_distance_sq(const ModelVector& v, const ModelVector& w) {
  std::map<Coord, Complex> diff = v.coords();
  for (const auto& [c, z] : w.coords()) diff[c] -= z;
  double s = 0.0;
  for (const auto& [c, z] : diff) s += std::norm(z);
  return s;
}

void require_arity_one(const TypeDescriptor& p) {
  if (p.n != 1) throw Error(ErrorKind::Arity, "expected a 1-type, got arity " + std::to_string(p.n));
}

}  // namespace

std::string parameter_fingerprint(const std::vector<ModelVector>& b) {
  if (b.empty()) return kEmptyParams;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[96];
  for (const ModelVector& v : b) {
    h = fnv1a(h, v.model());
    h = fnv1a(h, "|");
    for (const auto& [c, z] : v.coords()) {
      const CanonicalPoint k = canonical(z);
      std::snprintf(buf, sizeof buf, "%u:%llu:%.12g:%.12g;", c.block,
                    static_cast<unsigned long long>(c.index), k.re, k.im);
      h = fnv1a(h, buf);
    }
  }
  std::snprintf(buf, sizeof buf, "B%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TypeDescriptor type_of(const SpectralModel& model, const std::vector<ModelVector>& tuple,
                       const std::vector<ModelVector>& b, std::string param_label) {
  for (const ModelVector& a : tuple) require_in_model(model, a);
  const Subspace s = dcl_span(model, b);
  TypeDescriptor p;
  p.n = tuple.size();
  p.param_label = param_label.empty() ? parameter_fingerprint(b) : std::move(param_label);
  std::vector<ModelVector> residual;
  for (const ModelVector& a : tuple) {
    p.base.push_back(project(a, s));
    residual.push_back(a - p.base.back());
  }
  p.gram.assign(p.n, std::vector<AtomicMeasure>(p.n));
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < p.n; ++j)
      p.gram[i][j] = scalar_measure(model, residual[i], residual[j]);
  return p;
}

bool types_equal(const TypeDescriptor& p, const TypeDescriptor& q, double tol) {
  if (p.n != q.n || p.param_label != q.param_label) return false;
  for (std::size_t i = 0; i < p.n; ++i) {
    if (std::sqrt(coord_distance_sq(p.base[i], q.base[i])) > tol) return false;
    for (std::size_t j = 0; j < p.n; ++j)
      if (!measures_close(p.gram[i][j], q.gram[i][j], tol)) return false;
  }
  return true;
}

AtomicMeasure phi1(const TypeDescriptor& p) {
  require_arity_one(p);
  if (p.param_label != kEmptyParams)
    throw Error(ErrorKind::Precondition, "phi1 is defined for types over the empty set");
  return p.gram[0][0];
}

double type_distance(const TypeDescriptor& p, const TypeDescriptor& q) {
  require_arity_one(p);
  require_arity_one(q);
  if (p.param_label != q.param_label) {
    throw Error(ErrorKind::Precondition, "types over different parameters ('" + p.param_label +
                                             "' vs '" + q.param_label + "')");
  }
  return std::sqrt(coord_distance_sq(p.base[0], q.base[0]) +
                   hellinger_sq(p.gram[0][0], q.gram[0][0]));
}

bool is_principal(const TypeDescriptor& p, const TheoryDescriptor& theory, double tol) {
  if (p.n == 0) throw Error(ErrorKind::Arity, "principality of a 0-type");
  if (p.param_label != kEmptyParams)
    throw Error(ErrorKind::Precondition, "principality is decided for types over the empty set");
  bool principal = true;
  for (std::size_t i = 0; i < p.n; ++i) {
    double total = 0.0;
    double isolated = 0.0;
    for (const auto& atom : p.gram[i][i].atoms()) {
      if (!theory.contains(atom.point)) {
        throw Error(ErrorKind::InconsistentType,
                    "type puts mass on (" + std::to_string(atom.point.real()) + ", " +
                        std::to_string(atom.point.imag()) + ") outside K");
      }
      const double m = atom.mass.real();
      total += m;
      bool on_isolated = false;
      for (const TheoryAtom& a : theory.atoms)
        if (a.isolated && same_point(a.lambda, atom.point)) on_isolated = true;
      if (on_isolated) isolated += m;
    }
    if (std::abs(total - isolated) > tol) principal = false;
  }
  return principal;
}

bool omega_categorical(const TheoryDescriptor& theory) {
  if (!theory.perfect.empty()) return false;
  return std::all_of(theory.atoms.begin(), theory.atoms.end(),
                     [](const TheoryAtom& a) { return a.isolated; });
}

namespace {

struct NetGeometry {
  std::size_t base_dims = 0;  // real coordinates of <B>_0
  std::size_t mass_dims = 0;  // available atoms
  double spacing = 0.0;
  long long steps = 0;        // grid indices per axis: [-steps, steps] or [0, steps]
  double radius = 0.0;
  double count = 0.0;
};

NetGeometry net_geometry(std::size_t base_dims, std::size_t mass_dims, double eps, double cap) {
  NetGeometry g;
  g.base_dims = base_dims;
  g.mass_dims = mass_dims;
  const double d = static_cast<double>(base_dims + mass_dims);
  g.spacing = eps / (2.0 * std::sqrt(d));
  const double covering = g.spacing * std::sqrt(d) / 2.0;
  g.radius = cap + covering;
  g.steps = static_cast<long long>(std::floor(g.radius / g.spacing));
  g.count = std::pow(2.0 * g.steps + 1.0, static_cast<double>(base_dims)) *
            std::pow(g.steps + 1.0, static_cast<double>(mass_dims));
  return g;
}

}  // namespace

EpsilonNet epsilon_net(const SpectralModel& model, const std::vector<ModelVector>& b, double eps,
                       double norm_cap, std::size_t budget) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Precondition, "net radius must be positive");
  if (norm_cap < 0.0) throw Error(ErrorKind::Precondition, "norm cap must be nonnegative");

  const Subspace s = dcl_span(model, b);
  const std::string label = parameter_fingerprint(b);

  // Each basis vector of <B>_0 lies in a single block.
  std::vector<std::uint64_t> used(model.size(), 0);
  for (const ModelVector& u : s.basis) ++used[u.coords().begin()->first.block];
  std::vector<std::size_t> available;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Block& blk = model.block(i);
    if (blk.mult.is_infinite() || blk.mult.value() > used[i]) available.push_back(i);
  }

  auto make_type = [&](const std::vector<Complex>& base_coef, const std::vector<double>& root_mass) {
    TypeDescriptor t;
    t.n = 1;
    t.param_label = label;
    ModelVector base(model.label());
    for (std::size_t k = 0; k < base_coef.size(); ++k) base = base + base_coef[k] * s.basis[k];
    t.base.push_back(std::move(base));
    AtomicMeasure mu;
    for (std::size_t k = 0; k < root_mass.size(); ++k)
      mu.add(model.block(available[k]).lambda, root_mass[k] * root_mass[k]);
    t.gram = {{mu}};
    return t;
  };

  EpsilonNet net;
  const std::size_t base_dims = 2 * s.dim();
  net.dimension = base_dims + available.size();
  if (eps >= norm_cap || net.dimension == 0) {
    net.types.push_back(
        make_type(std::vector<Complex>(s.dim()), std::vector<double>(available.size())));
    return net;
  }

  const NetGeometry g = net_geometry(base_dims, available.size(), eps, norm_cap);
  if (g.count > static_cast<double>(budget)) {
    double lo = eps, hi = norm_cap;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (net_geometry(base_dims, available.size(), mid, norm_cap).count > budget)
        lo = mid;
      else
        hi = mid;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", hi);
    throw Error(ErrorKind::Budget,
                "net of radius " + std::to_string(eps) + " exceeds the budget of " +
                    std::to_string(budget) + " types; achievable radius " + buf,
                hi);
  }
  net.spacing = g.spacing;

  const std::size_t dims = net.dimension;
  std::vector<long long> idx(dims);
  for (std::size_t k = 0; k < base_dims; ++k) idx[k] = -g.steps;
  const double limit_sq = g.radius * g.radius;
  while (true) {
    double norm_sq = 0.0;
    for (long long i : idx) norm_sq += static_cast<double>(i * i);
    norm_sq *= g.spacing * g.spacing;
    if (norm_sq <= limit_sq) {
      std::vector<Complex> coef(s.dim());
      for (std::size_t k = 0; k < s.dim(); ++k)
        coef[k] = Complex(static_cast<double>(idx[2 * k]) * g.spacing,
                          static_cast<double>(idx[2 * k + 1]) * g.spacing);
      std::vector<double> roots(available.size());
      for (std::size_t k = 0; k < roots.size(); ++k)
        roots[k] = static_cast<double>(idx[base_dims + k]) * g.spacing;
      net.types.push_back(make_type(coef, roots));
    }
    std::size_t k = 0;
    for (; k < dims; ++k) {
      if (idx[k] < g.steps) {
        ++idx[k];
        break;
      }
      idx[k] = k < base_dims ? -g.steps : 0;
    }
    if (k == dims) break;
  }
  return net;
}

}  // namespace normop
