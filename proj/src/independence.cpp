#include "normop/independence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace normop {

namespace {

// Finite-block coordinates of an acl residual are rounding noise.
constexpr double kFiniteResidualNoise = 1e-10;

}  // namespace

IndependenceReport indep(const SpectralModel& model, const std::vector<ModelVector>& a,
                         const std::vector<ModelVector>& b, const std::vector<ModelVector>& c,
                         double tol) {
  for (const ModelVector& v : a) require_in_model(model, v);
  std::vector<ModelVector> bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  const Subspace over_b = acl_span(model, b);
  const Subspace over_bc = acl_span(model, bc);

  IndependenceReport report;
  report.tolerance = tol;
  report.independent = true;
  for (const ModelVector& v : a) {
    const double r = (project(v, over_bc) - project(v, over_b)).norm();
    report.witnesses.push_back(r);
    if (r > tol) report.independent = false;
  }
  return report;
}

FreeExtension free_extension(const SpectralModel& model, const ModelVector& a,
                             const std::vector<ModelVector>& b,
                             const std::vector<ModelVector>& /*c*/) {
  require_in_model(model, a);
  const Subspace closed = acl_span(model, b);
  const ModelVector inside = project(a, closed);
  const ModelVector residual = a - inside;

  FreeExtension out{model, inside};
  // Fresh coordinates are orthogonal to everything already in the model, so
  // the copy is independent from any C.
  std::map<Coord, Coord> fresh;
  for (const auto& [coord, z] : residual.coords()) {
    const Block& blk = model.block(coord.block);
    if (blk.mult.is_finite()) {
      if (std::abs(z) > kFiniteResidualNoise) {
        throw Error(ErrorKind::Precondition,
                    "residual off acl(B) has mass in the finite block " +
                        std::to_string(coord.block));
      }
      continue;
    }
    fresh.emplace(coord, Coord{coord.block, out.model.allocate_fresh(coord.block)});
  }
  for (const auto& [coord, target] : fresh) out.a.add(target, residual.get(coord));
  return out;
}

MorleySequence morley_sequence(const SpectralModel& model, const ModelVector& a,
                               const std::vector<ModelVector>& b, std::size_t length) {
  MorleySequence seq{model, {}};
  if (length == 0) return seq;
  seq.terms.push_back(a);
  while (seq.terms.size() < length) {
    FreeExtension next = free_extension(seq.model, a, b, seq.terms);
    seq.model = std::move(next.model);
    seq.terms.push_back(std::move(next.a));
  }
  return seq;
}

CanonicalBaseEstimate canonical_base_estimate(const SpectralModel& model, const ModelVector& a,
                                              const std::vector<ModelVector>& b, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::Precondition, "Cesaro mean of an empty sequence");
  const MorleySequence seq = morley_sequence(model, a, b, m);
  CanonicalBaseEstimate est;
  est.mean = ModelVector(model.label());
  for (const ModelVector& t : seq.terms) est.mean = est.mean + t;
  est.mean = Complex(1.0 / static_cast<double>(m)) * est.mean;
  est.projection = project(a, acl_span(model, b));
  est.deviation = (est.mean - est.projection).norm();
  est.predicted = (a - est.projection).norm() / std::sqrt(static_cast<double>(m));
  return est;
}

LocalCharacterWitness local_character_witness(const SpectralModel& model, const ModelVector& a,
                                              const std::vector<ModelVector>& b, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Precondition, "eps must be positive");
  require_in_model(model, a);
  const ModelVector target = project(a, acl_span(model, b));

  LocalCharacterWitness w;
  std::vector<ModelVector> subset;
  std::vector<bool> taken(b.size(), false);
  ModelVector current = project(a, acl_span(model, subset));
  double gap = (target - current).norm();
  while (gap >= eps) {
    std::size_t best = b.size();
    double best_gap = std::numeric_limits<double>::infinity();
    ModelVector best_proj;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (taken[i]) continue;
      std::vector<ModelVector> trial = subset;
      trial.push_back(b[i]);
      ModelVector proj = project(a, acl_span(model, trial));
      const double g = (target - proj).norm();
      if (g < best_gap) {
        best_gap = g;
        best = i;
        best_proj = std::move(proj);
      }
    }
    if (best == b.size()) break;  // all of B used; the gap is zero up to rounding
    taken[best] = true;
    subset.push_back(b[best]);
    w.chosen.push_back(best);
    current = std::move(best_proj);
    gap = best_gap;
  }
  w.a_prime = a - target + current;
  w.distance = (a - w.a_prime).norm();
  return w;
}

}  // namespace normop
