#include "normop/closure.hpp"

#include <algorithm>

namespace normop {

namespace {

void require_models(const SpectralModel& model, const std::vector<ModelVector>& vectors) {
  for (const ModelVector& v : vectors) require_in_model(model, v);
}

}  // namespace

Subspace orthonormalize(const std::string& model, const std::vector<ModelVector>& vectors,
                        double drop) {
  Subspace s{model, {}};
  for (const ModelVector& candidate : vectors) {
    ModelVector r = candidate;
    for (int pass = 0; pass < 2; ++pass)
      for (const ModelVector& u : s.basis) r = r - inner(r, u) * u;
    const double n = r.norm();
    if (n > drop) s.basis.push_back(Complex(1.0 / n) * r);
  }
  return s;
}

Subspace dcl_span(const SpectralModel& model, const std::vector<ModelVector>& b) {
  require_models(model, b);
  std::vector<ModelVector> pieces;
  for (const ModelVector& v : b) {
    std::map<std::uint32_t, ModelVector> by_block;
    for (const auto& [c, z] : v.coords()) {
      auto [it, fresh] = by_block.try_emplace(c.block, model.label());
      it->second.set(c, z);
    }
    for (auto& [block, piece] : by_block) pieces.push_back(std::move(piece));
  }
  return orthonormalize(model.label(), pieces);
}

Subspace dcl_span_krylov(const SpectralModel& model, const std::vector<ModelVector>& b) {
  require_models(model, b);
  Subspace s = orthonormalize(model.label(), b);
  std::size_t processed = 0;
  while (processed < s.basis.size()) {
    const ModelVector u = s.basis[processed++];
    for (const ModelVector& w : {apply_T(model, u), apply_Tstar(model, u)}) {
      ModelVector r = w;
      for (int pass = 0; pass < 2; ++pass)
        for (const ModelVector& e : s.basis) r = r - inner(r, e) * e;
      const double n = r.norm();
      if (n > kGramSchmidtDrop) s.basis.push_back(Complex(1.0 / n) * r);
    }
  }
  return s;
}

Subspace h_fin(const SpectralModel& model, std::uint64_t budget) {
  Subspace s{model.label(), {}};
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Block& blk = model.block(i);
    if (blk.mult.is_infinite()) continue;
    if (blk.mult.value() > budget) {
      throw Error(ErrorKind::Budget,
                  "finite block " + std::to_string(i) + " has dimension " +
                      blk.mult.to_string() + ", above the materialization budget " +
                      std::to_string(budget),
                  static_cast<double>(blk.mult.value()));
    }
    for (std::uint64_t j = 0; j < blk.mult.value(); ++j)
      s.basis.push_back(ModelVector::unit(model.label(), {static_cast<std::uint32_t>(i), j}));
  }
  return s;
}

Subspace acl_span(const SpectralModel& model, const std::vector<ModelVector>& b,
                  std::uint64_t budget) {
  Subspace fin = h_fin(model, budget);
  const Subspace d = dcl_span(model, b);
  std::vector<ModelVector> all = std::move(fin.basis);
  all.insert(all.end(), d.basis.begin(), d.basis.end());
  return orthonormalize(model.label(), all);
}

ModelVector project(const ModelVector& v, const Subspace& s) {
  if (v.model() != s.model) {
    throw Error(ErrorKind::ModelMismatch,
                "vector of model '" + v.model() + "' projected onto a subspace of '" + s.model +
                    "'");
  }
  ModelVector out(s.model);
  for (const ModelVector& u : s.basis) out = out + inner(v, u) * u;
  return out;
}

double membership_residual(const ModelVector& v, const Subspace& s) {
  return (v - project(v, s)).norm();
}

double containment_residual(const Subspace& a, const Subspace& b) {
  double worst = 0.0;
  for (const ModelVector& u : a.basis) worst = std::max(worst, membership_residual(u, b));
  return worst;
}

}  // namespace normop
