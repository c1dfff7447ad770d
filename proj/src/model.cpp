#include "normop/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace normop {

// --- Multiplicity ---------------------------------------------------------

std::uint64_t Multiplicity::value() const {
  if (infinite_) throw Error(ErrorKind::Precondition, "value() of an infinite multiplicity");
  return n_;
}

Multiplicity operator+(Multiplicity a, Multiplicity b) {
  if (a.infinite_ || b.infinite_) return Multiplicity::infinite();
  return Multiplicity::finite(a.n_ + b.n_);
}

bool operator<(Multiplicity a, Multiplicity b) {
  if (a.infinite_) return false;
  if (b.infinite_) return true;
  return a.n_ < b.n_;
}

Multiplicity min(Multiplicity a, Multiplicity b) { return b < a ? b : a; }

std::string Multiplicity::to_string() const {
  return infinite_ ? std::string("inf") : std::to_string(n_);
}

// --- SpectralModel ----------------------------------------------------------

SpectralModel::SpectralModel(std::string label, std::vector<Block> blocks)
    : label_(std::move(label)) {
  std::map<CanonicalPoint, std::size_t> seen;
  for (Block& b : blocks) {
    if (b.mult == Multiplicity::finite(0)) continue;
    if (!std::isfinite(b.lambda.real()) || !std::isfinite(b.lambda.imag()))
      throw Error(ErrorKind::Input, "non-finite eigenvalue");
    if (!seen.emplace(canonical(b.lambda), blocks_.size()).second) {
      throw Error(ErrorKind::DuplicateEigenvalue,
                  "duplicate eigenvalue (" + std::to_string(b.lambda.real()) + ", " +
                      std::to_string(b.lambda.imag()) + ") in model '" + label_ + "'");
    }
    if (b.mult.is_finite()) b.allocated = b.mult.value();
    blocks_.push_back(b);
  }
}

std::vector<Complex> SpectralModel::spectrum() const {
  std::vector<Complex> out;
  out.reserve(blocks_.size());
  for (const Block& b : blocks_) out.push_back(b.lambda);
  return out;
}

std::optional<std::size_t> SpectralModel::find_block(Complex lambda) const {
  const CanonicalPoint key = canonical(lambda);
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (canonical(blocks_[i].lambda) == key) return i;
  return std::nullopt;
}

std::uint64_t SpectralModel::allocate_fresh(std::size_t block) {
  Block& b = blocks_.at(block);
  if (b.mult.is_finite() && b.allocated >= b.mult.value()) {
    throw Error(ErrorKind::Capacity, "block " + std::to_string(block) + " of model '" + label_ +
                                         "' is exhausted (multiplicity " + b.mult.to_string() +
                                         ")");
  }
  return b.allocated++;
}

bool SpectralModel::operator==(const SpectralModel& other) const {
  if (label_ != other.label_ || blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& a = blocks_[i];
    const Block& b = other.blocks_[i];
    if (!same_point(a.lambda, b.lambda) || !(a.mult == b.mult) || a.allocated != b.allocated)
      return false;
  }
  return true;
}

// --- ModelVector --------------------------------------------------------------

ModelVector ModelVector::unit(std::string model, Coord at, Complex value) {
  ModelVector v(std::move(model));
  v.set(at, value);
  return v;
}

Complex ModelVector::get(Coord c) const {
  auto it = coords_.find(c);
  return it == coords_.end() ? Complex{} : it->second;
}

void ModelVector::set(Coord c, Complex value) {
  if (value == Complex{})
    coords_.erase(c);
  else
    coords_[c] = value;
}

void ModelVector::add(Coord c, Complex value) { set(c, get(c) + value); }

double ModelVector::norm_sq() const {
  double s = 0.0;
  for (const auto& [c, z] : coords_) s += std::norm(z);
  return s;
}

double ModelVector::norm() const { return std::sqrt(norm_sq()); }

void require_same_model(const ModelVector& v, const ModelVector& w) {
  if (v.model() != w.model()) {
    throw Error(ErrorKind::ModelMismatch,
                "vectors live in different models ('" + v.model() + "' vs '" + w.model() + "')");
  }
}

void require_in_model(const SpectralModel& model, const ModelVector& v) {
  if (v.model() != model.label()) {
    throw Error(ErrorKind::ModelMismatch,
                "vector of model '" + v.model() + "' used with model '" + model.label() + "'");
  }
  for (const auto& [c, z] : v.coords()) {
    if (c.block >= model.size() || c.index >= model.block(c.block).allocated) {
      throw Error(ErrorKind::Input, "coordinate (" + std::to_string(c.block) + ", " +
                                        std::to_string(c.index) + ") outside model '" +
                                        model.label() + "'");
    }
  }
}

ModelVector operator+(const ModelVector& a, const ModelVector& b) {
  require_same_model(a, b);
  ModelVector out = a;
  for (const auto& [c, z] : b.coords_) out.add(c, z);
  return out;
}

ModelVector operator-(const ModelVector& a, const ModelVector& b) {
  return a + Complex(-1.0) * b;
}

ModelVector operator*(Complex s, const ModelVector& v) {
  ModelVector out(v.model_);
  if (s == Complex{}) return out;
  for (const auto& [c, z] : v.coords_) out.set(c, s * z);
  return out;
}

Complex inner(const ModelVector& v, const ModelVector& w) {
  require_same_model(v, w);
  const auto& small = v.coords().size() <= w.coords().size() ? v.coords() : w.coords();
  const bool v_small = &small == &v.coords();
  Complex s = 0.0;
  for (const auto& [c, z] : small) {
    const Complex other = v_small ? w.get(c) : v.get(c);
    s += v_small ? z * std::conj(other) : other * std::conj(z);
  }
  return s;
}

double distance(const ModelVector& v, const ModelVector& w) { return (v - w).norm(); }

// --- Region -------------------------------------------------------------------

Region Region::everything() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return of_box({-inf, inf, -inf, inf});
}

bool Region::contains(Complex z) const {
  for (Complex a : atoms)
    if (same_point(a, z)) return true;
  for (const Box& b : boxes)
    if (b.contains(z)) return true;
  return false;
}

Region unite(const Region& a, const Region& b) {
  Region out = a;
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  out.boxes.insert(out.boxes.end(), b.boxes.begin(), b.boxes.end());
  return out;
}

Region intersect(const Region& a, const Region& b) {
  Region out;
  for (Complex z : a.atoms)
    if (b.contains(z)) out.atoms.push_back(z);
  for (Complex z : b.atoms)
    if (a.contains(z) && !out.contains(z)) out.atoms.push_back(z);
  for (const Box& p : a.boxes)
    for (const Box& q : b.boxes) {
      Box r{std::max(p.x0, q.x0), std::min(p.x1, q.x1), std::max(p.y0, q.y0),
            std::min(p.y1, q.y1)};
      if (r.x0 < r.x1 && r.y0 < r.y1) out.boxes.push_back(r);
    }
  return out;
}

Region ball_region(const SpectralModel& model, Complex center, double radius) {
  Region out;
  for (const Block& b : model.blocks())
    if (std::abs(b.lambda - center) < radius) out.atoms.push_back(b.lambda);
  return out;
}

// --- Operator actions -------------------------------------------------------------

namespace {

template <typename F>
ModelVector blockwise(const SpectralModel& model, const ModelVector& v, F&& factor) {
  require_in_model(model, v);
  ModelVector out(v.model());
  for (const auto& [c, z] : v.coords()) out.set(c, factor(model.block(c.block).lambda) * z);
  return out;
}

}  // namespace

ModelVector apply_T(const SpectralModel& model, const ModelVector& v) {
  return blockwise(model, v, [](Complex l) { return l; });
}

ModelVector apply_Tstar(const SpectralModel& model, const ModelVector& v) {
  return blockwise(model, v, [](Complex l) { return std::conj(l); });
}

double adjoint_predicate(const SpectralModel& model, const ModelVector& x, const ModelVector& y) {
  require_same_model(x, y);
  require_in_model(model, y);
  return (apply_Tstar(model, x) - y).norm();
}

ModelVector spectral_projection(const SpectralModel& model, const ModelVector& v,
                                const Region& region) {
  return blockwise(model, v, [&](Complex l) { return region.contains(l) ? 1.0 : 0.0; });
}

AtomicMeasure scalar_measure(const SpectralModel& model, const ModelVector& v,
                             const ModelVector& w) {
  require_same_model(v, w);
  require_in_model(model, v);
  require_in_model(model, w);
  std::vector<Complex> mass(model.size(), 0.0);
  for (const auto& [c, z] : v.coords()) mass[c.block] += z * std::conj(w.get(c));
  AtomicMeasure mu;
  for (std::size_t b = 0; b < model.size(); ++b) mu.add(model.block(b).lambda, mass[b]);
  return mu;
}

ModelVector DiagonalOperator::apply(const ModelVector& v) const {
  if (v.model() != model) throw Error(ErrorKind::ModelMismatch, "operator/vector model mismatch");
  ModelVector out(v.model());
  for (const auto& [c, z] : v.coords()) out.set(c, multipliers.at(c.block) * z);
  return out;
}

double operator_distance(const DiagonalOperator& a, const DiagonalOperator& b) {
  if (a.model != b.model || a.multipliers.size() != b.multipliers.size())
    throw Error(ErrorKind::ModelMismatch, "operators act on different models");
  double m = 0.0;
  for (std::size_t i = 0; i < a.multipliers.size(); ++i)
    m = std::max(m, std::abs(a.multipliers[i] - b.multipliers[i]));
  return m;
}

namespace {

bool region_is_empty(const Region& r) { return r.atoms.empty() && r.boxes.empty(); }

}  // namespace

RiemannSum integrate_pvm(const SpectralModel& model, const std::function<Complex(Complex)>& phi,
                         const std::vector<Region>& partition,
                         const std::vector<Complex>& samples,
                         std::optional<double> oscillation_bound) {
  if (partition.size() != samples.size())
    throw Error(ErrorKind::Partition, "one sample point per cell is required");
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (!partition[i].contains(samples[i]))
      throw Error(ErrorKind::Partition, "sample " + std::to_string(i) + " lies outside its cell");
    for (std::size_t j = i + 1; j < partition.size(); ++j)
      if (!region_is_empty(intersect(partition[i], partition[j])))
        throw Error(ErrorKind::Partition, "cells " + std::to_string(i) + " and " +
                                              std::to_string(j) + " overlap");
  }

  RiemannSum out;
  out.riemann.model = out.exact.model = model.label();
  for (std::size_t b = 0; b < model.size(); ++b) {
    const Complex lambda = model.block(b).lambda;
    std::optional<std::size_t> cell;
    for (std::size_t i = 0; i < partition.size(); ++i) {
      if (partition[i].contains(lambda)) {
        if (cell) throw Error(ErrorKind::Partition, "eigenvalue lies in two cells");
        cell = i;
      }
    }
    if (!cell) throw Error(ErrorKind::Partition, "partition does not cover the spectrum");
    out.riemann.multipliers.push_back(phi(samples[*cell]));
    out.exact.multipliers.push_back(phi(lambda));
  }
  out.operator_error = operator_distance(out.riemann, out.exact);
  if (oscillation_bound) out.certified = out.operator_error <= *oscillation_bound;
  return out;
}

// --- Constructors ---------------------------------------------------------------------

SpectralModel build_model(const std::vector<Complex>& eigenvalues,
                          const std::vector<Multiplicity>& mults, std::string label) {
  if (eigenvalues.size() != mults.size())
    throw Error(ErrorKind::Dimension, "eigenvalue and multiplicity lists differ in length");
  std::vector<Block> blocks;
  blocks.reserve(eigenvalues.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) blocks.push_back({eigenvalues[i], mults[i], 0});
  return SpectralModel(std::move(label), std::move(blocks));
}

DirectSum direct_sum_embedding(const SpectralModel& a, const SpectralModel& b, std::string label) {
  if (label.empty()) label = a.label() + "+" + b.label();
  std::vector<Block> blocks = a.blocks();
  DirectSum out;
  for (std::size_t i = 0; i < a.size(); ++i) out.left_block.push_back(static_cast<std::uint32_t>(i));
  for (const Block& rb : b.blocks()) {
    auto it = std::find_if(blocks.begin(), blocks.end(),
                           [&](const Block& x) { return same_point(x.lambda, rb.lambda); });
    if (it == blocks.end()) {
      out.right_block.push_back(static_cast<std::uint32_t>(blocks.size()));
      out.right_offset.push_back(0);
      blocks.push_back(rb);
    } else {
      out.right_block.push_back(static_cast<std::uint32_t>(it - blocks.begin()));
      out.right_offset.push_back(it->allocated);
      it->mult = it->mult + rb.mult;
      it->allocated += rb.allocated;
    }
  }
  out.model = SpectralModel(std::move(label), std::move(blocks));
  return out;
}

SpectralModel direct_sum(const SpectralModel& a, const SpectralModel& b) {
  return direct_sum_embedding(a, b).model;
}

ModelVector DirectSum::embed_left(const ModelVector& v) const {
  ModelVector out(model.label());
  for (const auto& [c, z] : v.coords()) out.set({left_block.at(c.block), c.index}, z);
  return out;
}

ModelVector DirectSum::embed_right(const ModelVector& v) const {
  ModelVector out(model.label());
  for (const auto& [c, z] : v.coords())
    out.set({right_block.at(c.block), c.index + right_offset.at(c.block)}, z);
  return out;
}

SpectralModel pseudocompact_witness(const std::vector<Complex>& isolated_atoms,
                                    const std::function<std::vector<Complex>(int)>& perfect_net,
                                    const std::vector<Multiplicity>& mults, int k,
                                    std::string label) {
  if (k < 1) throw Error(ErrorKind::Precondition, "witness index k must be >= 1");
  if (isolated_atoms.size() != mults.size())
    throw Error(ErrorKind::Dimension, "atom and multiplicity lists differ in length");
  if (label.empty()) label = "witness-" + std::to_string(k);

  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(k), isolated_atoms.size());
  const Multiplicity cap = Multiplicity::finite(static_cast<std::uint64_t>(k));
  std::vector<Block> blocks;
  auto merge = [&](Complex lambda, Multiplicity m) {
    for (Block& b : blocks) {
      if (same_point(b.lambda, lambda)) {
        b.mult = b.mult + m;
        return;
      }
    }
    blocks.push_back({lambda, m, 0});
  };
  for (std::size_t n = 0; n < count; ++n) merge(isolated_atoms[n], min(cap, mults[n]));
  if (perfect_net) {
    for (Complex rho : perfect_net(k)) merge(rho, Multiplicity::finite(1));
  }
  return SpectralModel(std::move(label), std::move(blocks));
}

}  // namespace normop
