#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normop/common.hpp"
#include "normop/measure.hpp"

namespace normop {

/// Eigenspace dimension: a nonnegative integer or the symbol INF.
class Multiplicity {
 public:
  constexpr Multiplicity() = default;

  static constexpr Multiplicity finite(std::uint64_t n) { return Multiplicity(false, n); }
  static constexpr Multiplicity infinite() { return Multiplicity(true, 0); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }
  std::uint64_t value() const;

  friend Multiplicity operator+(Multiplicity a, Multiplicity b);
  friend Multiplicity min(Multiplicity a, Multiplicity b);
  friend bool operator<(Multiplicity a, Multiplicity b);
  constexpr bool operator==(const Multiplicity&) const = default;

  std::string to_string() const;

 private:
  constexpr Multiplicity(bool inf, std::uint64_t n) : infinite_(inf), n_(n) {}
  bool infinite_ = false;
  std::uint64_t n_ = 0;
};

struct Block {
  Complex lambda;
  Multiplicity mult;
  std::uint64_t allocated = 0;  // coordinates materialized so far
};

/// A model of the spectral theory as a direct sum of eigenspaces. Finite
/// blocks are materialized on construction; infinite blocks allocate
/// coordinates lazily through `allocate_fresh`.
class SpectralModel {
 public:
  SpectralModel() = default;
  SpectralModel(std::string label, std::vector<Block> blocks);

  const std::string& label() const { return label_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t size() const { return blocks_.size(); }

  /// Block eigenvalues in block order.
  std::vector<Complex> spectrum() const;
  std::optional<std::size_t> find_block(Complex lambda) const;

  /// Fresh orthonormal coordinate in `block`; throws Capacity on a full
  /// finite block.
  std::uint64_t allocate_fresh(std::size_t block);

  bool operator==(const SpectralModel&) const;

 private:
  std::string label_;
  std::vector<Block> blocks_;
};

struct Coord {
  std::uint32_t block = 0;
  std::uint64_t index = 0;

  auto operator<=>(const Coord&) const = default;
};

/// Finitely supported element of a model's Hilbert space.
class ModelVector {
 public:
  ModelVector() = default;
  explicit ModelVector(std::string model) : model_(std::move(model)) {}

  static ModelVector unit(std::string model, Coord at, Complex value = 1.0);

  const std::string& model() const { return model_; }
  const std::map<Coord, Complex>& coords() const { return coords_; }

  Complex get(Coord c) const;
  void set(Coord c, Complex value);
  void add(Coord c, Complex value);

  double norm_sq() const;
  double norm() const;
  bool is_zero() const { return coords_.empty(); }

  friend ModelVector operator+(const ModelVector& a, const ModelVector& b);
  friend ModelVector operator-(const ModelVector& a, const ModelVector& b);
  friend ModelVector operator*(Complex s, const ModelVector& v);

 private:
  std::string model_;
  std::map<Coord, Complex> coords_;
};

/// <v, w>, linear in the first argument.
Complex inner(const ModelVector& v, const ModelVector& w);
double distance(const ModelVector& v, const ModelVector& w);

void require_same_model(const ModelVector& v, const ModelVector& w);
/// Label match and every coordinate below its block's allocation.
void require_in_model(const SpectralModel& model, const ModelVector& v);

/// Half-open axis-aligned rectangle [x0, x1) x [y0, y1).
struct Box {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  bool contains(Complex z) const {
    return z.real() >= x0 && z.real() < x1 && z.imag() >= y0 && z.imag() < y1;
  }
};

/// Borel set descriptor: finitely many atoms plus finitely many boxes.
struct Region {
  std::vector<Complex> atoms;
  std::vector<Box> boxes;

  static Region everything();
  static Region nothing() { return {}; }
  static Region of_atoms(std::vector<Complex> points) { return {std::move(points), {}}; }
  static Region of_box(Box b) { return {{}, {b}}; }

  bool contains(Complex z) const;
};

Region unite(const Region& a, const Region& b);
Region intersect(const Region& a, const Region& b);

/// Open ball B(center; radius) realized on the model atoms.
Region ball_region(const SpectralModel& model, Complex center, double radius);

ModelVector apply_T(const SpectralModel& model, const ModelVector& v);
ModelVector apply_Tstar(const SpectralModel& model, const ModelVector& v);

/// sup over the unit ball of |<Tz, x> - <z, y>|, which is ||T*x - y||.
double adjoint_predicate(const SpectralModel& model, const ModelVector& x, const ModelVector& y);

ModelVector spectral_projection(const SpectralModel& model, const ModelVector& v,
                                const Region& region);

/// mu_{v,w}: mass <E({lambda}) v, w> at each block eigenvalue.
AtomicMeasure scalar_measure(const SpectralModel& model, const ModelVector& v,
                             const ModelVector& w);

/// Operator acting on each block by a scalar; every function of T is of
/// this form.
struct DiagonalOperator {
  std::string model;
  std::vector<Complex> multipliers;  // one per block

  ModelVector apply(const ModelVector& v) const;
  /// Operator norm of the difference, max over blocks.
  friend double operator_distance(const DiagonalOperator& a, const DiagonalOperator& b);
};

struct RiemannSum {
  DiagonalOperator riemann;  // sum phi(a_i) E(A_i)
  DiagonalOperator exact;    // integral of phi dE, phi applied blockwise
  double operator_error = 0.0;
  /// Present when an oscillation bound was supplied: the error does not
  /// exceed it.
  std::optional<bool> certified;
};

RiemannSum integrate_pvm(const SpectralModel& model, const std::function<Complex(Complex)>& phi,
                         const std::vector<Region>& partition,
                         const std::vector<Complex>& samples,
                         std::optional<double> oscillation_bound = std::nullopt);

SpectralModel build_model(const std::vector<Complex>& eigenvalues,
                          const std::vector<Multiplicity>& mults, std::string label);

SpectralModel direct_sum(const SpectralModel& a, const SpectralModel& b);

/// Direct sum together with the isometric embeddings of both summands.
struct DirectSum {
  SpectralModel model;
  std::vector<std::uint32_t> left_block;   // block of A -> block of sum
  std::vector<std::uint32_t> right_block;  // block of B -> block of sum
  std::vector<std::uint64_t> right_offset; // coordinate shift for B's blocks

  ModelVector embed_left(const ModelVector& v) const;
  ModelVector embed_right(const ModelVector& v) const;
};

DirectSum direct_sum_embedding(const SpectralModel& a, const SpectralModel& b,
                               std::string label = {});

/// k-th finite-dimensional model of the pseudocompactness construction:
/// the first min(k, |atoms|) isolated points with dimension min(k, m), plus
/// a one-dimensional block at every point of the 1/k-net of the perfect part.
SpectralModel pseudocompact_witness(const std::vector<Complex>& isolated_atoms,
                                    const std::function<std::vector<Complex>(int)>& perfect_net,
                                    const std::vector<Multiplicity>& mults, int k,
                                    std::string label = {});

}  // namespace normop
