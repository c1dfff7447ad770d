#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "normop/model.hpp"
#include "normop/theory.hpp"
#include "normop/typespace.hpp"

namespace normop {

/// Two-sided Hausdorff distance between finite point sets.
double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b);

struct EquivalenceReport {
  bool equivalent = false;
  /// Smallest tolerance at which the blocks admit a perfect matching with
  /// equal multiplicities; empty when no such matching exists.
  std::optional<double> bottleneck;
  std::vector<std::pair<std::size_t, std::size_t>> matching;  // block of A -> block of B
};

EquivalenceReport spectrally_equivalent(const SpectralModel& a, const SpectralModel& b,
                                        double tol);

struct AtomResidual {
  Complex lambda;
  double residual = 0.0;
};

struct MultiplicityMismatch {
  Complex lambda;
  Multiplicity expected;
  Multiplicity actual;
};

struct AxiomReport {
  double normality = 0.0;
  std::vector<AtomResidual> eigen;        // dist(lambda, spectrum) per atom and net point
  double max_eigen = 0.0;
  std::vector<AtomResidual> violations;   // probes with positive margin only
  double max_violation = 0.0;
  std::size_t probes = 0;
  std::vector<MultiplicityMismatch> mismatches;
  bool holds = false;
};

/// Closed-form evaluation of the axioms of Sigma_{K,m} in a spectral model.
/// `normality` is the residual of the matrix the model came from, if any.
AxiomReport axiom_residuals(const SpectralModel& m, const TheoryDescriptor& theory,
                            double net_resolution, double normality = 0.0);

/// max(0, dist(lambda, K) - dist(lambda, spectrum)): how far the model
/// undercuts the lower bound ||Tx - lambda x|| >= dist(lambda, K).
double probe_violation(const SpectralModel& m, const TheoryDescriptor& theory, Complex lambda);

struct CoordPair {
  Coord a;
  Coord b;
  double distance = 0.0;
};

/// A finite coordinate mapped into an infinite block of the other model.
struct Absorption {
  bool from_a = true;
  Coord coord;
  std::uint32_t partner = 0;
  double distance = 0.0;
};

/// An infinite block and its infinite partner on the other side.
struct InfinitePair {
  bool from_a = true;
  std::uint32_t block = 0;
  std::uint32_t partner = 0;
  double distance = 0.0;
};

struct AlignmentCertificate {
  double residual = 0.0;
  std::vector<CoordPair> pairs;
  std::vector<Absorption> absorbed;
  std::vector<InfinitePair> infinite;
};

inline constexpr std::size_t kAlignBudget = 4096;

/// Bottleneck alignment of the eigenvalue multisets. Throws NoAlignment,
/// carrying the best bound for a maximum partial matching, when the
/// dimensions cannot be matched.
AlignmentCertificate aue_align(const SpectralModel& a, const SpectralModel& b,
                               std::size_t budget = kAlignBudget);

struct LimitTheory {
  TheoryDescriptor theory;
  double oscillation = 0.0;  // tail Hausdorff variation
  double radius = 0.0;       // finest schedule radius
};

inline constexpr std::uint64_t kMultiplicityCap = 64;

/// Limit (K, m) of a convergent sequence of models, read off its last third.
LimitTheory limit_theory(const std::vector<SpectralModel>& seq, const std::vector<double>& radii,
                         std::uint64_t cap = kMultiplicityCap);

struct PerturbationCertificate {
  double bound = 0.0;
  double spectral_shift = 0.0;  // max |lambda - pi(lambda)|
  double vector_term = 0.0;     // l2 distance of root masses under pi
  std::vector<std::pair<Complex, Complex>> matched;
  std::vector<Complex> unmatched_p;
  std::vector<Complex> unmatched_q;
  bool exhaustive = false;
};

inline constexpr std::size_t kPerturbationBruteForce = 8;

/// Upper bound on the perturbation distance of two 1-types over the empty
/// set realized in `model`.
PerturbationCertificate perturbation_distance(const TypeDescriptor& p, const TypeDescriptor& q,
                                              const SpectralModel& model, unsigned threads = 1,
                                              std::size_t brute_force_max = kPerturbationBruteForce);

}  // namespace normop
