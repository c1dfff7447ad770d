#pragma once

#include <cstddef>
#include <vector>

#include "normop/closure.hpp"
#include "normop/model.hpp"

namespace normop {

inline constexpr double kIndependenceTol = 1e-8;

struct IndependenceReport {
  bool independent = false;
  std::vector<double> witnesses;  // ||P_<BC>(a_i) - P_<B>(a_i)|| per coordinate
  double tolerance = 0.0;
};

/// A independent from C over B: projections onto acl(B) and acl(B u C) agree.
IndependenceReport indep(const SpectralModel& model, const std::vector<ModelVector>& a,
                         const std::vector<ModelVector>& b, const std::vector<ModelVector>& c,
                         double tol = kIndependenceTol);

struct FreeExtension {
  SpectralModel model;  // the input model with extra coordinates allocated
  ModelVector a;
};

/// Realizes tp(a/B) by a vector independent from C over B: the residual of a
/// off acl(B) is copied onto fresh coordinates of the infinite blocks that
/// carry it. The input model is not modified.
FreeExtension free_extension(const SpectralModel& model, const ModelVector& a,
                             const std::vector<ModelVector>& b, const std::vector<ModelVector>& c);

struct MorleySequence {
  SpectralModel model;
  std::vector<ModelVector> terms;
};

/// a^0 = a and a^{k+1} a free extension of tp(a/B) over B u {a^0..a^k}.
MorleySequence morley_sequence(const SpectralModel& model, const ModelVector& a,
                               const std::vector<ModelVector>& b, std::size_t length);

struct CanonicalBaseEstimate {
  ModelVector mean;        // (1/m) sum of the Morley sequence
  ModelVector projection;  // P_<B>(a)
  double deviation = 0.0;  // ||mean - projection||, measured
  double predicted = 0.0;  // ||a - P_<B>(a)|| / sqrt(m)
};

CanonicalBaseEstimate canonical_base_estimate(const SpectralModel& model, const ModelVector& a,
                                              const std::vector<ModelVector>& b, std::size_t m);

struct LocalCharacterWitness {
  std::vector<std::size_t> chosen;  // indices into B forming B_eps
  ModelVector a_prime;              // independent from B over B_eps
  double distance = 0.0;            // ||a - a_prime|| < eps
};

/// Greedily grows a subset B_eps of B until P_<B_eps>(a) is eps-close to
/// P_<B>(a), and returns a' = a - P_<B>(a) + P_<B_eps>(a).
LocalCharacterWitness local_character_witness(const SpectralModel& model, const ModelVector& a,
                                              const std::vector<ModelVector>& b, double eps);

}  // namespace normop
