#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "normop/closure.hpp"
#include "normop/measure.hpp"
#include "normop/model.hpp"
#include "normop/theory.hpp"

namespace normop {

/// Parameter label of types over the empty set.
inline const std::string kEmptyParams = "empty";

/// An n-type over B: projections of the tuple onto <B>_0 and the matrix of
/// scalar measures of the residuals.
struct TypeDescriptor {
  std::size_t n = 0;
  std::vector<ModelVector> base;                    // P_B(a_i)
  std::vector<std::vector<AtomicMeasure>> gram;     // mu_{c_i, c_j}
  std::string param_label;
};

/// Deterministic label for a parameter list: kEmptyParams for the empty
/// list, otherwise a hash of the model label and coordinates.
std::string parameter_fingerprint(const std::vector<ModelVector>& b);

TypeDescriptor type_of(const SpectralModel& model, const std::vector<ModelVector>& tuple,
                       const std::vector<ModelVector>& b, std::string param_label = {});

/// Equality of descriptors, atomwise and coordinatewise within `tol`.
bool types_equal(const TypeDescriptor& p, const TypeDescriptor& q, double tol = 1e-9);

/// mu_p of a 1-type over the empty set.
AtomicMeasure phi1(const TypeDescriptor& p);

/// sqrt(||base_p - base_q||^2 + hellinger_sq(mu_p, mu_q)) for 1-types over
/// the same parameters.
double type_distance(const TypeDescriptor& p, const TypeDescriptor& q);

/// Principality: every diagonal measure puts all its mass
/// on isolated points of K. Throws InconsistentType for atoms outside K.
bool is_principal(const TypeDescriptor& p, const TheoryDescriptor& theory, double tol = 1e-9);

/// K finite: no perfect part and no accumulation atoms.
bool omega_categorical(const TheoryDescriptor& theory);

inline constexpr std::size_t kNetBudget = 100000;

struct EpsilonNet {
  std::vector<TypeDescriptor> types;
  double spacing = 0.0;  // grid step on each real coordinate
  std::size_t dimension = 0;
};

/// Finite set of 1-types over B such that the type of every vector of norm
/// at most `norm_cap` lies within `eps`. Throws Budget, carrying the smallest
/// achievable eps, when the grid would exceed `budget` points.
EpsilonNet epsilon_net(const SpectralModel& model, const std::vector<ModelVector>& b, double eps,
                       double norm_cap, std::size_t budget = kNetBudget);

}  // namespace normop
