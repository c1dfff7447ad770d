#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "normop/model.hpp"

namespace normop {

/// Closed subspace of a model given by an orthonormal basis.
struct Subspace {
  std::string model;
  std::vector<ModelVector> basis;

  std::size_t dim() const { return basis.size(); }
};

inline constexpr double kGramSchmidtDrop = 1e-9;
inline constexpr std::uint64_t kFiniteBlockBudget = 64;

/// Orthonormalizes `vectors` in order (two Gram-Schmidt passes per vector),
/// dropping directions whose residual norm is at most `drop`.
Subspace orthonormalize(const std::string& model, const std::vector<ModelVector>& vectors,
                        double drop = kGramSchmidtDrop);

/// <B>_0 = dcl(B), as the span of E({lambda}) b over blocks lambda and b in B.
Subspace dcl_span(const SpectralModel& model, const std::vector<ModelVector>& b);

/// <B>_0 again, by closing B under T and T* with Gram-Schmidt until no new
/// direction survives.
Subspace dcl_span_krylov(const SpectralModel& model, const std::vector<ModelVector>& b);

/// Unit coordinates of every finite-multiplicity block.
Subspace h_fin(const SpectralModel& model, std::uint64_t budget = kFiniteBlockBudget);

/// <B> = acl(B): H_fin joined with <B>_0.
Subspace acl_span(const SpectralModel& model, const std::vector<ModelVector>& b,
                  std::uint64_t budget = kFiniteBlockBudget);

/// Orthogonal projection onto `s`.
ModelVector project(const ModelVector& v, const Subspace& s);

/// ||v - P_S v||.
double membership_residual(const ModelVector& v, const Subspace& s);

/// Largest membership residual of a basis vector of `a` with respect to `b`;
/// zero iff span(a) is contained in span(b).
double containment_residual(const Subspace& a, const Subspace& b);

}  // namespace normop
