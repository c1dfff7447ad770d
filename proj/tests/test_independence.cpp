#include <doctest.h>

#include "normop/independence.hpp"
#include "normop/typespace.hpp"
#include "support.hpp"

using namespace normop;
using normop::testing::Rng;

namespace {

const Multiplicity kInf = Multiplicity::infinite();
Multiplicity fin(std::uint64_t n) { return Multiplicity::finite(n); }

SpectralModel allocated(SpectralModel m, std::uint64_t per_inf_block) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.block(i).mult.is_infinite())
      for (std::uint64_t j = 0; j < per_inf_block; ++j) m.allocate_fresh(i);
  return m;
}

}  // namespace

TEST_CASE("independence examples") {
  const SpectralModel m = allocated(build_model({0, 1, 0.5}, {kInf, kInf, fin(2)}, "M"), 3);
  Rng rng(51);
  const std::vector<ModelVector> b{testing::random_vector(rng, m, 0.5)};
  const Subspace acl = acl_span(m, b);

  // C inside <B>.
  const std::vector<ModelVector> c_in{acl.basis[0], acl.basis.back()};
  for (int i = 0; i < 10; ++i)
    CHECK(indep(m, {testing::random_vector(rng, m)}, b, c_in).independent);

  // A = C = {v}, v outside <B>.
  const ModelVector v = testing::unit_random_vector(rng, m);
  const auto rep = indep(m, {v}, b, {v});
  CHECK_FALSE(rep.independent);
  CHECK(rep.witnesses[0] == doctest::Approx(membership_residual(v, acl)).epsilon(1e-10));

  // Orthogonal unit vectors in one infinite block, no finite blocks.
  const SpectralModel n = allocated(build_model({0}, {kInf}, "N"), 2);
  const auto orth = indep(n, {ModelVector::unit("N", {0, 0})}, {}, {ModelVector::unit("N", {0, 1})});
  CHECK(orth.independent);
  CHECK(orth.witnesses[0] == 0.0);
}

TEST_CASE("free extensions") {
  const SpectralModel m = allocated(build_model({0, 1, 0.5}, {kInf, kInf, fin(2)}, "M"), 2);
  Rng rng(52);
  const std::vector<ModelVector> b{testing::random_vector(rng, m, 0.5)};
  const ModelVector inside = acl_span(m, b).basis[0];
  const FreeExtension same = free_extension(m, inside, b, {});
  CHECK(distance(same.a, inside) < 1e-12);

  const SpectralModel z = allocated(build_model({0}, {kInf}, "Z"), 1);
  const ModelVector e = ModelVector::unit("Z", {0, 0});
  const FreeExtension fe = free_extension(z, e, {}, {e});
  CHECK(fe.model.block(0).allocated == 2);
  CHECK(z.block(0).allocated == 1);  // input untouched
  CHECK(std::abs(inner(fe.a, e)) == 0.0);
  CHECK(fe.a.norm() == doctest::Approx(1.0));
  CHECK(types_equal(type_of(fe.model, {fe.a}, {}), type_of(z, {e}, {}), 0.0));
  CHECK(indep(fe.model, {fe.a}, {}, {e}).independent);
}

TEST_CASE("morley sequences and the Cesaro estimate") {
  const SpectralModel z = allocated(build_model({0, 0.5}, {kInf, kInf}, "Z"), 1);
  ModelVector a("Z");
  a.set({0, 0}, 0.6);
  a.set({1, 0}, 0.8);
  const MorleySequence seq = morley_sequence(z, a, {}, 5);
  REQUIRE(seq.terms.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(types_equal(type_of(seq.model, {seq.terms[i]}, {}), type_of(z, {a}, {})));
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(std::abs(inner(seq.terms[i], seq.terms[j]) - (i == j ? 1.0 : 0.0)) < 1e-15);
  }

  const auto unit4 = canonical_base_estimate(z, a, {}, 4);
  CHECK(unit4.deviation == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(unit4.predicted == doctest::Approx(0.5).epsilon(1e-14));

  const std::vector<ModelVector> b{a};
  const auto fixed = canonical_base_estimate(z, a, b, 8);
  CHECK(fixed.deviation < 1e-12);
  CHECK(distance(fixed.mean, a) < 1e-12);

  double prev = 1e300;
  for (std::size_t m : {1u, 2u, 4u, 8u, 16u}) {
    const auto est = canonical_base_estimate(z, a, {}, m);
    CHECK(est.deviation < prev);
    prev = est.deviation;
  }
  CHECK_THROWS_AS(canonical_base_estimate(z, a, {}, 0), Error);
}

TEST_CASE("finite blocks never carry residual off acl") {
  const SpectralModel m = build_model({0}, {fin(2)}, "F");
  const FreeExtension fe = free_extension(m, ModelVector::unit("F", {0, 1}), {}, {});
  CHECK(distance(fe.a, ModelVector::unit("F", {0, 1})) == 0.0);
}

TEST_CASE("forking calculus on random instances") {
  Rng rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    const auto pts = testing::separated_points(rng, 3 + rng.index(4), 0.05);
    SpectralModel m = testing::random_model(rng, pts, 2, 3, "R");
    const std::vector<ModelVector> b{testing::random_vector(rng, m, 0.3)};
    const ModelVector a = testing::random_vector(rng, m, 0.6);

    // Symmetry: c independent from a by construction half of the time.
    ModelVector c = testing::random_vector(rng, m, 0.6);
    if (trial % 2 == 0) {
      FreeExtension fe = free_extension(m, c, b, {a});
      m = fe.model;
      c = fe.a;
    }
    CHECK(indep(m, {a}, b, {c}).independent == indep(m, {c}, b, {a}).independent);

    // Stationarity.
    const FreeExtension x1 = free_extension(m, a, b, {c});
    const FreeExtension x2 = free_extension(x1.model, a, b, {c, x1.a});
    std::vector<ModelVector> bc = b;
    bc.push_back(c);
    CHECK(indep(x2.model, {x1.a}, b, {c}).independent);
    CHECK(indep(x2.model, {x2.a}, b, {c}).independent);
    CHECK(types_equal(type_of(x2.model, {x1.a}, bc), type_of(x2.model, {x2.a}, bc), 1e-8));

    // Transitivity along B <= C <= D.
    const std::vector<ModelVector> cset{b[0], testing::random_vector(rng, m, 0.3)};
    std::vector<ModelVector> dset = cset;
    dset.push_back(trial % 3 == 0 ? x1.a : testing::random_vector(rng, m, 0.3));
    const SpectralModel& mm = x2.model;
    const bool bd = indep(mm, {a}, b, dset).independent;
    const bool bc_ = indep(mm, {a}, b, cset).independent;
    const bool cd = indep(mm, {a}, cset, dset).independent;
    CHECK(bd == (bc_ && cd));

    // Local character.
    const ModelVector pa = project(a, acl_span(m, b));
    CHECK(indep(m, {a}, {pa}, b).independent);
  }
}
