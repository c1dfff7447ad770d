#include <doctest.h>

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

// Vector whose spectral measure is the given positive measure: sqrt(mass) on
// coordinate 0 of each block.
ModelVector realize(const SpectralModel& m, const AtomicMeasure& mu) {
  ModelVector v(m.label());
  for (const auto& atom : mu.atoms()) {
    const auto b = m.find_block(atom.point);
    REQUIRE(b.has_value());
    v.set({static_cast<std::uint32_t>(*b), 0}, std::sqrt(atom.mass.real()));
  }
  return v;
}

TypeDescriptor type1(const SpectralModel& m, const ModelVector& v) { return type_of(m, {v}, {}); }

}  // namespace

TEST_CASE("type descriptors") {
  const SpectralModel m = allocated(build_model({1, -1, 0.5}, {kInf, kInf, fin(1)}, "M"), 2);
  Rng rng(41);
  const ModelVector b = testing::random_vector(rng, m);
  const Subspace s = dcl_span(m, {b});
  const TypeDescriptor inside = type_of(m, {s.basis[0]}, {b});
  CHECK(inside.gram[0][0].empty());
  CHECK(inside.param_label == parameter_fingerprint({b}));
  CHECK(inside.param_label != kEmptyParams);

  const ModelVector c = testing::random_vector(rng, m);
  const TypeDescriptor p = type_of(m, {c}, {});
  CHECK(p.param_label == kEmptyParams);
  CHECK(p.base[0].is_zero());
  CHECK(p.gram[0][0].total_mass().real() == doctest::Approx(c.norm_sq()));

  // c and -c over B share a type once the component in <B>_0 is fixed.
  const ModelVector pc = project(c, s);
  const ModelVector w = c - pc;
  CHECK(types_equal(type_of(m, {pc + w}, {b}), type_of(m, {pc - w}, {b})));
  CHECK(types_equal(type1(m, c), type1(m, Complex(-1.0) * c)));
}

TEST_CASE("gram matrices are hermitian and absolutely continuous") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = testing::separated_points(rng, 2 + rng.index(5), 0.05);
    const SpectralModel m = testing::random_model(rng, pts, 1, 3);
    std::vector<ModelVector> tuple;
    for (int i = 0; i < 3; ++i) tuple.push_back(testing::random_vector(rng, m, 0.5));
    const std::vector<ModelVector> b{testing::random_vector(rng, m, 0.3)};
    const TypeDescriptor t = type_of(m, tuple, b);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(t.gram[i][i].is_positive());
      CHECK(t.gram[i][i].total_mass().real() ==
            doctest::Approx((tuple[i] - t.base[i]).norm_sq()).epsilon(1e-10));
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(measures_close(t.gram[i][j], t.gram[j][i].conj(), 1e-12));
        CHECK(abs_continuous(t.gram[i][j], t.gram[i][i]));
      }
    }
  }
}

TEST_CASE("phi1 and surjectivity on atomic measures") {
  const SpectralModel m = allocated(build_model({1, -1, 0.25, {0, 0.5}}, {kInf, kInf, fin(1), kInf}, "M"), 1);
  CHECK(measures_close(phi1(type1(m, ModelVector::unit("M", {0, 0}))), AtomicMeasure::dirac(1)));

  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    AtomicMeasure mu;
    double budget = 1.0;
    for (Complex l : m.spectrum()) {
      if (rng.uniform() < 0.6) {
        const double w = budget * rng.uniform();
        mu.add(l, w);
        budget -= w;
      }
    }
    const AtomicMeasure got = phi1(type1(m, realize(m, mu)));
    CHECK(measures_close(got, mu, 1e-14));
  }

  CHECK_THROWS_AS(phi1(type_of(m, {ModelVector::unit("M", {0, 0})}, {ModelVector::unit("M", {1, 0})})),
                  Error);
  try {
    phi1(type_of(m, {ModelVector("M"), ModelVector("M")}, {}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Arity);
  }
}

TEST_CASE("type distance") {
  const SpectralModel m = allocated(build_model({1, -1}, {kInf, kInf}, "M"), 1);
  const TypeDescriptor e1 = type1(m, ModelVector::unit("M", {0, 0}));
  const TypeDescriptor em1 = type1(m, ModelVector::unit("M", {1, 0}));
  CHECK(type_distance(e1, e1) == 0.0);
  CHECK(type_distance(e1, em1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  ModelVector half("M");
  half.set({0, 0}, std::sqrt(0.5));
  half.set({1, 0}, std::sqrt(0.5));
  CHECK(type_distance(type1(m, half), e1) ==
        doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-14));

  const TypeDescriptor over_b = type_of(m, {half}, {ModelVector::unit("M", {0, 0})});
  CHECK_THROWS_AS(type_distance(e1, over_b), Error);
}

TEST_CASE("relative type distance splits into base and residual parts") {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = testing::separated_points(rng, 3 + rng.index(4), 0.05);
    const SpectralModel m = testing::random_model(rng, pts, 1, 3);
    const std::vector<ModelVector> b{testing::random_vector(rng, m, 0.4)};
    const ModelVector x = testing::random_vector(rng, m), y = testing::random_vector(rng, m);
    const TypeDescriptor p = type_of(m, {x}, b), q = type_of(m, {y}, b);
    const double base = distance(p.base[0], q.base[0]);
    const double h = hellinger_sq(p.gram[0][0], q.gram[0][0]);
    CHECK(type_distance(p, q) == doctest::Approx(std::sqrt(base * base + h)).epsilon(1e-12));
    CHECK(type_distance(p, q) == doctest::Approx(type_distance(q, p)).epsilon(1e-15));
    // Realizations bound the distance from above.
    CHECK(type_distance(p, q) <= distance(x, y) + 1e-12);
  }
}

TEST_CASE("pseudometric: zero exactly on equal descriptors") {
  Rng rng(45);
  const SpectralModel m = allocated(build_model({0.1, 0.2, 0.3}, {kInf, kInf, kInf}, "M"), 2);
  for (int trial = 0; trial < 100; ++trial) {
    const ModelVector x = testing::random_vector(rng, m);
    const ModelVector y = rng.uniform() < 0.5 ? x : testing::random_vector(rng, m);
    const TypeDescriptor p = type1(m, x), q = type1(m, y);
    CHECK((type_distance(p, q) == 0.0) == types_equal(p, q, 0.0));
  }
}

TEST_CASE("descriptor convergence implies dyadic convergence of the measures") {
  const SpectralModel m = allocated(build_model({0.3, {0.6, 0.1}}, {kInf, kInf}, "M"), 1);
  ModelVector limit("M");
  limit.set({0, 0}, 0.6);
  limit.set({1, 0}, 0.8);
  std::vector<AtomicMeasure> seq;
  for (int n = 1; n <= 200; ++n) {
    ModelVector v = limit;
    v.set({0, 0}, 0.6 + 1.0 / (n * n * n));
    seq.push_back(phi1(type1(m, v)));
    if (n == 200) CHECK(type_distance(type1(m, v), type1(m, limit)) < 1e-6);
  }
  CHECK(weakstar_converged(seq, phi1(type1(m, limit)), 6, 1e-6).converged);
}

TEST_CASE("principality worked examples") {
  TheoryDescriptor k_half{{{0.5, fin(1), true}}, {}};
  const SpectralModel m1 = build_model({0.5}, {fin(1)}, "M1");
  CHECK(is_principal(type1(m1, ModelVector::unit("M1", {0, 0})), k_half));

  // 0 is an accumulation point of {0} u {1/n}.
  TheoryDescriptor k_acc;
  k_acc.atoms.push_back({0, Multiplicity(), false});
  for (int n = 1; n <= 20; ++n) k_acc.atoms.push_back({1.0 / n, fin(1), true});
  const SpectralModel m0 = build_model({0}, {kInf}, "M0");
  SpectralModel m0a = m0;
  m0a.allocate_fresh(0);
  CHECK_FALSE(is_principal(type1(m0a, ModelVector::unit("M0", {0, 0})), k_acc));

  // sum_{n<=N} 2^-n delta_{1/n} + 2^-N delta_{1/(N+1)}: realized by sqrt of the masses.
  const int N = 10;
  std::vector<Complex> pts;
  std::vector<Multiplicity> mults;
  for (int n = 1; n <= N + 1; ++n) {
    pts.push_back(1.0 / n);
    mults.push_back(fin(1));
  }
  const SpectralModel mn = build_model(pts, mults, "MN");
  ModelVector v("MN");
  for (int n = 1; n <= N; ++n) v.set({static_cast<std::uint32_t>(n - 1), 0}, std::sqrt(std::ldexp(1.0, -n)));
  v.set({static_cast<std::uint32_t>(N), 0}, std::sqrt(std::ldexp(1.0, -N)));
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(is_principal(type1(mn, v), k_acc));

  // Mass outside K is inconsistent.
  const SpectralModel far = build_model({0.7}, {fin(1)}, "F");
  try {
    is_principal(type1(far, ModelVector::unit("F", {0, 0})), k_half);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentType);
  }
}

TEST_CASE("n-types are principal iff every coordinate is") {
  TheoryDescriptor k;
  k.atoms = {{0, Multiplicity(), false}, {0.5, fin(2), true}, {1, kInf, true}};
  const SpectralModel m = allocated(build_model({0, 0.5, 1}, {kInf, fin(2), kInf}, "M"), 2);
  Rng rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ModelVector> tuple;
    for (int i = 0; i < 3; ++i) tuple.push_back(testing::random_vector(rng, m, 0.4));
    const bool whole = is_principal(type_of(m, tuple, {}), k);
    bool each = true;
    for (const ModelVector& a : tuple) each = each && is_principal(type1(m, a), k);
    CHECK(whole == each);
  }
}

TEST_CASE("omega-categoricity examples") {
  CHECK(omega_categorical({{{1, kInf, true}, {-1, fin(2), true}}, {}}));
  TheoryDescriptor acc{{{0, Multiplicity(), false}, {1, fin(1), true}, {0.5, fin(1), true}}, {}};
  CHECK_FALSE(omega_categorical(acc));
  CHECK_FALSE(omega_categorical({{}, {{0, 1, 0, 1}}}));
}

TEST_CASE("epsilon nets") {
  SpectralModel one = build_model({1}, {kInf}, "One");
  const EpsilonNet net = epsilon_net(one, {}, 0.1, 1.0);
  CHECK(net.spacing == doctest::Approx(0.05));
  CHECK(net.dimension == 1);
  for (const TypeDescriptor& t : net.types) {
    const double r = std::sqrt(phi1(t).total_mass().real());
    CHECK(std::abs(r / 0.05 - std::round(r / 0.05)) < 1e-9);
  }

  CHECK(epsilon_net(one, {}, 2.0, 1.0).types.size() == 1);

  SpectralModel big = allocated(build_model({0, 0.5, 1, -1, {0, 1}}, {kInf, kInf, kInf, kInf, kInf}, "Big"), 1);
  try {
    epsilon_net(big, {ModelVector::unit("Big", {0, 0}, 0.5), ModelVector::unit("Big", {1, 0})}, 1e-3, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Budget);
    CHECK(e.value() > 1e-3);
    CHECK(e.value() <= 1.0);
  }
  SpectralModel three = build_model({0, 0.5, 1}, {kInf, kInf, kInf}, "Three");
  try {
    epsilon_net(three, {}, 0.01, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Budget);
    CHECK(e.value() > 0.01);
    CHECK(e.value() < 1.0);
    CHECK(epsilon_net(three, {}, e.value(), 1.0).types.size() <= kNetBudget);
  }
}

TEST_CASE("sampled types fall within eps of the net") {
  SpectralModel m = allocated(build_model({0.2, {0, 0.7}}, {kInf, kInf}, "M"), 2);
  const std::vector<ModelVector> b{ModelVector::unit("M", {0, 0}, 0.6)};
  const double eps = 0.5, cap = 1.0;
  const EpsilonNet net = epsilon_net(m, b, eps, cap);
  CHECK(net.types.size() > 1);
  Rng rng(47);
  for (int trial = 0; trial < 1000; ++trial) {
    ModelVector v = testing::random_vector(rng, m);
    v = Complex(cap * rng.uniform() / v.norm()) * v;
    const TypeDescriptor p = type_of(m, {v}, b);
    double best = 1e300;
    for (const TypeDescriptor& t : net.types) best = std::min(best, type_distance(p, t));
    CHECK(best < eps);
  }
}
