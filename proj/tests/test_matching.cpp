#include <doctest.h>

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "normop/matching.hpp"
#include "support.hpp"

using namespace normop::matching;
using normop::testing::Rng;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t brute_max_matching(std::size_t nl, std::size_t nr,
                               const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<bool> used(nr, false);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t u, std::size_t size) {
    if (u == nl) {
      best = std::max(best, size);
      return;
    }
    go(u + 1, size);
    for (std::size_t v : adj[u]) {
      if (used[v]) continue;
      used[v] = true;
      go(u + 1, size + 1);
      used[v] = false;
    }
  };
  go(0, 0);
  return best;
}

template <typename F>
void each_permutation(std::size_t n, F&& f) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do f(p);
  while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace

TEST_CASE("hopcroft-karp matches brute force") {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t nl = 1 + rng.index(7), nr = 1 + rng.index(7);
    std::vector<std::vector<std::size_t>> adj(nl);
    for (std::size_t u = 0; u < nl; ++u)
      for (std::size_t v = 0; v < nr; ++v)
        if (rng.uniform() < 0.35) adj[u].push_back(v);
    const BipartiteMatching m = hopcroft_karp(nl, nr, adj);
    CHECK(m.size == brute_max_matching(nl, nr, adj));
    std::size_t count = 0;
    for (std::size_t u = 0; u < nl; ++u) {
      const std::size_t v = m.left_to_right[u];
      if (v == kUnmatched) continue;
      ++count;
      CHECK(m.right_to_left[v] == u);
      CHECK(std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end());
    }
    CHECK(count == m.size);
  }
}

TEST_CASE("bottleneck assignment matches brute force") {
  Rng rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (auto& row : cost)
      for (auto& c : row) c = rng.uniform() < 0.2 ? kInf : std::round(rng.uniform() * 20) / 20;
    double best = kInf;
    each_permutation(n, [&](const std::vector<std::size_t>& p) {
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, cost[i][p[i]]);
      best = std::min(best, worst);
    });
    const auto got = bottleneck_assignment(cost);
    if (!std::isfinite(best)) {
      CHECK_FALSE(got.has_value());
      continue;
    }
    REQUIRE(got.has_value());
    CHECK(got->value == best);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, cost[i][got->assignment[i]]);
    CHECK(worst == got->value);
  }
  CHECK(bottleneck_assignment({}).has_value());
}

TEST_CASE("hungarian assignment matches brute force") {
  Rng rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (auto& row : cost)
      for (auto& c : row) c = rng.uniform(-1, 3);
    double best = kInf;
    each_permutation(n, [&](const std::vector<std::size_t>& p) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += cost[i][p[i]];
      best = std::min(best, s);
    });
    const auto a = min_cost_assignment(cost);
    double s = 0.0;
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      s += cost[i][a[i]];
      CHECK_FALSE(seen[a[i]]);
      seen[a[i]] = true;
    }
    CHECK(s == doctest::Approx(best).epsilon(1e-12));
  }
}
