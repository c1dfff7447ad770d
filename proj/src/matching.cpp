#include "normop/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "normop/common.hpp"

namespace normop::matching {

BipartiteMatching hopcroft_karp(std::size_t n_left, std::size_t n_right,
                                const std::vector<std::vector<std::size_t>>& adj) {
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  BipartiteMatching m;
  m.left_to_right.assign(n_left, kUnmatched);
  m.right_to_left.assign(n_right, kUnmatched);
  std::vector<std::size_t> dist(n_left);

  auto bfs = [&]() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t u = 0; u < n_left; ++u) {
      if (m.left_to_right[u] == kUnmatched) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = inf;
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj[u]) {
        const std::size_t w = m.right_to_left[v];
        if (w == kUnmatched) {
          found = true;
        } else if (dist[w] == inf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  // Iterative DFS along the layered graph.
  std::vector<std::size_t> next_edge(n_left);
  std::vector<std::size_t> stack;
  auto dfs = [&](std::size_t root) {
    stack.assign(1, root);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      if (next_edge[u] == adj[u].size()) {
        dist[u] = inf;
        stack.pop_back();
        if (!stack.empty()) ++next_edge[stack.back()];
        continue;
      }
      const std::size_t w = m.right_to_left[adj[u][next_edge[u]]];
      if (w == kUnmatched) {
        for (std::size_t x : stack) {
          const std::size_t y = adj[x][next_edge[x]];
          m.left_to_right[x] = y;
          m.right_to_left[y] = x;
        }
        return true;
      }
      if (dist[w] == dist[u] + 1)
        stack.push_back(w);
      else
        ++next_edge[u];
    }
    return false;
  };

  while (bfs()) {
    std::fill(next_edge.begin(), next_edge.end(), 0);
    for (std::size_t u = 0; u < n_left; ++u)
      if (m.left_to_right[u] == kUnmatched && dfs(u)) ++m.size;
  }
  return m;
}

std::optional<BottleneckResult> bottleneck_assignment(
    const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return BottleneckResult{};
  std::vector<double> values;
  for (const auto& row : cost) {
    if (row.size() != n) throw Error(ErrorKind::Dimension, "bottleneck cost matrix is not square");
    for (double c : row)
      if (std::isfinite(c)) values.push_back(c);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  auto try_threshold = [&](double t) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::isfinite(cost[i][j]) && cost[i][j] <= t) adj[i].push_back(j);
    return hopcroft_karp(n, n, adj);
  };

  if (values.empty() || try_threshold(values.back()).size < n) return std::nullopt;
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (try_threshold(values[mid]).size == n)
      hi = mid;
    else
      lo = mid + 1;
  }
  BipartiteMatching m = try_threshold(values[lo]);
  return BottleneckResult{values[lo], std::move(m.left_to_right)};
}

std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  // Potentials formulation with 1-based sentinel column 0.
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    if (cost[i - 1].size() != n)
      throw Error(ErrorKind::Dimension, "assignment cost matrix is not square");
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace normop::matching
