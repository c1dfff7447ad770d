#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace normop::matching {

inline constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

/// Maximum-cardinality bipartite matching by Hopcroft-Karp.
/// `adj[u]` lists the right vertices adjacent to left vertex u.
struct BipartiteMatching {
  std::size_t size = 0;
  std::vector<std::size_t> left_to_right;  // kUnmatched when free
  std::vector<std::size_t> right_to_left;
};

BipartiteMatching hopcroft_karp(std::size_t n_left, std::size_t n_right,
                                const std::vector<std::vector<std::size_t>>& adj);

/// Perfect matching of an n x n cost matrix minimizing the largest used
/// cost; entries that are not finite are forbidden. Returns nothing when no
/// perfect matching exists.
struct BottleneckResult {
  double value = 0.0;
  std::vector<std::size_t> assignment;  // row -> column
};

std::optional<BottleneckResult> bottleneck_assignment(
    const std::vector<std::vector<double>>& cost);

/// Minimum-sum perfect assignment of a square cost matrix (Hungarian method,
/// O(n^3)). Returns row -> column.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace normop::matching
