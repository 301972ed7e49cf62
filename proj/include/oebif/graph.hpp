#pragma once

#include <utility>
#include <vector>

namespace oebif {

// Undirected simple graph; every vertex must have degree >= 1 so that the
// degree-normalized adjacency operator exists.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;   // normalized to i < j, sorted
  std::vector<int> degrees;
  std::vector<std::vector<int>> neighbors;  // sorted adjacency lists
};

[[nodiscard]] Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges);

// True iff breadth-first search from vertex 0 reaches all n vertices.
[[nodiscard]] bool is_connected(const Graph& g);

// w_i = mean of v over the neighbors of i (row-stochastic neighbor averaging).
[[nodiscard]] std::vector<double> apply_normalized_adjacency(const Graph& g,
                                                             const std::vector<double>& v);

}  // namespace oebif
