#include "oebif/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <set>
#include <string>

#include "oebif/errors.hpp"

namespace oebif {

namespace {

std::string describe_edge(int i, int j) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%d, %d)", i, j);
  return buf;
}

}  // namespace

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw ConfigError("graph needs a positive vertex count");
  Graph g;
  g.n = n;
  g.degrees.assign(n, 0);
  g.neighbors.assign(n, {});
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw IndexOutOfRange("edge " + describe_edge(a, b) + " has a vertex outside [0, " +
                            std::to_string(n) + ")");
    if (a == b) throw SelfLoop("self-loop at vertex " + std::to_string(a));
    const std::pair<int, int> e{std::min(a, b), std::max(a, b)};
    if (!seen.insert(e).second) throw DuplicateEdge("duplicate edge " + describe_edge(e.first, e.second));
  }
  g.edges.assign(seen.begin(), seen.end());
  for (const auto& [a, b] : g.edges) {
    g.degrees[a] += 1;
    g.degrees[b] += 1;
    g.neighbors[a].push_back(b);
    g.neighbors[b].push_back(a);
  }
  for (int v = 0; v < n; ++v) {
    if (g.degrees[v] == 0)
      throw IsolatedVertex("vertex " + std::to_string(v) + " has no incident edge");
    std::sort(g.neighbors[v].begin(), g.neighbors[v].end());
  }
  return g;
}

bool is_connected(const Graph& g) {
  std::vector<char> visited(g.n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : g.neighbors[v]) {
      if (!visited[w]) {
        visited[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == g.n;
}

std::vector<double> apply_normalized_adjacency(const Graph& g, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != g.n)
    throw LengthMismatch("vector length " + std::to_string(v.size()) +
                         " does not match vertex count " + std::to_string(g.n));
  std::vector<double> w(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    double sum = 0.0;
    for (int j : g.neighbors[i]) sum += v[j];
    w[i] = sum / g.degrees[i];
  }
  return w;
}

}  // namespace oebif
