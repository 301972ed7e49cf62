#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "oebif/graph.hpp"
#include "oebif/model_functions.hpp"

namespace oebif::test {

// Reference parameter set used throughout the suites: amplifying social
// signal, opposing environment response, linear control shifted so that the
// origin is an equilibrium of the reduced dynamics.
inline ModelConfig canonical_config(double beta = 0.5) {
  ModelConfig cfg;
  cfg.s = SmoothFunction::tanh_gain(3.0);
  cfg.r = SmoothFunction::tanh_gain(-3.0);
  cfg.u = SmoothFunction::affine(1.0, 0.1);
  cfg.beta = beta;
  cfg.gamma = 0.2;
  cfg.ebar = 0.5;
  cfg.tau_x = 1.0;
  cfg.tau_e = 1.0;
  return cfg;
}

inline Graph triangle_graph() { return build_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

// Uniform draw on [-1, 1) from the raw 64-bit stream; identical across
// standard library implementations.
inline double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0;
}

inline bool is_bipartite(const Graph& g) {
  std::vector<int> color(g.n, -1);
  for (int start = 0; start < g.n; ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    std::queue<int> queue;
    queue.push(start);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int w : g.neighbors[v]) {
        if (color[w] < 0) {
          color[w] = 1 - color[v];
          queue.push(w);
        } else if (color[w] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

// Random connected simple graph on n vertices: a random attachment tree plus
// `extra_edges` distinct chords. Redraws until non-bipartite when requested.
inline Graph random_connected_graph(int n, int extra_edges, std::uint64_t seed,
                                    bool require_non_bipartite = false) {
  std::mt19937_64 rng(seed);
  for (;;) {
    std::set<std::pair<int, int>> edge_set;
    for (int v = 1; v < n; ++v) {
      const int w = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
      edge_set.insert({w, v});
    }
    const int max_extra = n * (n - 1) / 2 - static_cast<int>(edge_set.size());
    int wanted = std::min(extra_edges, max_extra);
    int guard = 0;
    while (wanted > 0 && guard < 1000) {
      const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      if (a == b) {
        ++guard;
        continue;
      }
      const std::pair<int, int> e{std::min(a, b), std::max(a, b)};
      if (edge_set.insert(e).second) --wanted;
      ++guard;
    }
    const Graph g =
        build_graph(n, std::vector<std::pair<int, int>>(edge_set.begin(), edge_set.end()));
    if (!require_non_bipartite || !is_bipartite(g)) return g;
  }
}

// Finite-difference stencils used as independent derivative oracles:
// fourth-order five-point formulas for f' and f'', sixth-order nine-point
// formula for f'''.
inline double fd_first(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

inline double fd_second(const std::function<double(double)>& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) /
         (12 * h * h);
}

inline double fd_third(const std::function<double(double)>& f, double x, double h) {
  constexpr std::array<double, 9> w = {-7.0 / 240, 3.0 / 10,   -169.0 / 120, 61.0 / 30, 0.0,
                                       -61.0 / 30, 169.0 / 120, -3.0 / 10,   7.0 / 240};
  double sum = 0.0;
  for (int k = -4; k <= 4; ++k) sum += w[k + 4] * f(x + k * h);
  return sum / (h * h * h);
}

inline double guarded_rel_err(double approx, double exact) {
  return std::abs(approx - exact) / std::max(1.0, std::abs(exact));
}

}  // namespace oebif::test
