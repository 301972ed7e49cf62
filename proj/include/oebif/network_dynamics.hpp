#pragma once

#include <vector>

#include "oebif/graph.hpp"
#include "oebif/model_functions.hpp"
#include "oebif/ode_solvers.hpp"

namespace oebif {

struct NetworkState {
  std::vector<double> x;  // opinions, each in [-1,1]
  double e = 0.0;         // environment deviation
};

struct NetworkRate {
  std::vector<double> dx;
  double de = 0.0;
};

// dx_i = (-x_i + beta*r(e) + (1-beta)*mean_{j~i} s(x_j)) / tau_x
// de   = (-gamma*e + u(mean(x)) - gamma*ebar) / tau_e
[[nodiscard]] NetworkRate rhs_network(const ModelConfig& cfg, const Graph& g,
                                      const NetworkState& st);

// Flat packing [x_0, ..., x_{N-1}, e] used for Trajectory states.
[[nodiscard]] std::vector<double> pack_state(const NetworkState& st);
[[nodiscard]] NetworkState unpack_state(const std::vector<double>& y, int n);

[[nodiscard]] Trajectory simulate_network(const ModelConfig& cfg, const Graph& g,
                                          const NetworkState& st0, double t_end,
                                          const SolverOptions& opts);

// max_{i,j} |x_i - x_j|
[[nodiscard]] double sync_error(const std::vector<double>& x);

// Simulates from the consensus state (p0*ones, e0) with the adaptive solver at
// tolerance 1e-10 and returns the largest sync error seen along the trajectory.
[[nodiscard]] double check_forward_invariance(const ModelConfig& cfg, const Graph& g, double p0,
                                              double e0, double t_end);

// ||F(-y) + F(y)||_inf over the packed state; near zero for odd dynamics.
[[nodiscard]] double check_odd_dynamics(const ModelConfig& cfg, const Graph& g,
                                        const NetworkState& st);

}  // namespace oebif
