#include "oebif/network_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oebif/errors.hpp"

namespace oebif {

NetworkRate rhs_network(const ModelConfig& cfg, const Graph& g, const NetworkState& st) {
  if (static_cast<int>(st.x.size()) != g.n)
    throw SizeMismatch("state has " + std::to_string(st.x.size()) + " opinions for a graph on " +
                       std::to_string(g.n) + " vertices");
  const int n = g.n;
  std::vector<double> sx(n);
  double x_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sx[i] = eval(cfg.s, st.x[i]);
    x_sum += st.x[i];
  }
  const double social = cfg.beta * eval(cfg.r, st.e);
  NetworkRate rate;
  rate.dx.resize(n);
  for (int i = 0; i < n; ++i) {
    double neighbor_sum = 0.0;
    for (int j : g.neighbors[i]) neighbor_sum += sx[j];
    const double coupling = (1.0 - cfg.beta) * neighbor_sum / static_cast<double>(g.degrees[i]);
    rate.dx[i] = (-st.x[i] + social + coupling) / cfg.tau_x;
  }
  const double u_mean = eval(cfg.u, x_sum / static_cast<double>(n));
  rate.de = (-cfg.gamma * st.e + u_mean - cfg.gamma * cfg.ebar) / cfg.tau_e;
  return rate;
}

std::vector<double> pack_state(const NetworkState& st) {
  std::vector<double> y(st.x.size() + 1);
  std::copy(st.x.begin(), st.x.end(), y.begin());
  y.back() = st.e;
  return y;
}

NetworkState unpack_state(const std::vector<double>& y, int n) {
  if (static_cast<int>(y.size()) != n + 1)
    throw SizeMismatch("packed state has " + std::to_string(y.size()) +
                       " entries, expected " + std::to_string(n + 1));
  NetworkState st;
  st.x.assign(y.begin(), y.begin() + n);
  st.e = y.back();
  return st;
}

Trajectory simulate_network(const ModelConfig& cfg, const Graph& g, const NetworkState& st0,
                            double t_end, const SolverOptions& opts) {
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  const int n = g.n;
  auto rhs = [&cfg, &g, n](double, const std::vector<double>& y, std::vector<double>& dydt) {
    const NetworkRate rate = rhs_network(cfg, g, unpack_state(y, n));
    dydt.resize(y.size());
    std::copy(rate.dx.begin(), rate.dx.end(), dydt.begin());
    dydt.back() = rate.de;
  };
  return integrate(rhs, pack_state(st0), 0.0, t_end, opts);
}

double sync_error(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

double check_forward_invariance(const ModelConfig& cfg, const Graph& g, double p0, double e0,
                                double t_end) {
  NetworkState st0;
  st0.x.assign(g.n, p0);
  st0.e = e0;
  SolverOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-10;
  const Trajectory traj = simulate_network(cfg, g, st0, t_end, opts);
  double worst = 0.0;
  for (const auto& y : traj.states) {
    const std::vector<double> x(y.begin(), y.end() - 1);
    worst = std::max(worst, sync_error(x));
  }
  return worst;
}

double check_odd_dynamics(const ModelConfig& cfg, const Graph& g, const NetworkState& st) {
  const NetworkRate forward = rhs_network(cfg, g, st);
  NetworkState mirrored;
  mirrored.x.resize(st.x.size());
  for (size_t i = 0; i < st.x.size(); ++i) mirrored.x[i] = -st.x[i];
  mirrored.e = -st.e;
  const NetworkRate backward = rhs_network(cfg, g, mirrored);
  double worst = 0.0;
  for (size_t i = 0; i < forward.dx.size(); ++i)
    worst = std::max(worst, std::abs(forward.dx[i] + backward.dx[i]));
  worst = std::max(worst, std::abs(forward.de + backward.de));
  return worst;
}

}  // namespace oebif
