#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <vector>

#include "oebif/bifurcation.hpp"
#include "oebif/fsoe.hpp"
#include "oebif/network_dynamics.hpp"
#include "oebif/ode_solvers.hpp"
#include "test_support.hpp"

using namespace oebif;
using namespace oebif::test;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int id, const char* name, bool ok, double secs) {
  std::printf("acceptance %02d %-30s %s (%.3f s)\n", id, name, ok ? "PASS" : "FAIL", secs);
  std::fflush(stdout);
}

double origin_trace(double beta) {
  const ModelConfig cfg = canonical_config(beta);
  return jacobian_fsoe(cfg, {0.0, 0.0}).trace;
}

double sum_real_parts(double beta) {
  const ModelConfig cfg = canonical_config(beta);
  const auto [l1, l2] = eigenvalues_2x2(jacobian_fsoe(cfg, {0.0, 0.0}));
  return l1.real() + l2.real();
}

const std::optional<CycleData>& measured_cycle(double beta) {
  static std::map<double, std::optional<CycleData>> cache;
  auto it = cache.find(beta);
  if (it == cache.end())
    it = cache.emplace(beta, limit_cycle_amplitude(canonical_config(), beta)).first;
  return it->second;
}

}  // namespace

TEST_CASE("acceptance 01: oscillation threshold, closed form vs sweep") {
  Timer timer;
  const HopfLocusResult locus = hopf_locus(canonical_config(), 0.0);
  const BifurcationDiagram diagram = sweep_beta(canonical_config(), 0.55, 0.65, 21);
  std::optional<double> numeric_beta;
  for (const BifurcationPoint& pt : diagram.points)
    if (pt.kind == BifurcationKind::Hopf && pt.detection == Detection::Numeric)
      numeric_beta = pt.beta;
  const double secs = timer.seconds();

  const bool closed_ok = locus.beta_star && std::abs(*locus.beta_star - 0.6) <= 1e-12;
  const bool numeric_ok = numeric_beta && std::abs(*numeric_beta - 0.6) <= 1e-6;
  const bool time_ok = secs < 1.0;
  report(1, "hopf-location", closed_ok && numeric_ok && time_ok, secs);
  CHECK(closed_ok);
  CHECK(numeric_ok);
  CHECK(time_ok);
}

TEST_CASE("acceptance 02: equilibrium count drops from five to one") {
  Timer timer;
  const size_t low = find_fixed_points(canonical_config(0.24)).size();
  const size_t high = find_fixed_points(canonical_config(0.25)).size();
  const double secs = timer.seconds();

  const bool counts_ok = low == 5 && high == 1;
  const bool time_ok = secs < 0.1;
  report(2, "equilibrium-count-transition", counts_ok && time_ok, secs);
  CHECK(low == 5);
  CHECK(high == 1);
  CHECK(time_ok);
}

TEST_CASE("acceptance 03: the cycle collapses just past the threshold") {
  Timer timer;
  const std::optional<CycleData>& below = measured_cycle(0.59);
  const std::optional<CycleData>& above = measured_cycle(0.61);
  const double secs = timer.seconds();

  const bool cycle_ok = below && 0.5 * (below->p_max - below->p_min) > 1e-2;
  const bool collapsed_ok = !above.has_value();
  const bool time_ok = secs < 5.0;
  report(3, "cycle-collapse", cycle_ok && collapsed_ok && time_ok, secs);
  CHECK(cycle_ok);
  CHECK(collapsed_ok);
  CHECK(time_ok);
}

TEST_CASE("acceptance 04: symmetric branching at the origin") {
  Timer timer;
  const BetaZeroResult inverted = beta_for_zero_eigenvalue(canonical_config(), 0.0, 0.0);
  const GammaZeroResult forward =
      gamma_for_zero_eigenvalue(canonical_config(1.0 / 9.0), 0.0, 0.0);

  const BifurcationDiagram diagram = sweep_beta(canonical_config(), 0.05, 0.2, 31);
  std::optional<double> numeric_beta;
  for (const BifurcationPoint& pt : diagram.points)
    if (pt.kind == BifurcationKind::Pitchfork && pt.detection == Detection::Numeric)
      numeric_beta = pt.beta;

  const std::vector<double> before = find_fixed_points(canonical_config(1.0 / 9.0 - 0.01));
  const std::vector<double> after = find_fixed_points(canonical_config(1.0 / 9.0 + 0.01));
  const double secs = timer.seconds();

  const bool closed_ok = inverted.beta && std::abs(*inverted.beta - 1.0 / 9.0) <= 1e-12 &&
                         forward.gamma && std::abs(*forward.gamma - 0.2) <= 1e-12;
  const bool numeric_ok = numeric_beta && std::abs(*numeric_beta - 1.0 / 9.0) <= 1e-6;
  bool symmetry_ok = before.size() == 3 && after.size() == 5;
  if (symmetry_ok)
    for (size_t i = 0; i < after.size(); ++i)
      symmetry_ok = symmetry_ok && std::abs(after[i] + after[after.size() - 1 - i]) <= 1e-9;
  const bool time_ok = secs < 1.0;
  report(4, "origin-pitchfork-point", closed_ok && numeric_ok && symmetry_ok && time_ok, secs);
  CHECK(closed_ok);
  CHECK(numeric_ok);
  CHECK(symmetry_ok);
  CHECK(time_ok);
}

TEST_CASE("acceptance 05: double-zero roots and their feasibility") {
  Timer timer;
  const DoubleZeroResult res = beta_double_zero(canonical_config(), 0.0, 0.0);
  const double secs = timer.seconds();

  const bool values_ok = std::abs(res.delta_beta - 81.0) <= 1e-12 && res.beta_minus &&
                         std::abs(*res.beta_minus - 1.0 / 3.0) <= 1e-12 && res.beta_plus &&
                         std::abs(*res.beta_plus - 4.0 / 3.0) <= 1e-12;
  const bool flags_ok = res.beta_minus_feasible && !res.beta_plus_feasible;
  const bool time_ok = secs < 0.01;
  report(5, "double-zero-roots", values_ok && flags_ok && time_ok, secs);
  CHECK(values_ok);
  CHECK(flags_ok);
  CHECK(time_ok);
}

TEST_CASE("acceptance 06: frequency matches the spectrum at the refined point") {
  Timer timer;
  double lo = 0.55, hi = 0.65;
  double trace_lo = origin_trace(lo);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double trace_mid = origin_trace(mid);
    if (trace_lo * trace_mid <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      trace_lo = trace_mid;
    }
  }
  const double beta_hat = 0.5 * (lo + hi);
  const ModelConfig cfg = canonical_config(beta_hat);
  const Jacobian2 jac = jacobian_fsoe(cfg, {0.0, 0.0});
  const auto [l1, l2] = eigenvalues_2x2(jac);
  const double imag_part = std::abs(l1.imag());
  const double secs = timer.seconds();

  const bool match_ok = std::abs(imag_part - std::sqrt(jac.det)) <= 1e-8;
  const bool value_ok = std::abs(imag_part - 1.3266499) <= 1e-6;
  report(6, "omega0-consistency", match_ok && value_ok, secs);
  CHECK(match_ok);
  CHECK(value_ok);
}

TEST_CASE("acceptance 07: cubic coefficient against finite differences") {
  Timer timer;
  const PitchforkInfo info = pitchfork_coefficient(canonical_config(), 1.0 / 9.0, 0.2);
  const ModelConfig at = canonical_config(1.0 / 9.0);
  const double fd =
      fd_third([&at](double x) { return instrumental_g(at, x); }, 0.0, 2e-3);
  const double secs = timer.seconds();

  const bool value_ok = std::abs(info.coefficient_c - 702.0) / 702.0 <= 1e-9;
  const bool fd_ok = std::abs(fd - info.coefficient_c) / std::abs(info.coefficient_c) <= 1e-4;
  report(7, "pitchfork-coefficient", value_ok && fd_ok, secs);
  CHECK(value_ok);
  CHECK(fd_ok);
}

TEST_CASE("acceptance 08: predicted cycle side matches simulation") {
  Timer timer;
  const HopfInfo info = hopf_coefficient(canonical_config(), 0.6, 0.2);
  const std::optional<CycleData>& below = measured_cycle(0.59);
  const std::optional<CycleData>& above = measured_cycle(0.61);
  const double secs = timer.seconds();

  const bool nonzero_ok = std::abs(info.h21.real()) > 1e-10;
  const bool side_ok = info.supercritical_side == SupercriticalSide::BelowBetaStar;
  const bool contrast_ok = below.has_value() && !above.has_value();
  report(8, "hopf-coefficient-side", nonzero_ok && side_ok && contrast_ok, secs);
  CHECK(nonzero_ok);
  CHECK(side_ok);
  CHECK(contrast_ok);
}

TEST_CASE("acceptance 09: eigenvalue crossing slope") {
  Timer timer;
  const double h = 1e-6;
  const double slope = (sum_real_parts(0.6 + h) - sum_real_parts(0.6 - h)) / (2.0 * h);
  const double secs = timer.seconds();

  const bool slope_ok = std::abs(slope - (-3.0)) / 3.0 <= 1e-3;
  report(9, "eigenvalue-crossing-slope", slope_ok, secs);
  CHECK(slope_ok);
}

TEST_CASE("acceptance 10: the consensus set is forward invariant") {
  Timer timer;
  std::mt19937_64 rng(12345);
  const ModelConfig cfg = canonical_config(0.7);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 18);
    const int max_extra = (n - 1) * (n - 2) / 2;
    const int extra = std::min(static_cast<int>(rng() % n), max_extra);
    const Graph g = random_connected_graph(n, extra, 1000 + trial);
    const double p0 = uniform_pm1(rng);
    const double e0 = uniform_pm1(rng);
    worst = std::max(worst, check_forward_invariance(cfg, g, p0, e0, 100.0));
  }
  const double secs = timer.seconds();

  const bool sync_ok = worst <= 1e-9;
  const bool time_ok = secs < 10.0;
  report(10, "forward-invariance", sync_ok && time_ok, secs);
  CHECK(sync_ok);
  CHECK(time_ok);
}

TEST_CASE("acceptance 11: the network vector field is odd") {
  Timer timer;
  const Graph g = random_connected_graph(12, 5, 7);
  const ModelConfig cfg = canonical_config();
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    NetworkState st;
    st.x.resize(g.n);
    for (double& xi : st.x) xi = uniform_pm1(rng);
    st.e = uniform_pm1(rng);
    worst = std::max(worst, check_odd_dynamics(cfg, g, st));
  }
  const double secs = timer.seconds();

  const bool odd_ok = worst <= 1e-12;
  report(11, "odd-dynamics", odd_ok, secs);
  CHECK(odd_ok);
}

TEST_CASE("acceptance 12: integrator accuracy and convergence order") {
  Timer timer;
  const RhsFunction decay = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
    dydt.resize(1);
    dydt[0] = -y[0];
  };
  const double exact = std::exp(-1.0);

  SolverOptions adaptive;
  const Trajectory smooth = integrate(decay, {1.0}, 0.0, 1.0, adaptive);
  const double adaptive_err = std::abs(smooth.states.back()[0] - exact);

  const auto rk4_err = [&](double step) {
    SolverOptions opts;
    opts.method = SolverMethod::RK4Fixed;
    opts.step = step;
    const Trajectory tr = integrate(decay, {1.0}, 0.0, 1.0, opts);
    return std::abs(tr.states.back()[0] - exact);
  };
  const double ratio = rk4_err(0.1) / rk4_err(0.05);
  const double secs = timer.seconds();

  const bool adaptive_ok = adaptive_err <= 1e-8;
  const bool order_ok = ratio >= 14.0;
  report(12, "solver-order", adaptive_ok && order_ok, secs);
  CHECK(adaptive_ok);
  CHECK(order_ok);
}
