#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oebif/errors.hpp"
#include "oebif/fsoe.hpp"
#include "oebif/network_dynamics.hpp"
#include "test_support.hpp"

using namespace oebif;
using namespace oebif::test;

TEST_CASE("network vector field at a hand-computed state") {
  const ModelConfig cfg = canonical_config(0.5);
  const Graph g = triangle_graph();
  const NetworkState st{{0.1, 0.2, 0.3}, 0.4};
  const NetworkRate rate = rhs_network(cfg, g, st);
  REQUIRE(rate.dx.size() == 3);

  const double renv = std::tanh(-3.0 * 0.4);
  const double s1 = std::tanh(0.3), s2 = std::tanh(0.6), s3 = std::tanh(0.9);
  CHECK(rate.dx[0] == doctest::Approx(-0.1 + 0.5 * renv + 0.5 * (s2 + s3) / 2).epsilon(1e-15));
  CHECK(rate.dx[1] == doctest::Approx(-0.2 + 0.5 * renv + 0.5 * (s1 + s3) / 2).epsilon(1e-15));
  CHECK(rate.dx[2] == doctest::Approx(-0.3 + 0.5 * renv + 0.5 * (s1 + s2) / 2).epsilon(1e-15));
  CHECK(rate.de == doctest::Approx(-0.2 * 0.4 + (0.2 + 0.1) - 0.2 * 0.5).epsilon(1e-15));
}

TEST_CASE("state length must match the graph") {
  CHECK_THROWS_AS((void)rhs_network(canonical_config(), triangle_graph(), {{0.1, 0.2}, 0.0}),
                  SizeMismatch);
}

TEST_CASE("packing round-trips and validates") {
  const NetworkState st{{0.1, -0.2, 0.3}, 0.7};
  const std::vector<double> y = pack_state(st);
  REQUIRE(y.size() == 4);
  CHECK(y[3] == 0.7);
  const NetworkState back = unpack_state(y, 3);
  CHECK(back.x == st.x);
  CHECK(back.e == st.e);
  CHECK_THROWS_AS((void)unpack_state(y, 4), SizeMismatch);
}

TEST_CASE("sync error is the opinion spread") {
  CHECK(sync_error({0.2, -0.1, 0.4}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sync_error({0.3}) == 0.0);
  CHECK(sync_error({}) == 0.0);
}

TEST_CASE("consensus initial data stay synchronized") {
  const ModelConfig cfg = canonical_config(0.5);
  CHECK(check_forward_invariance(cfg, triangle_graph(), 0.5, 0.3, 100.0) <= 1e-9);
}

TEST_CASE("consensus trajectories follow the planar reduction") {
  const ModelConfig cfg = canonical_config(0.7);
  const Graph g = triangle_graph();

  SolverOptions opts;
  opts.method = SolverMethod::RK4Fixed;
  opts.step = 1e-3;
  const Trajectory net = simulate_network(cfg, g, {{0.3, 0.3, 0.3}, 0.1}, 100.0, opts);

  const RhsFunction planar = [&cfg](double, const std::vector<double>& y,
                                    std::vector<double>& dydt) {
    const FsoeRate rate = rhs_fsoe(cfg, {y[0], y[1]});
    dydt.resize(2);
    dydt[0] = rate.dp;
    dydt[1] = rate.de;
  };
  const Trajectory flat = integrate(planar, {0.3, 0.1}, 0.0, 100.0, opts);

  REQUIRE(net.times.size() == flat.times.size());
  double worst = 0.0;
  for (size_t k = 0; k < net.times.size(); ++k) {
    worst = std::max(worst, std::abs(net.states[k][0] - flat.states[k][0]));
    worst = std::max(worst, std::abs(net.states[k][3] - flat.states[k][1]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("the vector field is odd for aligned configurations") {
  const ModelConfig cfg = canonical_config(0.5);
  const Graph g = random_connected_graph(8, 3, 5);
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    NetworkState st;
    st.x.resize(g.n);
    for (double& x : st.x) x = uniform_pm1(rng);
    st.e = 2.0 * uniform_pm1(rng);
    worst = std::max(worst, check_odd_dynamics(cfg, g, st));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("a misaligned control shifts the field by twice the threshold rate") {
  ModelConfig cfg = canonical_config(0.5);
  cfg.u = SmoothFunction::affine(1.0, 0.0);  // drops the gamma*ebar alignment
  const Graph g = triangle_graph();
  const NetworkState st{{0.2, -0.4, 0.1}, 0.3};
  CHECK(check_odd_dynamics(cfg, g, st) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("neighbor averaging mixes to consensus on non-bipartite graphs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = random_connected_graph(10, 3, seed, true);
    std::mt19937_64 rng(seed + 100);
    std::vector<double> w(g.n);
    for (double& v : w) v = uniform_pm1(rng);
    for (int iter = 0; iter < 10000; ++iter) w = apply_normalized_adjacency(g, w);
    CHECK(sync_error(w) <= 1e-8);
  }
}

TEST_CASE("weak social amplification synchronizes random initial opinions") {
  ModelConfig cfg = canonical_config(0.0);
  cfg.s = SmoothFunction::tanh_gain(1.0);
  const Graph g = random_connected_graph(8, 3, 9);
  std::mt19937_64 rng(7);
  NetworkState st;
  st.x.resize(g.n);
  for (double& x : st.x) x = uniform_pm1(rng);
  st.e = 0.5;
  SolverOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-10;
  const Trajectory traj = simulate_network(cfg, g, st, 200.0, opts);
  const std::vector<double>& last = traj.states.back();
  CHECK(sync_error({last.begin(), last.end() - 1}) <= 1e-6);
}

TEST_CASE("simulation horizon must be positive") {
  CHECK_THROWS_AS(
      (void)simulate_network(canonical_config(), triangle_graph(), {{0.0, 0.0, 0.0}, 0.0}, -1.0,
                             SolverOptions{}),
      ConfigError);
}
