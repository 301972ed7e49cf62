#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oebif/bifurcation.hpp"
#include "oebif/config_io.hpp"
#include "oebif/csv.hpp"
#include "oebif/errors.hpp"
#include "oebif/fsoe.hpp"
#include "oebif/graph.hpp"
#include "oebif/model_functions.hpp"
#include "oebif/network_dynamics.hpp"
#include "oebif/ode_solvers.hpp"

namespace {

using namespace oebif;

struct OutputTarget {
  std::ofstream file;
  bool to_file = false;

  explicit OutputTarget(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw ConfigError("cannot write " + path);
    to_file = true;
  }

  std::ostream& stream() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
};

void print_warnings(const LoadedConfig& loaded) {
  for (const std::string& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
}

double resolve_beta(const LoadedConfig& loaded, const std::optional<double>& cli_beta) {
  double beta = 0.0;
  if (cli_beta) {
    beta = *cli_beta;
  } else if (loaded.beta_given) {
    beta = loaded.model.beta;
  } else {
    throw ConfigError("beta is required: pass --beta or add \"beta\" to the configuration");
  }
  if (!(beta >= 0.0) || !(beta <= 1.0)) throw ConfigError("beta out of range [0,1]");
  return beta;
}

SolverOptions solver_options(const std::string& method, double tol, double step) {
  SolverOptions opts;
  if (method == "adaptive") {
    opts.method = SolverMethod::Adaptive45;
    opts.abs_tol = tol;
    opts.rel_tol = tol;
  } else if (method == "rk4") {
    opts.method = SolverMethod::RK4Fixed;
    opts.step = step;
  } else {
    throw ConfigError("unknown method \"" + method + "\" (expected adaptive or rk4)");
  }
  return opts;
}

RhsFunction planar_rhs(const ModelConfig& cfg) {
  return [cfg](double, const std::vector<double>& y, std::vector<double>& dydt) {
    const FsoeRate rate = rhs_fsoe(cfg, {y[0], y[1]});
    dydt.resize(2);
    dydt[0] = rate.dp;
    dydt[1] = rate.de;
  };
}

// Deterministic uniform draw on [-1, 1) from the raw 64-bit stream, so that
// seeded outputs are identical across standard library implementations.
double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0;
}

int cmd_simulate(const std::string& config_path, std::optional<double> cli_beta, double p0,
                 double e0, double t_end, const std::string& method, double tol, double step,
                 const std::string& out_path) {
  LoadedConfig loaded = load_config(config_path);
  print_warnings(loaded);
  loaded.model.beta = resolve_beta(loaded, cli_beta);
  const Trajectory traj =
      integrate(planar_rhs(loaded.model), {p0, e0}, 0.0, t_end, solver_options(method, tol, step));
  OutputTarget out(out_path);
  out.stream() << "t,p,e\n";
  for (size_t i = 0; i < traj.times.size(); ++i)
    out.stream() << fmt_g17(traj.times[i]) << ',' << fmt_g17(traj.states[i][0]) << ','
                 << fmt_g17(traj.states[i][1]) << '\n';
  return 0;
}

int cmd_equilibria(const std::string& config_path, std::optional<double> cli_beta,
                   const std::string& out_path) {
  LoadedConfig loaded = load_config(config_path);
  print_warnings(loaded);
  loaded.model.beta = resolve_beta(loaded, cli_beta);
  const std::vector<Equilibrium> eqs = equilibria(loaded.model);
  OutputTarget out(out_path);
  out.stream() << "beta,p_star,e_star,trace,det,stability\n";
  for (const Equilibrium& eq : eqs)
    out.stream() << fmt_g17(loaded.model.beta) << ',' << fmt_g17(eq.p_star) << ','
                 << fmt_g17(eq.e_star) << ',' << fmt_g17(eq.jac.trace) << ','
                 << fmt_g17(eq.jac.det) << ',' << to_string(eq.stability) << '\n';
  return 0;
}

int cmd_diagram(const std::string& config_path, double beta_min, double beta_max, int steps,
                bool with_cycles, int jobs, const std::string& prefix) {
  LoadedConfig loaded = load_config(config_path);
  print_warnings(loaded);
  CycleOptions cycles;
  cycles.enabled = with_cycles;
  const BifurcationDiagram diagram =
      sweep_beta(loaded.model, beta_min, beta_max, steps, cycles, jobs);

  const std::string diagram_path = prefix + ".diagram.csv";
  std::ofstream diagram_file(diagram_path);
  if (!diagram_file) throw ConfigError("cannot write " + diagram_path);
  diagram_file << "beta,branch_id,p_star,e_star,trace,det,stability,"
                  "cycle_p_min,cycle_p_max,cycle_period\n";
  size_t cycle_idx = 0;
  for (const BranchRecord& rec : diagram.records) {
    while (cycle_idx < diagram.cycles.size() && diagram.cycles[cycle_idx].beta < rec.beta)
      ++cycle_idx;
    std::string cycle_cols = ",,";
    if (cycle_idx < diagram.cycles.size() && diagram.cycles[cycle_idx].beta == rec.beta &&
        diagram.cycles[cycle_idx].cycle) {
      const CycleData& c = *diagram.cycles[cycle_idx].cycle;
      cycle_cols = fmt_g17(c.p_min) + ',' + fmt_g17(c.p_max) + ',' + fmt_g17(c.period);
    }
    diagram_file << fmt_g17(rec.beta) << ',' << rec.branch_id << ',' << fmt_g17(rec.p_star) << ','
                 << fmt_g17(rec.e_star) << ',' << fmt_g17(rec.trace) << ',' << fmt_g17(rec.det)
                 << ',' << to_string(rec.stability) << ',' << cycle_cols << '\n';
  }

  const std::string points_path = prefix + ".points.csv";
  std::ofstream points_file(points_path);
  if (!points_file) throw ConfigError("cannot write " + points_path);
  points_file << "beta,kind,detection,omega0,coefficient\n";
  for (const BifurcationPoint& pt : diagram.points)
    points_file << fmt_g17(pt.beta) << ',' << to_string(pt.kind) << ',' << to_string(pt.detection)
                << ',' << (pt.omega0 ? fmt_g17(*pt.omega0) : std::string()) << ','
                << (pt.coefficient ? fmt_g17(*pt.coefficient) : std::string()) << '\n';

  for (double beta : diagram.failed_betas)
    std::cerr << "warning: analysis failed at beta = " << fmt_g17(beta) << "\n";
  return 0;
}

int cmd_portrait(const std::string& config_path, std::optional<double> cli_beta, int grid,
                 double t_end, double e_min, double e_max, double tol,
                 const std::string& out_path) {
  if (grid < 1) throw ConfigError("grid must be at least 1");
  if (!(e_min < e_max)) throw ConfigError("e-min must be below e-max");
  LoadedConfig loaded = load_config(config_path);
  print_warnings(loaded);
  loaded.model.beta = resolve_beta(loaded, cli_beta);

  SolverOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  OutputTarget out(out_path);
  out.stream() << "run_id,t,p,e\n";
  const RhsFunction rhs = planar_rhs(loaded.model);
  for (int i = 0; i < grid; ++i) {
    const double p0 =
        grid == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double e0 = grid == 1 ? 0.5 * (e_min + e_max)
                                  : e_min + (e_max - e_min) * static_cast<double>(j) /
                                                static_cast<double>(grid - 1);
      const int run_id = i * grid + j;
      const Trajectory traj = integrate(rhs, {p0, e0}, 0.0, t_end, opts);
      for (size_t k = 0; k < traj.times.size(); ++k)
        out.stream() << run_id << ',' << fmt_g17(traj.times[k]) << ','
                     << fmt_g17(traj.states[k][0]) << ',' << fmt_g17(traj.states[k][1]) << '\n';
    }
  }
  return 0;
}

int cmd_network(const std::string& config_path, const std::string& graph_flag,
                std::optional<double> cli_beta, const std::string& x0_spec, double e0,
                double t_end, double tol, const std::string& out_path) {
  LoadedConfig loaded = load_config(config_path);
  print_warnings(loaded);
  loaded.model.beta = resolve_beta(loaded, cli_beta);

  std::filesystem::path graph_path;
  if (!graph_flag.empty()) {
    graph_path = graph_flag;
  } else if (loaded.graph_path) {
    graph_path = *loaded.graph_path;
  } else {
    throw ConfigError("a graph is required: pass --graph or add \"graph\" to the configuration");
  }
  const Graph graph = load_graph(graph_path);

  NetworkState st0;
  st0.e = e0;
  st0.x.resize(graph.n);
  if (x0_spec.rfind("consensus:", 0) == 0) {
    const double p0 = std::stod(x0_spec.substr(10));
    std::fill(st0.x.begin(), st0.x.end(), p0);
  } else if (x0_spec.rfind("random:", 0) == 0) {
    std::mt19937_64 rng(std::stoull(x0_spec.substr(7)));
    for (double& x : st0.x) x = uniform_pm1(rng);
  } else {
    throw ConfigError("unknown --x0 \"" + x0_spec + "\" (expected consensus:<p> or random:<seed>)");
  }

  SolverOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  const Trajectory traj = simulate_network(loaded.model, graph, st0, t_end, opts);

  OutputTarget out(out_path);
  out.stream() << 't';
  for (int i = 0; i < graph.n; ++i) out.stream() << ",x_" << i;
  out.stream() << ",e,sync_error\n";
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const std::vector<double>& y = traj.states[k];
    out.stream() << fmt_g17(traj.times[k]);
    for (int i = 0; i < graph.n; ++i) out.stream() << ',' << fmt_g17(y[i]);
    const std::vector<double> x(y.begin(), y.end() - 1);
    out.stream() << ',' << fmt_g17(y.back()) << ',' << fmt_g17(sync_error(x)) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify: self-checks of the analytical machinery against independent numerics.

struct CheckRow {
  std::string name;
  std::string status;  // PASS / FAIL / N-A
  std::string detail;
};

constexpr double kFd1Step = 1e-4;
constexpr double kFd2Step = 1e-3;
constexpr double kFd3Step = 1e-2;

double fd_first(const SmoothFunction& f, double x, double h) {
  return (eval(f, x - 2 * h) - 8 * eval(f, x - h) + 8 * eval(f, x + h) - eval(f, x + 2 * h)) /
         (12 * h);
}

double fd_second(const SmoothFunction& f, double x, double h) {
  return (-eval(f, x - 2 * h) + 16 * eval(f, x - h) - 30 * eval(f, x) + 16 * eval(f, x + h) -
          eval(f, x + 2 * h)) /
         (12 * h * h);
}

double fd_third(const SmoothFunction& f, double x, double h) {
  constexpr std::array<double, 9> w = {-7.0 / 240, 3.0 / 10,   -169.0 / 120, 61.0 / 30, 0.0,
                                       -61.0 / 30, 169.0 / 120, -3.0 / 10,   7.0 / 240};
  double sum = 0.0;
  for (int k = -4; k <= 4; ++k) sum += w[k + 4] * eval(f, x + k * h);
  return sum / (h * h * h);
}

double guarded_rel_err(double approx, double exact) {
  return std::abs(approx - exact) / std::max(1.0, std::abs(exact));
}

CheckRow check_derivatives(const ModelConfig& cfg) {
  double worst = 0.0;
  for (const SmoothFunction* f : {&cfg.s, &cfg.r, &cfg.u}) {
    for (int i = 0; i <= 6; ++i) {
      const double x = -0.9 + 0.3 * i;
      const Derivatives d = eval_with_derivatives(*f, x);
      worst = std::max(worst, guarded_rel_err(fd_first(*f, x, kFd1Step), d.f1));
      worst = std::max(worst, guarded_rel_err(fd_second(*f, x, kFd2Step), d.f2));
      worst = std::max(worst, guarded_rel_err(fd_third(*f, x, kFd3Step), d.f3));
    }
  }
  return {"derivative-fd-agreement", worst <= 1e-5 ? "PASS" : "FAIL",
          "worst guarded error " + fmt_g17(worst)};
}

CheckRow check_odd(const ModelConfig& cfg) {
  const auto violations = check_odd_symmetry(cfg, 101);
  if (violations.empty()) return {"odd-symmetry", "PASS", "101 samples"};
  return {"odd-symmetry", "FAIL",
          std::string("first violation in '") + violations.front().function + "' at x = " +
              fmt_g17(violations.front().x)};
}

CheckRow check_invariance(const ModelConfig& cfg) {
  const Graph triangle = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const double worst = check_forward_invariance(cfg, triangle, 0.5, 0.3, 100.0);
  return {"consensus-forward-invariance", worst <= 1e-9 ? "PASS" : "FAIL",
          "max sync error " + fmt_g17(worst)};
}

CheckRow check_odd_field(const ModelConfig& cfg) {
  const Graph triangle = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    NetworkState st;
    st.x = {uniform_pm1(rng), uniform_pm1(rng), uniform_pm1(rng)};
    st.e = 2.0 * uniform_pm1(rng);
    worst = std::max(worst, check_odd_dynamics(cfg, triangle, st));
  }
  return {"odd-vector-field", worst <= 1e-12 ? "PASS" : "FAIL", "max residual " + fmt_g17(worst)};
}

// Bisects a sign change of fn over [0,1] sampled on a fine grid; empty when no
// sign change exists.
std::optional<double> bisect_over_beta(const std::function<double(double)>& fn, double tol) {
  constexpr int kScan = 1000;
  double prev_beta = 0.0;
  double prev_val = fn(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double beta = static_cast<double>(i) / kScan;
    const double val = fn(beta);
    if ((prev_val < 0.0) != (val < 0.0)) {
      double lo = prev_beta, hi = beta, f_lo = prev_val;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = fn(mid);
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_beta = beta;
    prev_val = val;
  }
  return std::nullopt;
}

CheckRow check_zero_eigenvalue(const ModelConfig& cfg, double e_origin) {
  const BetaZeroResult closed = beta_for_zero_eigenvalue(cfg, 0.0, e_origin);
  if (!closed.beta) return {"zero-eigenvalue-location", "N-A", closed.infeasible_reason};
  const auto det_of = [&cfg, e_origin](double beta) {
    ModelConfig at = cfg;
    at.beta = beta;
    return jacobian_fsoe(at, {0.0, e_origin}).det;
  };
  const std::optional<double> numeric = bisect_over_beta(det_of, 1e-12);
  if (!numeric) return {"zero-eigenvalue-location", "FAIL", "no numeric determinant sign change"};
  const double diff = std::abs(*numeric - *closed.beta);
  return {"zero-eigenvalue-location", diff <= 1e-6 ? "PASS" : "FAIL",
          "closed " + fmt_g17(*closed.beta) + " vs numeric " + fmt_g17(*numeric)};
}

CheckRow check_hopf_location(const ModelConfig& cfg, double e_origin) {
  const HopfLocusResult closed = hopf_locus(cfg, 0.0);
  if (!closed.beta_star) return {"hopf-location", "N-A", closed.infeasible_reason};
  const auto trace_of = [&cfg, e_origin](double beta) {
    ModelConfig at = cfg;
    at.beta = beta;
    return jacobian_fsoe(at, {0.0, e_origin}).trace;
  };
  const std::optional<double> numeric = bisect_over_beta(trace_of, 1e-12);
  if (!numeric) return {"hopf-location", "FAIL", "no numeric trace sign change"};
  const double diff = std::abs(*numeric - *closed.beta_star);
  return {"hopf-location", diff <= 1e-6 ? "PASS" : "FAIL",
          "closed " + fmt_g17(*closed.beta_star) + " vs numeric " + fmt_g17(*numeric)};
}

CheckRow check_omega0(const ModelConfig& cfg, double e_origin) {
  const HopfLocusResult closed = hopf_locus(cfg, 0.0);
  if (!closed.beta_star) return {"hopf-frequency", "N-A", closed.infeasible_reason};
  const auto trace_of = [&cfg, e_origin](double beta) {
    ModelConfig at = cfg;
    at.beta = beta;
    return jacobian_fsoe(at, {0.0, e_origin}).trace;
  };
  const std::optional<double> numeric = bisect_over_beta(trace_of, 1e-12);
  if (!numeric) return {"hopf-frequency", "FAIL", "no numeric trace sign change"};
  ModelConfig at = cfg;
  at.beta = *numeric;
  const double det = jacobian_fsoe(at, {0.0, e_origin}).det;
  if (det <= 0.0) return {"hopf-frequency", "FAIL", "determinant not positive at trace zero"};
  const double diff = std::abs(std::sqrt(det) - closed.omega0);
  return {"hopf-frequency", diff <= 1e-8 ? "PASS" : "FAIL",
          "closed " + fmt_g17(closed.omega0) + " vs numeric " + fmt_g17(std::sqrt(det))};
}

CheckRow check_pitchfork_coefficient(const ModelConfig& cfg, double e_origin) {
  const BetaZeroResult closed = beta_for_zero_eigenvalue(cfg, 0.0, e_origin);
  if (!closed.beta) return {"pitchfork-coefficient", "N-A", closed.infeasible_reason};
  PitchforkInfo info;
  try {
    info = pitchfork_coefficient(cfg, *closed.beta, cfg.gamma);
  } catch (const NumericError& err) {
    return {"pitchfork-coefficient", "FAIL", err.what()};
  }
  ModelConfig at = cfg;
  at.beta = *closed.beta;
  const auto g_of = [&at](double x) { return instrumental_g(at, x); };
  constexpr double h = 2e-3;
  constexpr std::array<double, 9> w = {-7.0 / 240, 3.0 / 10,   -169.0 / 120, 61.0 / 30, 0.0,
                                       -61.0 / 30, 169.0 / 120, -3.0 / 10,   7.0 / 240};
  double fd = 0.0;
  for (int k = -4; k <= 4; ++k) fd += w[k + 4] * g_of(k * h);
  fd /= h * h * h;
  const double err = guarded_rel_err(fd, info.coefficient_c);
  if (err > 1e-4)
    return {"pitchfork-coefficient", "FAIL",
            "closed " + fmt_g17(info.coefficient_c) + " vs finite-difference " + fmt_g17(fd)};
  if (info.degenerate) return {"pitchfork-coefficient", "FAIL", "cubic coefficient vanishes"};
  return {"pitchfork-coefficient", "PASS",
          "c = " + fmt_g17(info.coefficient_c) + ", fd agreement " + fmt_g17(err)};
}

CheckRow check_hopf_side(const ModelConfig& cfg) {
  const HopfLocusResult closed = hopf_locus(cfg, 0.0);
  if (!closed.beta_star) return {"hopf-cycle-side", "N-A", closed.infeasible_reason};
  HopfInfo info;
  try {
    info = hopf_coefficient(cfg, *closed.beta_star, cfg.gamma);
  } catch (const NumericError& err) {
    return {"hopf-cycle-side", "FAIL", err.what()};
  }
  if (info.supercritical_side == SupercriticalSide::Undetermined)
    return {"hopf-cycle-side", "N-A", "first Lyapunov quantity has vanishing real part"};
  const double beta = *closed.beta_star;
  const bool below_ok = beta >= 0.01;
  const bool above_ok = beta <= 0.99;
  if (!below_ok || !above_ok)
    return {"hopf-cycle-side", "N-A", "cannot probe both sides within [0,1]"};
  const std::optional<CycleData> below = limit_cycle_amplitude(cfg, beta - 0.01);
  const std::optional<CycleData> above = limit_cycle_amplitude(cfg, beta + 0.01);
  const bool expect_below = info.supercritical_side == SupercriticalSide::BelowBetaStar;
  const bool cycle_matches = expect_below ? (below.has_value() && !above.has_value())
                                          : (above.has_value() && !below.has_value());
  std::string detail = std::string("Re(h21) = ") + fmt_g17(info.h21.real()) + ", cycle below: " +
                       (below ? "yes" : "no") + ", above: " + (above ? "yes" : "no");
  return {"hopf-cycle-side", cycle_matches ? "PASS" : "FAIL", detail};
}

int cmd_verify(const std::string& config_path, std::optional<double> cli_beta) {
  LoadedConfig loaded = load_config(config_path);
  print_warnings(loaded);
  if (cli_beta) {
    if (!(*cli_beta >= 0.0) || !(*cli_beta <= 1.0)) throw ConfigError("beta out of range [0,1]");
    loaded.model.beta = *cli_beta;
  } else if (!loaded.beta_given) {
    loaded.model.beta = 0.5;
  }
  const ModelConfig& cfg = loaded.model;

  std::vector<CheckRow> rows;
  rows.push_back(check_derivatives(cfg));
  rows.push_back(check_odd(cfg));
  rows.push_back(check_invariance(cfg));
  rows.push_back(check_odd_field(cfg));
  const bool origin_ok = cfg.gamma != 0.0;
  const double e_origin = origin_ok ? eval(cfg.u, 0.0) / cfg.gamma - cfg.ebar : 0.0;
  if (origin_ok) {
    rows.push_back(check_zero_eigenvalue(cfg, e_origin));
    rows.push_back(check_hopf_location(cfg, e_origin));
    rows.push_back(check_omega0(cfg, e_origin));
    rows.push_back(check_pitchfork_coefficient(cfg, e_origin));
    rows.push_back(check_hopf_side(cfg));
  } else {
    const std::string reason = "gamma = 0 leaves no reduced equilibrium map";
    for (const char* name : {"zero-eigenvalue-location", "hopf-location", "hopf-frequency",
                             "pitchfork-coefficient", "hopf-cycle-side"})
      rows.push_back({name, "N-A", reason});
  }

  size_t name_width = 0;
  for (const CheckRow& row : rows) name_width = std::max(name_width, row.name.size());
  bool any_fail = false;
  for (const CheckRow& row : rows) {
    std::cout << row.name << std::string(name_width - row.name.size() + 2, ' ') << row.status
              << "  " << row.detail << "\n";
    if (row.status == "FAIL") any_fail = true;
  }
  return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opinion-environment dynamics: simulation and bifurcation analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<double> cli_beta;

  auto* simulate = app.add_subcommand("simulate", "Integrate the planar reduced dynamics");
  double p0 = 0.01, e0 = 0.0, t_end = 100.0, tol = 1e-10, step = 1e-3;
  std::string method = "adaptive";
  simulate->add_option("--config", config_path, "model configuration JSON")->required();
  simulate->add_option("--beta", cli_beta, "trust weight in [0,1]");
  simulate->add_option("--p0", p0, "initial synchronized opinion");
  simulate->add_option("--e0", e0, "initial environment deviation");
  simulate->add_option("--t-end", t_end, "integration horizon");
  simulate->add_option("--method", method, "adaptive | rk4");
  simulate->add_option("--tol", tol, "adaptive tolerance");
  simulate->add_option("--step", step, "rk4 step size");
  simulate->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* equilibria_cmd = app.add_subcommand("equilibria", "Locate and classify equilibria");
  equilibria_cmd->add_option("--config", config_path, "model configuration JSON")->required();
  equilibria_cmd->add_option("--beta", cli_beta, "trust weight in [0,1]");
  equilibria_cmd->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* diagram = app.add_subcommand("diagram", "Sweep beta and emit the bifurcation diagram");
  double beta_min = 0.0, beta_max = 1.0;
  int steps = 201, jobs = 0;
  std::string cycles_flag = "off";
  std::string prefix;
  diagram->add_option("--config", config_path, "model configuration JSON")->required();
  diagram->add_option("--beta-min", beta_min, "sweep start");
  diagram->add_option("--beta-max", beta_max, "sweep end");
  diagram->add_option("--steps", steps, "grid point count");
  diagram->add_option("--cycles", cycles_flag, "on | off: measure limit cycles");
  diagram->add_option("--jobs", jobs, "worker threads (0 = hardware)");
  diagram->add_option("--out", prefix, "output prefix for .diagram.csv and .points.csv")
      ->required();

  auto* portrait = app.add_subcommand("portrait", "Integrate a lattice of initial conditions");
  int grid = 5;
  double e_min = -2.0, e_max = 2.0, portrait_tol = 1e-8, portrait_t_end = 100.0;
  portrait->add_option("--config", config_path, "model configuration JSON")->required();
  portrait->add_option("--beta", cli_beta, "trust weight in [0,1]");
  portrait->add_option("--grid", grid, "lattice points per axis");
  portrait->add_option("--t-end", portrait_t_end, "integration horizon");
  portrait->add_option("--e-min", e_min, "lattice lower environment bound");
  portrait->add_option("--e-max", e_max, "lattice upper environment bound");
  portrait->add_option("--tol", portrait_tol, "adaptive tolerance");
  portrait->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Cross-check closed forms against numerics");
  verify->add_option("--config", config_path, "model configuration JSON")->required();
  verify->add_option("--beta", cli_beta, "trust weight in [0,1]");

  auto* network = app.add_subcommand("network", "Integrate the full network dynamics");
  std::string graph_flag;
  std::string x0_spec = "random:42";
  double net_e0 = 0.0, net_t_end = 100.0, net_tol = 1e-10;
  network->add_option("--config", config_path, "model configuration JSON")->required();
  network->add_option("--graph", graph_flag, "graph JSON (overrides the config key)");
  network->add_option("--beta", cli_beta, "trust weight in [0,1]");
  network->add_option("--x0", x0_spec, "consensus:<p> | random:<seed>");
  network->add_option("--e0", net_e0, "initial environment deviation");
  network->add_option("--t-end", net_t_end, "integration horizon");
  network->add_option("--tol", net_tol, "adaptive tolerance");
  network->add_option("--out", out_path, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(config_path, cli_beta, p0, e0, t_end, method, tol, step, out_path);
    if (equilibria_cmd->parsed()) return cmd_equilibria(config_path, cli_beta, out_path);
    if (diagram->parsed()) {
      if (cycles_flag != "on" && cycles_flag != "off")
        throw ConfigError("--cycles must be on or off");
      return cmd_diagram(config_path, beta_min, beta_max, steps, cycles_flag == "on", jobs,
                         prefix);
    }
    if (portrait->parsed())
      return cmd_portrait(config_path, cli_beta, grid, portrait_t_end, e_min, e_max, portrait_tol,
                          out_path);
    if (verify->parsed()) return cmd_verify(config_path, cli_beta);
    if (network->parsed())
      return cmd_network(config_path, graph_flag, cli_beta, x0_spec, net_e0, net_t_end, net_tol,
                         out_path);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const NumericError& err) {
    std::cerr << "numeric error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
