#include "oebif/bifurcation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "oebif/errors.hpp"
#include "oebif/ode_solvers.hpp"

namespace oebif {

namespace {

constexpr double kSingularTol = 1e-10;
constexpr double kBetaRefineTol = 1e-8;
constexpr double kBranchMatchTol = 0.15;

double origin_environment(const ModelConfig& cfg) {
  if (cfg.gamma == 0.0) throw DivisionByZero("gamma must be nonzero to place the origin");
  return eval(cfg.u, 0.0) / cfg.gamma - cfg.ebar;
}

// Refines a sign change of f on [lo, hi] to width tol in beta.
double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                          double f_lo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_lo < 0.0) == (f_mid < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GammaZeroResult gamma_for_zero_eigenvalue(const ModelConfig& cfg, double p, double e) {
  const double s1 = eval_with_derivatives(cfg.s, p).f1;
  const double r1 = eval_with_derivatives(cfg.r, e).f1;
  const double u1 = eval_with_derivatives(cfg.u, p).f1;
  GammaZeroResult out;
  if (cfg.beta == 0.0) {
    out.infeasible_reason = "beta = 0 makes the numerator vanish";
    return out;
  }
  const double amplification = (1.0 - cfg.beta) * s1;
  if (amplification <= 1.0) {
    out.infeasible_reason = "social feedback is not an amplifier: (1-beta)*s'(p) <= 1";
    return out;
  }
  const double gamma = -u1 * r1 * cfg.beta / (amplification - 1.0);
  if (gamma < 0.0) {
    out.infeasible_reason = "computed gamma is negative";
    return out;
  }
  if (gamma >= 1.0) {
    out.infeasible_reason = "computed gamma is not below 1";
    return out;
  }
  out.gamma = gamma;
  return out;
}

BetaZeroResult beta_for_zero_eigenvalue(const ModelConfig& cfg, double p, double e) {
  const double s1 = eval_with_derivatives(cfg.s, p).f1;
  const double r1 = eval_with_derivatives(cfg.r, e).f1;
  const double u1 = eval_with_derivatives(cfg.u, p).f1;
  BetaZeroResult out;
  const double denom = cfg.gamma * s1 - u1 * r1;
  if (denom == 0.0) {
    out.infeasible_reason = "denominator gamma*s'(p) - u'(p)*r'(e) vanishes";
    return out;
  }
  const double beta = cfg.gamma * (s1 - 1.0) / denom;
  if (beta < 0.0 || beta > 1.0) {
    out.infeasible_reason = "no beta in [0,1] makes the determinant vanish";
    return out;
  }
  if ((1.0 - beta) * s1 <= 1.0) {
    out.infeasible_reason = "social feedback is not an amplifier at the candidate beta";
    return out;
  }
  out.beta = beta;
  return out;
}

DoubleZeroResult beta_double_zero(const ModelConfig& cfg, double p, double e) {
  const double s1 = eval_with_derivatives(cfg.s, p).f1;
  const double r1 = eval_with_derivatives(cfg.r, e).f1;
  const double u1 = eval_with_derivatives(cfg.u, p).f1;
  const double tau = cfg.tau();
  DoubleZeroResult out;
  const double ur = u1 * r1;
  out.delta_beta = ur * (ur - 4.0 * tau * s1 * (s1 - 1.0));
  if (s1 == 0.0) {
    out.infeasible_reason = "s'(p) vanishes";
    return out;
  }
  if (out.delta_beta < 0.0) {
    out.infeasible_reason = "discriminant is negative";
    return out;
  }
  const double root = std::sqrt(out.delta_beta);
  const double base = 1.0 - 1.0 / s1;
  const double scale = 2.0 * tau * s1 * s1;
  out.beta_minus = base + (-ur - root) / scale;
  out.beta_plus = base + (-ur + root) / scale;
  out.beta_minus_feasible = (1.0 - *out.beta_minus) * s1 > 1.0;
  out.beta_plus_feasible = (1.0 - *out.beta_plus) * s1 > 1.0;
  return out;
}

HopfLocusResult hopf_locus(const ModelConfig& cfg, double p) {
  const double s1 = eval_with_derivatives(cfg.s, p).f1;
  HopfLocusResult out;
  if (cfg.gamma <= 0.0) {
    out.infeasible_reason = "gamma must be positive";
    return out;
  }
  if (s1 <= 1.0) {
    out.infeasible_reason = "social feedback is not an amplifier: s'(p) <= 1";
    return out;
  }
  const double beta = 1.0 - (cfg.gamma / cfg.tau() + 1.0) / s1;
  if (beta < 0.0 || beta > 1.0) {
    out.infeasible_reason = "no beta in [0,1] puts the trace at zero";
    return out;
  }
  ModelConfig at_locus = cfg;
  at_locus.beta = beta;
  const double e_origin = origin_environment(at_locus);
  const Jacobian2 jac = jacobian_fsoe(at_locus, {p, e_origin});
  if (jac.det <= 0.0) {
    out.infeasible_reason = "determinant is not positive where the trace vanishes";
    return out;
  }
  out.beta_star = beta;
  out.omega0 = std::sqrt(jac.det);
  return out;
}

SingularityConditions singularity_conditions(const ModelConfig& cfg, double p, double e) {
  SingularityConditions out;
  out.zero_eigenvalue = gamma_for_zero_eigenvalue(cfg, p, e);
  out.double_zero = beta_double_zero(cfg, p, e);
  out.hopf = hopf_locus(cfg, p);
  const double s1 = eval_with_derivatives(cfg.s, p).f1;
  const double gamma_hopf = cfg.tau() * ((1.0 - cfg.beta) * s1 - 1.0);
  if (gamma_hopf > 0.0 && gamma_hopf <= 1.0) out.gamma_hopf = gamma_hopf;
  return out;
}

PitchforkInfo pitchfork_coefficient(const ModelConfig& cfg, double beta_star, double gamma_star) {
  ModelConfig at = cfg;
  at.beta = beta_star;
  at.gamma = gamma_star;
  const double e_origin = origin_environment(at);
  const Jacobian2 jac = jacobian_fsoe(at, {0.0, e_origin});
  if (std::abs(jac.det) > kSingularTol)
    throw NotSingular("origin Jacobian determinant is " + std::to_string(jac.det) +
                      ", not zero, at the requested point");

  const Derivatives ds = eval_with_derivatives(at.s, 0.0);
  const Derivatives dr = eval_with_derivatives(at.r, e_origin);
  const Derivatives du = eval_with_derivatives(at.u, 0.0);

  PitchforkInfo info;
  info.beta_star = beta_star;
  info.gamma_star = gamma_star;
  info.eigenvector_v = {1.0, du.f1 / gamma_star};
  const double u1_over_gamma = du.f1 / gamma_star;
  info.coefficient_c = (1.0 - beta_star) * ds.f3 +
                       beta_star * dr.f3 * u1_over_gamma * u1_over_gamma * u1_over_gamma +
                       beta_star * dr.f1 / gamma_star * du.f3;
  info.coefficient_c_tau =
      (1.0 - beta_star) * ds.f3 / at.tau_x +
      beta_star * dr.f3 * u1_over_gamma * u1_over_gamma * u1_over_gamma / at.tau_x +
      beta_star * dr.f1 * du.f3 / (at.tau_e * gamma_star);
  info.degenerate = std::abs(info.coefficient_c_tau) <= kSingularTol;
  return info;
}

const char* to_string(SupercriticalSide side) {
  switch (side) {
    case SupercriticalSide::BelowBetaStar:
      return "BelowBetaStar";
    case SupercriticalSide::AboveBetaStar:
      return "AboveBetaStar";
    case SupercriticalSide::Undetermined:
      return "Undetermined";
  }
  return "Unknown";
}

HopfInfo hopf_coefficient(const ModelConfig& cfg, double beta_star, double gamma_star) {
  ModelConfig at = cfg;
  at.beta = beta_star;
  at.gamma = gamma_star;
  const double e_origin = origin_environment(at);
  const Jacobian2 jac = jacobian_fsoe(at, {0.0, e_origin});
  if (std::abs(jac.trace) > kSingularTol)
    throw NotHopfPoint("origin Jacobian trace is " + std::to_string(jac.trace) +
                       ", not zero, at the requested point");
  if (jac.det <= 0.0)
    throw NotHopfPoint("origin Jacobian determinant is not positive at the requested point");

  const Derivatives ds = eval_with_derivatives(at.s, 0.0);
  const Derivatives dr = eval_with_derivatives(at.r, e_origin);
  const Derivatives du = eval_with_derivatives(at.u, 0.0);

  HopfInfo info;
  info.beta_star = beta_star;
  info.gamma_star = gamma_star;
  info.omega0 = std::sqrt(jac.det);
  info.a = gamma_star / at.tau_x;

  const std::complex<double> i_omega{0.0, info.omega0};
  const std::complex<double> plus = i_omega + info.a;
  const std::complex<double> minus = i_omega - info.a;
  const double br = beta_star * dr.f1;
  const double br3 = br * br * br;
  const double tx = at.tau_x;
  info.h21 = du.f1 * ((1.0 - beta_star) * ds.f3 * br3 / (tx * tx * tx) +
                      beta_star * dr.f3 * plus * minus * minus) -
             du.f3 * plus * br3 / (tx * tx);
  info.c1 = info.h21 / 2.0;
  info.supercritical_side = std::abs(info.h21.real()) > kSingularTol
                                ? SupercriticalSide::BelowBetaStar
                                : SupercriticalSide::Undetermined;
  return info;
}

std::optional<CycleData> limit_cycle_amplitude(const ModelConfig& cfg, double beta,
                                               double t_transient, double t_measure,
                                               double tol_cycle) {
  ModelConfig at = cfg;
  at.beta = beta;
  const double e_origin = origin_environment(at);

  auto rhs = [&at](double, const std::vector<double>& y, std::vector<double>& dydt) {
    const FsoeRate rate = rhs_fsoe(at, {y[0], y[1]});
    dydt.resize(2);
    dydt[0] = rate.dp;
    dydt[1] = rate.de;
  };

  SolverOptions settle;
  settle.abs_tol = 1e-10;
  settle.rel_tol = 1e-10;
  const Trajectory transient = integrate(rhs, {0.01, 0.0}, 0.0, t_transient, settle);

  SolverOptions measure = settle;
  measure.event_plane = EventPlane{1, e_origin, CrossingDirection::Upward};
  const Trajectory orbit =
      integrate(rhs, transient.states.back(), t_transient, t_transient + t_measure, measure);

  double p_min = orbit.states.front()[0];
  double p_max = p_min;
  for (const auto& y : orbit.states) {
    p_min = std::min(p_min, y[0]);
    p_max = std::max(p_max, y[0]);
  }
  if (p_max - p_min < tol_cycle) return std::nullopt;
  if (orbit.events.size() < 3) return std::nullopt;

  std::vector<double> periods;
  for (size_t i = 1; i < orbit.events.size(); ++i)
    periods.push_back(orbit.events[i].t - orbit.events[i - 1].t);
  double mean = 0.0;
  for (double T : periods) mean += T;
  mean /= static_cast<double>(periods.size());
  for (double T : periods)
    if (std::abs(T - mean) > 0.01 * mean) return std::nullopt;

  return CycleData{p_min, p_max, mean};
}

const char* to_string(BifurcationKind kind) {
  switch (kind) {
    case BifurcationKind::Pitchfork:
      return "Pitchfork";
    case BifurcationKind::Hopf:
      return "Hopf";
    case BifurcationKind::Fold:
      return "Fold";
  }
  return "Unknown";
}

const char* to_string(Detection detection) {
  switch (detection) {
    case Detection::ClosedForm:
      return "ClosedForm";
    case Detection::Numeric:
      return "Numeric";
  }
  return "Unknown";
}

namespace {

struct GridResult {
  std::vector<Equilibrium> eqs;
  std::optional<CycleData> cycle;
  bool failed = false;
};

GridResult analyze_one(const ModelConfig& base, double beta, const CycleOptions& cycles) {
  ModelConfig at = base;
  at.beta = beta;
  GridResult res;
  try {
    res.eqs = equilibria(at);
    if (cycles.enabled)
      res.cycle =
          limit_cycle_amplitude(base, beta, cycles.t_transient, cycles.t_measure, cycles.tol_cycle);
  } catch (const NumericError&) {
    res.failed = true;
  }
  return res;
}

// Greedy nearest-distance continuation of branch labels across one beta step.
void assign_branches(const std::vector<Equilibrium>& eqs, std::vector<double>& branch_positions,
                     std::vector<int>& out_ids, int& next_id) {
  const size_t m = eqs.size();
  out_ids.assign(m, -1);
  struct Candidate {
    double dist;
    int branch;
    size_t eq;
  };
  std::vector<Candidate> candidates;
  for (int b = 0; b < static_cast<int>(branch_positions.size()); ++b)
    for (size_t k = 0; k < m; ++k) {
      const double d = std::abs(eqs[k].p_star - branch_positions[b]);
      if (d <= kBranchMatchTol) candidates.push_back({d, b, k});
    }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.branch != b.branch) return a.branch < b.branch;
    return a.eq < b.eq;
  });
  std::vector<bool> branch_used(branch_positions.size(), false);
  for (const Candidate& c : candidates) {
    if (branch_used[c.branch] || out_ids[c.eq] >= 0) continue;
    branch_used[c.branch] = true;
    out_ids[c.eq] = c.branch;
    branch_positions[c.branch] = eqs[c.eq].p_star;
  }
  for (size_t k = 0; k < m; ++k) {
    if (out_ids[k] >= 0) continue;
    out_ids[k] = next_id++;
    branch_positions.push_back(eqs[k].p_star);
  }
}

}  // namespace

BifurcationDiagram sweep_beta(const ModelConfig& base, double beta_min, double beta_max, int steps,
                              const CycleOptions& cycles, int jobs) {
  if (!(beta_min >= 0.0) || !(beta_max <= 1.0) || !(beta_min < beta_max))
    throw ConfigError("sweep range must satisfy 0 <= beta_min < beta_max <= 1");
  if (steps < 2) throw ConfigError("sweep needs at least 2 grid points");

  BifurcationDiagram diagram;
  diagram.beta_grid.resize(steps);
  for (int i = 0; i < steps; ++i)
    diagram.beta_grid[i] =
        beta_min + static_cast<double>(i) * (beta_max - beta_min) / static_cast<double>(steps - 1);

  std::vector<GridResult> results(steps);
  int workers = jobs;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, steps);

  if (workers == 1) {
    for (int i = 0; i < steps; ++i)
      results[i] = analyze_one(base, diagram.beta_grid[i], cycles);
  } else {
    std::atomic<int> next{0};
    auto run = [&]() {
      for (int i = next.fetch_add(1); i < steps; i = next.fetch_add(1))
        results[i] = analyze_one(base, diagram.beta_grid[i], cycles);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  for (int i = 0; i < steps; ++i)
    if (results[i].failed) diagram.failed_betas.push_back(diagram.beta_grid[i]);

  std::vector<double> branch_positions;
  std::vector<int> ids;
  int next_id = 0;
  for (int i = 0; i < steps; ++i) {
    if (results[i].failed) continue;
    assign_branches(results[i].eqs, branch_positions, ids, next_id);
    std::vector<size_t> order(results[i].eqs.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&ids](size_t a, size_t b) { return ids[a] < ids[b]; });
    for (size_t k : order) {
      const Equilibrium& eq = results[i].eqs[k];
      diagram.records.push_back({diagram.beta_grid[i], ids[k], eq.p_star, eq.e_star, eq.jac.trace,
                                 eq.jac.det, eq.stability});
    }
    if (cycles.enabled) diagram.cycles.push_back({diagram.beta_grid[i], results[i].cycle});
  }

  bool origin_ok = true;
  double e_origin = 0.0;
  try {
    e_origin = origin_environment(base);
  } catch (const NumericError&) {
    origin_ok = false;
  }

  if (origin_ok) {
    const auto origin_det = [&base, e_origin](double beta) {
      ModelConfig at = base;
      at.beta = beta;
      return jacobian_fsoe(at, {0.0, e_origin}).det;
    };
    const auto origin_trace = [&base, e_origin](double beta) {
      ModelConfig at = base;
      at.beta = beta;
      return jacobian_fsoe(at, {0.0, e_origin}).trace;
    };
    const auto root_count = [&base](double beta) {
      ModelConfig at = base;
      at.beta = beta;
      return static_cast<int>(find_fixed_points(at).size());
    };

    for (int i = 0; i + 1 < steps; ++i) {
      if (results[i].failed || results[i + 1].failed) continue;
      const double lo = diagram.beta_grid[i];
      const double hi = diagram.beta_grid[i + 1];
      const double det_lo = origin_det(lo);
      const double det_hi = origin_det(hi);
      const bool det_flips = (det_lo < 0.0) != (det_hi < 0.0);

      if (det_flips) {
        const double beta_hat = bisect_sign_change(origin_det, lo, hi, det_lo, kBetaRefineTol);
        diagram.points.push_back(
            {beta_hat, BifurcationKind::Pitchfork, Detection::Numeric, std::nullopt, std::nullopt});
      }

      const double tr_lo = origin_trace(lo);
      const double tr_hi = origin_trace(hi);
      if ((tr_lo < 0.0) != (tr_hi < 0.0)) {
        const double beta_hat = bisect_sign_change(origin_trace, lo, hi, tr_lo, kBetaRefineTol);
        if (origin_det(beta_hat) > 0.0)
          diagram.points.push_back({beta_hat, BifurcationKind::Hopf, Detection::Numeric,
                                    std::sqrt(origin_det(beta_hat)), std::nullopt});
      }

      const int count_lo = static_cast<int>(results[i].eqs.size());
      const int count_hi = static_cast<int>(results[i + 1].eqs.size());
      if (count_lo != count_hi && !det_flips) {
        double a = lo, b = hi;
        while (b - a > kBetaRefineTol) {
          const double mid = 0.5 * (a + b);
          if (root_count(mid) == count_lo)
            a = mid;
          else
            b = mid;
        }
        const double beta_hat = 0.5 * (a + b);
        const int multiplicity = std::abs(count_hi - count_lo) / 2;
        for (int k = 0; k < multiplicity; ++k)
          diagram.points.push_back(
              {beta_hat, BifurcationKind::Fold, Detection::Numeric, std::nullopt, std::nullopt});
      }
    }

    const BetaZeroResult pitch = beta_for_zero_eigenvalue(base, 0.0, e_origin);
    if (pitch.beta && *pitch.beta >= beta_min && *pitch.beta <= beta_max) {
      BifurcationPoint point{*pitch.beta, BifurcationKind::Pitchfork, Detection::ClosedForm,
                             std::nullopt, std::nullopt};
      try {
        point.coefficient = pitchfork_coefficient(base, *pitch.beta, base.gamma).coefficient_c;
      } catch (const NumericError&) {
      }
      diagram.points.push_back(point);
    }

    const HopfLocusResult hopf = hopf_locus(base, 0.0);
    if (hopf.beta_star && *hopf.beta_star >= beta_min && *hopf.beta_star <= beta_max) {
      BifurcationPoint point{*hopf.beta_star, BifurcationKind::Hopf, Detection::ClosedForm,
                             hopf.omega0, std::nullopt};
      try {
        point.coefficient = hopf_coefficient(base, *hopf.beta_star, base.gamma).h21.real();
      } catch (const NumericError&) {
      }
      diagram.points.push_back(point);
    }
  }

  std::sort(diagram.points.begin(), diagram.points.end(),
            [](const BifurcationPoint& a, const BifurcationPoint& b) {
              if (a.beta != b.beta) return a.beta < b.beta;
              if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
              return static_cast<int>(a.detection) < static_cast<int>(b.detection);
            });
  return diagram;
}

}  // namespace oebif
