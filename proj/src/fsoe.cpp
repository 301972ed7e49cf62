#include "oebif/fsoe.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "oebif/errors.hpp"

namespace oebif {

namespace {

constexpr double kClassifyTol = 1e-12;
constexpr double kTangencyProbe = 1e-6;
constexpr double kDedupTol = 1e-8;

// Golden-section minimization of |f| on [lo, hi].
double minimize_abs(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
  while (b - a > 1e-14) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = std::abs(f(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = std::abs(f(x2));
    }
  }
  return 0.5 * (a + b);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                   double tol) {
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol) return mid;
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

FsoeRate rhs_fsoe(const ModelConfig& cfg, const FsoeState& state) {
  const double sp = eval(cfg.s, state.p);
  const double re = eval(cfg.r, state.e);
  const double up = eval(cfg.u, state.p);
  return {(-state.p + cfg.beta * re + (1.0 - cfg.beta) * sp) / cfg.tau_x,
          (-cfg.gamma * state.e + up - cfg.gamma * cfg.ebar) / cfg.tau_e};
}

double instrumental_g(const ModelConfig& cfg, double x) {
  if (cfg.gamma == 0.0) throw DivisionByZero("gamma must be nonzero to reduce the environment");
  const double e_star = eval(cfg.u, x) / cfg.gamma - cfg.ebar;
  return cfg.beta * eval(cfg.r, e_star) + (1.0 - cfg.beta) * eval(cfg.s, x);
}

std::vector<double> find_fixed_points(const ModelConfig& cfg, int grid_n, double tol) {
  if (grid_n < 101) throw ConfigError("fixed-point grid needs at least 101 points");
  const auto h = [&cfg](double x) { return instrumental_g(cfg, x) - x; };

  std::vector<double> xs(grid_n), hs(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    xs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    hs[i] = h(xs[i]);
  }

  std::vector<double> roots;
  for (int i = 0; i + 1 < grid_n; ++i) {
    if (hs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if ((hs[i] < 0.0) != (hs[i + 1] < 0.0))
      roots.push_back(bisect_root(h, xs[i], xs[i + 1], hs[i], tol));
  }
  if (hs[grid_n - 1] == 0.0) roots.push_back(xs[grid_n - 1]);

  // Tangency probe: a grid-local minimum of |h| that dips below the probe
  // threshold with no sign change in either adjacent cell may hide a grazing
  // root (or a just-split pair).
  for (int i = 1; i + 1 < grid_n; ++i) {
    if (std::abs(hs[i]) >= kTangencyProbe) continue;
    if (std::abs(hs[i]) > std::abs(hs[i - 1]) || std::abs(hs[i]) > std::abs(hs[i + 1])) continue;
    if ((hs[i - 1] < 0.0) != (hs[i] < 0.0) || (hs[i] < 0.0) != (hs[i + 1] < 0.0)) continue;
    if (hs[i] == 0.0) continue;
    const double x_min = minimize_abs(h, xs[i - 1], xs[i + 1]);
    const double h_min = h(x_min);
    if (std::abs(h_min) <= tol) {
      roots.push_back(x_min);
    } else if ((h_min < 0.0) != (hs[i - 1] < 0.0)) {
      roots.push_back(bisect_root(h, xs[i - 1], x_min, hs[i - 1], tol));
      roots.push_back(bisect_root(h, x_min, xs[i + 1], h_min, tol));
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double x : roots)
    if (unique.empty() || x - unique.back() > kDedupTol) unique.push_back(x);
  return unique;
}

Jacobian2 jacobian_fsoe(const ModelConfig& cfg, const FsoeState& state) {
  const double s1 = eval_with_derivatives(cfg.s, state.p).f1;
  const double r1 = eval_with_derivatives(cfg.r, state.e).f1;
  const double u1 = eval_with_derivatives(cfg.u, state.p).f1;
  Jacobian2 jac;
  jac.a11 = ((1.0 - cfg.beta) * s1 - 1.0) / cfg.tau_x;
  jac.a12 = cfg.beta * r1 / cfg.tau_x;
  jac.a21 = u1 / cfg.tau_e;
  jac.a22 = -cfg.gamma / cfg.tau_e;
  jac.trace = jac.a11 + jac.a22;
  jac.det = jac.a11 * jac.a22 - jac.a12 * jac.a21;
  jac.discriminant = jac.trace * jac.trace - 4.0 * jac.det;
  return jac;
}

std::pair<std::complex<double>, std::complex<double>> eigenvalues_2x2(const Jacobian2& jac) {
  const double tr = jac.trace;
  const double disc = jac.discriminant;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    const double lam1 = 0.5 * (tr + root);
    const double lam2 = 0.5 * (tr - root);
    return {{lam1, 0.0}, {lam2, 0.0}};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {{0.5 * tr, im}, {0.5 * tr, -im}};
}

Stability classify_stability(const Jacobian2& jac) {
  const double tr = jac.trace;
  const double det = jac.det;
  if (std::abs(det) <= kClassifyTol) return Stability::Degenerate;
  if (det < 0.0) return Stability::Saddle;
  if (std::abs(tr) <= kClassifyTol) return Stability::Center;
  const bool stable = tr < 0.0;
  const bool focus = jac.discriminant < 0.0;
  if (stable) return focus ? Stability::StableFocus : Stability::StableNode;
  return focus ? Stability::UnstableFocus : Stability::UnstableNode;
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::StableNode:
      return "StableNode";
    case Stability::StableFocus:
      return "StableFocus";
    case Stability::UnstableNode:
      return "UnstableNode";
    case Stability::UnstableFocus:
      return "UnstableFocus";
    case Stability::Saddle:
      return "Saddle";
    case Stability::Center:
      return "Center";
    case Stability::Degenerate:
      return "Degenerate";
  }
  return "Unknown";
}

std::vector<Equilibrium> equilibria(const ModelConfig& cfg) {
  std::vector<Equilibrium> out;
  for (double p : find_fixed_points(cfg)) {
    Equilibrium eq;
    eq.p_star = p;
    eq.e_star = eval(cfg.u, p) / cfg.gamma - cfg.ebar;
    eq.jac = jacobian_fsoe(cfg, {p, eq.e_star});
    eq.stability = classify_stability(eq.jac);
    out.push_back(eq);
  }
  return out;
}

}  // namespace oebif
