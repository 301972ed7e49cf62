#include "oebif/ode_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oebif/errors.hpp"

namespace oebif {

namespace {

// Dormand-Prince 4(5) tableau.
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = 5179.0 / 57600, kE3 = 7571.0 / 16695, kE4 = 393.0 / 640,
                 kE5 = -92097.0 / 339200, kE6 = 187.0 / 2100, kE7 = 1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
constexpr double kEventTimeTol = 1e-10;

bool all_finite(const std::vector<double>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

struct Workspace {
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, y_low;

  explicit Workspace(size_t n)
      : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_low(n) {}
};

void rk4_step(const RhsFunction& rhs, double t, const std::vector<double>& y, double h,
              std::vector<double>& out, Workspace& w) {
  const size_t n = y.size();
  rhs(t, y, w.k1);
  for (size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
  rhs(t + 0.5 * h, w.tmp, w.k2);
  for (size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
  rhs(t + 0.5 * h, w.tmp, w.k3);
  for (size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * w.k3[i];
  rhs(t + h, w.tmp, w.k4);
  out.resize(n);
  for (size_t i = 0; i < n; ++i)
    out[i] = y[i] + h / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

// Fifth-order Dormand-Prince step; returns the weighted error norm of the
// embedded fourth-order difference.
double dopri_step(const RhsFunction& rhs, double t, const std::vector<double>& y, double h,
                  double abs_tol, double rel_tol, std::vector<double>& out, Workspace& w) {
  const size_t n = y.size();
  rhs(t, y, w.k1);
  for (size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * kA21 * w.k1[i];
  rhs(t + kC2 * h, w.tmp, w.k2);
  for (size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * (kA31 * w.k1[i] + kA32 * w.k2[i]);
  rhs(t + kC3 * h, w.tmp, w.k3);
  for (size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (kA41 * w.k1[i] + kA42 * w.k2[i] + kA43 * w.k3[i]);
  rhs(t + kC4 * h, w.tmp, w.k4);
  for (size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (kA51 * w.k1[i] + kA52 * w.k2[i] + kA53 * w.k3[i] + kA54 * w.k4[i]);
  rhs(t + kC5 * h, w.tmp, w.k5);
  for (size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (kA61 * w.k1[i] + kA62 * w.k2[i] + kA63 * w.k3[i] + kA64 * w.k4[i] +
                           kA65 * w.k5[i]);
  rhs(t + h, w.tmp, w.k6);
  out.resize(n);
  for (size_t i = 0; i < n; ++i)
    out[i] = y[i] +
             h * (kB1 * w.k1[i] + kB3 * w.k3[i] + kB4 * w.k4[i] + kB5 * w.k5[i] + kB6 * w.k6[i]);
  rhs(t + h, out, w.k7);
  for (size_t i = 0; i < n; ++i)
    w.y_low[i] = y[i] + h * (kE1 * w.k1[i] + kE3 * w.k3[i] + kE4 * w.k4[i] + kE5 * w.k5[i] +
                             kE6 * w.k6[i] + kE7 * w.k7[i]);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out[i]));
    const double q = (out[i] - w.y_low[i]) / scale;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

bool crosses(double before, double after, double threshold, CrossingDirection dir) {
  switch (dir) {
    case CrossingDirection::Upward:
      return before < threshold && after >= threshold;
    case CrossingDirection::Downward:
      return before > threshold && after <= threshold;
    case CrossingDirection::Any:
      return (before < threshold && after >= threshold) ||
             (before > threshold && after <= threshold);
  }
  return false;
}

// Locates the crossing inside an accepted step [t, t+h] by bisection on a
// re-integration of the step prefix with a single classical RK4 step.
Event locate_event(const RhsFunction& rhs, double t, const std::vector<double>& y, double h,
                   const EventPlane& plane, Workspace& w) {
  const double before = y[plane.state_index];
  const bool rising = before < plane.threshold;
  double lo = 0.0, hi = 1.0;
  std::vector<double> probe;
  while ((hi - lo) * h > kEventTimeTol) {
    const double mid = 0.5 * (lo + hi);
    rk4_step(rhs, t, y, mid * h, probe, w);
    const double value = probe[plane.state_index];
    const bool crossed = rising ? value >= plane.threshold : value <= plane.threshold;
    if (crossed)
      hi = mid;
    else
      lo = mid;
  }
  rk4_step(rhs, t, y, hi * h, probe, w);
  return {t + hi * h, probe};
}

void check_options(const SolverOptions& opts, size_t dim) {
  if (opts.max_steps <= 0) throw ConfigError("max_steps must be positive");
  if (opts.method == SolverMethod::RK4Fixed) {
    if (!(opts.step > 0.0)) throw ConfigError("step must be positive");
  } else {
    if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0))
      throw ConfigError("tolerances must be positive");
  }
  if (opts.event_plane &&
      (opts.event_plane->state_index < 0 ||
       opts.event_plane->state_index >= static_cast<int>(dim)))
    throw ConfigError("event plane state index out of range");
}

}  // namespace

Trajectory integrate(const RhsFunction& rhs, const std::vector<double>& y0, double t0, double t1,
                     const SolverOptions& opts) {
  if (!(t1 > t0)) throw ConfigError("integration interval must have t1 > t0");
  if (y0.empty()) throw ConfigError("empty initial state");
  check_options(opts, y0.size());
  if (!all_finite(y0)) throw NonFiniteState("initial state is not finite");

  const double span = t1 - t0;
  Workspace w(y0.size());
  Trajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(y0);

  std::vector<double> y = y0;
  std::vector<double> y_next;

  auto accept = [&](double t_prev, double h, const std::vector<double>& next) {
    if (!all_finite(next))
      throw NonFiniteState("state became non-finite at t = " + std::to_string(t_prev + h));
    if (opts.event_plane &&
        crosses(y[opts.event_plane->state_index], next[opts.event_plane->state_index],
                opts.event_plane->threshold, opts.event_plane->direction))
      traj.events.push_back(locate_event(rhs, t_prev, y, h, *opts.event_plane, w));
    y = next;
  };

  if (opts.method == SolverMethod::RK4Fixed) {
    const double nreal = std::ceil(span / opts.step);
    if (nreal > static_cast<double>(opts.max_steps))
      throw MaxStepsExceeded("fixed-step integration needs more than " +
                             std::to_string(opts.max_steps) + " steps");
    const long n = static_cast<long>(nreal);
    for (long i = 0; i < n; ++i) {
      const double t = t0 + static_cast<double>(i) * opts.step;
      const double t_next = (i + 1 == n) ? t1 : t0 + static_cast<double>(i + 1) * opts.step;
      const double h = t_next - t;
      rk4_step(rhs, t, y, h, y_next, w);
      accept(t, h, y_next);
      traj.times.push_back(t_next);
      traj.states.push_back(y);
    }
    return traj;
  }

  double t = t0;
  double h = span / 100.0;
  long attempts = 0;
  while (t < t1) {
    if (++attempts > opts.max_steps)
      throw MaxStepsExceeded("adaptive integration exceeded " + std::to_string(opts.max_steps) +
                             " step attempts");
    if (h < 1e-14 * span)
      throw StepUnderflow("adaptive step size underflow at t = " + std::to_string(t));
    const bool final_step = t + h >= t1;
    if (final_step) h = t1 - t;
    const double err = dopri_step(rhs, t, y, h, opts.abs_tol, opts.rel_tol, y_next, w);
    if (std::isfinite(err) && err <= 1.0) {
      const double t_next = final_step ? t1 : t + h;
      accept(t, h, y_next);
      traj.times.push_back(t_next);
      traj.states.push_back(y);
      t = t_next;
      const double factor =
          err == 0.0 ? kMaxFactor
                     : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
      h *= factor;
    } else {
      const double factor =
          std::isfinite(err)
              ? std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, 1.0)
              : kMinFactor;
      h *= factor;
    }
  }
  return traj;
}

}  // namespace oebif
