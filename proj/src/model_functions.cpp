#include "oebif/model_functions.hpp"

#include <cmath>
#include <cstdio>

#include "oebif/errors.hpp"

namespace oebif {

namespace {

constexpr double kOddTolerance = 1e-10;

template <typename... Args>
std::string fmt(const char* format, Args... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

}  // namespace

Derivatives eval_with_derivatives(const SmoothFunction& f, double x) {
  switch (f.kind) {
    case FunctionKind::TanhGain: {
      const double k = f.gain_or_slope;
      const double t = std::tanh(k * x);
      const double sech2 = 1.0 - t * t;
      return {t, k * sech2, -2.0 * k * k * t * sech2,
              -2.0 * k * k * k * sech2 * (1.0 - 3.0 * t * t)};
    }
    case FunctionKind::Affine:
      return {f.gain_or_slope * x + f.offset, f.gain_or_slope, 0.0, 0.0};
  }
  throw Error("unknown function kind");
}

double eval(const SmoothFunction& f, double x) { return eval_with_derivatives(f, x).f0; }

std::vector<OddSymmetryViolation> check_odd_symmetry(const ModelConfig& cfg, int sample_count) {
  if (sample_count < 2) throw ConfigError("check_odd_symmetry needs at least 2 samples");
  std::vector<OddSymmetryViolation> violations;
  const double u_target = 2.0 * cfg.gamma * cfg.ebar;
  for (int i = 0; i < sample_count; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / (sample_count - 1);
    const double s_res = std::abs(eval(cfg.s, -x) + eval(cfg.s, x));
    const double r_res = std::abs(eval(cfg.r, -x) + eval(cfg.r, x));
    const double u_res = std::abs(eval(cfg.u, -x) + eval(cfg.u, x) - u_target);
    if (s_res > kOddTolerance) violations.push_back({'s', x, s_res});
    if (r_res > kOddTolerance) violations.push_back({'r', x, r_res});
    if (u_res > kOddTolerance) violations.push_back({'u', x, u_res});
  }
  return violations;
}

ValidationReport validate_config(const ModelConfig& cfg) {
  ValidationReport report;
  auto require_finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) {
      report.hard_errors.push_back(std::string(name) + " must be finite");
      return false;
    }
    return true;
  };
  for (const auto* f : {&cfg.s, &cfg.r, &cfg.u}) {
    require_finite(f->gain_or_slope, "function gain/slope");
    require_finite(f->offset, "function offset");
  }
  if (require_finite(cfg.beta, "beta") && (cfg.beta < 0.0 || cfg.beta > 1.0))
    report.hard_errors.push_back("beta out of range [0,1]");
  if (require_finite(cfg.gamma, "gamma") && (cfg.gamma < 0.0 || cfg.gamma > 1.0))
    report.hard_errors.push_back("gamma out of range [0,1]");
  if (require_finite(cfg.ebar, "ebar") && cfg.ebar < 0.0)
    report.hard_errors.push_back("ebar must be nonnegative");
  if (require_finite(cfg.tau_x, "tau_x") && cfg.tau_x <= 0.0)
    report.hard_errors.push_back("tau_x must be positive");
  if (require_finite(cfg.tau_e, "tau_e") && cfg.tau_e <= 0.0)
    report.hard_errors.push_back("tau_e must be positive");
  if (!report.hard_errors.empty()) return report;

  const double u_min = eval(cfg.u, -1.0);
  const double u_max = eval(cfg.u, 1.0);
  if (u_min <= 0.0)
    report.warnings.push_back(fmt("threshold assumption: u(-1) = %g is not positive", u_min));
  if (u_max <= u_min)
    report.warnings.push_back(
        fmt("threshold assumption: u(-1) = %g >= u(1) = %g (u is not increasing)", u_min, u_max));
  if (cfg.gamma > 0.0) {
    const double lo = u_min / cfg.gamma;
    const double hi = u_max / cfg.gamma;
    if (cfg.ebar < std::min(lo, hi) || cfg.ebar > std::max(lo, hi))
      report.warnings.push_back(
          fmt("threshold assumption: ebar outside [u(-1)/gamma, u(1)/gamma] = [%g, %g]", lo, hi));
  }
  return report;
}

}  // namespace oebif
