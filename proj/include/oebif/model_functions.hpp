#pragma once

#include <string>
#include <vector>

namespace oebif {

enum class FunctionKind { TanhGain, Affine };

// Scalar map with closed-form derivatives through third order.
// TanhGain(k): x -> tanh(k*x).  Affine(m, b): x -> m*x + b.
struct SmoothFunction {
  FunctionKind kind = FunctionKind::Affine;
  double gain_or_slope = 0.0;
  double offset = 0.0;  // Affine only

  [[nodiscard]] static SmoothFunction tanh_gain(double gain) {
    return {FunctionKind::TanhGain, gain, 0.0};
  }
  [[nodiscard]] static SmoothFunction affine(double slope, double offset = 0.0) {
    return {FunctionKind::Affine, slope, offset};
  }
};

struct Derivatives {
  double f0 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
};

[[nodiscard]] Derivatives eval_with_derivatives(const SmoothFunction& f, double x);
[[nodiscard]] double eval(const SmoothFunction& f, double x);

struct ModelConfig {
  SmoothFunction s;  // signal: opinion -> perceived behavior
  SmoothFunction r;  // environment response: deviation -> opinion forcing
  SmoothFunction u;  // control: synchronized opinion -> environment forcing
  double beta = 0.0;   // trust weight of the environmental signal, in [0,1]
  double gamma = 0.0;  // environment self-dynamics rate, in [0,1]
  double ebar = 0.0;   // environment threshold, >= 0
  double tau_x = 1.0;  // opinion time constant, > 0
  double tau_e = 1.0;  // environment time constant, > 0

  [[nodiscard]] double tau() const { return tau_e / tau_x; }
};

struct OddSymmetryViolation {
  char function = '?';  // 's', 'r', or 'u'
  double x = 0.0;
  double magnitude = 0.0;
};

// Samples x on a uniform grid over [-1,1] and checks |s(-x)+s(x)|, |r(-x)+r(x)|,
// and |u(-x)+u(x) - 2*gamma*ebar| against a 1e-10 tolerance. Empty result means
// the odd-dynamics assumption holds on the samples.
[[nodiscard]] std::vector<OddSymmetryViolation> check_odd_symmetry(const ModelConfig& cfg,
                                                                   int sample_count);

struct ValidationReport {
  std::vector<std::string> hard_errors;
  std::vector<std::string> warnings;
};

// Hard errors for parameter-range violations; warnings for threshold-assumption
// violations (0 < u(-1) < u(1) and ebar within [u(-1)/gamma, u(1)/gamma]).
[[nodiscard]] ValidationReport validate_config(const ModelConfig& cfg);

}  // namespace oebif
