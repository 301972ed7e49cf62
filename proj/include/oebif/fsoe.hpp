#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "oebif/model_functions.hpp"

namespace oebif {

// Planar state of the fully synchronized opinion-environment dynamics.
struct FsoeState {
  double p = 0.0;  // synchronized opinion, in [-1,1]
  double e = 0.0;  // environment deviation from the threshold
};

struct FsoeRate {
  double dp = 0.0;
  double de = 0.0;
};

struct Jacobian2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;
  double trace = 0.0;
  double det = 0.0;
  double discriminant = 0.0;  // trace^2 - 4*det
};

enum class Stability {
  StableNode,
  StableFocus,
  UnstableNode,
  UnstableFocus,
  Saddle,
  Center,
  Degenerate
};

[[nodiscard]] const char* to_string(Stability s);

struct Equilibrium {
  double p_star = 0.0;
  double e_star = 0.0;
  Jacobian2 jac;
  Stability stability = Stability::Degenerate;
};

// dp = (-p + beta*r(e) + (1-beta)*s(p)) / tau_x
// de = (-gamma*e + u(p) - gamma*ebar) / tau_e
[[nodiscard]] FsoeRate rhs_fsoe(const ModelConfig& cfg, const FsoeState& st);

// g(x) = beta*r(u(x)/gamma - ebar) + (1-beta)*s(x); its fixed points are the
// equilibrium opinions. Throws DivisionByZero when gamma = 0.
[[nodiscard]] double instrumental_g(const ModelConfig& cfg, double x);

// Scans g(x) - x for sign changes on a uniform grid over [-1,1], refines each
// bracket by bisection to |g(x)-x| <= tol, probes tangential near-zeros, and
// returns sorted roots deduplicated at pairwise distance 1e-8.
[[nodiscard]] std::vector<double> find_fixed_points(const ModelConfig& cfg, int grid_n = 2001,
                                                    double tol = 1e-12);

// Lifts each fixed point to (p*, u(p*)/gamma - ebar) with Jacobian and
// stability classification attached.
[[nodiscard]] std::vector<Equilibrium> equilibria(const ModelConfig& cfg);

[[nodiscard]] Jacobian2 jacobian_fsoe(const ModelConfig& cfg, const FsoeState& st);

// Roots of X^2 - trace*X + det, ordered by descending real part, then
// descending imaginary part.
[[nodiscard]] std::pair<std::complex<double>, std::complex<double>> eigenvalues_2x2(
    const Jacobian2& j);

[[nodiscard]] Stability classify_stability(const Jacobian2& j);

}  // namespace oebif
