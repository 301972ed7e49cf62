#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "oebif/fsoe.hpp"
#include "oebif/model_functions.hpp"

namespace oebif {

// Infeasible closed-form conditions are reported as empty values with the
// violated constraint named, never as exceptions.
struct GammaZeroResult {
  std::optional<double> gamma;
  std::string infeasible_reason;
};

struct BetaZeroResult {
  std::optional<double> beta;
  std::string infeasible_reason;
};

struct DoubleZeroResult {
  double delta_beta = 0.0;
  std::optional<double> beta_minus;
  std::optional<double> beta_plus;
  bool beta_minus_feasible = false;  // (1-beta)*s'(p) > 1
  bool beta_plus_feasible = false;
  std::string infeasible_reason;
};

struct HopfLocusResult {
  std::optional<double> beta_star;
  double omega0 = 0.0;
  std::string infeasible_reason;
};

struct SingularityConditions {
  GammaZeroResult zero_eigenvalue;   // gamma making one eigenvalue zero, at cfg.beta
  DoubleZeroResult double_zero;
  std::optional<double> gamma_hopf;  // gamma putting cfg.beta on the Hopf locus
  HopfLocusResult hopf;              // beta on the Hopf locus at cfg.gamma
};

// gamma = -u'(p) r'(e) beta / ((1-beta) s'(p) - 1), valid while
// (1-beta) s'(p) > max(1, 1 - u'(p) r'(e) beta) and the value lies in [0,1].
[[nodiscard]] GammaZeroResult gamma_for_zero_eigenvalue(const ModelConfig& cfg, double p,
                                                        double e);

// Inversion of the same condition at cfg.gamma:
// beta = gamma (s'(p)-1) / (gamma s'(p) - u'(p) r'(e)).
[[nodiscard]] BetaZeroResult beta_for_zero_eigenvalue(const ModelConfig& cfg, double p, double e);

// delta_beta = u'r' (u'r' - 4 tau s'(s'-1)); when nonnegative, the roots
// beta_{-,+} = 1 - 1/s' + (-u'r' -+ sqrt(delta_beta)) / (2 tau s'^2) make both
// eigenvalues zero; only a root with (1-beta) s'(p) > 1 is flagged feasible.
[[nodiscard]] DoubleZeroResult beta_double_zero(const ModelConfig& cfg, double p, double e);

// Solves gamma = tau ((1-beta) s'(p) - 1) for beta at cfg.gamma and checks the
// purely-imaginary-pair side conditions; omega0 = sqrt(det) at the located point.
[[nodiscard]] HopfLocusResult hopf_locus(const ModelConfig& cfg, double p);

[[nodiscard]] SingularityConditions singularity_conditions(const ModelConfig& cfg, double p,
                                                           double e);

struct PitchforkInfo {
  double beta_star = 0.0;
  double gamma_star = 0.0;
  std::array<double, 2> eigenvector_v{1.0, 0.0};  // kernel direction (1, u'(0)/gamma*)
  double coefficient_c = 0.0;      // cubic normal-form coefficient
  double coefficient_c_tau = 0.0;  // variant with 1/tau_x, 1/tau_e weights
  bool degenerate = false;         // cubic coefficient vanishes
};

// Requires the origin Jacobian at (beta*, gamma*) to be singular within 1e-10;
// throws NotSingular otherwise.
[[nodiscard]] PitchforkInfo pitchfork_coefficient(const ModelConfig& cfg, double beta_star,
                                                  double gamma_star);

enum class SupercriticalSide { BelowBetaStar, AboveBetaStar, Undetermined };

[[nodiscard]] const char* to_string(SupercriticalSide side);

struct HopfInfo {
  double beta_star = 0.0;
  double gamma_star = 0.0;
  double omega0 = 0.0;
  double a = 0.0;  // gamma*/tau_x
  std::complex<double> h21{0.0, 0.0};
  std::complex<double> c1{0.0, 0.0};  // h21 / 2
  SupercriticalSide supercritical_side = SupercriticalSide::Undetermined;
};

// Requires the origin Jacobian at (beta*, gamma*) to have zero trace within
// 1e-10 and positive determinant; throws NotHopfPoint otherwise.
[[nodiscard]] HopfInfo hopf_coefficient(const ModelConfig& cfg, double beta_star,
                                        double gamma_star);

struct CycleData {
  double p_min = 0.0;
  double p_max = 0.0;
  double period = 0.0;
};

// Simulates from the perturbed origin (0.01, 0), discards the transient, and
// measures the opinion excursion plus the period from upward crossings of the
// equilibrium e-plane. Returns nothing when the orbit has converged (excursion
// below tol_cycle) or no consistent periodicity is seen.
[[nodiscard]] std::optional<CycleData> limit_cycle_amplitude(const ModelConfig& cfg, double beta,
                                                             double t_transient = 300.0,
                                                             double t_measure = 200.0,
                                                             double tol_cycle = 1e-3);

enum class BifurcationKind { Pitchfork, Hopf, Fold };
enum class Detection { ClosedForm, Numeric };

[[nodiscard]] const char* to_string(BifurcationKind kind);
[[nodiscard]] const char* to_string(Detection detection);

struct BifurcationPoint {
  double beta = 0.0;
  BifurcationKind kind = BifurcationKind::Fold;
  Detection detection = Detection::Numeric;
  std::optional<double> omega0;       // Hopf points
  std::optional<double> coefficient;  // c for pitchfork, Re(h21) for Hopf
};

struct BranchRecord {
  double beta = 0.0;
  int branch_id = 0;
  double p_star = 0.0;
  double e_star = 0.0;
  double trace = 0.0;
  double det = 0.0;
  Stability stability = Stability::Degenerate;
};

struct CycleOptions {
  bool enabled = false;
  double t_transient = 300.0;
  double t_measure = 200.0;
  double tol_cycle = 1e-3;
};

struct CycleRow {
  double beta = 0.0;
  std::optional<CycleData> cycle;
};

struct BifurcationDiagram {
  std::vector<double> beta_grid;
  std::vector<BranchRecord> records;      // ascending beta, then branch id
  std::vector<BifurcationPoint> points;   // ascending beta
  std::vector<CycleRow> cycles;           // one row per grid beta when enabled
  std::vector<double> failed_betas;       // grid points whose analysis failed
};

// Computes equilibria with stability on a beta grid (steps = grid point count),
// detects bifurcations numerically between adjacent grid points (fold: count
// change; pitchfork: origin det sign change; Hopf: origin trace sign change
// with det > 0), refines each by bisection to 1e-8 in beta, and attaches the
// closed-form pitchfork/Hopf locations. Per-beta work items run on `jobs`
// worker threads (0 = hardware concurrency).
[[nodiscard]] BifurcationDiagram sweep_beta(const ModelConfig& base, double beta_min,
                                            double beta_max, int steps,
                                            const CycleOptions& cycles = {}, int jobs = 1);

}  // namespace oebif
