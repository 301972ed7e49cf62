#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace oebif {

using RhsFunction =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

enum class SolverMethod { RK4Fixed, Adaptive45 };

enum class CrossingDirection { Upward, Downward, Any };

struct EventPlane {
  int state_index = 0;
  double threshold = 0.0;
  CrossingDirection direction = CrossingDirection::Upward;
};

struct SolverOptions {
  SolverMethod method = SolverMethod::Adaptive45;
  double step = 1e-3;      // RK4Fixed step size
  double abs_tol = 1e-10;  // Adaptive45 tolerances
  double rel_tol = 1e-10;
  long max_steps = 20000000;
  std::optional<EventPlane> event_plane;
};

struct Event {
  double t = 0.0;
  std::vector<double> state;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<Event> events;
};

// Integrates dy/dt = rhs(t, y) from (t0, y0) to t1, recording one sample per
// accepted step (the first sample is the initial condition). Plane-crossing
// events, when requested, are refined to 1e-10 in t by bisecting a
// re-integration of the bracketing step.
[[nodiscard]] Trajectory integrate(const RhsFunction& rhs, const std::vector<double>& y0,
                                   double t0, double t1, const SolverOptions& opts);

}  // namespace oebif
