#pragma once

// Numerical integration of (time-dependent) mass-action systems and of the
// 2D-reduced systems, plus trajectory bookkeeping: projections, tail-based
// persistence metrics, and CSV export.

#include "crn/errors.hpp"
#include "crn/network.hpp"
#include "crn/reduced2d.hpp"
#include "crn/schedule.hpp"

#include <functional>
#include <string>
#include <vector>

namespace crn {

struct SimConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 1e18;      // effectively unbounded unless set
  double horizon = 10.0;       // integrate over [0, horizon]
  double blowup_bound = 1e12;  // Blowup when any coordinate exceeds this
};

// Time series of nonnegative states together with the node derivatives
// (for cubic Hermite dense output between accepted steps).
struct Trajectory {
  std::vector<double> times;                 // strictly increasing
  std::vector<std::vector<double>> states;   // componentwise >= 0
  std::vector<std::vector<double>> derivs;   // rhs at each node
  long steps_accepted = 0;
  long steps_rejected = 0;

  int dim() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }
  // Cubic Hermite interpolation; t clamped to [times.front(), times.back()].
  std::vector<double> sample(double t) const;
};

using Rhs = std::function<std::vector<double>(double, const std::vector<double>&)>;

// Sum over reactions of rate_j * c^{P_j} * (P'_j - P_j), with 0^0 = 1.
std::vector<double> mass_action_rhs(const ReactionNetwork& net,
                                    const std::vector<double>& rates,
                                    const std::vector<double>& c);

// Adaptive embedded Runge-Kutta (Dormand-Prince 4(5)).  Steps that would push
// any component below -abs_tol are rejected; components landing in
// (-abs_tol, 0) are clamped to zero.  `breakpoints` are mandatory step
// boundaries (schedule table knots); the integrator never steps across one.
Trajectory integrate(const Rhs& rhs, const std::vector<double>& c0,
                     const SimConfig& config,
                     const std::vector<double>& breakpoints = {});

// Mass action with per-reaction schedules; collects the schedules' knots as
// mandatory boundaries automatically.
Trajectory integrate_mass_action(const ReactionNetwork& net,
                                 const std::vector<KappaSchedule>& schedules,
                                 const std::vector<double>& c0,
                                 const SimConfig& config);

// Planar integration of a reduced system via reduced2d_rhs.
Trajectory integrate_reduced(const Reduced2DSystem& sys,
                             std::array<double, 2> u0, const SimConfig& config);

// Tail statistics per species: the min over the final tail_fraction of the
// time span, and a liminf proxy: the min over the deepest successive halving
// of that tail that still holds at least 10 samples (the window mins are
// nondecreasing under halving, so this is the sharpest supported bound).
struct PersistenceMetrics {
  std::vector<double> tail_min;
  std::vector<double> liminf_estimate;
};
PersistenceMetrics persistence_metrics(const Trajectory& traj,
                                       double tail_fraction = 0.5);

// Coordinatewise selection; time stamps preserved.
Trajectory project_trajectory(const Trajectory& traj, const std::vector<int>& W);

// CSV with header "t, x_<name>..." and 17 significant digits per entry.
std::string trajectory_to_csv(const Trajectory& traj,
                              const std::vector<std::string>& names);

}  // namespace crn
