#pragma once

// Sequential convex trajectory optimizer. Minimizes the sum of squared
// waypoint displacements plus an exact (l1) hinge penalty on link-obstacle
// signed distance, with fixed endpoints, joint limits, a box trust region and
// optional per-step velocity bounds.
//
// Outer loop: the penalty weight mu grows by mu_growth until every waypoint
// clears every obstacle by d_safe, or max_penalty_rounds is reached.
// Inner loop: the hinges are linearized at the current iterate (signed
// distance gradients by central differences) and the resulting convex QP is
// solved in the trust region. A step is accepted only if it lowers the true
// merit and the model predicted at least a quarter of that improvement.

#include <optional>
#include <vector>

#include "rmtraj/collision.hpp"
#include "rmtraj/seedprep.hpp"

namespace rmtraj {

struct OptParams {
  double d_safe = 0.05;            ///< m, hinge margin
  double mu0 = 10.0;
  double mu_growth = 10.0;
  int max_penalty_rounds = 5;
  double trust_region_init = 0.1;  ///< rad, box half-width
  double trust_shrink = 0.5;
  double trust_expand = 1.5;
  double trust_min = 1e-4;
  double convergence_tol = 1e-4;   ///< merit decrease that ends an inner loop
  int max_inner_iters = 50;
  std::optional<double> vmax;      ///< rad per step, infinity norm
};

struct MeritLogEntry {
  int round = 0;
  double mu = 0.0;
  double merit = 0.0;
};

struct OptResult {
  Trajectory trajectory;
  bool converged = false;
  /// From trajectory_in_collision, never from penalty values.
  bool collision_free = false;
  double final_cost = 0.0;  ///< smoothness + mu * penalty at the last mu
  int iterations = 0;       ///< convexifications
  double wall_time = 0.0;   ///< seconds
  /// Merit at the start of each round and after every accepted step.
  std::vector<MeritLogEntry> merit_log;
};

/// Sum over segments of the squared joint-space displacement.
double smoothness_cost(const Trajectory& traj);

/// Sum over waypoints and (link, obstacle) pairs of max(0, d_safe - sd).
double collision_penalty(const Trajectory& traj, const ArmModel& arm, const Scene& scene,
                         double d_safe);

/// True iff every per-step joint displacement is within vmax (infinity norm).
bool velocity_limit_satisfied(const Trajectory& traj, double vmax);

/// Gradient of smoothness + mu * penalty as linearized by the inner loop,
/// T x K with zero endpoint rows.
Eigen::MatrixXd merit_gradient(const Trajectory& traj, const ArmModel& arm, const Scene& scene,
                               double d_safe, double mu);

/// Preconditions: T >= 2, waypoints within joint limits, and when vmax is set
/// the seed already satisfies it (std::invalid_argument otherwise). Returns
/// the best iterate even when it does not converge.
OptResult optimize(const Trajectory& seed, const ArmModel& arm, const Scene& scene,
                   const OptParams& params = {});

}  // namespace rmtraj
