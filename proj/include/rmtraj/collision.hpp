#pragma once

// Configuration, edge and trajectory level collision predicates against a
// static scene of convex obstacles.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmtraj/geometry.hpp"
#include "rmtraj/robot.hpp"

namespace rmtraj {

struct Scene {
  std::string name;
  std::vector<ConvexShape> obstacles;
  Aabb workspace_bounds;
  /// Where targeted test-case goals put the end effector (the regions that
  /// make the scene hard). Not used by any collision predicate.
  std::vector<Aabb> goal_regions;
};

/// Clearance reported when nothing constrains the arm.
inline constexpr double kUnboundedClearance = std::numeric_limits<double>::infinity();

/// Number of interior samples per segment used by the independent validator.
inline constexpr int kValidationInterp = 100;

/// True iff a link touches or overlaps an obstacle, or leaves the workspace.
bool config_in_collision(const ArmModel& arm, const Scene& scene, const Configuration& q);

/// Checks both endpoints and `n_interp` evenly spaced interior configurations
/// of the joint-space segment. Symmetric in (q1, q2).
bool edge_in_collision(const ArmModel& arm, const Scene& scene, const Configuration& q1,
                       const Configuration& q2, int n_interp = kValidationInterp);

struct TrajectoryCheck {
  bool in_collision = false;
  std::optional<size_t> segment;  ///< first offending segment
};

/// Independent continuous-time approximation: every waypoint once, plus
/// kValidationInterp interior samples on each segment.
TrajectoryCheck trajectory_in_collision(const ArmModel& arm, const Scene& scene,
                                        std::span<const Configuration> waypoints,
                                        int n_interp = kValidationInterp);

/// Minimum signed distance over (link, obstacle) pairs. A workspace-bounds
/// violation contributes its (non-positive) depth. kUnboundedClearance when
/// no obstacle constrains the arm.
double min_clearance(const ArmModel& arm, const Scene& scene, const Configuration& q);

/// IK restarts used wherever a workspace goal is resolved to joint goals.
inline constexpr int kGoalIkRestarts = 8;

/// Deterministic IK seed derived from the goal pose bits, so every consumer
/// of a goal (generation, planners, reload checks) sees the same solutions.
uint64_t goal_ik_seed(const EEPose& goal);

/// Collision-free IK solutions of `goal`, in solve_ik order.
std::vector<Configuration> collision_free_ik(const ArmModel& arm, const Scene& scene,
                                             const EEPose& goal,
                                             int restarts = kGoalIkRestarts);

}  // namespace rmtraj
