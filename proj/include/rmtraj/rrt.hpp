#pragma once

// Single-tree goal-biased RRT in joint space, the comparison seed planner.

#include <cstdint>
#include <vector>

#include "rmtraj/collision.hpp"

namespace rmtraj {

struct RrtParams {
  double step = 0.2;        ///< rad, max extension per iteration
  double goal_bias = 0.1;   ///< probability of sampling a goal configuration
  int max_iters = 50'000;
  uint64_t rng_seed = 0;
  /// Edge samples are spaced at most this far apart (rad), at least 10 per edge.
  double check_resolution = 0.01;
};

struct RrtResult {
  bool success = false;
  std::vector<Configuration> path;  ///< start ... goal, empty on failure
  int iterations = 0;
};

/// Precondition: start collision-free, goal_configs non-empty.
RrtResult rrt_plan(const Scene& scene, const ArmModel& arm, const Configuration& start,
                   const std::vector<Configuration>& goal_configs, const RrtParams& params = {});

}  // namespace rmtraj
