#pragma once

// Seed trajectories for the optimizer: straight-line seeds and resampling of
// planner paths to a bounded waypoint spacing.

#include <Eigen/Core>
#include <span>
#include <vector>

#include "rmtraj/robot.hpp"

namespace rmtraj {

/// T x K waypoint matrix, one configuration per row.
struct Trajectory {
  Eigen::MatrixXd waypoints;

  Trajectory() = default;
  explicit Trajectory(Eigen::MatrixXd m) : waypoints(std::move(m)) {}
  static Trajectory from_path(std::span<const Configuration> path);

  int size() const { return static_cast<int>(waypoints.rows()); }
  int dof() const { return static_cast<int>(waypoints.cols()); }
  Configuration at(int t) const { return waypoints.row(t).transpose(); }
  std::vector<Configuration> to_path() const;
  /// Joint-space length, sum of Euclidean segment norms.
  double length() const;
};

inline constexpr int kDefaultWaypoints = 30;
inline constexpr double kDefaultMaxSpacing = 0.16;

/// T waypoints evenly spaced on the joint-space segment; endpoints exact.
/// Throws std::invalid_argument when T < 2.
Trajectory straight_line_seed(const Configuration& start, const Configuration& goal,
                              int T = kDefaultWaypoints);

/// Subdivides each segment into ceil(len / max_spacing) equal pieces, keeping
/// every input waypoint. Throws std::invalid_argument for fewer than 2 points.
Trajectory resample_path(std::span<const Configuration> path, double max_spacing = kDefaultMaxSpacing);

}  // namespace rmtraj
