#pragma once

// Planar serial arm with revolute joints.

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rmtraj/geometry.hpp"

namespace rmtraj {

/// Joint-space point, one angle per joint (radians).
using Configuration = Eigen::VectorXd;

struct Link {
  double length = 0.0;      ///< meters, joint axis to joint axis
  double half_width = 0.0;  ///< meters
};

struct JointLimit {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
};

struct EEPose {
  Point2 position;
  double heading = 0.0;
  bool heading_matters = true;
};

class ArmModel {
 public:
  static constexpr int kMinDof = 3;
  static constexpr int kMaxDof = 8;
  /// Joints beyond this many are not sampled by the roadmap.
  static constexpr int kSampledJoints = 4;

  /// Throws std::invalid_argument when the dof is outside [3, 8], link and
  /// limit counts differ, or a length/width/limit interval is degenerate.
  ArmModel(Pose2 base, std::vector<Link> links, std::vector<JointLimit> limits);

  int dof() const { return static_cast<int>(links_.size()); }
  const Pose2& base() const { return base_; }
  std::span<const Link> links() const { return links_; }
  std::span<const JointLimit> limits() const { return limits_; }
  double total_length() const { return total_length_; }
  double max_half_width() const;

  bool within_limits(const Configuration& q, double tol = 0.0) const;
  Configuration clamp_to_limits(const Configuration& q) const;
  Configuration limit_midpoint() const;

  /// Values held by joints the roadmap does not sample. Defaults to the
  /// midpoint of each joint's limits.
  const Configuration& distal_fixed_values() const { return distal_fixed_; }
  void set_distal_fixed_values(const Configuration& q);

  friend bool operator==(const ArmModel& a, const ArmModel& b);

 private:
  Pose2 base_;
  std::vector<Link> links_;
  std::vector<JointLimit> limits_;
  double total_length_ = 0.0;
  Configuration distal_fixed_;
};

struct FkResult {
  /// Frame of each link at its proximal joint, heading along the link.
  std::vector<Pose2> link_poses;
  EEPose ee;
};

/// Throws std::invalid_argument when q.size() != arm.dof().
FkResult forward_kinematics(const ArmModel& arm, const Configuration& q);

std::vector<ConvexShape> link_shapes(const ArmModel& arm, const Configuration& q);

/// Allocation-light link rectangle used on collision hot paths.
struct LinkBox {
  std::array<Point2, 4> corners;  // CCW
  Aabb bounds;
};
void link_boxes(const ArmModel& arm, const Configuration& q, std::vector<LinkBox>& out);

/// d(x, y, heading)/dq, 3 x K.
Eigen::Matrix<double, 3, Eigen::Dynamic> ee_jacobian(const ArmModel& arm, const Configuration& q);

struct IkOptions {
  double damping = 1e-3;
  int max_iterations = 200;
  double position_tolerance = 1e-4;  // meters
  double heading_tolerance = 1e-3;   // radians
};

/// Damped least squares from `restarts` random starts drawn uniformly within
/// the joint limits. Returns the distinct converged solutions (possibly none).
std::vector<Configuration> solve_ik(const ArmModel& arm, const EEPose& target, int restarts,
                                    uint64_t rng_seed, const IkOptions& options = {});

/// Position error, and heading error when the target cares about it.
bool ik_satisfied(const ArmModel& arm, const Configuration& q, const EEPose& target,
                  const IkOptions& options = {});

/// Euclidean norm of angle differences, no wraparound.
double joint_distance(const Configuration& a, const Configuration& b);

/// Sum of joint-space segment lengths.
double path_length(std::span<const Configuration> path);

}  // namespace rmtraj
