#include "rmtraj/robot.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "rmtraj/random.hpp"

namespace rmtraj {

ArmModel::ArmModel(Pose2 base, std::vector<Link> links, std::vector<JointLimit> limits)
    : base_(base), links_(std::move(links)), limits_(std::move(limits)) {
  const int k = static_cast<int>(links_.size());
  if (k < kMinDof || k > kMaxDof) {
    throw std::invalid_argument("ArmModel: dof must be in [3, 8], got " + std::to_string(k));
  }
  if (limits_.size() != links_.size()) {
    throw std::invalid_argument("ArmModel: one joint limit per link required");
  }
  for (const Link& l : links_) {
    if (!(l.length > 0.0) || !(l.half_width > 0.0)) {
      throw std::invalid_argument("ArmModel: link length and half width must be positive");
    }
    total_length_ += l.length;
  }
  for (const JointLimit& lim : limits_) {
    if (!(lim.lo < lim.hi)) throw std::invalid_argument("ArmModel: joint limit lo must be < hi");
  }
  base_.heading = normalize_angle(base_.heading);
  distal_fixed_ = limit_midpoint();
}

double ArmModel::max_half_width() const {
  double w = 0.0;
  for (const Link& l : links_) w = std::max(w, l.half_width);
  return w;
}

bool ArmModel::within_limits(const Configuration& q, double tol) const {
  if (q.size() != dof()) return false;
  for (int j = 0; j < dof(); ++j) {
    if (q[j] < limits_[j].lo - tol || q[j] > limits_[j].hi + tol) return false;
  }
  return true;
}

Configuration ArmModel::clamp_to_limits(const Configuration& q) const {
  Configuration out = q;
  for (int j = 0; j < dof(); ++j) out[j] = std::clamp(out[j], limits_[j].lo, limits_[j].hi);
  return out;
}

Configuration ArmModel::limit_midpoint() const {
  Configuration q(dof());
  for (int j = 0; j < dof(); ++j) q[j] = limits_[j].midpoint();
  return q;
}

void ArmModel::set_distal_fixed_values(const Configuration& q) {
  if (!within_limits(q)) {
    throw std::invalid_argument("ArmModel: distal fixed values must be a valid configuration");
  }
  distal_fixed_ = q;
}

bool operator==(const ArmModel& a, const ArmModel& b) {
  if (a.base_.position != b.base_.position || a.base_.heading != b.base_.heading) return false;
  if (a.links_.size() != b.links_.size()) return false;
  for (size_t i = 0; i < a.links_.size(); ++i) {
    if (a.links_[i].length != b.links_[i].length ||
        a.links_[i].half_width != b.links_[i].half_width ||
        a.limits_[i].lo != b.limits_[i].lo || a.limits_[i].hi != b.limits_[i].hi) {
      return false;
    }
  }
  return a.distal_fixed_ == b.distal_fixed_;
}

namespace {

void check_dimension(const ArmModel& arm, const Configuration& q) {
  if (q.size() != arm.dof()) {
    throw std::invalid_argument("configuration has " + std::to_string(q.size()) +
                                " joints, arm has " + std::to_string(arm.dof()));
  }
}

}  // namespace

FkResult forward_kinematics(const ArmModel& arm, const Configuration& q) {
  check_dimension(arm, q);
  FkResult fk;
  fk.link_poses.reserve(arm.dof());
  Point2 joint = arm.base().position;
  double heading = arm.base().heading;
  for (int j = 0; j < arm.dof(); ++j) {
    heading += q[j];
    fk.link_poses.push_back({joint, heading});
    const double len = arm.links()[j].length;
    joint = joint + Point2{len * std::cos(heading), len * std::sin(heading)};
  }
  fk.ee = {joint, normalize_angle(heading), true};
  return fk;
}

void link_boxes(const ArmModel& arm, const Configuration& q, std::vector<LinkBox>& out) {
  check_dimension(arm, q);
  out.resize(arm.dof());
  Point2 joint = arm.base().position;
  double heading = arm.base().heading;
  for (int j = 0; j < arm.dof(); ++j) {
    heading += q[j];
    const Link& link = arm.links()[j];
    const Point2 along{std::cos(heading), std::sin(heading)};
    const Point2 side{-along.y, along.x};
    const Point2 tip = joint + link.length * along;
    const Point2 w = link.half_width * side;
    LinkBox& box = out[j];
    box.corners = {joint - w, tip - w, tip + w, joint + w};
    box.bounds = Aabb::of(box.corners);
    joint = tip;
  }
}

std::vector<ConvexShape> link_shapes(const ArmModel& arm, const Configuration& q) {
  std::vector<LinkBox> boxes;
  link_boxes(arm, q, boxes);
  std::vector<ConvexShape> shapes;
  shapes.reserve(boxes.size());
  for (const LinkBox& b : boxes) {
    shapes.emplace_back(std::vector<Point2>(b.corners.begin(), b.corners.end()));
  }
  return shapes;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> ee_jacobian(const ArmModel& arm, const Configuration& q) {
  const FkResult fk = forward_kinematics(arm, q);
  Eigen::Matrix<double, 3, Eigen::Dynamic> jac(3, arm.dof());
  const Point2 tip = fk.ee.position;
  for (int j = 0; j < arm.dof(); ++j) {
    const Point2 lever = tip - fk.link_poses[j].position;
    jac(0, j) = -lever.y;
    jac(1, j) = lever.x;
    jac(2, j) = 1.0;
  }
  return jac;
}

bool ik_satisfied(const ArmModel& arm, const Configuration& q, const EEPose& target,
                  const IkOptions& options) {
  const EEPose ee = forward_kinematics(arm, q).ee;
  if (norm(ee.position - target.position) >= options.position_tolerance) return false;
  if (target.heading_matters &&
      std::abs(normalize_angle(target.heading - ee.heading)) >= options.heading_tolerance) {
    return false;
  }
  return true;
}

double joint_distance(const Configuration& a, const Configuration& b) { return (a - b).norm(); }

double path_length(std::span<const Configuration> path) {
  double total = 0.0;
  for (size_t i = 1; i < path.size(); ++i) total += joint_distance(path[i - 1], path[i]);
  return total;
}

std::vector<Configuration> solve_ik(const ArmModel& arm, const EEPose& target, int restarts,
                                    uint64_t rng_seed, const IkOptions& options) {
  std::vector<Configuration> solutions;
  if (restarts < 1) return solutions;
  if (norm(target.position - arm.base().position) > arm.total_length()) return solutions;

  constexpr double kMaxStep = 0.5;
  constexpr double kDistinct = 1e-3;
  // Iterate to well inside the acceptance tolerance.
  const double pos_goal = 0.1 * options.position_tolerance;
  const double head_goal = 0.1 * options.heading_tolerance;
  const int rows = target.heading_matters ? 3 : 2;
  const double lambda2 = options.damping * options.damping;

  Rng rng(rng_seed);
  const int k = arm.dof();
  using Jac = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, ArmModel::kMaxDof>;
  using Step = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, ArmModel::kMaxDof, 1>;
  std::array<Point2, ArmModel::kMaxDof> joints;
  Jac jac(3, k);
  Step step(k);
  for (int r = 0; r < restarts; ++r) {
    Configuration q(k);
    for (int j = 0; j < k; ++j) q[j] = rng.uniform(arm.limits()[j].lo, arm.limits()[j].hi);

    // A restart whose error has not dropped 1% in kStallWindow iterations is
    // stuck at a local minimum or a limit, so give up on it early.
    constexpr int kStallWindow = 20;
    double window_best = std::numeric_limits<double>::infinity();
    int window_start = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
      Point2 tip = arm.base().position;
      double heading = arm.base().heading;
      for (int j = 0; j < k; ++j) {
        joints[j] = tip;
        heading += q[j];
        const double len = arm.links()[j].length;
        tip = tip + Point2{len * std::cos(heading), len * std::sin(heading)};
      }
      const Eigen::Vector3d err(target.position.x - tip.x, target.position.y - tip.y,
                                normalize_angle(target.heading - heading));
      if (err.head<2>().norm() < pos_goal && (rows == 2 || std::abs(err[2]) < head_goal)) break;
      const double err_norm = rows == 3 ? err.norm() : err.head<2>().norm();
      if (err_norm < 0.99 * window_best) {
        window_best = err_norm;
        window_start = it;
      } else if (it - window_start >= kStallWindow) {
        break;
      }

      for (int j = 0; j < k; ++j) {
        jac(0, j) = -(tip.y - joints[j].y);
        jac(1, j) = tip.x - joints[j].x;
        jac(2, j) = 1.0;
      }
      // Joints pinned at a limit and pushed outward drop out of the solve, so
      // the remaining joints take up the motion instead of stalling.
      for (int pass = 0; pass < 3; ++pass) {
        if (rows == 3) {
          Eigen::Matrix3d jjt = jac * jac.transpose();
          jjt.diagonal().array() += lambda2;
          step.noalias() = jac.transpose() * jjt.ldlt().solve(err);
        } else {
          Eigen::Matrix2d jjt = jac.topRows<2>() * jac.topRows<2>().transpose();
          jjt.diagonal().array() += lambda2;
          step.noalias() = jac.topRows<2>().transpose() * jjt.ldlt().solve(err.head<2>());
        }
        bool pinned = false;
        for (int j = 0; j < k; ++j) {
          const bool out = (q[j] <= arm.limits()[j].lo && step[j] < 0) ||
                           (q[j] >= arm.limits()[j].hi && step[j] > 0);
          if (out && !jac.col(j).isZero()) {
            jac.col(j).setZero();
            pinned = true;
          }
        }
        if (!pinned) break;
      }
      const double n = step.norm();
      if (n > kMaxStep) step *= kMaxStep / n;
      for (int j = 0; j < k; ++j) {
        q[j] = std::clamp(q[j] + step[j], arm.limits()[j].lo, arm.limits()[j].hi);
      }
    }
    if (!ik_satisfied(arm, q, target, options)) continue;
    const bool duplicate = std::any_of(solutions.begin(), solutions.end(), [&](const auto& s) {
      return joint_distance(s, q) < kDistinct;
    });
    if (!duplicate) solutions.push_back(q);
  }
  return solutions;
}

}  // namespace rmtraj
