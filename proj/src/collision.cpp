#include "rmtraj/collision.hpp"

#include <algorithm>
#include <bit>

#include "rmtraj/random.hpp"

namespace rmtraj {

namespace {

// Smallest inside-distance of any link corner to the workspace walls.
double bounds_depth(const std::vector<LinkBox>& boxes, const Aabb& ws) {
  double depth = kUnboundedClearance;
  for (const LinkBox& b : boxes) {
    for (const Point2& p : b.corners) {
      depth = std::min({depth, p.x - ws.lo.x, ws.hi.x - p.x, p.y - ws.lo.y, ws.hi.y - p.y});
    }
  }
  return depth;
}

bool boxes_in_collision(const std::vector<LinkBox>& boxes, const Scene& scene) {
  if (bounds_depth(boxes, scene.workspace_bounds) <= 0.0) return true;
  for (const LinkBox& b : boxes) {
    for (const ConvexShape& obs : scene.obstacles) {
      if (aabbs_disjoint(b.bounds, obs.bounds())) continue;
      if (convex_overlap(b.corners, obs.vertices())) return true;
    }
  }
  return false;
}

std::vector<LinkBox>& scratch_boxes() {
  thread_local std::vector<LinkBox> boxes;
  return boxes;
}

}  // namespace

bool config_in_collision(const ArmModel& arm, const Scene& scene, const Configuration& q) {
  auto& boxes = scratch_boxes();
  link_boxes(arm, q, boxes);
  return boxes_in_collision(boxes, scene);
}

bool edge_in_collision(const ArmModel& arm, const Scene& scene, const Configuration& q1,
                       const Configuration& q2, int n_interp) {
  // Interpolate from the lexicographically smaller endpoint so that the
  // sample set is bitwise identical for (q1, q2) and (q2, q1).
  const bool swap = std::lexicographical_compare(q2.begin(), q2.end(), q1.begin(), q1.end());
  const Configuration& a = swap ? q2 : q1;
  const Configuration& b = swap ? q1 : q2;
  if (config_in_collision(arm, scene, a) || config_in_collision(arm, scene, b)) return true;
  const Configuration delta = b - a;
  Configuration q(a.size());
  // Same samples as a linear sweep, visited coarse to fine so that a blocked
  // edge is usually rejected after a handful of checks.
  int top = 1;
  while (2 * top <= n_interp) top *= 2;
  for (int s = top; s >= 1; s /= 2) {
    for (int i = s; i <= n_interp; i += 2 * s) {
      q = a + (static_cast<double>(i) / (n_interp + 1)) * delta;
      if (config_in_collision(arm, scene, q)) return true;
    }
  }
  return false;
}

TrajectoryCheck trajectory_in_collision(const ArmModel& arm, const Scene& scene,
                                        std::span<const Configuration> waypoints, int n_interp) {
  TrajectoryCheck result;
  if (waypoints.empty()) return result;
  if (waypoints.size() == 1) {
    if (config_in_collision(arm, scene, waypoints[0])) result = {true, 0};
    return result;
  }
  Configuration q(waypoints[0].size());
  for (size_t s = 0; s + 1 < waypoints.size(); ++s) {
    const Configuration& a = waypoints[s];
    const Configuration& b = waypoints[s + 1];
    bool hit = config_in_collision(arm, scene, a);
    const Configuration delta = b - a;
    for (int i = 1; i <= n_interp && !hit; ++i) {
      q = a + (static_cast<double>(i) / (n_interp + 1)) * delta;
      hit = config_in_collision(arm, scene, q);
    }
    if (!hit && s + 2 == waypoints.size()) hit = config_in_collision(arm, scene, b);
    if (hit) return {true, s};
  }
  return result;
}

double min_clearance(const ArmModel& arm, const Scene& scene, const Configuration& q) {
  auto& boxes = scratch_boxes();
  link_boxes(arm, q, boxes);
  double best = kUnboundedClearance;
  const double depth = bounds_depth(boxes, scene.workspace_bounds);
  if (depth <= 0.0) best = depth;
  for (const LinkBox& b : boxes) {
    for (const ConvexShape& obs : scene.obstacles) {
      best = std::min(best, signed_distance(b.corners, obs.vertices()));
    }
  }
  return best;
}

uint64_t goal_ik_seed(const EEPose& goal) {
  uint64_t h = mix_seed(std::bit_cast<uint64_t>(goal.position.x), 1);
  h = mix_seed(h ^ std::bit_cast<uint64_t>(goal.position.y), 2);
  h = mix_seed(h ^ std::bit_cast<uint64_t>(goal.heading), goal.heading_matters ? 3 : 4);
  return h;
}

std::vector<Configuration> collision_free_ik(const ArmModel& arm, const Scene& scene,
                                             const EEPose& goal, int restarts) {
  std::vector<Configuration> out;
  for (Configuration& q : solve_ik(arm, goal, restarts, goal_ik_seed(goal))) {
    if (!config_in_collision(arm, scene, q)) out.push_back(std::move(q));
  }
  return out;
}

}  // namespace rmtraj
