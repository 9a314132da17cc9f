#include "rmtraj/seedprep.hpp"

#include <cmath>
#include <stdexcept>

namespace rmtraj {

Trajectory Trajectory::from_path(std::span<const Configuration> path) {
  if (path.empty()) return {};
  Eigen::MatrixXd m(path.size(), path[0].size());
  for (size_t t = 0; t < path.size(); ++t) m.row(t) = path[t].transpose();
  return Trajectory(std::move(m));
}

std::vector<Configuration> Trajectory::to_path() const {
  std::vector<Configuration> path;
  path.reserve(size());
  for (int t = 0; t < size(); ++t) path.push_back(at(t));
  return path;
}

double Trajectory::length() const {
  double total = 0.0;
  for (int t = 1; t < size(); ++t) total += (waypoints.row(t) - waypoints.row(t - 1)).norm();
  return total;
}

Trajectory straight_line_seed(const Configuration& start, const Configuration& goal, int T) {
  if (T < 2) throw std::invalid_argument("straight_line_seed: T must be >= 2");
  if (start.size() != goal.size()) throw std::invalid_argument("straight_line_seed: dof mismatch");
  Eigen::MatrixXd m(T, start.size());
  const Configuration delta = goal - start;
  for (int i = 0; i < T; ++i) {
    m.row(i) = (start + (static_cast<double>(i) / (T - 1)) * delta).transpose();
  }
  m.row(T - 1) = goal.transpose();
  return Trajectory(std::move(m));
}

Trajectory resample_path(std::span<const Configuration> path, double max_spacing) {
  if (path.size() < 2) throw std::invalid_argument("resample_path: need at least 2 waypoints");
  if (!(max_spacing > 0.0)) throw std::invalid_argument("resample_path: max_spacing must be > 0");
  std::vector<Configuration> out{path[0]};
  for (size_t s = 1; s < path.size(); ++s) {
    const Configuration& a = path[s - 1];
    const Configuration& b = path[s];
    // The slack keeps already-conforming segments (len == k * max_spacing up
    // to rounding) from being split again, so resampling is idempotent.
    const double ratio = joint_distance(a, b) / max_spacing;
    const int pieces = std::max(1, static_cast<int>(std::ceil(ratio - 1e-12)));
    for (int i = 1; i < pieces; ++i) out.push_back(a + (static_cast<double>(i) / pieces) * (b - a));
    out.push_back(b);
  }
  return Trajectory::from_path(out);
}

}  // namespace rmtraj
