#include "rmtraj/rrt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmtraj/random.hpp"

namespace rmtraj {

namespace {

int interp_count(double length, double resolution) {
  return std::max(10, static_cast<int>(std::ceil(length / resolution)));
}

}  // namespace

RrtResult rrt_plan(const Scene& scene, const ArmModel& arm, const Configuration& start,
                   const std::vector<Configuration>& goal_configs, const RrtParams& params) {
  if (goal_configs.empty()) throw std::invalid_argument("rrt_plan: no goal configurations");
  RrtResult result;
  for (const Configuration& g : goal_configs) {
    if (joint_distance(start, g) == 0.0) {
      result.success = true;
      result.path = {start};
      return result;
    }
  }

  const int k = arm.dof();
  std::vector<Configuration> nodes{start};
  std::vector<int> parent{-1};
  Rng rng(params.rng_seed);

  auto try_goals = [&](int node) -> int {
    for (size_t g = 0; g < goal_configs.size(); ++g) {
      const double d = joint_distance(nodes[node], goal_configs[g]);
      if (d > params.step) continue;
      if (!edge_in_collision(arm, scene, nodes[node], goal_configs[g],
                             interp_count(d, params.check_resolution))) {
        return static_cast<int>(g);
      }
    }
    return -1;
  };

  int reached = -1;
  int goal_index = try_goals(0);
  if (goal_index >= 0) reached = 0;

  Configuration sample(k);
  for (int it = 0; it < params.max_iters && reached < 0; ++it) {
    result.iterations = it + 1;
    if (rng.uniform() < params.goal_bias) {
      sample = goal_configs[rng.index(goal_configs.size())];
    } else {
      for (int j = 0; j < k; ++j) sample[j] = rng.uniform(arm.limits()[j].lo, arm.limits()[j].hi);
    }

    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t n = 0; n < nodes.size(); ++n) {
      const double d = (nodes[n] - sample).squaredNorm();
      if (d < best) {
        best = d;
        nearest = static_cast<int>(n);
      }
    }
    const double dist = std::sqrt(best);
    if (dist == 0.0) continue;
    const Configuration next =
        dist <= params.step ? sample
                            : Configuration(nodes[nearest] + (params.step / dist) * (sample - nodes[nearest]));
    const double len = std::min(dist, params.step);
    if (edge_in_collision(arm, scene, nodes[nearest], next,
                          interp_count(len, params.check_resolution))) {
      continue;
    }
    nodes.push_back(next);
    parent.push_back(nearest);
    const int added = static_cast<int>(nodes.size()) - 1;
    goal_index = try_goals(added);
    if (goal_index >= 0) reached = added;
  }
  if (reached < 0) return result;

  std::vector<Configuration> reversed{goal_configs[goal_index]};
  for (int n = reached; n >= 0; n = parent[n]) {
    if (joint_distance(nodes[n], reversed.back()) > 0.0) reversed.push_back(nodes[n]);
  }
  result.path.assign(reversed.rbegin(), reversed.rend());
  result.success = true;
  return result;
}

}  // namespace rmtraj
