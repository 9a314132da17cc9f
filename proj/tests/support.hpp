#pragma once

// Independent oracles and seeded generators shared by the unit tests and the
// acceptance runner. Nothing here calls into the code it is used to check.

#include <algorithm>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "rmtraj/graph.hpp"
#include "rmtraj/random.hpp"
#include "rmtraj/robot.hpp"

namespace rmtraj::oracles {

/// Strictly convex polygon: sorted angles on a circle, then an axis stretch
/// and rotation. Angular gaps stay in [0.05, pi - 0.05].
inline ConvexShape random_polygon(Rng& rng, Point2 center, double radius) {
  while (true) {
    const int n = 3 + static_cast<int>(rng.index(6));
    std::vector<double> angles(n);
    for (double& a : angles) a = rng.uniform(0.0, 2 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double gap = (i + 1 < n ? angles[i + 1] : angles[0] + 2 * std::numbers::pi) - angles[i];
      if (gap < 0.05 || gap > std::numbers::pi - 0.05) ok = false;
    }
    if (!ok) continue;
    const double sx = rng.uniform(0.4, 1.0), rot = rng.uniform(-3.0, 3.0);
    std::vector<Point2> v;
    for (double a : angles) {
      const double x = radius * sx * std::cos(a), y = radius * std::sin(a);
      v.push_back({center.x + std::cos(rot) * x - std::sin(rot) * y,
                   center.y + std::sin(rot) * x + std::cos(rot) * y});
    }
    return ConvexShape(std::move(v));
  }
}

inline std::pair<double, double> project(const ConvexShape& s, double c, double sn) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point2& p : s.vertices()) {
    const double t = p.x * c + p.y * sn;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {lo, hi};
}

/// max over sampled unit directions d of (min_b d - max_a d): the separation
/// distance when disjoint, minus the penetration depth when overlapping.
inline double sd_direction_oracle(const ConvexShape& a, const ConvexShape& b,
                                  int directions = 20000) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < directions; ++i) {
    const double th = 2 * std::numbers::pi * i / directions;
    const double c = std::cos(th), s = std::sin(th);
    best = std::max(best, project(b, c, s).first - project(a, c, s).second);
  }
  return best;
}

/// Disjoint shapes only: dense boundary samples of each shape against the
/// other's edges.
inline double boundary_distance_oracle(const ConvexShape& a, const ConvexShape& b,
                                       int samples_per_edge = 400) {
  auto seg_dist = [](Point2 p, Point2 u, Point2 v) {
    const Point2 d = v - u;
    double t = dot(p - u, d) / dot(d, d);
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (u + t * d));
  };
  double best = std::numeric_limits<double>::infinity();
  auto sweep = [&](const ConvexShape& from, const ConvexShape& to) {
    const auto fv = from.vertices();
    const auto tv = to.vertices();
    for (size_t i = 0; i < fv.size(); ++i) {
      const Point2 u = fv[i], v = fv[(i + 1) % fv.size()];
      for (int s = 0; s < samples_per_edge; ++s) {
        const Point2 p = u + (double(s) / samples_per_edge) * (v - u);
        for (size_t j = 0; j < tv.size(); ++j)
          best = std::min(best, seg_dist(p, tv[j], tv[(j + 1) % tv.size()]));
      }
    }
  };
  sweep(a, b);
  sweep(b, a);
  return best;
}

/// Separating axis test over both polygons' edge normals; true when the
/// interiors overlap.
inline bool sat_overlap(const ConvexShape& a, const ConvexShape& b) {
  for (const ConvexShape* s : {&a, &b}) {
    const auto v = s->vertices();
    for (size_t i = 0; i < v.size(); ++i) {
      const Point2 e = v[(i + 1) % v.size()] - v[i];
      const double len = norm(e);
      const double c = e.y / len, sn = -e.x / len;
      const auto pa = project(a, c, sn), pb = project(b, c, sn);
      if (pa.second <= pb.first || pb.second <= pa.first) return false;
    }
  }
  return true;
}

/// Tip pose by complex-number accumulation.
inline EEPose fk_oracle(const ArmModel& arm, const Configuration& q) {
  std::complex<double> z(arm.base().position.x, arm.base().position.y);
  std::complex<double> dir = std::polar(1.0, arm.base().heading);
  double heading = arm.base().heading;
  for (int j = 0; j < arm.dof(); ++j) {
    dir *= std::polar(1.0, q[j]);
    heading += q[j];
    z += arm.links()[j].length * dir;
  }
  return {{z.real(), z.imag()}, std::remainder(heading, 2 * std::numbers::pi), true};
}

inline ArmModel random_arm(Rng& rng, int k) {
  std::vector<Link> links;
  std::vector<JointLimit> limits;
  for (int j = 0; j < k; ++j) {
    links.push_back({rng.uniform(0.1, 1.0), rng.uniform(0.005, 0.05)});
    const double lo = rng.uniform(-3.0, -0.5);
    limits.push_back({lo, rng.uniform(0.5, 3.0)});
  }
  return ArmModel({{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-3, 3)}, links, limits);
}

inline Configuration random_config(Rng& rng, const ArmModel& arm) {
  Configuration q(arm.dof());
  for (int j = 0; j < arm.dof(); ++j) q[j] = rng.uniform(arm.limits()[j].lo, arm.limits()[j].hi);
  return q;
}

/// Connected random graph on n nodes: a random spanning tree plus extras.
inline Graph random_graph(Rng& rng, int n, int extra_edges, bool integer_weights = false) {
  Graph g(n);
  auto w = [&] { return integer_weights ? double(1 + rng.index(4)) : rng.uniform(0.1, 2.0); };
  for (int v = 1; v < n; ++v) g.add_edge(static_cast<NodeId>(rng.index(v)), v, w());
  for (int e = 0; e < extra_edges; ++e) {
    const auto u = static_cast<NodeId>(rng.index(n)), v = static_cast<NodeId>(rng.index(n));
    if (u != v) g.add_edge(u, v, w());
  }
  return g;
}

/// Floyd-Warshall distances, row-major n x n.
inline std::vector<double> floyd_warshall(const Graph& g) {
  const size_t n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * n, inf);
  for (size_t u = 0; u < n; ++u) {
    d[u * n + u] = 0.0;
    for (const GraphEdge& e : g.neighbors(static_cast<NodeId>(u)))
      d[u * n + e.to] = std::min(d[u * n + e.to], e.weight);
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (d[i * n + k] + d[k * n + j] < d[i * n + j]) d[i * n + j] = d[i * n + k] + d[k * n + j];
  return d;
}

/// Every simple s-t path, sorted by (length, node sequence).
inline std::vector<WeightedPath> all_simple_paths(const Graph& g, NodeId s, NodeId t) {
  std::vector<WeightedPath> out;
  std::vector<NodeId> stack{s};
  std::vector<bool> on(g.node_count(), false);
  on[s] = true;
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    if (u == t) {
      out.push_back({g.path_weight(stack), stack});
      return;
    }
    for (const GraphEdge& e : g.neighbors(u)) {
      if (on[e.to]) continue;
      on[e.to] = true;
      stack.push_back(e.to);
      dfs(e.to);
      stack.pop_back();
      on[e.to] = false;
    }
  };
  dfs(s);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rmtraj::oracles
