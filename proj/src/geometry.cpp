#include "rmtraj/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace rmtraj {

namespace {

constexpr double kMinVertexSpacing = 1e-9;
constexpr double kMinTurnCross = 1e-9;

// Largest separation of `b` from the supporting lines of `a`'s edges.
// Positive means some edge of `a` separates the two polygons.
double max_edge_separation(std::span<const Point2> a, std::span<const Point2> b) {
  double best = -std::numeric_limits<double>::infinity();
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2 p = a[i];
    const Point2 e = a[(i + 1) % n] - p;
    const double len = norm(e);
    const Point2 outward{e.y / len, -e.x / len};
    double closest = std::numeric_limits<double>::infinity();
    for (const Point2& q : b) closest = std::min(closest, dot(outward, q - p));
    best = std::max(best, closest);
  }
  return best;
}

// True when some edge of `a` strictly separates `b`; stops at the first one.
bool any_edge_separates(std::span<const Point2> a, std::span<const Point2> b) {
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2 p = a[i];
    const Point2 e = a[(i + 1) % n] - p;
    const double len = norm(e);
    const Point2 outward{e.y / len, -e.x / len};
    double closest = std::numeric_limits<double>::infinity();
    for (const Point2& q : b) closest = std::min(closest, dot(outward, q - p));
    if (closest > 0.0) return true;
  }
  return false;
}

double min_vertex_edge_distance(std::span<const Point2> verts, std::span<const Point2> poly) {
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (const Point2& v : verts) {
    for (size_t i = 0; i < n; ++i) {
      best = std::min(best, point_segment_distance(v, poly[i], poly[(i + 1) % n]));
    }
  }
  return best;
}

}  // namespace

double normalize_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

Aabb Aabb::of(std::span<const Point2> points) {
  Aabb box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
           {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Point2& p : points) {
    box.lo.x = std::min(box.lo.x, p.x);
    box.lo.y = std::min(box.lo.y, p.y);
    box.hi.x = std::max(box.hi.x, p.x);
    box.hi.y = std::max(box.hi.y, p.y);
  }
  return box;
}

double aabb_gap(const Aabb& a, const Aabb& b) {
  const double dx = std::max({0.0, a.lo.x - b.hi.x, b.lo.x - a.hi.x});
  const double dy = std::max({0.0, a.lo.y - b.hi.y, b.lo.y - a.hi.y});
  return std::hypot(dx, dy);
}

ConvexShape::ConvexShape(std::vector<Point2> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
  const size_t n = vertices_.size();
  if (n < 3) throw std::invalid_argument("ConvexShape: need at least 3 vertices");
  for (const Point2& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("ConvexShape: non-finite vertex");
    }
  }
  double turning = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Point2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (norm(e0) <= kMinVertexSpacing) {
      throw std::invalid_argument("ConvexShape: duplicate consecutive vertex at index " +
                                  std::to_string(i));
    }
    const double c = cross(e0, e1);
    if (c < kMinTurnCross) {
      throw std::invalid_argument("ConvexShape: not strictly convex/CCW at vertex " +
                                  std::to_string((i + 1) % n));
    }
    turning += std::atan2(c, dot(e0, e1));
  }
  // All left turns but winding twice around is a star, not a convex polygon.
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw std::invalid_argument("ConvexShape: vertex ring winds more than once");
  }
  bounds_ = Aabb::of(vertices_);
}

ConvexShape::ConvexShape(std::vector<Point2> vertices, Trusted)
    : vertices_(std::move(vertices)), bounds_(Aabb::of(vertices_)) {}

ConvexShape ConvexShape::rectangle(Point2 lo, Point2 hi) {
  return ConvexShape({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
}

Point2 ConvexShape::centroid() const {
  // Area-weighted centroid of the polygon.
  double area2 = 0.0;
  Point2 acc;
  const size_t n = vertices_.size();
  const Point2 origin = vertices_[0];
  for (size_t i = 0; i < n; ++i) {
    const Point2 p = vertices_[i] - origin;
    const Point2 q = vertices_[(i + 1) % n] - origin;
    const double c = cross(p, q);
    area2 += c;
    acc = acc + c * (p + q);
  }
  return origin + (1.0 / (3.0 * area2)) * acc;
}

ConvexShape transform(const ConvexShape& shape, const Pose2& pose) {
  std::vector<Point2> out;
  out.reserve(shape.vertices_.size());
  for (const Point2& p : shape.vertices_) out.push_back(pose.apply(p));
  return ConvexShape(std::move(out), ConvexShape::Trusted{});
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double signed_distance(std::span<const Point2> a, std::span<const Point2> b) {
  // The edge normals of both polygons are exactly the face normals of their
  // Minkowski difference, so the best separating edge gives the penetration
  // depth when negative. When some edge separates, the closest features are
  // a vertex and an edge.
  const double sep = std::max(max_edge_separation(a, b), max_edge_separation(b, a));
  if (sep <= 0.0) return sep;
  return std::min(min_vertex_edge_distance(a, b), min_vertex_edge_distance(b, a));
}

bool convex_overlap(std::span<const Point2> a, std::span<const Point2> b) {
  return !any_edge_separates(a, b) && !any_edge_separates(b, a);
}

}  // namespace rmtraj
