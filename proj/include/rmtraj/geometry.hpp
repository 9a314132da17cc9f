#pragma once

// Planar convex geometry: points, poses, convex polygons and the exact
// polygon-polygon signed distance that all collision reasoning is built on.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace rmtraj {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Pose2 {
  Point2 position;
  double heading = 0.0;

  /// Maps a point expressed in this frame into the parent frame.
  Point2 apply(Point2 p) const {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    return {position.x + c * p.x - s * p.y, position.y + s * p.x + c * p.y};
  }
};

/// Axis-aligned box; also used as the workspace bounds of a scene.
struct Aabb {
  Point2 lo;
  Point2 hi;

  static Aabb of(std::span<const Point2> points);
  bool contains(Point2 p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

/// Euclidean gap between two boxes (0 when they overlap). A lower bound on
/// the distance between any shapes they enclose.
double aabb_gap(const Aabb& a, const Aabb& b);

/// Same as aabb_gap(a, b) > 0, but cheap.
inline bool aabbs_disjoint(const Aabb& a, const Aabb& b) {
  return a.lo.x > b.hi.x || b.lo.x > a.hi.x || a.lo.y > b.hi.y || b.lo.y > a.hi.y;
}

/// Strictly convex polygon with counter-clockwise vertices. Construction
/// validates the invariants, so every live instance is well formed.
class ConvexShape {
 public:
  /// Throws std::invalid_argument on fewer than three vertices, non-finite
  /// coordinates, repeated consecutive vertices, clockwise or reflex turns.
  explicit ConvexShape(std::vector<Point2> ccw_vertices);

  static ConvexShape rectangle(Point2 lo, Point2 hi);

  std::span<const Point2> vertices() const { return vertices_; }
  const Aabb& bounds() const { return bounds_; }
  Point2 centroid() const;

  friend ConvexShape transform(const ConvexShape& shape, const Pose2& pose);
  friend bool operator==(const ConvexShape& a, const ConvexShape& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  struct Trusted {};
  ConvexShape(std::vector<Point2> vertices, Trusted);

  std::vector<Point2> vertices_;
  Aabb bounds_;
};

/// Rigid motion of a shape: rotate by the pose heading, then translate.
ConvexShape transform(const ConvexShape& shape, const Pose2& pose);

/// Signed distance between two convex polygons given as CCW vertex rings:
/// the separation distance when disjoint, zero when touching, minus the
/// penetration depth (length of the minimum separating translation) when
/// overlapping. Symmetric in its arguments.
double signed_distance(std::span<const Point2> a, std::span<const Point2> b);

inline double signed_distance(const ConvexShape& a, const ConvexShape& b) {
  return signed_distance(a.vertices(), b.vertices());
}

/// Same as signed_distance(a, b) <= 0, without computing the distance.
bool convex_overlap(std::span<const Point2> a, std::span<const Point2> b);

/// Distance from a point to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

}  // namespace rmtraj
