#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace muco {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  bool operator==(const Vec3& o) const {
    return x == o.x && y == o.y && z == o.z;
  }

  double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  double& operator[](int axis) {
    return axis == 0 ? x : axis == 1 ? y : z;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm2() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  /// Unit vector, or zero when shorter than eps.
  Vec3 normalized(double eps = 1e-12) const {
    const double n = norm();
    return n < eps ? Vec3{} : *this / n;
  }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) {
  return a + (b - a) * t;
}

/// Axis-aligned box, min <= max componentwise.
struct Aabb {
  Vec3 min, max;

  Aabb() = default;
  Aabb(const Vec3& mn, const Vec3& mx) : min(mn), max(mx) {}

  bool valid() const {
    return min.finite() && max.finite() && min.x <= max.x && min.y <= max.y &&
           min.z <= max.z;
  }
  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  double volume() const {
    const Vec3 e = extent();
    return e.x * e.y * e.z;
  }

  /// Closed containment (boundary counts as inside).
  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
  /// Open containment (boundary excluded); the obstacle-interior test.
  bool contains_open(const Vec3& p) const {
    return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y &&
           p.z > min.z && p.z < max.z;
  }
  bool intersects(const Aabb& o) const {
    return !(o.max.x < min.x || o.min.x > max.x || o.max.y < min.y ||
             o.min.y > max.y || o.max.z < min.z || o.min.z > max.z);
  }
  /// True if the interiors overlap with positive volume.
  bool overlaps_open(const Aabb& o) const {
    return o.max.x > min.x && o.min.x < max.x && o.max.y > min.y &&
           o.min.y < max.y && o.max.z > min.z && o.min.z < max.z;
  }

  Aabb united(const Aabb& o) const {
    return {{std::min(min.x, o.min.x), std::min(min.y, o.min.y),
             std::min(min.z, o.min.z)},
            {std::max(max.x, o.max.x), std::max(max.y, o.max.y),
             std::max(max.z, o.max.z)}};
  }
  /// Intersection box; invalid (min > max) when disjoint.
  Aabb clipped(const Aabb& o) const {
    return {{std::max(min.x, o.min.x), std::max(min.y, o.min.y),
             std::max(min.z, o.min.z)},
            {std::min(max.x, o.max.x), std::min(max.y, o.max.y),
             std::min(max.z, o.max.z)}};
  }
  void expand(const Aabb& o) { *this = united(o); }

  Vec3 clamp(const Vec3& p) const {
    return {std::max(min.x, std::min(p.x, max.x)),
            std::max(min.y, std::min(p.y, max.y)),
            std::max(min.z, std::min(p.z, max.z))};
  }
  /// Euclidean distance from p to the box surface; 0 inside.
  double distance(const Vec3& p) const {
    const double dx = std::max({min.x - p.x, 0.0, p.x - max.x});
    const double dy = std::max({min.y - p.y, 0.0, p.y - max.y});
    const double dz = std::max({min.z - p.z, 0.0, p.z - max.z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
};

/// Clearance reported for an empty scene. Kept finite so reports serialize
/// cleanly.
inline constexpr double kInfiniteClearance = 1e9;

/// True if the open segment (a, b) passes through the open interior of the
/// box. Grazing contact with faces, edges, or corners does not block.
/// a == b degenerates to an open-containment test.
bool segment_intersects_box(const Aabb& box, const Vec3& a, const Vec3& b);

/// Static bounding-volume hierarchy over axis-aligned obstacle boxes.
/// Median split on the longest axis of the centroid bounds; immutable after
/// construction and safe for concurrent readers. Query results are identical
/// to a linear scan over the input boxes.
class Bvh {
 public:
  Bvh() = default;

  /// Throws std::invalid_argument on any box with min > max or non-finite
  /// coordinates. Deterministic for a fixed input order.
  static Bvh build(std::vector<Aabb> boxes);

  std::size_t size() const { return boxes_.size(); }
  bool empty() const { return boxes_.empty(); }
  const std::vector<Aabb>& boxes() const { return boxes_; }

  /// True iff segment [a, b] crosses any obstacle interior.
  bool segment_blocked(const Vec3& a, const Vec3& b) const;

  /// Distance from p to the nearest obstacle surface, 0 inside any box,
  /// kInfiniteClearance for an empty scene. `visits` (optional) counts BVH
  /// node visits.
  double min_distance(const Vec3& p, std::size_t* visits = nullptr) const;

  /// Unit direction of increasing clearance. Inside a box, points out
  /// through the nearest face. Ties pick the lowest obstacle index, then
  /// axis priority x > y > z, then the positive face. Zero for an empty
  /// scene.
  Vec3 distance_gradient(const Vec3& p) const;

  /// Depth inside the containing box (distance to its nearest face),
  /// maximized over all boxes containing p; 0 when p is in free space.
  double penetration_depth(const Vec3& p) const;

  /// Open-interior containment; `visits` counts node visits for the
  /// O(log n) descent property.
  bool point_inside(const Vec3& p, std::size_t* visits = nullptr) const;

 private:
  struct Node {
    Aabb bounds;
    std::int32_t left = -1;    // internal: child indices
    std::int32_t right = -1;
    std::int32_t first = 0;    // leaf: range into order_
    std::int32_t count = 0;    // 0 for internal nodes
  };

  std::int32_t build_node(std::vector<Vec3>& centroids, std::int32_t first,
                          std::int32_t count);
  /// Nearest box index and distance; index ties resolved to the lowest.
  void nearest_box(const Vec3& p, double& best, std::int32_t& best_idx) const;

  std::vector<Node> nodes_;
  std::vector<std::int32_t> order_;
  std::vector<Aabb> boxes_;
};

}  // namespace muco
