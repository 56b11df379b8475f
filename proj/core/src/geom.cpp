#include "muco/geom.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace muco {

bool segment_intersects_box(const Aabb& box, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  double t0 = 0.0, t1 = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double da = d[axis];
    const double oa = a[axis];
    const double lo = box.min[axis];
    const double hi = box.max[axis];
    if (da == 0.0) {
      // Parallel to the slab: blocked only if strictly between the planes.
      if (oa <= lo || oa >= hi) return false;
    } else {
      const double inv = 1.0 / da;
      double ta = (lo - oa) * inv;
      double tb = (hi - oa) * inv;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      // Open interior: a zero-length overlap is a graze, not a hit.
      if (t0 >= t1) return false;
    }
  }
  return t0 < t1;
}

Bvh Bvh::build(std::vector<Aabb> boxes) {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!boxes[i].valid()) {
      throw std::invalid_argument("Bvh::build: box " + std::to_string(i) +
                                  " violates min <= max or is not finite");
    }
  }
  Bvh bvh;
  bvh.boxes_ = std::move(boxes);
  const auto n = static_cast<std::int32_t>(bvh.boxes_.size());
  if (n == 0) return bvh;

  bvh.order_.resize(n);
  for (std::int32_t i = 0; i < n; ++i) bvh.order_[i] = i;
  std::vector<Vec3> centroids(n);
  for (std::int32_t i = 0; i < n; ++i) centroids[i] = bvh.boxes_[i].center();
  bvh.nodes_.reserve(static_cast<std::size_t>(2 * n));
  bvh.build_node(centroids, 0, n);
  return bvh;
}

std::int32_t Bvh::build_node(std::vector<Vec3>& centroids, std::int32_t first,
                             std::int32_t count) {
  constexpr std::int32_t kLeafSize = 2;
  const auto node_index = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();

  Aabb bounds = boxes_[order_[first]];
  Aabb cbounds{centroids[order_[first]], centroids[order_[first]]};
  for (std::int32_t i = first + 1; i < first + count; ++i) {
    bounds.expand(boxes_[order_[i]]);
    const Vec3& c = centroids[order_[i]];
    cbounds.expand({c, c});
  }
  nodes_[node_index].bounds = bounds;

  if (count <= kLeafSize) {
    nodes_[node_index].first = first;
    nodes_[node_index].count = count;
    return node_index;
  }

  const Vec3 ext = cbounds.extent();
  int axis = 0;
  if (ext.y > ext.x) axis = 1;
  if (ext.z > ext[axis]) axis = 2;

  const std::int32_t mid = first + count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + mid,
                   order_.begin() + first + count,
                   [&](std::int32_t a, std::int32_t b) {
                     const double ca = centroids[a][axis];
                     const double cb = centroids[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });

  const std::int32_t left = build_node(centroids, first, mid - first);
  const std::int32_t right = build_node(centroids, mid, first + count - mid);
  nodes_[node_index].left = left;
  nodes_[node_index].right = right;
  return node_index;
}

namespace {

/// Conservative (closed) segment-vs-bounds test used for pruning only.
bool segment_touches_bounds(const Aabb& box, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  double t0 = 0.0, t1 = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double da = d[axis];
    const double oa = a[axis];
    if (da == 0.0) {
      if (oa < box.min[axis] || oa > box.max[axis]) return false;
    } else {
      const double inv = 1.0 / da;
      double ta = (box.min[axis] - oa) * inv;
      double tb = (box.max[axis] - oa) * inv;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return false;
    }
  }
  return true;
}

}  // namespace

bool Bvh::segment_blocked(const Vec3& a, const Vec3& b) const {
  if (nodes_.empty()) return false;
  std::int32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!segment_touches_bounds(node.bounds, a, b)) continue;
    if (node.count > 0) {
      for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
        if (segment_intersects_box(boxes_[order_[i]], a, b)) return true;
      }
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return false;
}

double Bvh::min_distance(const Vec3& p, std::size_t* visits) const {
  if (nodes_.empty()) return kInfiniteClearance;
  double best = std::numeric_limits<double>::infinity();
  std::int32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (visits) ++*visits;
    if (node.bounds.distance(p) > best) continue;
    if (node.count > 0) {
      for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
        best = std::min(best, boxes_[order_[i]].distance(p));
      }
    } else {
      // Nearer child on top of the stack.
      const double dl = nodes_[node.left].bounds.distance(p);
      const double dr = nodes_[node.right].bounds.distance(p);
      if (dl < dr) {
        stack[top++] = node.right;
        stack[top++] = node.left;
      } else {
        stack[top++] = node.left;
        stack[top++] = node.right;
      }
    }
    if (best == 0.0) break;
  }
  return best;
}

void Bvh::nearest_box(const Vec3& p, double& best, std::int32_t& best_idx) const {
  best = std::numeric_limits<double>::infinity();
  best_idx = -1;
  if (nodes_.empty()) return;
  std::int32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    // Keep equal-distance subtrees so index tie-breaks stay deterministic.
    if (node.bounds.distance(p) > best) continue;
    if (node.count > 0) {
      for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
        const std::int32_t idx = order_[i];
        const double d = boxes_[idx].distance(p);
        if (d < best || (d == best && idx < best_idx)) {
          best = d;
          best_idx = idx;
        }
      }
    } else {
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }
}

Vec3 Bvh::distance_gradient(const Vec3& p) const {
  double d;
  std::int32_t idx;
  nearest_box(p, d, idx);
  if (idx < 0) return {};
  const Aabb& box = boxes_[idx];
  if (d > 0.0) {
    return (p - box.clamp(p)).normalized();
  }
  // Inside (or on the boundary of) the nearest box: exit through the nearest
  // face. Axis priority x > y > z, positive face preferred on exact ties.
  int best_axis = 0;
  double best_sign = 1.0;
  double best_depth = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double to_max = box.max[axis] - p[axis];
    const double to_min = p[axis] - box.min[axis];
    if (to_max < best_depth) {
      best_depth = to_max;
      best_axis = axis;
      best_sign = 1.0;
    }
    if (to_min < best_depth) {
      best_depth = to_min;
      best_axis = axis;
      best_sign = -1.0;
    }
  }
  Vec3 g;
  g[best_axis] = best_sign;
  return g;
}

double Bvh::penetration_depth(const Vec3& p) const {
  if (nodes_.empty()) return 0.0;
  double depth = 0.0;
  std::int32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!node.bounds.contains(p)) continue;
    if (node.count > 0) {
      for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
        const Aabb& box = boxes_[order_[i]];
        if (!box.contains_open(p)) continue;
        double face = std::numeric_limits<double>::infinity();
        for (int axis = 0; axis < 3; ++axis) {
          face = std::min({face, box.max[axis] - p[axis], p[axis] - box.min[axis]});
        }
        depth = std::max(depth, face);
      }
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return depth;
}

bool Bvh::point_inside(const Vec3& p, std::size_t* visits) const {
  if (nodes_.empty()) return false;
  std::int32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (visits) ++*visits;
    if (!node.bounds.contains(p)) continue;
    if (node.count > 0) {
      for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
        if (boxes_[order_[i]].contains_open(p)) return true;
      }
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return false;
}

}  // namespace muco
