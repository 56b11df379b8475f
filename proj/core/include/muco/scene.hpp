#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "muco/geom.hpp"

namespace muco {

struct TimedPath;  // pedestrian.hpp

/// Obstacle map for one urban region. Obstacles are axis-aligned boxes, all
/// intersecting `bounds`; `ground_z` is the walkable ground plane.
struct ObstacleScene {
  std::vector<Aabb> obstacles;
  Aabb bounds;
  double ground_z = 0.0;
};

/// 2-D ground-level occupancy lattice for pedestrian planning.
/// Cell (ix, iy) covers [origin + i*cell, origin + (i+1)*cell) in x,y.
struct WalkableGrid {
  double cell_size = 1.0;
  Vec3 origin;  // z = ground plane
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> walkable;  // row-major iy * nx + ix

  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < nx && iy >= 0 && iy < ny;
  }
  bool is_walkable(int ix, int iy) const {
    return in_bounds(ix, iy) && walkable[static_cast<std::size_t>(iy) * nx + ix];
  }
  Vec3 cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * cell_size,
            origin.y + (iy + 0.5) * cell_size, origin.z};
  }
};

struct GridCell {
  int ix = 0, iy = 0;
  bool operator==(const GridCell&) const = default;
};

/// Pedestrians block against obstacles overlapping this band above ground.
inline constexpr double kPedestrianHeight = 2.0;

/// Parses the scene JSON schema:
///   {"ground_z": z, "bounds": {"min": [..], "max": [..]},
///    "obstacles": [{"min": [..], "max": [..]}, ...]}
/// Throws std::runtime_error on parse errors, schema violations, degenerate
/// boxes, an empty obstacle array, or obstacles outside the bounds.
ObstacleScene load_scene(const std::string& path);
void save_scene(const ObstacleScene& scene, const std::string& path);
ObstacleScene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const ObstacleScene& scene);

/// Crop to roi, prune boxes smaller than min_volume, then greedily merge
/// near-adjacent boxes (per-axis gap <= merge_gap) whose union box wastes at
/// most 10% of its volume, repeated to a fixpoint. Output count <= input
/// count; the occupied set only shrinks by crop/prune and only grows within
/// the merge waste bound.
ObstacleScene simplify_scene(const ObstacleScene& scene, const Aabb& roi,
                             double min_volume, double merge_gap);

/// Keeps obstacles within `radius` of any point of the path. Default radius
/// (80 m) is wide enough that optimizing against the filtered scene matches
/// the full scene bit for bit.
ObstacleScene filter_for_path(const ObstacleScene& scene, const TimedPath& path,
                              double radius = 80.0);

/// Marks cells whose footprint overlaps any obstacle inflated by
/// pedestrian_radius within the ground band.
WalkableGrid build_walkable_grid(const ObstacleScene& scene, double cell_size,
                                 double pedestrian_radius);

/// City-block scene generator for benchmarks: a blocks_x-by-blocks_y grid of
/// building blocks separated by streets, each block subdivided into parcels
/// with quantized storey heights and occasional plazas and towers.
struct CityParams {
  int blocks_x = 6;
  int blocks_y = 6;
  double block_size = 40.0;
  double street_width = 14.0;
  int parcels_min = 7;   // per-block subdivision, parcels_min..parcels_max
  int parcels_max = 8;
  double height_min = 6.0;
  double height_max = 27.0;
  double storey = 3.0;   // heights snap to multiples of this
  double plaza_prob = 0.06;
  double tower_prob = 0.04;
  double tower_height = 45.0;
  double margin = 30.0;  // free border around the grid
};

ObstacleScene generate_city_scene(std::uint64_t seed, const CityParams& params);

}  // namespace muco
