#include "muco/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "muco/pedestrian.hpp"
#include "muco/rng.hpp"

namespace muco {

namespace {

Vec3 vec_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() ||
      !j[1].is_number() || !j[2].is_number()) {
    throw std::runtime_error(std::string("scene: ") + what +
                             " must be a [x, y, z] number array");
  }
  Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  if (!v.finite()) {
    throw std::runtime_error(std::string("scene: ") + what + " is not finite");
  }
  return v;
}

Aabb box_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_object() || !j.contains("min") || !j.contains("max")) {
    throw std::runtime_error(std::string("scene: ") + what +
                             " must be an object with min/max");
  }
  Aabb box{vec_from_json(j["min"], what), vec_from_json(j["max"], what)};
  if (!box.valid()) {
    throw std::runtime_error(std::string("scene: degenerate box (min > max) in ") +
                             what);
  }
  return box;
}

nlohmann::json vec_to_json(const Vec3& v) {
  return nlohmann::json::array({v.x, v.y, v.z});
}

}  // namespace

ObstacleScene scene_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("scene: parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("bounds") || !j.contains("obstacles")) {
    throw std::runtime_error("scene: missing bounds or obstacles");
  }
  ObstacleScene scene;
  scene.ground_z = j.value("ground_z", 0.0);
  scene.bounds = box_from_json(j["bounds"], "bounds");
  const auto& obs = j["obstacles"];
  if (!obs.is_array()) throw std::runtime_error("scene: obstacles must be an array");
  if (obs.empty()) throw std::runtime_error("scene: empty scene");
  scene.obstacles.reserve(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    Aabb box = box_from_json(obs[i], "obstacle");
    if (!box.intersects(scene.bounds)) {
      throw std::runtime_error("scene: obstacle " + std::to_string(i) +
                               " lies outside bounds");
    }
    scene.obstacles.push_back(box);
  }
  return scene;
}

std::string scene_to_json_text(const ObstacleScene& scene) {
  nlohmann::json j;
  j["ground_z"] = scene.ground_z;
  j["bounds"] = {{"min", vec_to_json(scene.bounds.min)},
                 {"max", vec_to_json(scene.bounds.max)}};
  auto arr = nlohmann::json::array();
  for (const Aabb& box : scene.obstacles) {
    arr.push_back({{"min", vec_to_json(box.min)}, {"max", vec_to_json(box.max)}});
  }
  j["obstacles"] = std::move(arr);
  return j.dump(2);
}

ObstacleScene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scene: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

void save_scene(const ObstacleScene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("scene: cannot write " + path);
  out << scene_to_json_text(scene) << "\n";
}

namespace {

double axis_gap(const Aabb& a, const Aabb& b, int axis) {
  return std::max({a.min[axis] - b.max[axis], b.min[axis] - a.max[axis], 0.0});
}

bool mergeable(const Aabb& a, const Aabb& b, double merge_gap) {
  for (int axis = 0; axis < 3; ++axis) {
    if (axis_gap(a, b, axis) > merge_gap) return false;
  }
  const Aabb u = a.united(b);
  const Aabb inter = a.clipped(b);
  const double overlap = inter.valid() ? inter.volume() : 0.0;
  const double wasted = u.volume() - a.volume() - b.volume() + overlap;
  return wasted <= 0.10 * u.volume();
}

}  // namespace

ObstacleScene simplify_scene(const ObstacleScene& scene, const Aabb& roi,
                             double min_volume, double merge_gap) {
  if (!roi.valid() || roi.volume() <= 0.0) {
    throw std::invalid_argument("simplify_scene: degenerate roi");
  }
  ObstacleScene out;
  out.ground_z = scene.ground_z;
  out.bounds = scene.bounds.clipped(roi);

  // Crop, then prune.
  for (const Aabb& box : scene.obstacles) {
    const Aabb clipped = box.clipped(roi);
    if (!clipped.valid() || clipped.volume() <= 0.0) continue;
    if (clipped.volume() < min_volume) continue;
    out.obstacles.push_back(clipped);
  }

  // Greedy pairwise merge to fixpoint, lowest index first.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < out.obstacles.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < out.obstacles.size(); ++j) {
        if (!mergeable(out.obstacles[i], out.obstacles[j], merge_gap)) continue;
        out.obstacles[i] = out.obstacles[i].united(out.obstacles[j]);
        out.obstacles.erase(out.obstacles.begin() +
                            static_cast<std::ptrdiff_t>(j));
        merged = true;
        break;
      }
    }
  }
  return out;
}

ObstacleScene filter_for_path(const ObstacleScene& scene, const TimedPath& path,
                              double radius) {
  if (radius <= 0.0) throw std::invalid_argument("filter_for_path: radius <= 0");
  ObstacleScene out;
  out.ground_z = scene.ground_z;
  out.bounds = scene.bounds;
  for (const Aabb& box : scene.obstacles) {
    for (const Vec3& p : path.points) {
      if (box.distance(p) <= radius) {
        out.obstacles.push_back(box);
        break;
      }
    }
  }
  return out;
}

WalkableGrid build_walkable_grid(const ObstacleScene& scene, double cell_size,
                                 double pedestrian_radius) {
  if (cell_size <= 0.0) throw std::invalid_argument("build_walkable_grid: cell_size <= 0");
  WalkableGrid grid;
  grid.cell_size = cell_size;
  grid.origin = {scene.bounds.min.x, scene.bounds.min.y, scene.ground_z};
  grid.nx = std::max(1, static_cast<int>(std::ceil(
                            (scene.bounds.max.x - scene.bounds.min.x) / cell_size)));
  grid.ny = std::max(1, static_cast<int>(std::ceil(
                            (scene.bounds.max.y - scene.bounds.min.y) / cell_size)));
  grid.walkable.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 1);

  const double band_lo = scene.ground_z;
  const double band_hi = scene.ground_z + kPedestrianHeight;
  for (const Aabb& box : scene.obstacles) {
    if (box.max.z <= band_lo || box.min.z >= band_hi) continue;
    const double lo_x = box.min.x - pedestrian_radius;
    const double hi_x = box.max.x + pedestrian_radius;
    const double lo_y = box.min.y - pedestrian_radius;
    const double hi_y = box.max.y + pedestrian_radius;
    const int ix0 = std::max(0, static_cast<int>(std::floor((lo_x - grid.origin.x) / cell_size)));
    const int ix1 = std::min(grid.nx - 1, static_cast<int>(std::floor((hi_x - grid.origin.x) / cell_size)));
    const int iy0 = std::max(0, static_cast<int>(std::floor((lo_y - grid.origin.y) / cell_size)));
    const int iy1 = std::min(grid.ny - 1, static_cast<int>(std::floor((hi_y - grid.origin.y) / cell_size)));
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        const double cx0 = grid.origin.x + ix * cell_size;
        const double cy0 = grid.origin.y + iy * cell_size;
        // Open overlap: touching at the boundary stays walkable.
        if (lo_x < cx0 + cell_size && hi_x > cx0 && lo_y < cy0 + cell_size &&
            hi_y > cy0) {
          grid.walkable[static_cast<std::size_t>(iy) * grid.nx + ix] = 0;
        }
      }
    }
  }
  return grid;
}

ObstacleScene generate_city_scene(std::uint64_t seed, const CityParams& p) {
  if (p.blocks_x < 1 || p.blocks_y < 1) {
    throw std::invalid_argument("generate_city_scene: need at least one block");
  }
  Rng rng(seed);
  ObstacleScene scene;
  scene.ground_z = 0.0;

  const double pitch = p.block_size + p.street_width;
  const double extent_x = p.blocks_x * pitch - p.street_width;
  const double extent_y = p.blocks_y * pitch - p.street_width;
  scene.bounds = {{-p.margin, -p.margin, 0.0},
                  {extent_x + p.margin, extent_y + p.margin, p.tower_height + 10.0}};

  for (int by = 0; by < p.blocks_y; ++by) {
    for (int bx = 0; bx < p.blocks_x; ++bx) {
      const double x0 = bx * pitch;
      const double y0 = by * pitch;
      const int k = p.parcels_min +
                    static_cast<int>(rng.below(
                        static_cast<std::uint64_t>(p.parcels_max - p.parcels_min + 1)));
      const double parcel = p.block_size / k;
      for (int py = 0; py < k; ++py) {
        for (int px = 0; px < k; ++px) {
          if (rng.bernoulli(p.plaza_prob)) continue;
          double height;
          if (rng.bernoulli(p.tower_prob)) {
            height = p.tower_height;
          } else {
            const double h = rng.uniform(p.height_min, p.height_max);
            height = std::max(p.storey, std::round(h / p.storey) * p.storey);
          }
          scene.obstacles.push_back({{x0 + px * parcel, y0 + py * parcel, 0.0},
                                     {x0 + (px + 1) * parcel,
                                      y0 + (py + 1) * parcel, height}});
        }
      }
    }
  }
  if (scene.obstacles.empty()) {
    // All parcels rolled plazas (tiny grids only); keep the scene non-empty.
    scene.obstacles.push_back({{0.0, 0.0, 0.0},
                               {p.block_size, p.block_size, p.height_min}});
  }
  return scene;
}

}  // namespace muco
