#pragma once

#include <cstdint>
#include <vector>

#include "muco/geom.hpp"
#include "muco/scene.hpp"

namespace muco {

/// Ground-target trajectory sampled at a uniform timestep. Points sit on the
/// ground plane (z = ground_z); implied per-step speed is |p[i+1]-p[i]| / dt.
struct TimedPath {
  double dt = 0.5;
  std::uint64_t seed = 0;
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  double duration() const {
    return points.empty() ? 0.0 : dt * static_cast<double>(points.size() - 1);
  }
};

struct SpeedParams {
  double v_cruise = 1.4;
  double v_min = 0.5;
  double v_max = 2.5;
  double alpha = 2.0;       // curvature slowdown
  double beta = 0.15;       // multiplicative noise amplitude, < 1
  double stop_prob = 0.05;  // per simplified-path vertex
  double stop_duration_min = 1.0;
  double stop_duration_max = 5.0;
  std::uint64_t seed = 0;
};

/// Dwell of `duration` seconds at polyline vertex `vertex`.
struct StopEvent {
  std::size_t vertex = 0;
  double duration = 0.0;
};

/// 8-connected A* shortest path, diagonal cost sqrt(2), no corner cutting.
/// Returns the start cell alone when start == goal and an empty vector when
/// the goal is unreachable. Throws on an unwalkable endpoint.
std::vector<GridCell> plan_grid_path(const WalkableGrid& grid, GridCell start,
                                     GridCell goal);

std::vector<Vec3> cells_to_points(const WalkableGrid& grid,
                                  const std::vector<GridCell>& cells);

/// Classic Douglas-Peucker with perpendicular-distance threshold epsilon.
/// epsilon <= 0 returns the input unchanged.
std::vector<Vec3> simplify_dp(const std::vector<Vec3>& path, double epsilon);

/// Centripetal Catmull-Rom through all control points, endpoints duplicated
/// as phantoms, sampled uniformly in parameter per segment.
std::vector<Vec3> smooth_catmull_rom(const std::vector<Vec3>& path,
                                     int samples_per_segment);

/// 4 * Area(a,b,c) / (|ab| |bc| |ca|); zero for collinear or degenerate
/// triples. Equals the inverse circumradius.
double menger_curvature(const Vec3& a, const Vec3& b, const Vec3& c);

/// v_i = clip(v_cruise / (1 + alpha * kappa_i) * (1 + beta * U(-1,1)),
///            [v_min, v_max]), one speed per vertex, endpoint curvature 0.
std::vector<double> speed_profile(const std::vector<Vec3>& path,
                                  const SpeedParams& params);

/// Bernoulli stops at vertices (uniform duration), same stream layout for a
/// fixed seed.
std::vector<StopEvent> draw_stops(std::size_t vertex_count,
                                  const SpeedParams& params);

/// Time along the polyline by trapezoidal integration of 1/v over arc length
/// (speed linear between vertices, integrated on a fine subdivision), dwell
/// injected at stop vertices, then resampled at t = 0, dt, 2dt, ...
/// Throws on a non-positive speed.
TimedPath resample_fixed_dt(const std::vector<Vec3>& path,
                            const std::vector<double>& speeds,
                            const std::vector<StopEvent>& stops, double dt);

/// Full generation stage: A* between random walkable endpoints, DP
/// simplification, Catmull-Rom smoothing, curvature-dependent speeds with
/// random stops, fixed-dt resampling. Endpoints are re-drawn until the path
/// reaches at least min_steps timesteps (a few attempts), so batch length is
/// steerable via min_steps.
struct PathGenParams {
  double dt = 0.5;
  double dp_epsilon = 0.5;
  int cr_samples = 8;
  int min_steps = 120;
  int max_steps = 400;
  SpeedParams speed;
};

TimedPath generate_pedestrian_path(const WalkableGrid& grid,
                                   const PathGenParams& params,
                                   std::uint64_t seed);

}  // namespace muco
