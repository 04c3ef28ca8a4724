#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/common/rng.hpp"
#include "sogm/core/grid.hpp"
#include "sogm/pipeline/trajectory.hpp"
#include "sogm/sim/curves.hpp"
#include "sogm/sim/scene.hpp"

namespace sogm {

// One frame per (pose, layer): every cell within sensor range receives the
// curve's mean as log odds plus a per-cell logit-space Gaussian error. The
// error field is drawn once per call (systematic classifier error at a
// location), so revisiting a cell repeats the same mistake instead of
// averaging it away. Cells out of range receive no observation.
// Contributions are scaled per cell when a scale map is given (used by the
// dataset builder to normalize repeated coverage).
inline std::vector<LayerObservation> simulate_classifiers(
    const SceneSpec& spec, const GroundTruthGrid& scene,
    const std::vector<ClassifierCurve>& curves, const std::vector<Pose>& poses,
    double sensor_range, std::uint64_t rng_seed,
    const std::vector<double>* per_cell_scale = nullptr) {
  if (curves.empty()) throw InvalidParams("no classifier curves");
  if (!(sensor_range > 0.0)) throw InvalidParams("sensor_range must be > 0");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].layer_name.empty()) throw InvalidParams("curve without a layer name");
    for (std::size_t j = i + 1; j < curves.size(); ++j)
      if (curves[i].layer_name == curves[j].layer_name)
        throw InvalidParams("duplicate curve for layer " + curves[i].layer_name);
  }

  const auto& grid_spec = scene.spec;
  // Precompute the signed distance to the nearest object edge, and the
  // static per-layer error field.
  std::vector<double> edge_distance(grid_spec.cell_count());
  for (int y = 0; y < grid_spec.height; ++y)
    for (int x = 0; x < grid_spec.width; ++x)
      edge_distance[grid_spec.flat(GridIndex{x, y})] = effective_edge_distance(
          spec, grid_spec.cell_center_x(x), grid_spec.cell_center_y(y));

  // Classifier error is spatially correlated (a white field box-blurred
  // over a 5x5 window, rescaled so every cell keeps the configured sigma):
  // misreadings come in patches a few cells wide rather than per-cell salt.
  // Coverage gaps come from a second correlated field: the top
  // dropout_rate fraction of its cells is never observed by that layer.
  Rng rng(rng_seed);
  std::vector<std::vector<double>> error_field(curves.size());
  std::vector<std::vector<char>> dropped(curves.size());
  std::vector<double> white(grid_spec.cell_count());
  const auto blur = [&](int radius, std::vector<double>& out) {
    out.assign(grid_spec.cell_count(), 0.0);
    for (int y = 0; y < grid_spec.height; ++y)
      for (int x = 0; x < grid_spec.width; ++x) {
        double sum = 0.0;
        int count = 0;
        for (int dy = -radius; dy <= radius; ++dy)
          for (int dx = -radius; dx <= radius; ++dx) {
            const GridIndex nb{x + dx, y + dy};
            if (!grid_spec.contains(nb)) continue;
            sum += white[grid_spec.flat(nb)];
            ++count;
          }
        out[grid_spec.flat(GridIndex{x, y})] = sum / std::sqrt(static_cast<double>(count));
      }
  };
  std::vector<double> smooth;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    error_field[c].assign(grid_spec.cell_count(), 0.0);
    dropped[c].assign(grid_spec.cell_count(), 0);
    if (curves[c].noise_sigma > 0.0) {
      for (auto& w : white) w = rng.normal(0.0, curves[c].noise_sigma);
      blur(2, error_field[c]);
    }
    if (curves[c].dropout_rate > 0.0) {
      for (auto& w : white) w = rng.normal(0.0, 1.0);
      blur(1, smooth);
      const std::size_t drop_count = static_cast<std::size_t>(
          curves[c].dropout_rate * static_cast<double>(grid_spec.cell_count()));
      if (drop_count > 0) {
        std::vector<double> sorted(smooth);
        std::nth_element(sorted.begin(), sorted.end() - drop_count, sorted.end());
        const double threshold = sorted[sorted.size() - drop_count];
        for (std::size_t f = 0; f < smooth.size(); ++f)
          if (smooth[f] >= threshold) dropped[c][f] = 1;
      }
    }
  }

  std::vector<LayerObservation> observations;
  const double range_sq = sensor_range * sensor_range;
  for (const auto& pose : poses) {
    const int x_lo = std::max(0, grid_spec.index_at(pose.x - sensor_range, pose.y).x);
    const int x_hi = std::min(grid_spec.width - 1,
                              grid_spec.index_at(pose.x + sensor_range, pose.y).x);
    const int y_lo = std::max(0, grid_spec.index_at(pose.x, pose.y - sensor_range).y);
    const int y_hi = std::min(grid_spec.height - 1,
                              grid_spec.index_at(pose.x, pose.y + sensor_range).y);
    for (std::size_t c = 0; c < curves.size(); ++c) {
      LayerObservation obs;
      obs.layer_name = curves[c].layer_name;
      for (int y = y_lo; y <= y_hi; ++y)
        for (int x = x_lo; x <= x_hi; ++x) {
          const double dx = grid_spec.cell_center_x(x) - pose.x;
          const double dy = grid_spec.cell_center_y(y) - pose.y;
          if (dx * dx + dy * dy > range_sq) continue;
          const GridIndex idx{x, y};
          const std::size_t f = grid_spec.flat(idx);
          if (dropped[c][f]) continue;
          double l = curves[c].mean_log_odds(scene.at(idx), edge_distance[f]) +
                     error_field[c][f];
          if (per_cell_scale != nullptr) l *= (*per_cell_scale)[f];
          obs.cells.emplace_back(idx, l);
        }
      observations.push_back(std::move(obs));
    }
  }
  return observations;
}

// Serpentine lattice of sensing poses covering the grid.
inline std::vector<Pose> sweep_poses(const GridSpec& spec, double spacing) {
  if (!(spacing > 0.0)) throw InvalidParams("sweep spacing must be > 0");
  std::vector<Pose> poses;
  const double x0 = spec.origin_x + spacing / 2.0;
  const double y0 = spec.origin_y + spacing / 2.0;
  const double x_max = spec.origin_x + spec.width * spec.resolution;
  const double y_max = spec.origin_y + spec.height * spec.resolution;
  int row = 0;
  for (double y = y0; y < y_max; y += spacing, ++row) {
    std::vector<Pose> line;
    for (double x = x0; x < x_max; x += spacing)
      line.push_back(Pose{x, y, row % 2 == 0 ? 0.0 : std::numbers::pi});
    if (row % 2 == 1) std::reverse(line.begin(), line.end());
    poses.insert(poses.end(), line.begin(), line.end());
  }
  return poses;
}

struct TraversalPlan {
  double sweep_spacing = 0.1;   // meters between sensing poses
  double sensor_range = 0.3;    // meters
  double trajectory_step = 0.0; // 0 = one grid resolution
  double trajectory_margin = 0.01;  // keep-out from the grid border, meters
  bool normalized_fusion = true;    // scale contributions by 1/coverage
};

struct SceneData {
  SceneSpec spec;
  GroundTruthGrid truth;
  SemanticGrid grid;
  Trajectory trajectory;
};

// Straight evaluation sweep: enters from the left border at the first
// object's height, crosses the table and the object, and exits at the
// right border (ground -> table -> object -> table -> ground).
inline Trajectory standard_sweep(const SceneSpec& spec, double step, double margin) {
  const auto& g = spec.grid;
  double y = spec.table.y + spec.table.height / 2.0;
  if (!spec.objects.empty()) y = spec.objects.front().cy;
  Trajectory traj;
  traj.step = step;
  traj.waypoints = {Pose{g.origin_x + margin, y, 0.0},
                    Pose{g.origin_x + g.width * g.resolution - margin, y, 0.0}};
  return traj;
}

// Builds one SemanticGrid per scene by fusing simulated classifier frames
// from a sensing sweep, plus an evaluation trajectory. With normalized
// fusion every contribution is scaled by that cell's total coverage count,
// so the fused noise-free probability equals the curve mean.
inline std::vector<SceneData> build_dataset(const std::vector<SceneSpec>& specs,
                                            const std::vector<ClassifierCurve>& curves,
                                            const TraversalPlan& plan,
                                            std::uint64_t rng_seed) {
  if (specs.empty()) throw InvalidParams("no scene specs");
  std::vector<std::string> layer_names;
  for (const auto& c : curves) layer_names.push_back(c.layer_name);

  std::vector<SceneData> dataset;
  dataset.reserve(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const auto& spec = specs[s];
    auto truth = generate_scene(spec);
    SemanticGrid grid(spec.grid, layer_names);

    const auto poses = sweep_poses(spec.grid, plan.sweep_spacing);

    std::vector<double> scale;
    if (plan.normalized_fusion) {
      std::vector<int> coverage(spec.grid.cell_count(), 0);
      const double range_sq = plan.sensor_range * plan.sensor_range;
      for (const auto& pose : poses)
        for (int y = 0; y < spec.grid.height; ++y)
          for (int x = 0; x < spec.grid.width; ++x) {
            const double dx = spec.grid.cell_center_x(x) - pose.x;
            const double dy = spec.grid.cell_center_y(y) - pose.y;
            if (dx * dx + dy * dy <= range_sq)
              ++coverage[spec.grid.flat(GridIndex{x, y})];
          }
      scale.resize(coverage.size());
      for (std::size_t f = 0; f < coverage.size(); ++f)
        scale[f] = coverage[f] > 0 ? 1.0 / coverage[f] : 0.0;
    }

    const std::uint64_t noise_seed = mix_seed(mix_seed(rng_seed, spec.rng_seed), s);
    const auto observations =
        simulate_classifiers(spec, truth, curves, poses, plan.sensor_range, noise_seed,
                             plan.normalized_fusion ? &scale : nullptr);
    for (const auto& obs : observations) apply_observation(grid, obs);

    const double step = plan.trajectory_step > 0.0 ? plan.trajectory_step
                                                   : spec.grid.resolution;
    dataset.push_back(SceneData{spec, std::move(truth), std::move(grid),
                                standard_sweep(spec, step, plan.trajectory_margin)});
  }
  return dataset;
}

// Ground-truth class labels along the trajectory, one per traversed cell
// (or per pose sample for the point cloud representation).
inline std::vector<std::string> truth_labels_cells(const GroundTruthGrid& truth,
                                                   const Trajectory& traj) {
  std::vector<std::string> labels;
  for (const auto& cell : trajectory_cells(truth.spec, traj))
    labels.push_back(class_name(truth.at(cell)));
  return labels;
}

inline std::vector<std::string> truth_labels_samples(const GroundTruthGrid& truth,
                                                     const Trajectory& traj) {
  std::vector<std::string> labels;
  for (const auto& [wx, wy] : trajectory_samples(traj)) {
    const GridIndex idx = truth.spec.index_at(wx, wy);
    if (!truth.spec.contains(idx)) throw IndexOutOfBounds("trajectory sample outside grid");
    labels.push_back(class_name(truth.at(idx)));
  }
  return labels;
}

// Randomized table-top scenes for the synthetic benchmark. Geometry is
// drawn per scene from a seed-derived stream; discs always lie fully on
// the table.
struct SceneRandomization {
  GridSpec grid{120, 120, 0.005, 0.0, 0.0};
  RectRegion table{0.09, 0.09, 0.42, 0.42};
  int min_objects = 1;
  int max_objects = 2;
  double min_radius = 0.045;
  double max_radius = 0.065;
};

inline std::vector<SceneSpec> random_scene_specs(int n_scenes,
                                                 const SceneRandomization& ranges,
                                                 std::uint64_t seed) {
  if (n_scenes < 1) throw InvalidParams("n_scenes must be >= 1");
  if (ranges.min_objects < 1 || ranges.max_objects < ranges.min_objects)
    throw InvalidParams("invalid object count range");
  if (!(ranges.min_radius > 0.0) || ranges.max_radius < ranges.min_radius)
    throw InvalidParams("invalid radius range");

  std::vector<SceneSpec> specs;
  specs.reserve(n_scenes);
  for (int s = 0; s < n_scenes; ++s) {
    Rng rng(mix_seed(seed, s));
    SceneSpec spec;
    spec.grid = ranges.grid;
    spec.table = ranges.table;
    spec.rng_seed = rng.next_u64();
    const int count = ranges.min_objects +
                      static_cast<int>(rng.uniform_index(
                          static_cast<std::uint64_t>(ranges.max_objects - ranges.min_objects + 1)));
    for (int o = 0; o < count; ++o) {
      Disc d;
      d.radius = rng.uniform(ranges.min_radius, ranges.max_radius);
      d.cx = rng.uniform(ranges.table.x + d.radius,
                         ranges.table.x + ranges.table.width - d.radius);
      d.cy = rng.uniform(ranges.table.y + d.radius,
                         ranges.table.y + ranges.table.height - d.radius);
      spec.objects.push_back(d);
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace sogm
