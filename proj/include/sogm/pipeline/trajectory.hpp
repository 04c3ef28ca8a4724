#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/core/grid.hpp"
#include "sogm/hmm/model.hpp"
#include "sogm/seg/supercell.hpp"

namespace sogm {

enum class RepresentationTag { cellwise, clustered, pointcloud };

inline std::string to_string(RepresentationTag rep) {
  switch (rep) {
    case RepresentationTag::cellwise: return "cellwise";
    case RepresentationTag::clustered: return "clustered";
    case RepresentationTag::pointcloud: return "pointcloud";
  }
  return "?";
}

inline RepresentationTag representation_from_string(const std::string& s) {
  if (s == "cellwise") return RepresentationTag::cellwise;
  if (s == "clustered") return RepresentationTag::clustered;
  if (s == "pointcloud") return RepresentationTag::pointcloud;
  throw InvalidParams("unknown representation: " + s);
}

struct Trajectory {
  std::vector<Pose> waypoints;
  double step = 0.0;  // meters between pose samples

  void validate() const {
    if (waypoints.size() < 2) throw InvalidParams("trajectory needs >= 2 waypoints");
    if (!(step > 0.0)) throw InvalidParams("trajectory step must be > 0");
  }
};

// 8-connected discrete line from a to b, inclusive, no repeats. Both
// endpoints must lie inside the grid.
inline std::vector<GridIndex> bresenham_cells(GridIndex a, GridIndex b,
                                              const GridSpec& spec) {
  if (!spec.contains(a) || !spec.contains(b))
    throw IndexOutOfBounds("line endpoint outside grid");
  std::vector<GridIndex> cells;
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  GridIndex p = a;
  while (true) {
    cells.push_back(p);
    if (p == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return cells;
}

// Cells traversed along the waypoint polyline, duplicate junction cells
// removed.
inline std::vector<GridIndex> trajectory_cells(const GridSpec& spec, const Trajectory& traj) {
  traj.validate();
  std::vector<GridIndex> cells;
  for (std::size_t w = 0; w + 1 < traj.waypoints.size(); ++w) {
    const GridIndex a = spec.index_at(traj.waypoints[w].x, traj.waypoints[w].y);
    const GridIndex b = spec.index_at(traj.waypoints[w + 1].x, traj.waypoints[w + 1].y);
    const auto leg = bresenham_cells(a, b, spec);
    for (std::size_t i = 0; i < leg.size(); ++i) {
      if (!cells.empty() && cells.back() == leg[i]) continue;
      cells.push_back(leg[i]);
    }
  }
  return cells;
}

// World positions sampled along the polyline at multiples of the step.
inline std::vector<std::pair<double, double>> trajectory_samples(const Trajectory& traj) {
  traj.validate();
  std::vector<std::pair<double, double>> samples;
  double leftover = 0.0;
  for (std::size_t w = 0; w + 1 < traj.waypoints.size(); ++w) {
    const double ax = traj.waypoints[w].x, ay = traj.waypoints[w].y;
    const double bx = traj.waypoints[w + 1].x, by = traj.waypoints[w + 1].y;
    const double len = std::hypot(bx - ax, by - ay);
    if (len == 0.0) continue;
    double d = w == 0 ? 0.0 : leftover;
    while (d <= len) {
      const double f = d / len;
      samples.emplace_back(ax + f * (bx - ax), ay + f * (by - ay));
      d += traj.step;
    }
    leftover = d - len;
  }
  return samples;
}

// Observation sequence along a trajectory in one of the three map
// representations. Clustered emits one frame per traversed cell carrying
// its supercell's mean (logit); point cloud samples poses at the trajectory
// step and looks up the nearest point (ties toward the lower point index).
inline ObservationSequence sample_trajectory(const SemanticGrid& grid,
                                             const Segmentation* seg,
                                             const PointCloudMap* pc,
                                             const Trajectory& traj,
                                             RepresentationTag rep) {
  ObservationSequence obs;
  obs.source = to_string(rep);

  switch (rep) {
    case RepresentationTag::cellwise: {
      for (const auto& cell : trajectory_cells(grid.spec(), traj))
        obs.frames.push_back(grid.logit_vector(cell));
      break;
    }
    case RepresentationTag::clustered: {
      if (seg == nullptr)
        throw InvalidParams("clustered representation requires a segmentation");
      for (const auto& cell : trajectory_cells(grid.spec(), traj)) {
        const auto& sc = seg->supercells[seg->label_at(cell)];
        std::vector<double> frame(sc.mean_p.size());
        for (std::size_t n = 0; n < frame.size(); ++n) frame[n] = logit(sc.mean_p[n]);
        obs.frames.push_back(std::move(frame));
      }
      break;
    }
    case RepresentationTag::pointcloud: {
      if (pc == nullptr)
        throw InvalidParams("point cloud representation requires a point cloud map");
      if (pc->points.empty()) throw InvalidParams("point cloud map is empty");
      for (const auto& [wx, wy] : trajectory_samples(traj)) {
        if (!grid.spec().contains(grid.spec().index_at(wx, wy)))
          throw IndexOutOfBounds("trajectory sample outside grid");
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pc->points.size(); ++i) {
          const double dx = pc->points[i].x - wx, dy = pc->points[i].y - wy;
          const double d = dx * dx + dy * dy;
          if (d < best_d) {
            best_d = d;
            best = i;
          }
        }
        std::vector<double> frame(pc->points[best].mean_p.size());
        for (std::size_t n = 0; n < frame.size(); ++n)
          frame[n] = logit(pc->points[best].mean_p[n]);
        obs.frames.push_back(std::move(frame));
      }
      break;
    }
  }
  return obs;
}

}  // namespace sogm
