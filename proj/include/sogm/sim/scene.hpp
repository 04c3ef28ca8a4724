#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/core/grid.hpp"

namespace sogm {

enum class CellClass : std::uint8_t { ground = 0, table = 1, object = 2 };

inline const std::array<std::string, 3> kClassNames = {"ground", "table", "object"};

inline const std::string& class_name(CellClass c) {
  return kClassNames[static_cast<std::size_t>(c)];
}

struct Disc {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

struct RectRegion {
  double x = 0.0;  // lower-left corner
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  bool contains(double px, double py) const {
    return px >= x && px <= x + width && py >= y && py <= y + height;
  }
};

// Table-top scene: a table rectangle with object discs on it, rasterized
// onto the given grid.
struct SceneSpec {
  RectRegion table;
  std::vector<Disc> objects;
  GridSpec grid;
  std::uint64_t rng_seed = 0;
};

struct GroundTruthGrid {
  GridSpec spec;
  std::vector<CellClass> labels;  // row-major

  CellClass at(GridIndex i) const { return labels[spec.flat(i)]; }
};

// Crisp geometric labels from cell centers: object inside a disc, table
// inside the rectangle, ground elsewhere. Discs must lie fully on the table.
inline GroundTruthGrid generate_scene(const SceneSpec& spec) {
  spec.grid.validate();
  if (!(spec.table.width > 0.0) || !(spec.table.height > 0.0))
    throw InvalidParams("table rectangle must have positive extent");
  for (const auto& d : spec.objects) {
    if (!(d.radius > 0.0)) throw InvalidParams("object radius must be > 0");
    if (d.cx - d.radius < spec.table.x || d.cx + d.radius > spec.table.x + spec.table.width ||
        d.cy - d.radius < spec.table.y || d.cy + d.radius > spec.table.y + spec.table.height)
      throw InvalidParams("object disc extends beyond the table");
  }

  GroundTruthGrid truth;
  truth.spec = spec.grid;
  truth.labels.assign(spec.grid.cell_count(), CellClass::ground);
  for (int y = 0; y < spec.grid.height; ++y)
    for (int x = 0; x < spec.grid.width; ++x) {
      const double wx = spec.grid.cell_center_x(x);
      const double wy = spec.grid.cell_center_y(y);
      CellClass cls = CellClass::ground;
      for (const auto& d : spec.objects) {
        const double dx = wx - d.cx, dy = wy - d.cy;
        if (dx * dx + dy * dy <= d.radius * d.radius) {
          cls = CellClass::object;
          break;
        }
      }
      if (cls == CellClass::ground && spec.table.contains(wx, wy)) cls = CellClass::table;
      truth.labels[spec.grid.flat(GridIndex{x, y})] = cls;
    }
  return truth;
}

// Signed distance from a world point to the nearest object edge: negative
// inside a disc, large positive when the scene has no objects.
inline double distance_to_object_edge(const SceneSpec& spec, double wx, double wy) {
  double best = std::numeric_limits<double>::max();
  for (const auto& d : spec.objects) {
    const double dx = wx - d.cx, dy = wy - d.cy;
    best = std::min(best, std::sqrt(dx * dx + dy * dy) - d.radius);
  }
  return best;
}

// Distance used by the response curves. Inside objects it is the signed
// edge distance; outside, approach-side points (left of the nearest object,
// matching the +x viewing direction) keep their distance while lee-side
// points read as far field.
inline double effective_edge_distance(const SceneSpec& spec, double wx, double wy) {
  constexpr double kFar = 1e9;
  double best = kFar;
  double nearest_cx = 0.0;
  for (const auto& d : spec.objects) {
    const double dx = wx - d.cx, dy = wy - d.cy;
    const double dist = std::sqrt(dx * dx + dy * dy) - d.radius;
    if (dist < best) {
      best = dist;
      nearest_cx = d.cx;
    }
  }
  if (best >= kFar || best <= 0.0) return best;
  return wx <= nearest_cx ? best : kFar;
}

}  // namespace sogm
