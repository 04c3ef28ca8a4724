#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/core/probability.hpp"

namespace sogm {

struct GridIndex {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

// Geometry of a 2D grid. Cell (0,0) has its lower-left corner at the origin;
// world coordinates grow with x to the right and y upwards.
struct GridSpec {
  int width = 0;
  int height = 0;
  double resolution = 0.0;  // meters per cell
  double origin_x = 0.0;
  double origin_y = 0.0;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  bool contains(GridIndex i) const {
    return i.x >= 0 && i.x < width && i.y >= 0 && i.y < height;
  }

  std::size_t flat(GridIndex i) const {
    return static_cast<std::size_t>(i.y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(i.x);
  }

  double cell_center_x(int cx) const { return origin_x + (cx + 0.5) * resolution; }
  double cell_center_y(int cy) const { return origin_y + (cy + 0.5) * resolution; }

  GridIndex index_at(double wx, double wy) const {
    return GridIndex{static_cast<int>(std::floor((wx - origin_x) / resolution)),
                     static_cast<int>(std::floor((wy - origin_y) / resolution))};
  }

  void validate() const {
    if (width < 1 || height < 1) throw InvalidParams("grid dimensions must be >= 1");
    if (!(resolution > 0.0)) throw InvalidParams("grid resolution must be > 0");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline double normalize_heading(double heading) {
  double h = std::fmod(heading + std::numbers::pi, 2.0 * std::numbers::pi);
  if (h <= 0.0) h += 2.0 * std::numbers::pi;
  return h - std::numbers::pi;  // (-pi, pi]
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

// One sensor frame for one layer: per-cell log-odds contributions from the
// inverse sensor model.
struct LayerObservation {
  std::string layer_name;
  std::vector<std::pair<GridIndex, double>> cells;  // (index, log odds)
};

// Occupancy grid with N named probability layers. Cells are stored as log
// odds so fusion is plain addition; unobserved cells are exactly 0 (p=0.5).
class SemanticGrid {
 public:
  SemanticGrid() = default;

  SemanticGrid(GridSpec spec, std::vector<std::string> layer_names)
      : spec_(spec), names_(std::move(layer_names)) {
    spec_.validate();
    if (names_.empty()) throw InvalidParams("grid needs at least one layer");
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j])
          throw InvalidParams("duplicate layer name: " + names_[i]);
    layers_.assign(names_.size(), std::vector<double>(spec_.cell_count(), 0.0));
  }

  const GridSpec& spec() const { return spec_; }
  int layer_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& layer_names() const { return names_; }

  int layer_index(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    throw UnknownLayer("no such layer: " + name);
  }

  std::span<const double> log_odds_layer(int layer) const { return layers_.at(layer); }
  std::span<double> log_odds_layer(int layer) { return layers_.at(layer); }

  double log_odds(int layer, GridIndex i) const {
    check_bounds(i);
    return layers_.at(layer)[spec_.flat(i)];
  }

  double probability(int layer, GridIndex i) const {
    return inverse_logit(log_odds(layer, i));
  }

  void set_log_odds(int layer, GridIndex i, double l) {
    check_bounds(i);
    layers_.at(layer)[spec_.flat(i)] = clamp_log_odds(l);
  }

  void set_probability(int layer, GridIndex i, double p) {
    set_log_odds(layer, i, logit(p));
  }

  // Probability vector (P_1(m), ..., P_N(m)) in layer order.
  std::vector<double> probability_vector(GridIndex i) const {
    check_bounds(i);
    const std::size_t f = spec_.flat(i);
    std::vector<double> out(names_.size());
    for (std::size_t n = 0; n < names_.size(); ++n)
      out[n] = inverse_logit(layers_[n][f]);
    return out;
  }

  // Logit vector in layer order; the feature space used downstream.
  std::vector<double> logit_vector(GridIndex i) const {
    check_bounds(i);
    const std::size_t f = spec_.flat(i);
    std::vector<double> out(names_.size());
    for (std::size_t n = 0; n < names_.size(); ++n) out[n] = layers_[n][f];
    return out;
  }

 private:
  void check_bounds(GridIndex i) const {
    if (!spec_.contains(i))
      throw IndexOutOfBounds("cell (" + std::to_string(i.x) + "," + std::to_string(i.y) +
                             ") outside " + std::to_string(spec_.width) + "x" +
                             std::to_string(spec_.height) + " grid");
  }

  GridSpec spec_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> layers_;  // per layer, row-major log odds
};

// Fuses one observation frame in place. Validates every index before any
// cell is touched so a failed call leaves the grid unchanged.
inline void apply_observation(SemanticGrid& grid, const LayerObservation& obs) {
  const int layer = grid.layer_index(obs.layer_name);
  for (const auto& [index, l] : obs.cells) {
    if (!grid.spec().contains(index))
      throw IndexOutOfBounds("observation cell (" + std::to_string(index.x) + "," +
                             std::to_string(index.y) + ") out of bounds");
    (void)l;
  }
  auto cells = grid.log_odds_layer(layer);
  for (const auto& [index, l] : obs.cells) {
    const std::size_t f = grid.spec().flat(index);
    cells[f] = update_cell(cells[f], l);
  }
}

// Pure variant returning the updated grid.
inline SemanticGrid integrate_observation(SemanticGrid grid, const LayerObservation& obs) {
  apply_observation(grid, obs);
  return grid;
}

}  // namespace sogm
