#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/common/rng.hpp"
#include "sogm/core/grid.hpp"

namespace sogm {

struct SegmentationParams {
  int num_seeds = 64;
  double compactness = 0.25;  // spatial-vs-probability weight
  int max_iters = 10;
  int min_cell_count = 4;
  std::uint64_t rng_seed = 0;

  void validate(const GridSpec& spec) const {
    if (num_seeds < 1) throw InvalidParams("num_seeds must be >= 1");
    if (static_cast<std::size_t>(num_seeds) > spec.cell_count())
      throw InvalidParams("num_seeds exceeds cell count");
    if (compactness < 0.0) throw InvalidParams("compactness must be >= 0");
    if (max_iters < 1) throw InvalidParams("max_iters must be >= 1");
    if (min_cell_count < 1) throw InvalidParams("min_cell_count must be >= 1");
  }
};

// Connected cluster of cells with per-layer statistics. mean_p averages
// member probabilities; var_l is the population variance in logit space.
struct Supercell {
  int id = 0;
  std::vector<GridIndex> members;  // row-major order
  double centroid_x = 0.0;         // cell coordinates
  double centroid_y = 0.0;
  std::vector<double> mean_p;
  std::vector<double> var_l;
};

struct Segmentation {
  GridSpec spec;
  std::vector<std::uint32_t> labels;  // row-major supercell ids
  std::vector<Supercell> supercells;

  std::uint32_t label_at(GridIndex i) const { return labels[spec.flat(i)]; }
};

// Per-cell logit variance over a 3x3 window, summed across layers. The
// sampling weight behind variance-driven seeding.
inline std::vector<double> local_logit_variance(const SemanticGrid& grid) {
  const auto& spec = grid.spec();
  std::vector<double> variance(spec.cell_count(), 0.0);
  for (int n = 0; n < grid.layer_count(); ++n) {
    const auto cells = grid.log_odds_layer(n);
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        double sum = 0.0, sum_sq = 0.0;
        int count = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const GridIndex p{x + dx, y + dy};
            if (!spec.contains(p)) continue;
            const double l = cells[spec.flat(p)];
            sum += l;
            sum_sq += l * l;
            ++count;
          }
        }
        const double mean = sum / count;
        variance[spec.flat(GridIndex{x, y})] +=
            std::max(0.0, sum_sq / count - mean * mean);
      }
    }
  }
  return variance;
}

// Draws k distinct cells with probability proportional to local variance,
// mixed with a 10% uniform floor so flat maps still seed everywhere.
inline std::vector<GridIndex> seed_variance_driven(const SemanticGrid& grid, int k,
                                                   std::uint64_t rng_seed) {
  const auto& spec = grid.spec();
  const std::size_t cells = spec.cell_count();
  if (k < 1) throw InvalidParams("seed count must be >= 1");
  if (static_cast<std::size_t>(k) > cells)
    throw InvalidParams("seed count exceeds cell count");

  const auto variance = local_logit_variance(grid);
  double total_var = 0.0;
  for (const double v : variance) total_var += v;

  std::vector<double> weight(cells);
  const double uniform_part = 0.1 / static_cast<double>(cells);
  for (std::size_t i = 0; i < cells; ++i)
    weight[i] = total_var > 0.0 ? 0.9 * variance[i] / total_var + uniform_part
                                : 1.0 / static_cast<double>(cells);

  // Sequential weighted sampling without replacement.
  Rng rng(rng_seed);
  std::vector<GridIndex> seeds;
  seeds.reserve(k);
  double remaining = 0.0;
  for (const double w : weight) remaining += w;
  for (int drawn = 0; drawn < k; ++drawn) {
    const double target = rng.uniform() * remaining;
    double acc = 0.0;
    std::size_t chosen = cells;
    for (std::size_t i = 0; i < cells; ++i) {
      if (weight[i] <= 0.0) continue;
      acc += weight[i];
      if (acc >= target) {
        chosen = i;
        break;
      }
    }
    if (chosen == cells) {  // numerical tail: take the last positive weight
      for (std::size_t i = cells; i-- > 0;)
        if (weight[i] > 0.0) {
          chosen = i;
          break;
        }
    }
    seeds.push_back(GridIndex{static_cast<int>(chosen % spec.width),
                              static_cast<int>(chosen / spec.width)});
    remaining -= weight[chosen];
    weight[chosen] = 0.0;
  }
  return seeds;
}

namespace detail {

// Rebuilds per-supercell statistics from a complete label array. Labels are
// re-compacted in row-major first-occurrence order.
inline Segmentation build_segmentation(const SemanticGrid& grid,
                                       std::vector<std::uint32_t> labels) {
  const auto& spec = grid.spec();
  const int layers = grid.layer_count();

  std::vector<std::uint32_t> compact(labels.size());
  {
    std::vector<std::int64_t> seen_at(
        1 + *std::max_element(labels.begin(), labels.end()), -1);
    std::uint32_t next = 0;
    for (std::size_t f = 0; f < labels.size(); ++f) {
      auto& slot = seen_at[labels[f]];
      if (slot < 0) slot = next++;
      compact[f] = static_cast<std::uint32_t>(slot);
    }
  }

  Segmentation seg;
  seg.spec = spec;
  seg.labels = std::move(compact);
  const std::uint32_t count = 1 + *std::max_element(seg.labels.begin(), seg.labels.end());
  seg.supercells.resize(count);
  for (std::uint32_t id = 0; id < count; ++id) {
    seg.supercells[id].id = static_cast<int>(id);
    seg.supercells[id].mean_p.assign(layers, 0.0);
    seg.supercells[id].var_l.assign(layers, 0.0);
  }

  std::vector<std::vector<double>> sum_l(count, std::vector<double>(layers, 0.0));
  std::vector<std::vector<double>> sum_l2(count, std::vector<double>(layers, 0.0));
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const GridIndex idx{x, y};
      const std::size_t f = spec.flat(idx);
      auto& sc = seg.supercells[seg.labels[f]];
      sc.members.push_back(idx);
      sc.centroid_x += x;
      sc.centroid_y += y;
      for (int n = 0; n < layers; ++n) {
        const double l = grid.log_odds_layer(n)[f];
        sc.mean_p[n] += inverse_logit(l);
        sum_l[seg.labels[f]][n] += l;
        sum_l2[seg.labels[f]][n] += l * l;
      }
    }
  }
  for (std::uint32_t id = 0; id < count; ++id) {
    auto& sc = seg.supercells[id];
    const double m = static_cast<double>(sc.members.size());
    sc.centroid_x /= m;
    sc.centroid_y /= m;
    for (int n = 0; n < layers; ++n) {
      sc.mean_p[n] /= m;
      const double mean_l = sum_l[id][n] / m;
      sc.var_l[n] = std::max(0.0, sum_l2[id][n] / m - mean_l * mean_l);
    }
  }
  return seg;
}

}  // namespace detail

// Splits every label into 4-connected components and merges fragments
// smaller than min_cell_count into the adjacent component with the closest
// mean logit vector. Ids are re-compacted in row-major scan order.
inline Segmentation enforce_connectivity(const SemanticGrid& grid,
                                         const std::vector<std::uint32_t>& labels,
                                         int min_cell_count) {
  const auto& spec = grid.spec();
  const int layers = grid.layer_count();
  const std::size_t cells = spec.cell_count();

  // Connected components of equal label, in row-major discovery order.
  std::vector<std::int32_t> comp(cells, -1);
  std::vector<std::int64_t> comp_size;
  std::vector<std::vector<double>> comp_sum_l;
  std::int32_t next_comp = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < cells; ++start) {
    if (comp[start] >= 0) continue;
    const std::uint32_t label = labels[start];
    const std::int32_t c = next_comp++;
    comp_size.push_back(0);
    comp_sum_l.emplace_back(layers, 0.0);
    stack.assign(1, start);
    comp[start] = c;
    while (!stack.empty()) {
      const std::size_t f = stack.back();
      stack.pop_back();
      ++comp_size[c];
      for (int n = 0; n < layers; ++n) comp_sum_l[c][n] += grid.log_odds_layer(n)[f];
      const int x = static_cast<int>(f % spec.width);
      const int y = static_cast<int>(f / spec.width);
      const GridIndex neighbors[4] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& nb : neighbors) {
        if (!spec.contains(nb)) continue;
        const std::size_t nf = spec.flat(nb);
        if (comp[nf] < 0 && labels[nf] == label) {
          comp[nf] = c;
          stack.push_back(nf);
        }
      }
    }
  }

  // Union-find over components; fragments get absorbed by merging.
  std::vector<std::int32_t> parent(next_comp);
  for (std::int32_t c = 0; c < next_comp; ++c) parent[c] = c;
  const auto find = [&](std::int32_t c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };

  auto mean_of = [&](std::int32_t root, int n) {
    return comp_sum_l[root][n] / static_cast<double>(comp_size[root]);
  };

  while (true) {
    // Smallest undersized root; ties resolved toward the lower component id
    // (discovery order) for determinism.
    std::int32_t victim = -1;
    for (std::int32_t c = 0; c < next_comp; ++c) {
      if (find(c) != c) continue;
      if (comp_size[c] >= min_cell_count) continue;
      if (victim < 0 || comp_size[c] < comp_size[victim]) victim = c;
    }
    if (victim < 0) break;

    // Adjacent root with the closest mean logit vector.
    std::int32_t best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < cells; ++f) {
      if (find(comp[f]) != victim) continue;
      const int x = static_cast<int>(f % spec.width);
      const int y = static_cast<int>(f / spec.width);
      const GridIndex neighbors[4] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& nb : neighbors) {
        if (!spec.contains(nb)) continue;
        const std::int32_t other = find(comp[spec.flat(nb)]);
        if (other == victim) continue;
        double d = 0.0;
        for (int n = 0; n < layers; ++n) {
          const double diff = mean_of(other, n) - mean_of(victim, n);
          d += diff * diff;
        }
        if (d < best_dist || (d == best_dist && other < best)) {
          best_dist = d;
          best = other;
        }
      }
    }
    if (best < 0) break;  // isolated fragment spans the whole grid; keep it

    const std::int32_t keep = std::min(victim, best);
    const std::int32_t drop = std::max(victim, best);
    parent[drop] = keep;
    comp_size[keep] += comp_size[drop];
    for (int n = 0; n < layers; ++n) comp_sum_l[keep][n] += comp_sum_l[drop][n];
  }

  std::vector<std::uint32_t> merged(cells);
  for (std::size_t f = 0; f < cells; ++f)
    merged[f] = static_cast<std::uint32_t>(find(comp[f]));
  return detail::build_segmentation(grid, std::move(merged));
}

inline Segmentation enforce_connectivity(const SemanticGrid& grid, const Segmentation& seg,
                                         int min_cell_count) {
  return enforce_connectivity(grid, seg.labels, min_cell_count);
}

// Local iterative clustering in the joint feature space
// (x*compactness/S, y*compactness/S, logit(P_1), ..., logit(P_N)) with
// S = sqrt(width*height/num_seeds). Seeds come from variance-driven
// sampling; the result partitions the grid into connected supercells.
inline Segmentation extract_supercells(const SemanticGrid& grid,
                                       const SegmentationParams& params) {
  const auto& spec = grid.spec();
  params.validate(spec);
  const int layers = grid.layer_count();
  const std::size_t cells = spec.cell_count();

  const double s_norm = std::sqrt(static_cast<double>(cells) / params.num_seeds);
  const double spatial_scale = params.compactness / s_norm;
  const int window = std::max(1, static_cast<int>(std::ceil(2.0 * s_norm)));

  auto seeds = seed_variance_driven(grid, params.num_seeds, params.rng_seed);

  // Nudge each seed to the lowest-variance cell in its 3x3 neighborhood so
  // centroids start inside homogeneous regions instead of on boundaries.
  // Occupied cells are skipped; ties go to the lower flat index.
  {
    const auto variance = local_logit_variance(grid);
    std::vector<char> taken(cells, 0);
    for (const auto& s : seeds) taken[spec.flat(s)] = 1;
    for (auto& s : seeds) {
      GridIndex best = s;
      double best_var = variance[spec.flat(s)];
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const GridIndex cand{s.x + dx, s.y + dy};
          if (!spec.contains(cand) || (taken[spec.flat(cand)] && !(cand == s))) continue;
          if (variance[spec.flat(cand)] < best_var) {
            best_var = variance[spec.flat(cand)];
            best = cand;
          }
        }
      taken[spec.flat(s)] = 0;
      taken[spec.flat(best)] = 1;
      s = best;
    }
  }

  struct Centroid {
    double x, y;
    std::vector<double> logits;
  };
  std::vector<Centroid> centroids;
  centroids.reserve(seeds.size());
  for (const auto& s : seeds)
    centroids.push_back(Centroid{static_cast<double>(s.x), static_cast<double>(s.y),
                                 grid.logit_vector(s)});

  std::vector<std::uint32_t> labels(cells, 0);
  std::vector<std::uint32_t> prev_labels;
  std::vector<double> best_dist(cells);

  for (int iter = 0; iter < params.max_iters; ++iter) {
    std::fill(best_dist.begin(), best_dist.end(),
              std::numeric_limits<double>::infinity());

    // Assignment within a 2*S window around each centroid; centroid order is
    // ascending id and improvement is strict, so ties go to the lower id.
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const auto& ct = centroids[c];
      const int x_lo = std::max(0, static_cast<int>(std::floor(ct.x)) - window);
      const int x_hi = std::min(spec.width - 1, static_cast<int>(std::ceil(ct.x)) + window);
      const int y_lo = std::max(0, static_cast<int>(std::floor(ct.y)) - window);
      const int y_hi = std::min(spec.height - 1, static_cast<int>(std::ceil(ct.y)) + window);
      for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
          const std::size_t f = spec.flat(GridIndex{x, y});
          const double dx = (x - ct.x) * spatial_scale;
          const double dy = (y - ct.y) * spatial_scale;
          double d = dx * dx + dy * dy;
          for (int n = 0; n < layers; ++n) {
            const double dl = grid.log_odds_layer(n)[f] - ct.logits[n];
            d += dl * dl;
          }
          if (d < best_dist[f]) {
            best_dist[f] = d;
            labels[f] = static_cast<std::uint32_t>(c);
          }
        }
      }
    }

    // Cells outside every window fall back to a global nearest-centroid scan.
    for (std::size_t f = 0; f < cells; ++f) {
      if (std::isfinite(best_dist[f])) continue;
      const int x = static_cast<int>(f % spec.width);
      const int y = static_cast<int>(f / spec.width);
      for (std::size_t c = 0; c < centroids.size(); ++c) {
        const auto& ct = centroids[c];
        const double dx = (x - ct.x) * spatial_scale;
        const double dy = (y - ct.y) * spatial_scale;
        double d = dx * dx + dy * dy;
        for (int n = 0; n < layers; ++n) {
          const double dl = grid.log_odds_layer(n)[f] - ct.logits[n];
          d += dl * dl;
        }
        if (d < best_dist[f]) {
          best_dist[f] = d;
          labels[f] = static_cast<std::uint32_t>(c);
        }
      }
    }

    if (labels == prev_labels) break;
    prev_labels = labels;

    // Centroid update; empty clusters keep their previous position.
    std::vector<double> sum_x(centroids.size(), 0.0), sum_y(centroids.size(), 0.0);
    std::vector<std::int64_t> count(centroids.size(), 0);
    std::vector<std::vector<double>> sum_l(centroids.size(),
                                           std::vector<double>(layers, 0.0));
    for (std::size_t f = 0; f < cells; ++f) {
      const std::uint32_t c = labels[f];
      sum_x[c] += static_cast<double>(f % spec.width);
      sum_y[c] += static_cast<double>(f / spec.width);
      ++count[c];
      for (int n = 0; n < layers; ++n) sum_l[c][n] += grid.log_odds_layer(n)[f];
    }
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (count[c] == 0) continue;
      const double m = static_cast<double>(count[c]);
      centroids[c].x = sum_x[c] / m;
      centroids[c].y = sum_y[c] / m;
      for (int n = 0; n < layers; ++n) centroids[c].logits[n] = sum_l[c][n] / m;
    }
  }

  // Fragment threshold follows the usual superpixel convention (a quarter
  // of the expected supercell area), never below the configured floor.
  const int fragment_floor = std::max(
      params.min_cell_count,
      static_cast<int>(static_cast<double>(cells) / (4.0 * params.num_seeds)));
  return enforce_connectivity(grid, labels, fragment_floor);
}

// Fraction of reference boundaries (4-adjacent cell pairs with different
// reference labels) that are also boundaries in the predicted labelling.
template <typename RefLabel, typename PredLabel>
double boundary_recall(const GridSpec& spec, const std::vector<RefLabel>& reference,
                       const std::vector<PredLabel>& predicted) {
  std::int64_t boundaries = 0, recovered = 0;
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) {
      const std::size_t f = spec.flat(GridIndex{x, y});
      for (const GridIndex nb : {GridIndex{x + 1, y}, GridIndex{x, y + 1}}) {
        if (!spec.contains(nb)) continue;
        const std::size_t g = spec.flat(nb);
        if (reference[f] == reference[g]) continue;
        ++boundaries;
        if (predicted[f] != predicted[g]) ++recovered;
      }
    }
  return boundaries == 0 ? 1.0
                         : static_cast<double>(recovered) / static_cast<double>(boundaries);
}

// Topometric reduction: one point per supercell at its centroid (world
// coordinates), carrying mean_p. Shape information is discarded.
struct PointCloudMap {
  struct Point {
    double x = 0.0;
    double y = 0.0;
    std::vector<double> mean_p;
  };
  std::vector<Point> points;
};

inline PointCloudMap to_point_cloud(const Segmentation& seg) {
  PointCloudMap pc;
  pc.points.reserve(seg.supercells.size());
  for (const auto& sc : seg.supercells) {
    PointCloudMap::Point p;
    p.x = seg.spec.origin_x + (sc.centroid_x + 0.5) * seg.spec.resolution;
    p.y = seg.spec.origin_y + (sc.centroid_y + 0.5) * seg.spec.resolution;
    p.mean_p = sc.mean_p;
    pc.points.push_back(std::move(p));
  }
  return pc;
}

}  // namespace sogm
