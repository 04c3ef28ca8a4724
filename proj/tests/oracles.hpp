#pragma once

// Independent reference implementations used to freeze expected values.
// These stay brute-force on purpose and must not share code with the
// library paths they check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "sogm/common/rng.hpp"
#include "sogm/core/grid.hpp"
#include "sogm/hmm/model.hpp"

namespace sogm::test {

// Sum over every admissible state path of start * transitions * emissions,
// in log domain. Exponential in T; fine for S <= 4, T <= 8.
inline double enum_forward_loglik(const PropertyModel& model,
                                  const ObservationSequence& obs) {
  const int T = obs.length();
  const int S = model.num_states;
  std::vector<std::vector<double>> logb(T, std::vector<double>(S));
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s)
      logb[t][s] = emission_logpdf(model.emissions[s], obs.frames[t]);

  double max_lp = -std::numeric_limits<double>::infinity();
  std::vector<double> path_lps;
  std::vector<int> path(T, 0);
  while (true) {
    double lp = model.start[path[0]] > 0.0 ? std::log(model.start[path[0]])
                                           : -std::numeric_limits<double>::infinity();
    lp += logb[0][path[0]];
    for (int t = 1; t < T; ++t) {
      const double a = model.transition[path[t - 1]][path[t]];
      lp += a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
      lp += logb[t][path[t]];
    }
    if (std::isfinite(lp)) {
      path_lps.push_back(lp);
      max_lp = std::max(max_lp, lp);
    }
    int pos = T - 1;
    while (pos >= 0 && ++path[pos] == S) path[pos--] = 0;
    if (pos < 0) break;
  }
  double sum = 0.0;
  for (const double lp : path_lps) sum += std::exp(lp - max_lp);
  return max_lp + std::log(sum);
}

// Argmax over every admissible path; ties keep the lexicographically
// smallest path (paths are enumerated in lexicographic order).
inline std::pair<std::vector<int>, double> enum_viterbi(const PropertyModel& model,
                                                        const ObservationSequence& obs) {
  const int T = obs.length();
  const int S = model.num_states;
  std::vector<std::vector<double>> logb(T, std::vector<double>(S));
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s)
      logb[t][s] = emission_logpdf(model.emissions[s], obs.frames[t]);

  std::vector<int> best_path;
  double best_lp = -std::numeric_limits<double>::infinity();
  std::vector<int> path(T, 0);
  while (true) {
    double lp = model.start[path[0]] > 0.0 ? std::log(model.start[path[0]])
                                           : -std::numeric_limits<double>::infinity();
    lp += logb[0][path[0]];
    for (int t = 1; t < T && std::isfinite(lp); ++t) {
      const double a = model.transition[path[t - 1]][path[t]];
      lp += a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
      lp += logb[t][path[t]];
    }
    if (lp > best_lp) {
      best_lp = lp;
      best_path = path;
    }
    int pos = T - 1;
    while (pos >= 0 && ++path[pos] == S) path[pos--] = 0;
    if (pos < 0) break;
  }
  return {best_path, best_lp};
}

// Random Bakis model with unit-scale random means and variances in
// [0.5, 1.5], transition rows perturbed away from uniform.
inline PropertyModel random_bakis_model(Rng& rng, int num_states, int skip, int dim) {
  auto model = make_bakis(num_states, skip, dim);
  for (int s = 0; s < num_states; ++s) {
    for (int n = 0; n < dim; ++n) {
      model.emissions[s].means[0][n] = rng.uniform(-2.0, 2.0);
      model.emissions[s].vars[0][n] = rng.uniform(0.5, 1.5);
    }
    double row = 0.0;
    for (int j = 0; j < num_states; ++j) {
      if (!model.topology_mask[s][j]) continue;
      model.transition[s][j] = rng.uniform(0.2, 1.0);
      row += model.transition[s][j];
    }
    for (int j = 0; j < num_states; ++j) model.transition[s][j] /= row;
  }
  return model;
}

inline ObservationSequence random_sequence(Rng& rng, int length, int dim) {
  ObservationSequence obs;
  for (int t = 0; t < length; ++t) {
    std::vector<double> frame(dim);
    for (int n = 0; n < dim; ++n) frame[n] = rng.uniform(-3.0, 3.0);
    obs.frames.push_back(std::move(frame));
  }
  return obs;
}

// Reference Bresenham: dominant-axis formulation with an integer error
// accumulator, written independently of the library's unified variant.
inline std::vector<GridIndex> reference_bresenham(GridIndex a, GridIndex b) {
  std::vector<GridIndex> cells;
  int dx = b.x - a.x, dy = b.y - a.y;
  const int sx = dx >= 0 ? 1 : -1;
  const int sy = dy >= 0 ? 1 : -1;
  dx = std::abs(dx);
  dy = std::abs(dy);
  if (dx >= dy) {
    int err = 2 * dy - dx;
    int y = a.y;
    for (int i = 0, x = a.x; i <= dx; ++i, x += sx) {
      cells.push_back(GridIndex{x, y});
      if (err > 0) {
        y += sy;
        err -= 2 * dx;
      }
      err += 2 * dy;
    }
  } else {
    int err = 2 * dx - dy;
    int x = a.x;
    for (int i = 0, y = a.y; i <= dy; ++i, y += sy) {
      cells.push_back(GridIndex{x, y});
      if (err > 0) {
        x += sx;
        err -= 2 * dy;
      }
      err += 2 * dx;
    }
  }
  return cells;
}

}  // namespace sogm::test
