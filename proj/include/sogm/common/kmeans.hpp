#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/common/rng.hpp"

namespace sogm {

struct KMeansResult {
  std::vector<std::vector<double>> centers;  // k x dim
  std::vector<int> assignment;               // per point, ties to lower index
  double inertia = 0.0;
  std::vector<double> inertia_trace;  // per Lloyd iteration, non-increasing
};

namespace detail {
inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}
}  // namespace detail

// Seeded k-means++ followed by Lloyd iterations. Deterministic for a fixed
// seed; empty clusters are re-seeded to the farthest point.
inline KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                           std::uint64_t seed, int max_iters = 100) {
  if (k < 1) throw InvalidParams("k must be >= 1");
  if (points.empty() || static_cast<std::size_t>(k) > points.size())
    throw InvalidParams("k exceeds number of points");
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw DimensionError("inconsistent point dimensions");

  Rng rng(seed);
  KMeansResult res;
  res.centers.reserve(k);

  // k-means++ seeding.
  res.centers.push_back(points[rng.uniform_index(points.size())]);
  std::vector<double> d2(points.size(), std::numeric_limits<double>::infinity());
  while (res.centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], detail::sq_dist(points[i], res.centers.back()));
      total += d2[i];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
        chosen = i;
      }
    } else {
      chosen = rng.uniform_index(points.size());  // all points identical
    }
    res.centers.push_back(points[chosen]);
  }

  res.assignment.assign(points.size(), 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    // Assignment; centers scanned in ascending index so ties go low.
    double inertia = 0.0;
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = detail::sq_dist(points[i], res.centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
      inertia += best_d;
    }
    res.inertia_trace.push_back(inertia);
    res.inertia = inertia;
    if (!changed && iter > 0) break;

    // Update.
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::int64_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      ++counts[res.assignment[i]];
      for (std::size_t d = 0; d < dim; ++d) sums[res.assignment[i]][d] += points[i][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed to the point farthest from its center.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double d = detail::sq_dist(points[i], res.centers[res.assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        res.centers[c] = points[far];
        continue;
      }
      for (std::size_t d = 0; d < dim; ++d)
        res.centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
  }
  return res;
}

}  // namespace sogm
