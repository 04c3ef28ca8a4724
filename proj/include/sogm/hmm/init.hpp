#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/common/kmeans.hpp"
#include "sogm/hmm/gmm.hpp"

namespace sogm {

inline constexpr double kDefaultInitVar = 0.1;

// Every state gets a single component at the given mean with isotropic
// variance init_var.
inline std::vector<GmmParams> init_emissions_manual(int num_states,
                                                    std::span<const double> mean,
                                                    double init_var = kDefaultInitVar) {
  if (mean.empty()) throw InvalidParams("manual initialization requires a mean table");
  if (num_states < 1) throw InvalidParams("num_states must be >= 1");
  if (!(init_var > 0.0)) throw InvalidParams("init_var must be > 0");
  GmmParams g;
  g.weights = {1.0};
  g.means = {std::vector<double>(mean.begin(), mean.end())};
  g.vars = {std::vector<double>(mean.size(), init_var)};
  return std::vector<GmmParams>(num_states, g);
}

// Seeded k-means over the pooled frames; state s takes cluster s. With
// K > 1 components per state, each cluster is split again into K
// sub-clusters whose sizes set the mixture weights. Variances come from
// cluster scatter, floored.
inline std::vector<GmmParams> init_emissions_kmeans(
    int num_states, int components, const std::vector<std::vector<double>>& frames,
    double var_floor, std::uint64_t seed) {
  if (num_states < 1) throw InvalidParams("num_states must be >= 1");
  if (components < 1) throw InvalidParams("components must be >= 1");
  if (frames.empty()) throw InvalidParams("k-means initialization requires pooled frames");
  const int N = static_cast<int>(frames[0].size());

  const int k = std::min<int>(num_states, static_cast<int>(frames.size()));
  const auto km = kmeans(frames, k, seed);

  std::vector<GmmParams> out;
  out.reserve(num_states);
  for (int s = 0; s < num_states; ++s) {
    const int cluster = s % k;  // more states than frames: reuse clusters
    std::vector<std::vector<double>> member_frames;
    for (std::size_t i = 0; i < frames.size(); ++i)
      if (km.assignment[i] == cluster) member_frames.push_back(frames[i]);

    GmmParams g;
    if (components == 1 || static_cast<int>(member_frames.size()) < components) {
      g.weights = {1.0};
      g.means = {km.centers[cluster]};
      std::vector<double> var(N, var_floor);
      if (!member_frames.empty()) {
        for (int n = 0; n < N; ++n) {
          double sum_sq = 0.0;
          for (const auto& f : member_frames) {
            const double d = f[n] - km.centers[cluster][n];
            sum_sq += d * d;
          }
          var[n] = std::max(var_floor, sum_sq / static_cast<double>(member_frames.size()));
        }
      }
      g.vars = {std::move(var)};
    } else {
      const auto sub = kmeans(member_frames, components, mix_seed(seed, s + 1));
      std::vector<std::int64_t> counts(components, 0);
      for (const int a : sub.assignment) ++counts[a];
      for (int k2 = 0; k2 < components; ++k2) {
        g.weights.push_back(static_cast<double>(std::max<std::int64_t>(counts[k2], 1)));
        g.means.push_back(sub.centers[k2]);
        std::vector<double> var(N, var_floor);
        for (int n = 0; n < N; ++n) {
          double sum_sq = 0.0;
          std::int64_t m = 0;
          for (std::size_t i = 0; i < member_frames.size(); ++i) {
            if (sub.assignment[i] != k2) continue;
            const double d = member_frames[i][n] - sub.centers[k2][n];
            sum_sq += d * d;
            ++m;
          }
          if (m > 0) var[n] = std::max(var_floor, sum_sq / static_cast<double>(m));
        }
        g.vars.push_back(std::move(var));
      }
      double total = 0.0;
      for (const double w : g.weights) total += w;
      for (double& w : g.weights) w /= total;
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace sogm
