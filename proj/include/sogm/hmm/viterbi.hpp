#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/hmm/model.hpp"

namespace sogm {

struct ViterbiResult {
  std::vector<int> path;
  double log_probability = 0.0;
};

// Maximum-probability state path under the topology mask, ties broken
// toward the lower state index (candidates are scanned in ascending order
// with strict improvement).
inline ViterbiResult viterbi(const PropertyModel& model, const ObservationSequence& obs) {
  if (obs.length() == 0) throw EmptySequence("empty observation sequence");
  const int T = obs.length();
  const int S = model.num_states;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> log_a(S, std::vector<double>(S, kNegInf));
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j)
      if (model.topology_mask[i][j] && model.transition[i][j] > 0.0)
        log_a[i][j] = std::log(model.transition[i][j]);

  std::vector<std::vector<double>> delta(T, std::vector<double>(S, kNegInf));
  std::vector<std::vector<int>> back(T, std::vector<int>(S, -1));
  for (int s = 0; s < S; ++s)
    if (model.start[s] > 0.0)
      delta[0][s] = std::log(model.start[s]) +
                    emission_logpdf(model.emissions[s], obs.frames[0]);

  for (int t = 1; t < T; ++t)
    for (int j = 0; j < S; ++j) {
      double best = kNegInf;
      int best_i = -1;
      for (int i = 0; i < S; ++i) {
        if (log_a[i][j] == kNegInf || delta[t - 1][i] == kNegInf) continue;
        const double cand = delta[t - 1][i] + log_a[i][j];
        if (cand > best) {
          best = cand;
          best_i = i;
        }
      }
      if (best_i < 0) continue;
      delta[t][j] = best + emission_logpdf(model.emissions[j], obs.frames[t]);
      back[t][j] = best_i;
    }

  int end = -1;
  double best = kNegInf;
  for (int s = 0; s < S; ++s)
    if (delta[T - 1][s] > best) {
      best = delta[T - 1][s];
      end = s;
    }
  if (end < 0) throw NumericalFailure("no admissible state path");

  ViterbiResult res;
  res.log_probability = best;
  res.path.assign(T, 0);
  res.path[T - 1] = end;
  for (int t = T - 1; t > 0; --t) res.path[t - 1] = back[t][res.path[t]];
  return res;
}

}  // namespace sogm
