#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/hmm/forward_backward.hpp"
#include "sogm/hmm/model.hpp"

namespace sogm {

// Joint log-probability of property-labelled segments: per segment the
// discrete property prior plus the sequence likelihood under that
// property's sub-model.
inline double joint_logprob(const HierarchicalModel& hmodel,
                            const std::vector<ObservationSequence>& segments,
                            const std::vector<std::string>& properties) {
  if (segments.empty()) throw InvalidParams("need at least one segment");
  if (segments.size() != properties.size())
    throw InvalidParams("segments and properties differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const int w = hmodel.class_index(properties[i]);
    const double p = hmodel.prior[w];
    total += p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    total += log_likelihood(hmodel.submodels[w], segments[i]);
  }
  return total;
}

struct DecodeConfig {
  int min_segment_len = 3;
};

struct DecodedPath {
  std::vector<std::string> labels;              // per frame
  std::vector<std::pair<int, int>> segments;    // [begin, end) frame ranges
  std::vector<int> segment_classes;             // class index per segment
  double log_probability = 0.0;
};

// Partitions the sequence into contiguous segments and assigns each the
// class maximizing log P(w) + Viterbi log-probability under that class's
// sub-model. Segment boundaries come from first-order dynamic programming
// with a minimum segment length; a sequence shorter than the minimum
// becomes a single segment.
inline DecodedPath decode_path(const HierarchicalModel& hmodel,
                               const ObservationSequence& obs,
                               const DecodeConfig& config = {}) {
  const int T = obs.length();
  if (T == 0) throw EmptySequence("empty observation sequence");
  if (config.min_segment_len < 1) throw InvalidParams("min_segment_len must be >= 1");
  const int C = static_cast<int>(hmodel.classes.size());
  if (C == 0) throw InvalidParams("hierarchical model has no classes");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  // Per-class emission and transition logs.
  std::vector<std::vector<std::vector<double>>> log_b(C);  // C x T x S_w
  std::vector<std::vector<std::vector<double>>> log_a(C);
  std::vector<double> log_prior(C);
  for (int w = 0; w < C; ++w) {
    const auto& m = hmodel.submodels[w];
    log_prior[w] = hmodel.prior[w] > 0.0 ? std::log(hmodel.prior[w]) : kNegInf;
    log_b[w].assign(T, std::vector<double>(m.num_states, 0.0));
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < m.num_states; ++s)
        log_b[w][t][s] = emission_logpdf(m.emissions[s], obs.frames[t]);
    log_a[w].assign(m.num_states, std::vector<double>(m.num_states, kNegInf));
    for (int i = 0; i < m.num_states; ++i)
      for (int j = 0; j < m.num_states; ++j)
        if (m.topology_mask[i][j] && m.transition[i][j] > 0.0)
          log_a[w][i][j] = std::log(m.transition[i][j]);
  }

  // score[s][t]: best class score for segment [s, t); filled by extending a
  // per-class Viterbi column frame by frame from each start.
  std::vector<std::vector<double>> score(T, std::vector<double>(T + 1, kNegInf));
  std::vector<std::vector<int>> seg_class(T, std::vector<int>(T + 1, -1));
  std::vector<std::vector<double>> delta(C);
  std::vector<double> next;
  for (int s = 0; s < T; ++s) {
    for (int w = 0; w < C; ++w) {
      const auto& m = hmodel.submodels[w];
      delta[w].assign(m.num_states, kNegInf);
      for (int j = 0; j < m.num_states; ++j)
        if (m.start[j] > 0.0)
          delta[w][j] = std::log(m.start[j]) + log_b[w][s][j];
    }
    for (int t = s + 1; t <= T; ++t) {
      for (int w = 0; w < C; ++w) {
        double best = kNegInf;
        for (const double v : delta[w]) best = std::max(best, v);
        const double cand = log_prior[w] + best;
        if (cand > score[s][t]) {
          score[s][t] = cand;
          seg_class[s][t] = w;
        }
      }
      if (t == T) break;
      for (int w = 0; w < C; ++w) {
        const auto& m = hmodel.submodels[w];
        next.assign(m.num_states, kNegInf);
        for (int j = 0; j < m.num_states; ++j) {
          double best = kNegInf;
          for (int i = 0; i < m.num_states; ++i) {
            if (delta[w][i] == kNegInf || log_a[w][i][j] == kNegInf) continue;
            const double v = delta[w][i] + log_a[w][i][j];
            if (v > best) best = v;
          }
          if (best != kNegInf) next[j] = best + log_b[w][t][j];
        }
        delta[w] = next;
      }
    }
  }

  DecodedPath out;
  if (T < config.min_segment_len) {
    out.segments.emplace_back(0, T);
    out.segment_classes.push_back(seg_class[0][T]);
    out.log_probability = score[0][T];
  } else {
    // Boundary DP over admissible segment ends.
    std::vector<double> dp(T + 1, kNegInf);
    std::vector<int> from(T + 1, -1);
    dp[0] = 0.0;
    for (int t = config.min_segment_len; t <= T; ++t)
      for (int s = 0; s + config.min_segment_len <= t; ++s) {
        if (dp[s] == kNegInf) continue;
        const double cand = dp[s] + score[s][t];
        if (cand > dp[t]) {
          dp[t] = cand;
          from[t] = s;
        }
      }
    out.log_probability = dp[T];
    int t = T;
    std::vector<std::pair<int, int>> rev;
    while (t > 0) {
      const int s = from[t];
      rev.emplace_back(s, t);
      t = s;
    }
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      out.segments.push_back(*it);
      out.segment_classes.push_back(seg_class[it->first][it->second]);
    }
  }

  // Merge adjacent segments that landed on the same class.
  {
    std::vector<std::pair<int, int>> merged;
    std::vector<int> merged_classes;
    for (std::size_t i = 0; i < out.segments.size(); ++i) {
      if (!merged.empty() && merged_classes.back() == out.segment_classes[i]) {
        merged.back().second = out.segments[i].second;
        continue;
      }
      merged.push_back(out.segments[i]);
      merged_classes.push_back(out.segment_classes[i]);
    }
    out.segments = std::move(merged);
    out.segment_classes = std::move(merged_classes);
  }

  out.labels.resize(T);
  for (std::size_t i = 0; i < out.segments.size(); ++i)
    for (int t = out.segments[i].first; t < out.segments[i].second; ++t)
      out.labels[t] = hmodel.classes[out.segment_classes[i]];
  return out;
}

}  // namespace sogm
