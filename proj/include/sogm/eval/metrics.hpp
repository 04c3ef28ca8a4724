#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/common/log.hpp"

namespace sogm {

struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<std::int64_t>> counts;  // rows = truth, cols = predicted

  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& row : counts)
      for (const auto c : row) t += c;
    return t;
  }
};

namespace detail {
inline int class_index_of(const std::vector<std::string>& classes, const std::string& label) {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == label) return static_cast<int>(i);
  throw InvalidParams("label '" + label + "' not in class list");
}
}  // namespace detail

inline ConfusionMatrix confusion(const std::vector<std::string>& truth,
                                 const std::vector<std::string>& predictions,
                                 const std::vector<std::string>& classes) {
  if (truth.size() != predictions.size())
    throw InvalidParams("truth and predictions differ in length");
  ConfusionMatrix cm;
  cm.classes = classes;
  cm.counts.assign(classes.size(), std::vector<std::int64_t>(classes.size(), 0));
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++cm.counts[detail::class_index_of(classes, truth[i])]
                [detail::class_index_of(classes, predictions[i])];
  return cm;
}

// Per-class F1 = 2PR/(P+R). A class absent from both truth and predictions
// scores 0 and logs a warning.
inline std::vector<double> per_class_f1(const ConfusionMatrix& cm) {
  const std::size_t C = cm.classes.size();
  std::vector<double> f1(C, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    std::int64_t tp = cm.counts[c][c], fp = 0, fn = 0;
    for (std::size_t o = 0; o < C; ++o) {
      if (o == c) continue;
      fp += cm.counts[o][c];
      fn += cm.counts[c][o];
    }
    if (tp + fp + fn == 0) {
      log_warn("class '" + cm.classes[c] + "' absent from truth and predictions; F1 = 0");
      continue;
    }
    const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    f1[c] = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return f1;
}

// Unweighted mean of per-class F1.
inline double macro_f1(const ConfusionMatrix& cm) {
  if (cm.classes.empty()) throw InvalidParams("no classes");
  const auto f1 = per_class_f1(cm);
  double sum = 0.0;
  for (const double v : f1) sum += v;
  return sum / static_cast<double>(f1.size());
}

inline double macro_f1(const std::vector<std::string>& truth,
                       const std::vector<std::string>& predictions,
                       const std::vector<std::string>& classes) {
  return macro_f1(confusion(truth, predictions, classes));
}

}  // namespace sogm
