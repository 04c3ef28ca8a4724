#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/common/kmeans.hpp"
#include "sogm/common/rng.hpp"

namespace sogm {

// Predicts the most frequent training class for every frame; frequency ties
// go to the lexicographically smaller class name.
class MajorityClassifier {
 public:
  static MajorityClassifier fit(const std::vector<std::string>& train_labels) {
    if (train_labels.empty()) throw InvalidParams("empty training labels");
    std::map<std::string, std::int64_t> counts;
    for (const auto& l : train_labels) ++counts[l];
    MajorityClassifier clf;
    std::int64_t best = -1;
    for (const auto& [label, count] : counts)
      if (count > best) {
        best = count;
        clf.label_ = label;
      }
    return clf;
  }

  const std::string& label() const { return label_; }

  std::vector<std::string> predict(const std::vector<std::vector<double>>& frames) const {
    return std::vector<std::string>(frames.size(), label_);
  }

 private:
  std::string label_;
};

// I.i.d. draws from the empirical training label distribution.
class RandomClassifier {
 public:
  static RandomClassifier fit(const std::vector<std::string>& train_labels,
                              std::uint64_t seed) {
    if (train_labels.empty()) throw InvalidParams("empty training labels");
    std::map<std::string, std::int64_t> counts;
    for (const auto& l : train_labels) ++counts[l];
    RandomClassifier clf(seed);
    for (const auto& [label, count] : counts) {
      clf.labels_.push_back(label);
      clf.cumulative_.push_back(static_cast<double>(count) +
                                (clf.cumulative_.empty() ? 0.0 : clf.cumulative_.back()));
    }
    for (double& c : clf.cumulative_) c /= static_cast<double>(train_labels.size());
    return clf;
  }

  std::vector<std::string> predict(const std::vector<std::vector<double>>& frames) {
    std::vector<std::string> out;
    out.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const double u = rng_.uniform();
      std::size_t pick = labels_.size() - 1;
      for (std::size_t c = 0; c < cumulative_.size(); ++c)
        if (u < cumulative_[c]) {
          pick = c;
          break;
        }
      out.push_back(labels_[pick]);
    }
    return out;
  }

 private:
  explicit RandomClassifier(std::uint64_t seed) : rng_(seed) {}
  Rng rng_;
  std::vector<std::string> labels_;
  std::vector<double> cumulative_;
};

// Seeded k-means++ over training frames; each cluster is mapped to its
// majority training label and prediction returns the nearest centroid's
// label (ties toward the lower centroid index).
class KMeansClassifier {
 public:
  static KMeansClassifier fit(const std::vector<std::vector<double>>& train_frames,
                              const std::vector<std::string>& train_labels, int k,
                              std::uint64_t seed) {
    if (train_frames.empty()) throw InvalidParams("empty training data");
    if (train_frames.size() != train_labels.size())
      throw InvalidParams("frames and labels differ in length");
    std::vector<std::string> distinct(train_labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (k < static_cast<int>(distinct.size()))
      throw InvalidParams("k must be >= number of classes");
    if (static_cast<std::size_t>(k) > train_frames.size())
      throw InvalidParams("k exceeds number of training frames");

    KMeansClassifier clf;
    const auto km = kmeans(train_frames, k, seed);
    clf.centers_ = km.centers;
    clf.inertia_trace_ = km.inertia_trace;

    // Majority label per cluster; empty clusters fall back to the overall
    // majority. Ties go to the lexicographically smaller name.
    std::map<std::string, std::int64_t> overall;
    for (const auto& l : train_labels) ++overall[l];
    std::string overall_major;
    std::int64_t best = -1;
    for (const auto& [label, count] : overall)
      if (count > best) {
        best = count;
        overall_major = label;
      }
    clf.cluster_labels_.assign(k, overall_major);
    for (int c = 0; c < k; ++c) {
      std::map<std::string, std::int64_t> counts;
      for (std::size_t i = 0; i < train_frames.size(); ++i)
        if (km.assignment[i] == c) ++counts[train_labels[i]];
      std::int64_t cluster_best = -1;
      for (const auto& [label, count] : counts)
        if (count > cluster_best) {
          cluster_best = count;
          clf.cluster_labels_[c] = label;
        }
    }
    return clf;
  }

  std::vector<std::string> predict(const std::vector<std::vector<double>>& frames) const {
    std::vector<std::string> out;
    out.reserve(frames.size());
    for (const auto& f : frames) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers_.size(); ++c) {
        const double d = detail::sq_dist(f, centers_[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      out.push_back(cluster_labels_[best]);
    }
    return out;
  }

  const std::vector<double>& inertia_trace() const { return inertia_trace_; }
  const std::vector<std::vector<double>>& centers() const { return centers_; }

 private:
  std::vector<std::vector<double>> centers_;
  std::vector<std::string> cluster_labels_;
  std::vector<double> inertia_trace_;
};

}  // namespace sogm
