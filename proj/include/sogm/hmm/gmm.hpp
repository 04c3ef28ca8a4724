#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"

namespace sogm {

inline constexpr double kDefaultVarFloor = 1e-4;

// Diagonal-covariance Gaussian mixture over logit-space observation vectors.
struct GmmParams {
  std::vector<double> weights;             // K, sums to 1
  std::vector<std::vector<double>> means;  // K x N
  std::vector<std::vector<double>> vars;   // K x N, >= var floor

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return means.empty() ? 0 : static_cast<int>(means[0].size()); }
};

inline double log_sum_exp(std::span<const double> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (const double v : values) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (const double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

// log N(x; mean, var) for one diagonal component.
inline double component_logpdf(std::span<const double> mean, std::span<const double> var,
                               std::span<const double> frame) {
  double lp = 0.0;
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const double d = frame[n] - mean[n];
    lp += -0.5 * (std::log(2.0 * std::numbers::pi * var[n]) + d * d / var[n]);
  }
  return lp;
}

// log sum_k w_k N(frame; mean_k, var_k), log-sum-exp stabilized.
inline double emission_logpdf(const GmmParams& gmm, std::span<const double> frame) {
  if (gmm.components() == 0) throw InvalidParams("empty mixture");
  if (static_cast<int>(frame.size()) != gmm.dim())
    throw DimensionError("frame dimension " + std::to_string(frame.size()) +
                         " does not match mixture dimension " + std::to_string(gmm.dim()));
  std::vector<double> terms(gmm.components());
  for (int k = 0; k < gmm.components(); ++k)
    terms[k] = (gmm.weights[k] > 0.0 ? std::log(gmm.weights[k])
                                     : -std::numeric_limits<double>::infinity()) +
               component_logpdf(gmm.means[k], gmm.vars[k], frame);
  return log_sum_exp(terms);
}

// Per-component log joint (log w_k + log N_k); used by EM responsibilities.
inline void component_log_joint(const GmmParams& gmm, std::span<const double> frame,
                                std::span<double> out) {
  for (int k = 0; k < gmm.components(); ++k)
    out[k] = (gmm.weights[k] > 0.0 ? std::log(gmm.weights[k])
                                   : -std::numeric_limits<double>::infinity()) +
             component_logpdf(gmm.means[k], gmm.vars[k], frame);
}

}  // namespace sogm
