#pragma once

#include <algorithm>
#include <cmath>

namespace sogm {

// Probabilities live in [kProbEps, 1 - kProbEps] so their log odds stay
// finite. An unobserved cell is exactly 0.5 (log odds 0).
inline constexpr double kProbEps = 1e-6;

// logit(1 - kProbEps); log-odds values are clamped to +/- this bound.
inline const double kLogOddsMax = std::log((1.0 - kProbEps) / kProbEps);

inline double clamp_probability(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

inline double clamp_log_odds(double l) {
  return std::clamp(l, -kLogOddsMax, kLogOddsMax);
}

// ln(p / (1 - p)). Inputs are clamped, never returns an infinity.
inline double logit(double p) {
  p = clamp_probability(p);
  return std::log(p / (1.0 - p));
}

// Logistic function, inverse of logit.
inline double inverse_logit(double l) { return 1.0 / (1.0 + std::exp(-l)); }

// Bayesian fusion of one observation into a prior: addition in log-odds
// space, clamped to the range corresponding to [kProbEps, 1 - kProbEps].
inline double update_cell(double prior_log_odds, double observation_log_odds) {
  return clamp_log_odds(prior_log_odds + observation_log_odds);
}

}  // namespace sogm
