#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/hmm/model.hpp"

namespace sogm {

struct ForwardBackwardResult {
  double log_likelihood = 0.0;
  std::vector<std::vector<double>> gamma;            // T x S, rows sum to 1
  std::vector<std::vector<std::vector<double>>> xi;  // (T-1) x S x S
};

// The recursions run entirely in log domain. Sequences whose probability
// underflows any linear scale still train (mismatched states under a
// floored variance produce log-densities around -1e6, which stay finite
// here), at the cost of a log-sum-exp per transition.

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double lse2_acc(double acc, double term) {
  if (term == kNegInf) return acc;
  if (acc == kNegInf) return term;
  const double hi = std::max(acc, term);
  return hi + std::log1p(std::exp(std::min(acc, term) - hi));
}

struct LogModelView {
  std::vector<std::vector<double>> log_b;  // T x S
  std::vector<std::vector<double>> log_a;  // S x S, -inf where masked/zero
  std::vector<double> log_pi;
};

inline LogModelView log_view(const PropertyModel& model, const ObservationSequence& obs) {
  const int T = obs.length();
  const int S = model.num_states;
  LogModelView v;
  v.log_b.assign(T, std::vector<double>(S));
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s)
      v.log_b[t][s] = emission_logpdf(model.emissions[s], obs.frames[t]);
  v.log_a.assign(S, std::vector<double>(S, kNegInf));
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j)
      if (model.topology_mask[i][j] && model.transition[i][j] > 0.0)
        v.log_a[i][j] = std::log(model.transition[i][j]);
  v.log_pi.assign(S, kNegInf);
  for (int s = 0; s < S; ++s)
    if (model.start[s] > 0.0) v.log_pi[s] = std::log(model.start[s]);
  return v;
}

struct LogForward {
  std::vector<std::vector<double>> log_alpha;  // T x S
  double log_likelihood = kNegInf;
};

inline LogForward log_forward(const LogModelView& v) {
  const int T = static_cast<int>(v.log_b.size());
  const int S = static_cast<int>(v.log_pi.size());
  LogForward f;
  f.log_alpha.assign(T, std::vector<double>(S, kNegInf));
  for (int s = 0; s < S; ++s) f.log_alpha[0][s] = v.log_pi[s] + v.log_b[0][s];
  for (int t = 1; t < T; ++t)
    for (int j = 0; j < S; ++j) {
      double acc = kNegInf;
      for (int i = 0; i < S; ++i) {
        if (v.log_a[i][j] == kNegInf || f.log_alpha[t - 1][i] == kNegInf) continue;
        acc = lse2_acc(acc, f.log_alpha[t - 1][i] + v.log_a[i][j]);
      }
      if (acc != kNegInf) f.log_alpha[t][j] = acc + v.log_b[t][j];
    }
  double total = kNegInf;
  for (int s = 0; s < S; ++s) total = lse2_acc(total, f.log_alpha[T - 1][s]);
  f.log_likelihood = total;
  if (!std::isfinite(total))
    throw NumericalFailure("sequence has no admissible state path");
  return f;
}

}  // namespace detail

// Forward log-likelihood only; cheaper than the full posterior pass.
inline double log_likelihood(const PropertyModel& model, const ObservationSequence& obs) {
  if (obs.length() == 0) throw EmptySequence("empty observation sequence");
  return detail::log_forward(detail::log_view(model, obs)).log_likelihood;
}

inline ForwardBackwardResult forward_backward(const PropertyModel& model,
                                              const ObservationSequence& obs) {
  if (obs.length() == 0) throw EmptySequence("empty observation sequence");
  const int T = obs.length();
  const int S = model.num_states;
  const auto v = detail::log_view(model, obs);
  const auto f = detail::log_forward(v);

  std::vector<std::vector<double>> log_beta(T, std::vector<double>(S, detail::kNegInf));
  for (int s = 0; s < S; ++s) log_beta[T - 1][s] = 0.0;
  for (int t = T - 2; t >= 0; --t)
    for (int i = 0; i < S; ++i) {
      double acc = detail::kNegInf;
      for (int j = 0; j < S; ++j) {
        if (v.log_a[i][j] == detail::kNegInf || log_beta[t + 1][j] == detail::kNegInf)
          continue;
        acc = detail::lse2_acc(acc, v.log_a[i][j] + v.log_b[t + 1][j] + log_beta[t + 1][j]);
      }
      log_beta[t][i] = acc;
    }

  ForwardBackwardResult res;
  res.log_likelihood = f.log_likelihood;
  res.gamma.assign(T, std::vector<double>(S, 0.0));
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s) {
      const double lg = f.log_alpha[t][s] + log_beta[t][s] - f.log_likelihood;
      res.gamma[t][s] = lg == detail::kNegInf ? 0.0 : std::exp(lg);
    }

  res.xi.assign(T - 1, std::vector<std::vector<double>>(S, std::vector<double>(S, 0.0)));
  for (int t = 0; t + 1 < T; ++t)
    for (int i = 0; i < S; ++i) {
      if (f.log_alpha[t][i] == detail::kNegInf) continue;
      for (int j = 0; j < S; ++j) {
        if (v.log_a[i][j] == detail::kNegInf || log_beta[t + 1][j] == detail::kNegInf)
          continue;
        res.xi[t][i][j] = std::exp(f.log_alpha[t][i] + v.log_a[i][j] + v.log_b[t + 1][j] +
                                   log_beta[t + 1][j] - f.log_likelihood);
      }
    }
  return res;
}

}  // namespace sogm
