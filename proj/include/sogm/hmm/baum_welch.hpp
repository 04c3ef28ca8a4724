#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/hmm/forward_backward.hpp"
#include "sogm/hmm/model.hpp"

namespace sogm {

struct TrainingConfig {
  int max_iters = 100;
  double tol = 1e-4;  // relative log-likelihood improvement
  double var_floor = kDefaultVarFloor;
};

struct TrainingResult {
  PropertyModel model;
  std::vector<double> log_likelihood_trace;  // one entry per EM iteration
  int iterations = 0;
  bool converged = false;
};

// EM re-estimation of start, masked transitions, and GMM emissions.
// Sequences are accumulated in index order so results are deterministic.
// Masked transition entries start at 0 and stay exactly 0.
inline TrainingResult baum_welch(PropertyModel model,
                                 const std::vector<ObservationSequence>& sequences,
                                 const TrainingConfig& config = {}) {
  if (sequences.empty()) throw EmptySequence("no training sequences");
  for (const auto& seq : sequences) {
    if (seq.length() == 0) throw EmptySequence("empty training sequence");
    if (seq.dim() != model.dim())
      throw DimensionError("sequence dimension " + std::to_string(seq.dim()) +
                           " does not match model dimension " +
                           std::to_string(model.dim()));
  }

  const int S = model.num_states;
  const int N = model.dim();

  TrainingResult result;
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < config.max_iters; ++iter) {
    std::vector<double> start_acc(S, 0.0);
    std::vector<std::vector<double>> trans_acc(S, std::vector<double>(S, 0.0));

    struct GmmAcc {
      std::vector<double> resp;                 // K
      std::vector<std::vector<double>> sum;     // K x N
      std::vector<std::vector<double>> sum_sq;  // K x N
    };
    std::vector<GmmAcc> gmm_acc(S);
    for (int s = 0; s < S; ++s) {
      const int K = model.emissions[s].components();
      gmm_acc[s].resp.assign(K, 0.0);
      gmm_acc[s].sum.assign(K, std::vector<double>(N, 0.0));
      gmm_acc[s].sum_sq.assign(K, std::vector<double>(N, 0.0));
    }

    double total_ll = 0.0;
    std::vector<double> log_joint;
    for (const auto& seq : sequences) {
      const auto fb = forward_backward(model, seq);
      total_ll += fb.log_likelihood;
      const int T = seq.length();

      for (int s = 0; s < S; ++s) start_acc[s] += fb.gamma[0][s];
      for (int t = 0; t + 1 < T; ++t)
        for (int i = 0; i < S; ++i)
          for (int j = 0; j < S; ++j) trans_acc[i][j] += fb.xi[t][i][j];

      for (int t = 0; t < T; ++t) {
        for (int s = 0; s < S; ++s) {
          const double g = fb.gamma[t][s];
          if (g == 0.0) continue;
          const auto& gmm = model.emissions[s];
          const int K = gmm.components();
          if (K == 1) {
            gmm_acc[s].resp[0] += g;
            for (int n = 0; n < N; ++n) {
              const double x = seq.frames[t][n];
              gmm_acc[s].sum[0][n] += g * x;
              gmm_acc[s].sum_sq[0][n] += g * x * x;
            }
            continue;
          }
          log_joint.resize(K);
          component_log_joint(gmm, seq.frames[t], log_joint);
          const double denom = log_sum_exp(log_joint);
          for (int k = 0; k < K; ++k) {
            const double r = g * std::exp(log_joint[k] - denom);
            gmm_acc[s].resp[k] += r;
            for (int n = 0; n < N; ++n) {
              const double x = seq.frames[t][n];
              gmm_acc[s].sum[k][n] += r * x;
              gmm_acc[s].sum_sq[k][n] += r * x * x;
            }
          }
        }
      }
    }

    result.log_likelihood_trace.push_back(total_ll);
    ++result.iterations;

    // M-step: start.
    for (int s = 0; s < S; ++s)
      model.start[s] = start_acc[s] / static_cast<double>(sequences.size());

    // M-step: transitions, restricted to the mask. Rows with (numerically)
    // no occupancy keep their previous values.
    constexpr double kMinOccupancy = 1e-10;
    for (int i = 0; i < S; ++i) {
      double row = 0.0;
      for (int j = 0; j < S; ++j) row += trans_acc[i][j];
      if (row <= kMinOccupancy) continue;
      for (int j = 0; j < S; ++j)
        model.transition[i][j] = model.topology_mask[i][j] ? trans_acc[i][j] / row : 0.0;
    }

    // M-step: emissions. Components with no responsibility keep their
    // previous parameters.
    for (int s = 0; s < S; ++s) {
      auto& gmm = model.emissions[s];
      const int K = gmm.components();
      double total_resp = 0.0;
      for (int k = 0; k < K; ++k) total_resp += gmm_acc[s].resp[k];
      if (total_resp <= kMinOccupancy) continue;
      for (int k = 0; k < K; ++k) {
        const double r = gmm_acc[s].resp[k];
        if (r <= kMinOccupancy) continue;
        gmm.weights[k] = r / total_resp;
        for (int n = 0; n < N; ++n) {
          const double mean = gmm_acc[s].sum[k][n] / r;
          gmm.means[k][n] = mean;
          gmm.vars[k][n] = std::max(config.var_floor,
                                    gmm_acc[s].sum_sq[k][n] / r - mean * mean);
        }
      }
    }

    if (iter > 0) {
      const double rel = (total_ll - prev_ll) / (std::abs(prev_ll) + 1.0);
      if (rel < config.tol) {
        result.converged = true;
        prev_ll = total_ll;
        break;
      }
    }
    prev_ll = total_ll;
  }

  result.model = std::move(model);
  return result;
}

}  // namespace sogm
