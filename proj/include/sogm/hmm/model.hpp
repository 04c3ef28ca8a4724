#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/hmm/gmm.hpp"

namespace sogm {

// Observation sequence in logit space. `source` tags which map
// representation produced it (cellwise | clustered | pointcloud), if any.
struct ObservationSequence {
  std::vector<std::vector<double>> frames;  // T x N
  std::string source;

  int length() const { return static_cast<int>(frames.size()); }
  int dim() const { return frames.empty() ? 0 : static_cast<int>(frames[0].size()); }
};

// One property sub-model: hidden chain with GMM emissions, transitions
// restricted by a topology mask.
struct PropertyModel {
  int num_states = 0;
  std::vector<std::vector<double>> transition;   // S x S row-stochastic
  std::vector<double> start;                     // S, sums to 1
  std::vector<GmmParams> emissions;              // S
  std::vector<std::vector<bool>> topology_mask;  // S x S, true = allowed

  int dim() const { return emissions.empty() ? 0 : emissions[0].dim(); }

  void validate() const {
    if (num_states < 1) throw InvalidParams("model needs at least one state");
    for (int i = 0; i < num_states; ++i) {
      double row = 0.0;
      for (int j = 0; j < num_states; ++j) {
        if (!topology_mask[i][j] && transition[i][j] != 0.0)
          throw InvalidParams("transition outside topology mask");
        row += transition[i][j];
      }
      if (std::abs(row - 1.0) > 1e-9)
        throw InvalidParams("transition row " + std::to_string(i) + " does not sum to 1");
    }
    double start_sum = 0.0;
    for (const double p : start) start_sum += p;
    if (std::abs(start_sum - 1.0) > 1e-9)
      throw InvalidParams("start probabilities do not sum to 1");
  }
};

// Property prior P(w) plus one sub-model per class.
struct HierarchicalModel {
  std::vector<std::string> classes;
  std::vector<double> prior;
  std::vector<PropertyModel> submodels;

  int class_index(const std::string& name) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == name) return static_cast<int>(i);
    throw UnknownClass("no such class: " + name);
  }
};

// Left-right Bakis chain: state i may reach j iff 0 <= j-i <= 1+skip; the
// last state self-loops; the chain starts in state 0. Allowed transitions
// are initialized uniform over each row's successors. Emissions are
// unit-Gaussian placeholders of the given dimension (replaced by an
// initialization strategy before training) unless dim == 0.
inline PropertyModel make_bakis(int num_states, int skip, int dim = 0) {
  if (num_states < 1) throw InvalidParams("num_states must be >= 1");
  if (skip < 0) throw InvalidParams("skip must be >= 0");

  PropertyModel model;
  model.num_states = num_states;
  model.topology_mask.assign(num_states, std::vector<bool>(num_states, false));
  model.transition.assign(num_states, std::vector<double>(num_states, 0.0));
  for (int i = 0; i < num_states; ++i) {
    int allowed = 0;
    for (int j = 0; j < num_states; ++j) {
      const int step = j - i;
      if (step >= 0 && step <= 1 + skip) {
        model.topology_mask[i][j] = true;
        ++allowed;
      }
    }
    for (int j = 0; j < num_states; ++j)
      if (model.topology_mask[i][j]) model.transition[i][j] = 1.0 / allowed;
  }
  model.start.assign(num_states, 0.0);
  model.start[0] = 1.0;

  if (dim > 0) {
    GmmParams g;
    g.weights = {1.0};
    g.means = {std::vector<double>(dim, 0.0)};
    g.vars = {std::vector<double>(dim, 1.0)};
    model.emissions.assign(num_states, g);
  }
  return model;
}

}  // namespace sogm
