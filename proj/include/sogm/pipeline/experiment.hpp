#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sogm/common/error.hpp"
#include "sogm/common/parallel.hpp"
#include "sogm/common/rng.hpp"
#include "sogm/eval/baselines.hpp"
#include "sogm/eval/metrics.hpp"
#include "sogm/hmm/baum_welch.hpp"
#include "sogm/hmm/hierarchical.hpp"
#include "sogm/hmm/init.hpp"
#include "sogm/hmm/viterbi.hpp"
#include "sogm/pipeline/trajectory.hpp"
#include "sogm/seg/supercell.hpp"
#include "sogm/sim/curves.hpp"
#include "sogm/sim/dataset.hpp"
#include "sogm/version.hpp"

namespace sogm {

struct ScenarioConfig {
  int n_scenes = 20;
  std::uint64_t seed = 42;
  SceneRandomization ranges;
  std::string curves = "default";
  double noise_sigma = 0.5;
  double sweep_spacing = 0.1;
  double sensor_range = 0.3;
  double trajectory_step = 0.0;  // 0 = one grid resolution
};

struct ModelConfig {
  int num_states = 8;   // Bakis length
  int skip = 1;
  int components = 1;   // GMM components per state
  std::string init = "manual_means";  // manual_means | kmeans
  double init_var = kDefaultInitVar;
  int max_iters = 100;
  double tol = 1e-4;
  double var_floor = kDefaultVarFloor;
  std::string training = "per_class";  // per_class | pooled
  int min_segment_len = 3;
  std::uint64_t seed = 11;
};

struct ClassifierConfig {
  std::string type = "hmm";  // hmm | kmeans | random | majority
  int k = 3;                 // k-means clusters
  std::uint64_t seed = 13;
};

struct EvaluationConfig {
  double train_fraction = 0.7;
  std::uint64_t split_seed = 17;
  RepresentationTag representation = RepresentationTag::clustered;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  SegmentationParams segmentation{140, 0.25, 10, 4, 7};
  ModelConfig model;
  ClassifierConfig classifier;
  EvaluationConfig evaluation;
  int jobs = 1;
};

struct SequenceResult {
  int scene_id = 0;
  std::vector<std::string> truth;
  std::vector<std::string> predicted;
  double macro_f1 = 0.0;
};

struct ExperimentResult {
  std::string run_id;
  std::vector<int> train_scenes;
  std::vector<int> test_scenes;
  std::vector<SequenceResult> sequences;  // test split, scene order
  ConfusionMatrix pooled_confusion;
  std::vector<double> pooled_per_class_f1;
  double pooled_macro_f1 = 0.0;
  double mean_macro_f1 = 0.0;  // mean of per-sequence macro F1
  std::optional<HierarchicalModel> model;
  std::map<std::string, std::string> provenance;
};

// Labelled observation sequences for every scene in one representation.
struct LabelledSequence {
  int scene_id = 0;
  ObservationSequence obs;
  std::vector<std::string> truth;
};

// One scene's labelled sequence in the chosen representation. Clustered and
// point cloud need the scene's segmentation.
inline LabelledSequence sample_labelled_sequence(const SceneData& scene,
                                                 const Segmentation* seg, int scene_id,
                                                 RepresentationTag rep) {
  LabelledSequence seq;
  seq.scene_id = scene_id;
  if (rep == RepresentationTag::cellwise) {
    seq.obs = sample_trajectory(scene.grid, nullptr, nullptr, scene.trajectory, rep);
    seq.truth = truth_labels_cells(scene.truth, scene.trajectory);
  } else if (rep == RepresentationTag::clustered) {
    if (seg == nullptr) throw InvalidParams("clustered sampling requires a segmentation");
    seq.obs = sample_trajectory(scene.grid, seg, nullptr, scene.trajectory, rep);
    seq.truth = truth_labels_cells(scene.truth, scene.trajectory);
  } else {
    if (seg == nullptr) throw InvalidParams("point cloud sampling requires a segmentation");
    const auto pc = to_point_cloud(*seg);
    seq.obs = sample_trajectory(scene.grid, nullptr, &pc, scene.trajectory, rep);
    seq.truth = truth_labels_samples(scene.truth, scene.trajectory);
  }
  if (seq.obs.frames.size() != seq.truth.size())
    throw NumericalFailure("frame/label length mismatch in scene " +
                           std::to_string(scene_id));
  return seq;
}

namespace detail {

inline std::vector<LabelledSequence> sample_scene_sequences(
    const std::vector<SceneData>& dataset, const SegmentationParams& seg_params,
    RepresentationTag rep, int jobs) {
  std::vector<LabelledSequence> out(dataset.size());
  parallel_for(dataset.size(), jobs, [&](std::size_t s) {
    const auto& scene = dataset[s];
    if (rep == RepresentationTag::cellwise) {
      out[s] = sample_labelled_sequence(scene, nullptr, static_cast<int>(s), rep);
    } else {
      SegmentationParams params = seg_params;
      params.rng_seed = mix_seed(seg_params.rng_seed, s);
      const auto seg = extract_supercells(scene.grid, params);
      out[s] = sample_labelled_sequence(scene, &seg, static_cast<int>(s), rep);
    }
  });
  return out;
}

// Contiguous truth runs of one sequence as (class name, segment) pairs.
inline std::vector<std::pair<std::string, ObservationSequence>> truth_segments(
    const LabelledSequence& seq) {
  std::vector<std::pair<std::string, ObservationSequence>> segments;
  std::size_t start = 0;
  for (std::size_t t = 1; t <= seq.truth.size(); ++t) {
    if (t < seq.truth.size() && seq.truth[t] == seq.truth[start]) continue;
    ObservationSequence segment;
    segment.source = seq.obs.source;
    segment.frames.assign(seq.obs.frames.begin() + start, seq.obs.frames.begin() + t);
    segments.emplace_back(seq.truth[start], std::move(segment));
    start = t;
  }
  return segments;
}

}  // namespace detail

// Unsupervised training of the hierarchical model on labelled sequences.
// per_class: one Bakis sub-model per class trained on that class's truth
// segments, prior from segment frequencies. pooled: a single sub-model
// trained on the full sequences whose states are then tied to classes by
// nearest manual mean; the mapping is recorded in `state_to_class`.
struct HmmTrainOutput {
  HierarchicalModel model;
  std::vector<int> state_to_class;  // pooled mode only
  std::vector<std::vector<double>> likelihood_traces;
};

inline HmmTrainOutput train_hierarchical(
    const std::vector<LabelledSequence>& train, const ModelConfig& config,
    const std::vector<std::vector<double>>& manual_means) {
  if (train.empty()) throw InvalidParams("no training sequences");
  const std::vector<std::string> classes(kClassNames.begin(), kClassNames.end());
  const int C = static_cast<int>(classes.size());

  HmmTrainOutput out;
  out.model.classes = classes;

  TrainingConfig tc;
  tc.max_iters = config.max_iters;
  tc.tol = config.tol;
  tc.var_floor = config.var_floor;

  if (config.training == "per_class") {
    std::vector<std::vector<ObservationSequence>> per_class(C);
    std::vector<std::int64_t> seg_counts(C, 0);
    for (const auto& seq : train)
      for (auto& [cls, segment] : detail::truth_segments(seq)) {
        int w = -1;
        for (int c = 0; c < C; ++c)
          if (classes[c] == cls) w = c;
        if (w < 0) throw UnknownClass("truth label not in class list: " + cls);
        per_class[w].push_back(std::move(segment));
        ++seg_counts[w];
      }

    std::int64_t total_segments = 0;
    for (const auto c : seg_counts) total_segments += c;
    for (int w = 0; w < C; ++w) {
      if (per_class[w].empty())
        throw InvalidParams("class '" + classes[w] + "' has no training segments");
      out.model.prior.push_back(static_cast<double>(seg_counts[w]) /
                                static_cast<double>(total_segments));

      PropertyModel pm = make_bakis(config.num_states, config.skip);
      if (config.init == "manual_means") {
        pm.emissions = init_emissions_manual(config.num_states, manual_means.at(w),
                                             config.init_var);
      } else if (config.init == "kmeans") {
        std::vector<std::vector<double>> frames;
        for (const auto& s : per_class[w])
          frames.insert(frames.end(), s.frames.begin(), s.frames.end());
        pm.emissions = init_emissions_kmeans(config.num_states, config.components, frames,
                                             config.var_floor, mix_seed(config.seed, w));
      } else {
        throw InvalidParams("unknown init strategy: " + config.init);
      }
      auto trained = baum_welch(std::move(pm), per_class[w], tc);
      out.model.submodels.push_back(std::move(trained.model));
      out.likelihood_traces.push_back(std::move(trained.log_likelihood_trace));
    }
    return out;
  }

  if (config.training != "pooled")
    throw InvalidParams("unknown training mode: " + config.training);

  // Pooled: one chain over everything, states tied to classes afterwards.
  std::vector<ObservationSequence> sequences;
  for (const auto& seq : train) sequences.push_back(seq.obs);
  PropertyModel pm = make_bakis(config.num_states, config.skip);
  if (config.init == "manual_means") {
    // Spread the class means over the chain so EM can separate regions.
    pm.emissions.clear();
    for (int s = 0; s < config.num_states; ++s) {
      const auto& mean = manual_means.at(s % C);
      pm.emissions.push_back(
          init_emissions_manual(1, mean, config.init_var).front());
    }
  } else if (config.init == "kmeans") {
    std::vector<std::vector<double>> frames;
    for (const auto& s : sequences)
      frames.insert(frames.end(), s.frames.begin(), s.frames.end());
    pm.emissions = init_emissions_kmeans(config.num_states, config.components, frames,
                                         config.var_floor, config.seed);
  } else {
    throw InvalidParams("unknown init strategy: " + config.init);
  }
  auto trained = baum_welch(std::move(pm), sequences, tc);
  out.likelihood_traces.push_back(std::move(trained.log_likelihood_trace));

  // Tie each state to the class with the nearest manual mean.
  out.state_to_class.resize(config.num_states);
  for (int s = 0; s < config.num_states; ++s) {
    const auto& mean = trained.model.emissions[s].means[0];
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < C; ++c) {
      double d = 0.0;
      for (std::size_t n = 0; n < mean.size(); ++n) {
        const double diff = mean[n] - manual_means[c][n];
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out.state_to_class[s] = best;
  }

  // Frame-frequency prior; the pooled chain itself carries the classes.
  std::vector<std::int64_t> frame_counts(C, 0);
  std::int64_t total = 0;
  for (const auto& seq : train)
    for (const auto& l : seq.truth) {
      for (int c = 0; c < C; ++c)
        if (classes[c] == l) ++frame_counts[c];
      ++total;
    }
  for (int c = 0; c < C; ++c)
    out.model.prior.push_back(static_cast<double>(frame_counts[c]) /
                              static_cast<double>(total));
  out.model.submodels.assign(C, trained.model);
  return out;
}

// Seeded scene-level train/test split; at least one scene on each side.
inline std::pair<std::vector<int>, std::vector<int>> split_scenes(int n_scenes,
                                                                  double train_fraction,
                                                                  std::uint64_t split_seed) {
  if (n_scenes < 2) throw InvalidParams("need at least 2 scenes to split");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw InvalidParams("train_fraction must be in (0, 1)");
  std::vector<int> order(n_scenes);
  for (int i = 0; i < n_scenes; ++i) order[i] = i;
  Rng rng(split_seed);
  rng.shuffle(order);
  const int n_train =
      std::max(1, std::min(n_scenes - 1, static_cast<int>(train_fraction * n_scenes)));
  std::vector<int> train(order.begin(), order.begin() + n_train);
  std::vector<int> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

// Full experiment: generate scenes, build grids, sample sequences, train on
// the scenario split, decode the test split, and score.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.scenario.n_scenes < 2)
    throw InvalidParams("need at least 2 scenes to split into train and test");
  if (!(config.evaluation.train_fraction > 0.0) ||
      !(config.evaluation.train_fraction < 1.0))
    throw InvalidParams("train_fraction must be in (0, 1)");
  const bool known_type = config.classifier.type == "hmm" ||
                          config.classifier.type == "kmeans" ||
                          config.classifier.type == "random" ||
                          config.classifier.type == "majority";
  if (!known_type) throw InvalidParams("unknown classifier type: " + config.classifier.type);

  const auto curves = curves_by_name(config.scenario.curves, config.scenario.noise_sigma);
  const auto specs = random_scene_specs(config.scenario.n_scenes, config.scenario.ranges,
                                        config.scenario.seed);
  TraversalPlan plan;
  plan.sweep_spacing = config.scenario.sweep_spacing;
  plan.sensor_range = config.scenario.sensor_range;
  plan.trajectory_step = config.scenario.trajectory_step;
  const auto dataset = build_dataset(specs, curves, plan, config.scenario.seed);

  const auto sequences = detail::sample_scene_sequences(
      dataset, config.segmentation, config.evaluation.representation, config.jobs);

  // Split by scenario, never within a scene.
  ExperimentResult result;
  std::tie(result.train_scenes, result.test_scenes) =
      split_scenes(config.scenario.n_scenes, config.evaluation.train_fraction,
                   config.evaluation.split_seed);

  std::vector<LabelledSequence> train;
  for (const int s : result.train_scenes) train.push_back(sequences[s]);

  const std::vector<std::string> classes(kClassNames.begin(), kClassNames.end());

  // Train, then predict each test sequence.
  std::vector<std::vector<std::string>> predictions(result.test_scenes.size());
  if (config.classifier.type == "hmm") {
    const auto manual_means = manual_means_from_curves(curves);
    const auto trained = train_hierarchical(train, config.model, manual_means);
    result.model = trained.model;
    if (!trained.state_to_class.empty()) {
      std::string mapping;
      for (std::size_t s = 0; s < trained.state_to_class.size(); ++s)
        mapping += (s > 0 ? "," : "") + std::to_string(s) + ":" +
                   classes[trained.state_to_class[s]];
      result.provenance["state_to_class"] = mapping;
    }
    DecodeConfig dc{config.model.min_segment_len};
    parallel_for(result.test_scenes.size(), config.jobs, [&](std::size_t i) {
      const auto& seq = sequences[result.test_scenes[i]];
      if (config.model.training == "pooled") {
        const auto vit = viterbi(trained.model.submodels[0], seq.obs);
        std::vector<std::string> labels(vit.path.size());
        for (std::size_t t = 0; t < vit.path.size(); ++t)
          labels[t] = classes[trained.state_to_class[vit.path[t]]];
        predictions[i] = std::move(labels);
      } else {
        predictions[i] = decode_path(trained.model, seq.obs, dc).labels;
      }
    });
  } else {
    std::vector<std::vector<double>> train_frames;
    std::vector<std::string> train_labels;
    for (const auto& seq : train) {
      train_frames.insert(train_frames.end(), seq.obs.frames.begin(), seq.obs.frames.end());
      train_labels.insert(train_labels.end(), seq.truth.begin(), seq.truth.end());
    }
    if (config.classifier.type == "majority") {
      const auto clf = MajorityClassifier::fit(train_labels);
      for (std::size_t i = 0; i < result.test_scenes.size(); ++i)
        predictions[i] = clf.predict(sequences[result.test_scenes[i]].obs.frames);
    } else if (config.classifier.type == "random") {
      auto clf = RandomClassifier::fit(train_labels, config.classifier.seed);
      for (std::size_t i = 0; i < result.test_scenes.size(); ++i)
        predictions[i] = clf.predict(sequences[result.test_scenes[i]].obs.frames);
    } else {
      const auto clf = KMeansClassifier::fit(train_frames, train_labels,
                                             config.classifier.k, config.classifier.seed);
      for (std::size_t i = 0; i < result.test_scenes.size(); ++i)
        predictions[i] = clf.predict(sequences[result.test_scenes[i]].obs.frames);
    }
  }

  // Scoring: per-sequence macro F1 plus pooled counts over all test frames.
  std::vector<std::string> pooled_truth, pooled_pred;
  double f1_sum = 0.0;
  for (std::size_t i = 0; i < result.test_scenes.size(); ++i) {
    const auto& seq = sequences[result.test_scenes[i]];
    SequenceResult sr;
    sr.scene_id = seq.scene_id;
    sr.truth = seq.truth;
    sr.predicted = predictions[i];
    sr.macro_f1 = macro_f1(sr.truth, sr.predicted, classes);
    f1_sum += sr.macro_f1;
    pooled_truth.insert(pooled_truth.end(), sr.truth.begin(), sr.truth.end());
    pooled_pred.insert(pooled_pred.end(), sr.predicted.begin(), sr.predicted.end());
    result.sequences.push_back(std::move(sr));
  }
  result.pooled_confusion = confusion(pooled_truth, pooled_pred, classes);
  result.pooled_per_class_f1 = per_class_f1(result.pooled_confusion);
  result.pooled_macro_f1 = macro_f1(result.pooled_confusion);
  result.mean_macro_f1 = f1_sum / static_cast<double>(result.sequences.size());

  result.run_id = to_string(config.evaluation.representation) + "-" +
                  config.classifier.type + "-S" + std::to_string(config.model.num_states) +
                  "-seed" + std::to_string(config.scenario.seed);
  result.provenance["tool_version"] = kVersion;
  result.provenance["scenario_seed"] = std::to_string(config.scenario.seed);
  result.provenance["split_seed"] = std::to_string(config.evaluation.split_seed);
  result.provenance["model_seed"] = std::to_string(config.model.seed);
  result.provenance["classifier_seed"] = std::to_string(config.classifier.seed);
  result.provenance["segmentation_seed"] = std::to_string(config.segmentation.rng_seed);
  result.provenance["curves"] = config.scenario.curves;
  return result;
}

}  // namespace sogm
