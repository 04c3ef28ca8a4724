// Minimal end-to-end walkthrough: build one noisy scene, segment it, train
// the hierarchical model on a few sibling scenes, and decode the held-out
// trajectory.

#include <iostream>

#include "sogm/sogm.hpp"

int main() {
  using namespace sogm;

  const auto curves = default_curves(0.5);
  const auto specs = random_scene_specs(6, SceneRandomization{}, 99);
  const auto dataset = build_dataset(specs, curves, TraversalPlan{}, 99);

  SegmentationParams seg_params;
  seg_params.num_seeds = 160;

  std::vector<LabelledSequence> sequences;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    SegmentationParams params = seg_params;
    params.rng_seed = mix_seed(7, i);
    const auto seg = extract_supercells(dataset[i].grid, params);
    sequences.push_back(sample_labelled_sequence(dataset[i], &seg, static_cast<int>(i),
                                                 RepresentationTag::clustered));
  }

  std::vector<LabelledSequence> train(sequences.begin(), sequences.end() - 1);
  const auto& held_out = sequences.back();

  ModelConfig model_config;
  const auto trained = train_hierarchical(train, model_config, manual_means_from_curves(curves));
  const auto decoded = decode_path(trained.model, held_out.obs);

  const std::vector<std::string> classes(kClassNames.begin(), kClassNames.end());
  std::cout << "held-out scene macro F1: "
            << macro_f1(held_out.truth, decoded.labels, classes) << "\n";
  std::cout << "decoded segments:\n";
  for (std::size_t s = 0; s < decoded.segments.size(); ++s)
    std::cout << "  [" << decoded.segments[s].first << ", " << decoded.segments[s].second
              << ") -> " << trained.model.classes[decoded.segment_classes[s]] << "\n";
  return 0;
}
