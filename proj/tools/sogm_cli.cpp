// Command-line harness: simulate / segment / train / decode / evaluate.
// Stages read each other's outputs from disk so expensive steps cache.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sogm/sogm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string scene_dir_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%03zu", i);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - begin)
        .count();
  }
};

// Run manifest: config snapshot, seeds, artifact paths, timing, version.
// Holds the only nondeterministic field (timing_ms); result files stay
// byte-identical across reruns.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& config_snapshot, const std::vector<std::string>& artifacts,
                    const Timer& timer) {
  json m;
  m["command"] = command;
  m["tool_version"] = sogm::kVersion;
  m["config"] = config_snapshot;
  m["artifacts"] = artifacts;
  m["timing_ms"] = timer.elapsed_ms();
  sogm::write_file_text(out_dir / "manifest.json", m.dump(2) + "\n");
}

sogm::ExperimentConfig load_config_or_default(const std::string& config_path) {
  if (config_path.empty()) return sogm::ExperimentConfig{};
  return sogm::load_experiment_config(config_path);
}

std::vector<sogm::SceneData> load_dataset(const fs::path& data_dir) {
  const fs::path scenes_dir = data_dir / "scenes";
  if (!fs::exists(scenes_dir)) throw sogm::NotFound("no scenes under " + data_dir.string());
  std::vector<sogm::SceneData> dataset;
  for (std::size_t i = 0;; ++i) {
    const fs::path dir = scenes_dir / scene_dir_name(i);
    if (!fs::exists(dir)) break;
    sogm::SceneData scene;
    scene.spec = sogm::scene_spec_from_json(json::parse(sogm::read_file_text(dir / "scene.json")));
    scene.grid = sogm::load_grid(dir, "grid");
    scene.truth = sogm::load_ground_truth(dir, scene.grid.spec());
    scene.trajectory =
        sogm::trajectory_from_json(json::parse(sogm::read_file_text(dir / "trajectory.json")));
    dataset.push_back(std::move(scene));
  }
  if (dataset.empty()) throw sogm::NotFound("no scenes under " + scenes_dir.string());
  return dataset;
}

std::vector<sogm::Segmentation> load_segmentations(const fs::path& seg_dir, std::size_t count) {
  std::vector<sogm::Segmentation> segs;
  for (std::size_t i = 0; i < count; ++i) {
    const fs::path dir = seg_dir / "scenes" / scene_dir_name(i);
    if (!fs::exists(dir)) throw sogm::NotFound("missing segmentation for scene " +
                                               std::to_string(i) + " under " + seg_dir.string());
    segs.push_back(sogm::load_segmentation(dir, "seg"));
  }
  return segs;
}

int cmd_simulate(const std::string& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed_override, int jobs) {
  Timer timer;
  auto config = load_config_or_default(config_path);
  if (seed_override) config.scenario.seed = *seed_override;
  if (jobs > 0) config.jobs = jobs;

  const auto curves =
      sogm::curves_by_name(config.scenario.curves, config.scenario.noise_sigma);
  const auto specs = sogm::random_scene_specs(config.scenario.n_scenes,
                                              config.scenario.ranges, config.scenario.seed);
  sogm::TraversalPlan plan;
  plan.sweep_spacing = config.scenario.sweep_spacing;
  plan.sensor_range = config.scenario.sensor_range;
  plan.trajectory_step = config.scenario.trajectory_step;
  const auto dataset = sogm::build_dataset(specs, curves, plan, config.scenario.seed);

  fs::create_directories(out_dir / "scenes");
  std::vector<std::string> artifacts;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const fs::path dir = out_dir / "scenes" / scene_dir_name(i);
    fs::create_directories(dir);
    sogm::write_file_text(dir / "scene.json",
                          sogm::scene_spec_to_json(dataset[i].spec).dump(2) + "\n");
    sogm::write_file_text(dir / "trajectory.json",
                          sogm::trajectory_to_json(dataset[i].trajectory).dump(2) + "\n");
    sogm::save_grid(dataset[i].grid, dir, "grid");
    sogm::save_ground_truth(dataset[i].truth, dir);
    artifacts.push_back((fs::path("scenes") / scene_dir_name(i)).string());
  }
  sogm::write_file_text(out_dir / "config.json",
                        sogm::experiment_config_to_json(config).dump(2) + "\n");
  write_manifest(out_dir, "simulate", sogm::experiment_config_to_json(config), artifacts,
                 timer);
  std::cout << "simulate: wrote " << dataset.size() << " scenes to " << out_dir.string()
            << "\n";
  return 0;
}

int cmd_segment(const std::string& config_path, const fs::path& data_dir,
                const fs::path& out_dir, int jobs) {
  Timer timer;
  auto config = load_config_or_default(config_path);
  if (jobs > 0) config.jobs = jobs;
  const auto dataset = load_dataset(data_dir);

  fs::create_directories(out_dir / "scenes");
  std::vector<sogm::Segmentation> segs(dataset.size());
  sogm::parallel_for(dataset.size(), config.jobs, [&](std::size_t i) {
    sogm::SegmentationParams params = config.segmentation;
    params.rng_seed = sogm::mix_seed(config.segmentation.rng_seed, i);
    segs[i] = sogm::extract_supercells(dataset[i].grid, params);
  });

  std::ostringstream summary;
  summary << "scene_id,supercells,mean_var_l,boundary_recall\n";
  std::vector<std::string> artifacts;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const fs::path dir = out_dir / "scenes" / scene_dir_name(i);
    sogm::SegmentationParams params = config.segmentation;
    params.rng_seed = sogm::mix_seed(config.segmentation.rng_seed, i);
    sogm::save_segmentation(segs[i], params, dir, "seg");
    artifacts.push_back((fs::path("scenes") / scene_dir_name(i)).string());

    double mean_var = 0.0;
    for (const auto& sc : segs[i].supercells)
      for (const double v : sc.var_l)
        mean_var += v / static_cast<double>(sc.var_l.size()) /
                    static_cast<double>(segs[i].supercells.size());
    const double recall =
        sogm::boundary_recall(dataset[i].grid.spec(), dataset[i].truth.labels, segs[i].labels);
    summary << i << "," << segs[i].supercells.size() << "," << sogm::format_real(mean_var)
            << "," << sogm::format_real(recall) << "\n";
  }
  sogm::write_file_text(out_dir / "summary.csv", summary.str());
  artifacts.push_back("summary.csv");
  write_manifest(out_dir, "segment", sogm::experiment_config_to_json(config), artifacts,
                 timer);
  std::cout << "segment: wrote " << dataset.size() << " segmentations to "
            << out_dir.string() << "\n";
  return 0;
}

std::vector<sogm::LabelledSequence> sample_all(
    const std::vector<sogm::SceneData>& dataset, const std::vector<sogm::Segmentation>* segs,
    sogm::RepresentationTag rep) {
  std::vector<sogm::LabelledSequence> sequences;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    sequences.push_back(sogm::sample_labelled_sequence(
        dataset[i], segs != nullptr ? &(*segs)[i] : nullptr, static_cast<int>(i), rep));
  return sequences;
}

int cmd_train(const std::string& config_path, const fs::path& data_dir,
              const std::string& seg_dir, const fs::path& out_dir, int jobs) {
  Timer timer;
  auto config = load_config_or_default(config_path);
  if (jobs > 0) config.jobs = jobs;
  if (config.classifier.type != "hmm")
    throw sogm::InvalidParams("train handles the hmm classifier; use evaluate for baselines");

  const auto dataset = load_dataset(data_dir);
  const auto rep = config.evaluation.representation;
  std::optional<std::vector<sogm::Segmentation>> segs;
  if (rep != sogm::RepresentationTag::cellwise) {
    if (seg_dir.empty())
      throw sogm::InvalidParams("representation '" + sogm::to_string(rep) +
                                "' needs --seg <dir>");
    segs = load_segmentations(seg_dir, dataset.size());
  }
  const auto sequences = sample_all(dataset, segs ? &*segs : nullptr, rep);

  const auto [train_ids, test_ids] =
      sogm::split_scenes(static_cast<int>(dataset.size()), config.evaluation.train_fraction,
                         config.evaluation.split_seed);
  std::vector<sogm::LabelledSequence> train;
  for (const int s : train_ids) train.push_back(sequences[s]);

  const auto curves =
      sogm::curves_by_name(config.scenario.curves, config.scenario.noise_sigma);
  const auto trained =
      sogm::train_hierarchical(train, config.model, sogm::manual_means_from_curves(curves));

  fs::create_directories(out_dir);
  sogm::save_model(trained.model, out_dir / "model.json");

  json split;
  split["train_scenes"] = train_ids;
  split["test_scenes"] = test_ids;
  split["representation"] = sogm::to_string(rep);
  sogm::write_file_text(out_dir / "split.json", split.dump(2) + "\n");

  json info;
  info["training"] = config.model.training;
  if (!trained.state_to_class.empty()) info["state_to_class"] = trained.state_to_class;
  sogm::write_file_text(out_dir / "training.json", info.dump(2) + "\n");

  std::ostringstream traces;
  traces << "model,iteration,log_likelihood\n";
  for (std::size_t m = 0; m < trained.likelihood_traces.size(); ++m)
    for (std::size_t it = 0; it < trained.likelihood_traces[m].size(); ++it)
      traces << m << "," << it << ","
             << sogm::format_real(trained.likelihood_traces[m][it]) << "\n";
  sogm::write_file_text(out_dir / "traces.csv", traces.str());

  write_manifest(out_dir, "train", sogm::experiment_config_to_json(config),
                 {"model.json", "split.json", "training.json", "traces.csv"}, timer);
  std::cout << "train: model written to " << (out_dir / "model.json").string() << "\n";
  return 0;
}

int cmd_decode(const std::string& config_path, const fs::path& data_dir,
               const std::string& seg_dir, const fs::path& model_path,
               const fs::path& out_dir, int jobs) {
  Timer timer;
  auto config = load_config_or_default(config_path);
  if (jobs > 0) config.jobs = jobs;

  if (!fs::exists(model_path)) throw sogm::NotFound("model not found: " + model_path.string());
  const auto model = sogm::load_model(model_path);
  const fs::path model_dir = model_path.parent_path();

  std::vector<int> test_ids;
  sogm::RepresentationTag rep = config.evaluation.representation;
  if (fs::exists(model_dir / "split.json")) {
    const json split = json::parse(sogm::read_file_text(model_dir / "split.json"));
    test_ids = split.at("test_scenes").get<std::vector<int>>();
    rep = sogm::representation_from_string(split.at("representation").get<std::string>());
  }
  std::vector<int> state_to_class;
  std::string training = config.model.training;
  if (fs::exists(model_dir / "training.json")) {
    const json info = json::parse(sogm::read_file_text(model_dir / "training.json"));
    training = info.at("training").get<std::string>();
    if (info.contains("state_to_class"))
      state_to_class = info.at("state_to_class").get<std::vector<int>>();
  }

  const auto dataset = load_dataset(data_dir);
  if (test_ids.empty())
    for (std::size_t i = 0; i < dataset.size(); ++i) test_ids.push_back(static_cast<int>(i));

  std::optional<std::vector<sogm::Segmentation>> segs;
  if (rep != sogm::RepresentationTag::cellwise) {
    if (seg_dir.empty())
      throw sogm::InvalidParams("representation '" + sogm::to_string(rep) +
                                "' needs --seg <dir>");
    segs = load_segmentations(seg_dir, dataset.size());
  }

  fs::create_directories(out_dir / "predictions");
  std::vector<sogm::SequenceResult> results(test_ids.size());
  sogm::parallel_for(test_ids.size(), config.jobs, [&](std::size_t i) {
    const int scene = test_ids[i];
    const auto seq = sogm::sample_labelled_sequence(
        dataset[scene], segs ? &(*segs)[scene] : nullptr, scene, rep);
    sogm::SequenceResult sr;
    sr.scene_id = scene;
    sr.truth = seq.truth;
    if (training == "pooled") {
      if (state_to_class.empty())
        throw sogm::InvalidParams("pooled model requires state_to_class in training.json");
      const auto vit = sogm::viterbi(model.submodels[0], seq.obs);
      for (const int s : vit.path)
        sr.predicted.push_back(model.classes[state_to_class[s]]);
    } else {
      sr.predicted =
          sogm::decode_path(model, seq.obs, sogm::DecodeConfig{config.model.min_segment_len})
              .labels;
    }
    const std::vector<std::string> classes(sogm::kClassNames.begin(),
                                           sogm::kClassNames.end());
    sr.macro_f1 = sogm::macro_f1(sr.truth, sr.predicted, classes);
    results[i] = std::move(sr);
  });

  std::ostringstream scores;
  scores << "scene_id,macro_f1\n";
  std::vector<std::string> artifacts;
  for (const auto& sr : results) {
    const std::string name = "predictions/" + scene_dir_name(sr.scene_id) + ".csv";
    sogm::write_file_text(out_dir / name, sogm::predictions_csv(sr));
    artifacts.push_back(name);
    scores << sr.scene_id << "," << sogm::format_real(sr.macro_f1) << "\n";
  }
  sogm::write_file_text(out_dir / "scores.csv", scores.str());
  artifacts.push_back("scores.csv");
  write_manifest(out_dir, "decode", sogm::experiment_config_to_json(config), artifacts, timer);
  std::cout << "decode: wrote " << results.size() << " prediction files to "
            << out_dir.string() << "\n";
  return 0;
}

int cmd_evaluate(const std::string& config_path, const fs::path& out_dir,
                 const std::string& sweep, const std::string& bakis_values, bool plot,
                 const std::string& format, std::optional<std::uint64_t> seed_override,
                 int jobs) {
  Timer timer;
  auto base = load_config_or_default(config_path);
  if (seed_override) base.scenario.seed = *seed_override;
  if (jobs > 0) base.jobs = jobs;
  if (format != "csv" && format != "json" && format != "both")
    throw sogm::InvalidParams("--format must be csv or json");

  struct Run {
    std::string group;
    sogm::ExperimentConfig config;
  };
  std::vector<Run> runs;
  if (sweep.empty()) {
    runs.push_back({sogm::to_string(base.evaluation.representation), base});
  } else if (sweep == "representation") {
    for (const auto rep : {sogm::RepresentationTag::clustered,
                           sogm::RepresentationTag::cellwise,
                           sogm::RepresentationTag::pointcloud}) {
      Run run{sogm::to_string(rep), base};
      run.config.evaluation.representation = rep;
      runs.push_back(std::move(run));
    }
  } else if (sweep == "bakis_length") {
    std::stringstream ss(bakis_values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      Run run{item, base};
      run.config.model.num_states = std::stoi(item);
      runs.push_back(std::move(run));
    }
    if (runs.empty()) throw sogm::InvalidParams("empty bakis_length sweep");
  } else {
    throw sogm::InvalidParams("unknown sweep: " + sweep +
                              " (expected representation or bakis_length)");
  }

  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << sogm::result_csv_header();
  json results_json = json::array();
  std::vector<std::pair<std::string, std::vector<double>>> plot_groups;
  std::vector<std::string> artifacts;

  for (const auto& run : runs) {
    const auto result = sogm::run_experiment(run.config);
    sogm::append_result_csv(csv, result, run.config);
    results_json.push_back(sogm::experiment_result_to_json(result, run.config));

    std::vector<double> scores;
    for (const auto& s : result.sequences) scores.push_back(s.macro_f1);
    plot_groups.emplace_back(run.group, std::move(scores));

    if (runs.size() == 1) {
      fs::create_directories(out_dir / "predictions");
      for (const auto& s : result.sequences) {
        const std::string name = "predictions/" + scene_dir_name(s.scene_id) + ".csv";
        sogm::write_file_text(out_dir / name, sogm::predictions_csv(s));
        artifacts.push_back(name);
      }
      if (result.model) {
        sogm::save_model(*result.model, out_dir / "model.json");
        artifacts.push_back("model.json");
      }
    }
    std::cout << "evaluate[" << run.group << "]: mean macro F1 "
              << sogm::format_real(result.mean_macro_f1) << " over "
              << result.sequences.size() << " test scenes\n";
  }

  if (format != "json") {
    sogm::write_file_text(out_dir / "scores.csv", csv.str());
    artifacts.push_back("scores.csv");
  }
  if (format != "csv") {
    sogm::write_file_text(out_dir / "results.json", results_json.dump(2) + "\n");
    artifacts.push_back("results.json");
  }
  if (plot) {
    sogm::save_box_plot(plot_groups, "macro F1", out_dir / "plot.svg");
    artifacts.push_back("plot.svg");
  }
  write_manifest(out_dir, "evaluate", sogm::experiment_config_to_json(base), artifacts, timer);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic occupancy grid mapping, supercell segmentation, and "
               "hierarchical HMM path decoding"};
  app.require_subcommand(1);

  std::string config_path, data_dir, seg_dir, model_path, out_dir;
  std::string sweep, format = "both";
  std::string bakis_values = "3,5,7,8,9,10,15,20,30";
  std::optional<std::uint64_t> seed_override;
  int jobs = 0;
  bool plot = false;

  const auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
    cmd->add_option("--config", config_path, "experiment config JSON");
    if (needs_out) cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option("--seed", seed_override, "override scenario seed");
    cmd->add_option("--jobs", jobs, "worker threads for scene-parallel stages");
  };

  auto* simulate = app.add_subcommand("simulate", "generate synthetic scenes and grids");
  add_common(simulate);

  auto* segment = app.add_subcommand("segment", "extract supercells for a dataset");
  add_common(segment);
  segment->add_option("--data", data_dir, "dataset directory from simulate")->required();

  auto* train = app.add_subcommand("train", "train the hierarchical model");
  add_common(train);
  train->add_option("--data", data_dir, "dataset directory from simulate")->required();
  train->add_option("--seg", seg_dir, "segmentation directory from segment");

  auto* decode = app.add_subcommand("decode", "decode test trajectories with a model");
  add_common(decode);
  decode->add_option("--data", data_dir, "dataset directory from simulate")->required();
  decode->add_option("--seg", seg_dir, "segmentation directory from segment");
  decode->add_option("--model", model_path, "model.json from train")->required();

  auto* evaluate = app.add_subcommand("evaluate", "run end-to-end experiments and score");
  add_common(evaluate);
  evaluate->add_option("--sweep", sweep, "sweep axis: representation | bakis_length");
  evaluate->add_option("--bakis-values", bakis_values, "comma-separated sweep lengths");
  evaluate->add_flag("--plot", plot, "write an SVG box plot next to the CSV");
  evaluate->add_option("--format", format, "score output: csv | json | both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir, seed_override, jobs);
    if (segment->parsed()) return cmd_segment(config_path, data_dir, out_dir, jobs);
    if (train->parsed()) return cmd_train(config_path, data_dir, seg_dir, out_dir, jobs);
    if (decode->parsed())
      return cmd_decode(config_path, data_dir, seg_dir, model_path, out_dir, jobs);
    if (evaluate->parsed())
      return cmd_evaluate(config_path, out_dir, sweep, bakis_values, plot, format,
                          seed_override, jobs);
  } catch (const sogm::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sogm::NotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sogm::NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
