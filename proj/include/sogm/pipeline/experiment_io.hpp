#pragma once

#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sogm/common/io_util.hpp"
#include "sogm/pipeline/experiment.hpp"

namespace sogm {

// Experiment config document: one JSON object with sections scenario,
// segmentation, model, classifier, evaluation. Every field is optional and
// falls back to its default; unknown keys are rejected with a message that
// names them.

namespace detail {

inline void check_known_keys(const nlohmann::json& j, const std::set<std::string>& known,
                             const std::string& section) {
  for (const auto& [key, value] : j.items())
    if (!known.contains(key))
      throw InvalidParams("unknown key '" + key + "' in config section '" + section + "'");
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  detail::check_known_keys(
      j, {"scenario", "segmentation", "model", "classifier", "evaluation", "jobs"}, "<root>");
  ExperimentConfig config;
  detail::read_field(j, "jobs", config.jobs);

  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    detail::check_known_keys(s,
                             {"n_scenes", "seed", "curves", "noise_sigma", "sweep_spacing",
                              "sensor_range", "trajectory_step", "grid", "table",
                              "min_objects", "max_objects", "min_radius", "max_radius"},
                             "scenario");
    detail::read_field(s, "n_scenes", config.scenario.n_scenes);
    detail::read_field(s, "seed", config.scenario.seed);
    detail::read_field(s, "curves", config.scenario.curves);
    detail::read_field(s, "noise_sigma", config.scenario.noise_sigma);
    detail::read_field(s, "sweep_spacing", config.scenario.sweep_spacing);
    detail::read_field(s, "sensor_range", config.scenario.sensor_range);
    detail::read_field(s, "trajectory_step", config.scenario.trajectory_step);
    detail::read_field(s, "min_objects", config.scenario.ranges.min_objects);
    detail::read_field(s, "max_objects", config.scenario.ranges.max_objects);
    detail::read_field(s, "min_radius", config.scenario.ranges.min_radius);
    detail::read_field(s, "max_radius", config.scenario.ranges.max_radius);
    if (s.contains("grid")) {
      const auto& g = s.at("grid");
      detail::check_known_keys(g, {"width", "height", "resolution", "origin"}, "scenario.grid");
      detail::read_field(g, "width", config.scenario.ranges.grid.width);
      detail::read_field(g, "height", config.scenario.ranges.grid.height);
      detail::read_field(g, "resolution", config.scenario.ranges.grid.resolution);
      if (g.contains("origin")) {
        config.scenario.ranges.grid.origin_x = g.at("origin").at(0).get<double>();
        config.scenario.ranges.grid.origin_y = g.at("origin").at(1).get<double>();
      }
    }
    if (s.contains("table")) {
      const auto& t = s.at("table");
      detail::check_known_keys(t, {"x", "y", "width", "height"}, "scenario.table");
      detail::read_field(t, "x", config.scenario.ranges.table.x);
      detail::read_field(t, "y", config.scenario.ranges.table.y);
      detail::read_field(t, "width", config.scenario.ranges.table.width);
      detail::read_field(t, "height", config.scenario.ranges.table.height);
    }
  }

  if (j.contains("segmentation")) {
    const auto& s = j.at("segmentation");
    detail::check_known_keys(
        s, {"num_seeds", "compactness", "max_iters", "min_cell_count", "rng_seed"},
        "segmentation");
    detail::read_field(s, "num_seeds", config.segmentation.num_seeds);
    detail::read_field(s, "compactness", config.segmentation.compactness);
    detail::read_field(s, "max_iters", config.segmentation.max_iters);
    detail::read_field(s, "min_cell_count", config.segmentation.min_cell_count);
    detail::read_field(s, "rng_seed", config.segmentation.rng_seed);
  }

  if (j.contains("model")) {
    const auto& m = j.at("model");
    detail::check_known_keys(m,
                             {"num_states", "skip", "components", "init", "init_var",
                              "max_iters", "tol", "var_floor", "training",
                              "min_segment_len", "seed"},
                             "model");
    detail::read_field(m, "num_states", config.model.num_states);
    detail::read_field(m, "skip", config.model.skip);
    detail::read_field(m, "components", config.model.components);
    detail::read_field(m, "init", config.model.init);
    detail::read_field(m, "init_var", config.model.init_var);
    detail::read_field(m, "max_iters", config.model.max_iters);
    detail::read_field(m, "tol", config.model.tol);
    detail::read_field(m, "var_floor", config.model.var_floor);
    detail::read_field(m, "training", config.model.training);
    detail::read_field(m, "min_segment_len", config.model.min_segment_len);
    detail::read_field(m, "seed", config.model.seed);
  }

  if (j.contains("classifier")) {
    const auto& c = j.at("classifier");
    detail::check_known_keys(c, {"type", "k", "seed"}, "classifier");
    detail::read_field(c, "type", config.classifier.type);
    detail::read_field(c, "k", config.classifier.k);
    detail::read_field(c, "seed", config.classifier.seed);
  }

  if (j.contains("evaluation")) {
    const auto& e = j.at("evaluation");
    detail::check_known_keys(e, {"train_fraction", "split_seed", "representation"},
                             "evaluation");
    detail::read_field(e, "train_fraction", config.evaluation.train_fraction);
    detail::read_field(e, "split_seed", config.evaluation.split_seed);
    if (e.contains("representation"))
      config.evaluation.representation =
          representation_from_string(e.at("representation").get<std::string>());
  }
  return config;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParams("bad config " + path.string() + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

inline nlohmann::json experiment_config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["jobs"] = c.jobs;
  j["scenario"] = {{"n_scenes", c.scenario.n_scenes},
                   {"seed", c.scenario.seed},
                   {"curves", c.scenario.curves},
                   {"noise_sigma", c.scenario.noise_sigma},
                   {"sweep_spacing", c.scenario.sweep_spacing},
                   {"sensor_range", c.scenario.sensor_range},
                   {"trajectory_step", c.scenario.trajectory_step},
                   {"min_objects", c.scenario.ranges.min_objects},
                   {"max_objects", c.scenario.ranges.max_objects},
                   {"min_radius", c.scenario.ranges.min_radius},
                   {"max_radius", c.scenario.ranges.max_radius},
                   {"grid",
                    {{"width", c.scenario.ranges.grid.width},
                     {"height", c.scenario.ranges.grid.height},
                     {"resolution", c.scenario.ranges.grid.resolution},
                     {"origin",
                      {c.scenario.ranges.grid.origin_x, c.scenario.ranges.grid.origin_y}}}},
                   {"table",
                    {{"x", c.scenario.ranges.table.x},
                     {"y", c.scenario.ranges.table.y},
                     {"width", c.scenario.ranges.table.width},
                     {"height", c.scenario.ranges.table.height}}}};
  j["segmentation"] = {{"num_seeds", c.segmentation.num_seeds},
                       {"compactness", c.segmentation.compactness},
                       {"max_iters", c.segmentation.max_iters},
                       {"min_cell_count", c.segmentation.min_cell_count},
                       {"rng_seed", c.segmentation.rng_seed}};
  j["model"] = {{"num_states", c.model.num_states},
                {"skip", c.model.skip},
                {"components", c.model.components},
                {"init", c.model.init},
                {"init_var", c.model.init_var},
                {"max_iters", c.model.max_iters},
                {"tol", c.model.tol},
                {"var_floor", c.model.var_floor},
                {"training", c.model.training},
                {"min_segment_len", c.model.min_segment_len},
                {"seed", c.model.seed}};
  j["classifier"] = {{"type", c.classifier.type},
                     {"k", c.classifier.k},
                     {"seed", c.classifier.seed}};
  j["evaluation"] = {{"train_fraction", c.evaluation.train_fraction},
                     {"split_seed", c.evaluation.split_seed},
                     {"representation", to_string(c.evaluation.representation)}};
  return j;
}

inline nlohmann::json experiment_result_to_json(const ExperimentResult& r,
                                                const ExperimentConfig& config) {
  nlohmann::json j;
  j["run_id"] = r.run_id;
  j["config"] = experiment_config_to_json(config);
  j["train_scenes"] = r.train_scenes;
  j["test_scenes"] = r.test_scenes;
  j["mean_macro_f1"] = format_real(r.mean_macro_f1);
  j["pooled_macro_f1"] = format_real(r.pooled_macro_f1);
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t c = 0; c < r.pooled_confusion.classes.size(); ++c)
    per_class[r.pooled_confusion.classes[c]] = format_real(r.pooled_per_class_f1[c]);
  j["pooled_per_class_f1"] = std::move(per_class);
  j["confusion"] = {{"classes", r.pooled_confusion.classes},
                    {"counts", r.pooled_confusion.counts}};
  nlohmann::json seqs = nlohmann::json::array();
  for (const auto& s : r.sequences)
    seqs.push_back({{"scene_id", s.scene_id}, {"macro_f1", format_real(s.macro_f1)}});
  j["sequences"] = std::move(seqs);
  j["provenance"] = r.provenance;
  return j;
}

// Flat scores CSV: one row per test scene plus one pooled row per run.
inline std::string result_csv_header() {
  return "run_id,representation,classifier,bakis_length,scene_id,macro_f1,"
         "f1_ground,f1_table,f1_object\n";
}

inline void append_result_csv(std::ostringstream& out, const ExperimentResult& r,
                              const ExperimentConfig& config) {
  const std::string prefix = r.run_id + "," + to_string(config.evaluation.representation) +
                             "," + config.classifier.type + "," +
                             std::to_string(config.model.num_states) + ",";
  const std::vector<std::string> classes(kClassNames.begin(), kClassNames.end());
  for (const auto& s : r.sequences) {
    const auto cm = confusion(s.truth, s.predicted, classes);
    const auto f1 = per_class_f1(cm);
    out << prefix << s.scene_id << "," << format_real(s.macro_f1);
    for (const double v : f1) out << "," << format_real(v);
    out << "\n";
  }
  out << prefix << "pooled," << format_real(r.pooled_macro_f1);
  for (const double v : r.pooled_per_class_f1) out << "," << format_real(v);
  out << "\n";
}

// Per-frame predictions CSV for one decoded sequence.
inline std::string predictions_csv(const SequenceResult& s) {
  std::ostringstream out;
  out << "frame,truth,predicted\n";
  for (std::size_t t = 0; t < s.truth.size(); ++t)
    out << t << "," << s.truth[t] << "," << s.predicted[t] << "\n";
  return out.str();
}

}  // namespace sogm
