#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sogm/common/io_util.hpp"
#include "sogm/hmm/model.hpp"

namespace sogm {

// Model JSON keeps every real as a decimal string at 17 significant digits
// so serialization round-trips bit-for-bit.

namespace detail {

inline nlohmann::json reals_to_json(const std::vector<double>& v) {
  nlohmann::json j = nlohmann::json::array();
  for (const double x : v) j.push_back(format_real(x));
  return j;
}

inline nlohmann::json reals_to_json(const std::vector<std::vector<double>>& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : m) j.push_back(reals_to_json(row));
  return j;
}

inline std::vector<double> reals_from_json(const nlohmann::json& j) {
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(parse_real(x.get<std::string>()));
  return v;
}

inline std::vector<std::vector<double>> real_rows_from_json(const nlohmann::json& j) {
  std::vector<std::vector<double>> m;
  m.reserve(j.size());
  for (const auto& row : j) m.push_back(reals_from_json(row));
  return m;
}

}  // namespace detail

inline nlohmann::json property_model_to_json(const PropertyModel& model) {
  nlohmann::json j;
  j["num_states"] = model.num_states;
  j["start"] = detail::reals_to_json(model.start);
  j["transition"] = detail::reals_to_json(model.transition);
  nlohmann::json mask = nlohmann::json::array();
  for (const auto& row : model.topology_mask) {
    nlohmann::json r = nlohmann::json::array();
    for (const bool b : row) r.push_back(b);
    mask.push_back(std::move(r));
  }
  j["topology_mask"] = std::move(mask);
  nlohmann::json emissions = nlohmann::json::array();
  for (const auto& gmm : model.emissions) {
    nlohmann::json e;
    e["weights"] = detail::reals_to_json(gmm.weights);
    e["means"] = detail::reals_to_json(gmm.means);
    e["vars"] = detail::reals_to_json(gmm.vars);
    emissions.push_back(std::move(e));
  }
  j["emissions"] = std::move(emissions);
  return j;
}

inline PropertyModel property_model_from_json(const nlohmann::json& j) {
  PropertyModel model;
  model.num_states = j.at("num_states").get<int>();
  model.start = detail::reals_from_json(j.at("start"));
  model.transition = detail::real_rows_from_json(j.at("transition"));
  for (const auto& row : j.at("topology_mask")) {
    std::vector<bool> r;
    for (const auto& b : row) r.push_back(b.get<bool>());
    model.topology_mask.push_back(std::move(r));
  }
  for (const auto& e : j.at("emissions")) {
    GmmParams gmm;
    gmm.weights = detail::reals_from_json(e.at("weights"));
    gmm.means = detail::real_rows_from_json(e.at("means"));
    gmm.vars = detail::real_rows_from_json(e.at("vars"));
    model.emissions.push_back(std::move(gmm));
  }
  return model;
}

inline nlohmann::json hierarchical_model_to_json(const HierarchicalModel& hmodel) {
  nlohmann::json j;
  j["classes"] = hmodel.classes;
  j["prior"] = detail::reals_to_json(hmodel.prior);
  nlohmann::json submodels = nlohmann::json::array();
  for (const auto& m : hmodel.submodels) submodels.push_back(property_model_to_json(m));
  j["submodels"] = std::move(submodels);
  return j;
}

inline HierarchicalModel hierarchical_model_from_json(const nlohmann::json& j) {
  HierarchicalModel hmodel;
  hmodel.classes = j.at("classes").get<std::vector<std::string>>();
  hmodel.prior = detail::reals_from_json(j.at("prior"));
  for (const auto& m : j.at("submodels"))
    hmodel.submodels.push_back(property_model_from_json(m));
  if (hmodel.submodels.size() != hmodel.classes.size())
    throw InvalidParams("model JSON: classes and submodels differ in length");
  return hmodel;
}

inline void save_model(const HierarchicalModel& hmodel, const std::filesystem::path& path) {
  write_file_text(path, hierarchical_model_to_json(hmodel).dump(2) + "\n");
}

inline HierarchicalModel load_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParams("bad model file " + path.string() + ": " + e.what());
  }
  return hierarchical_model_from_json(j);
}

}  // namespace sogm
