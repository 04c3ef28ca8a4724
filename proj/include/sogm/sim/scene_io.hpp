#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sogm/common/io_util.hpp"
#include "sogm/pipeline/trajectory.hpp"
#include "sogm/sim/dataset.hpp"
#include "sogm/sim/scene.hpp"

namespace sogm {

// Scene persistence: the SemanticGrid goes through the grid format; ground
// truth is a `labels.u8` blob (row-major class ids) plus `classes.json`;
// the scene spec and trajectory are JSON documents.

inline nlohmann::json scene_spec_to_json(const SceneSpec& spec) {
  nlohmann::json j;
  j["table"] = {{"x", spec.table.x},
                {"y", spec.table.y},
                {"width", spec.table.width},
                {"height", spec.table.height}};
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& d : spec.objects)
    objects.push_back({{"cx", d.cx}, {"cy", d.cy}, {"radius", d.radius}});
  j["objects"] = std::move(objects);
  j["grid"] = {{"width", spec.grid.width},
               {"height", spec.grid.height},
               {"resolution", spec.grid.resolution},
               {"origin", {spec.grid.origin_x, spec.grid.origin_y}}};
  j["rng_seed"] = spec.rng_seed;
  return j;
}

inline SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  SceneSpec spec;
  spec.table.x = j.at("table").at("x").get<double>();
  spec.table.y = j.at("table").at("y").get<double>();
  spec.table.width = j.at("table").at("width").get<double>();
  spec.table.height = j.at("table").at("height").get<double>();
  for (const auto& o : j.at("objects"))
    spec.objects.push_back(Disc{o.at("cx").get<double>(), o.at("cy").get<double>(),
                                o.at("radius").get<double>()});
  spec.grid.width = j.at("grid").at("width").get<int>();
  spec.grid.height = j.at("grid").at("height").get<int>();
  spec.grid.resolution = j.at("grid").at("resolution").get<double>();
  spec.grid.origin_x = j.at("grid").at("origin").at(0).get<double>();
  spec.grid.origin_y = j.at("grid").at("origin").at(1).get<double>();
  spec.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return spec;
}

inline nlohmann::json trajectory_to_json(const Trajectory& traj) {
  nlohmann::json j;
  j["step"] = traj.step;
  nlohmann::json wp = nlohmann::json::array();
  for (const auto& p : traj.waypoints) wp.push_back({p.x, p.y, p.heading});
  j["waypoints"] = std::move(wp);
  return j;
}

inline Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory traj;
  traj.step = j.at("step").get<double>();
  for (const auto& p : j.at("waypoints"))
    traj.waypoints.push_back(
        Pose{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
  return traj;
}

inline void save_ground_truth(const GroundTruthGrid& truth, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::uint8_t> blob;
  blob.reserve(truth.labels.size());
  for (const CellClass c : truth.labels) blob.push_back(static_cast<std::uint8_t>(c));
  write_file_bytes(dir / "labels.u8", blob);
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& n : kClassNames) classes.push_back(n);
  write_file_text(dir / "classes.json", classes.dump() + "\n");
}

inline GroundTruthGrid load_ground_truth(const std::filesystem::path& dir,
                                         const GridSpec& spec) {
  const auto blob = read_file_bytes(dir / "labels.u8");
  if (blob.size() != spec.cell_count())
    throw InvalidParams("label blob size mismatch in " + dir.string());
  GroundTruthGrid truth;
  truth.spec = spec;
  truth.labels.reserve(blob.size());
  for (const std::uint8_t b : blob) {
    if (b >= kClassNames.size()) throw InvalidParams("bad class id in " + dir.string());
    truth.labels.push_back(static_cast<CellClass>(b));
  }
  return truth;
}

}  // namespace sogm
