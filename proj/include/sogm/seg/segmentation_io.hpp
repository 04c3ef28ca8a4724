#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sogm/common/io_util.hpp"
#include "sogm/core/grid.hpp"
#include "sogm/seg/supercell.hpp"

namespace sogm {

// On-disk segmentation: `<name>.json` manifest (params + per-supercell
// statistics) plus `<name>.labels.u32` (width*height little-endian uint32
// ids, row-major).

inline void save_segmentation(const Segmentation& seg, const SegmentationParams& params,
                              const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["width"] = seg.spec.width;
  manifest["height"] = seg.spec.height;
  manifest["resolution"] = seg.spec.resolution;
  manifest["origin"] = {seg.spec.origin_x, seg.spec.origin_y};
  manifest["params"] = {{"num_seeds", params.num_seeds},
                        {"compactness", params.compactness},
                        {"max_iters", params.max_iters},
                        {"min_cell_count", params.min_cell_count},
                        {"rng_seed", params.rng_seed}};
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& sc : seg.supercells) {
    nlohmann::json j;
    j["id"] = sc.id;
    j["size"] = sc.members.size();
    j["centroid"] = {sc.centroid_x, sc.centroid_y};
    nlohmann::json mean_p = nlohmann::json::array();
    for (const double p : sc.mean_p) mean_p.push_back(format_real(p));
    nlohmann::json var_l = nlohmann::json::array();
    for (const double v : sc.var_l) var_l.push_back(format_real(v));
    j["mean_p"] = std::move(mean_p);
    j["var_l"] = std::move(var_l);
    cells.push_back(std::move(j));
  }
  manifest["supercells"] = std::move(cells);
  write_file_text(dir / (name + ".json"), manifest.dump(2) + "\n");

  std::vector<std::uint8_t> blob;
  blob.reserve(seg.labels.size() * 4);
  for (const std::uint32_t id : seg.labels) append_le_u32(blob, id);
  write_file_bytes(dir / (name + ".labels.u32"), blob);
}

// Rebuilds the segmentation from the label blob; statistics come from the
// manifest rather than being recomputed (the grid is not required).
inline Segmentation load_segmentation(const std::filesystem::path& dir,
                                      const std::string& name) {
  const auto manifest_path = dir / (name + ".json");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file_text(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParams("bad segmentation manifest " + manifest_path.string() + ": " +
                        e.what());
  }

  Segmentation seg;
  seg.spec.width = manifest.at("width").get<int>();
  seg.spec.height = manifest.at("height").get<int>();
  seg.spec.resolution = manifest.at("resolution").get<double>();
  seg.spec.origin_x = manifest.at("origin").at(0).get<double>();
  seg.spec.origin_y = manifest.at("origin").at(1).get<double>();

  const auto blob = read_file_bytes(dir / (name + ".labels.u32"));
  if (blob.size() != seg.spec.cell_count() * 4)
    throw InvalidParams("label blob size mismatch for " + name);
  seg.labels.resize(seg.spec.cell_count());
  for (std::size_t f = 0; f < seg.labels.size(); ++f)
    seg.labels[f] = read_le_u32(blob.data() + 4 * f);

  seg.supercells.resize(manifest.at("supercells").size());
  for (const auto& j : manifest.at("supercells")) {
    Supercell sc;
    sc.id = j.at("id").get<int>();
    sc.centroid_x = j.at("centroid").at(0).get<double>();
    sc.centroid_y = j.at("centroid").at(1).get<double>();
    for (const auto& p : j.at("mean_p")) sc.mean_p.push_back(parse_real(p.get<std::string>()));
    for (const auto& v : j.at("var_l")) sc.var_l.push_back(parse_real(v.get<std::string>()));
    if (sc.id < 0 || static_cast<std::size_t>(sc.id) >= seg.supercells.size())
      throw InvalidParams("supercell id out of range in " + name);
    seg.supercells[sc.id] = std::move(sc);
  }
  for (int y = 0; y < seg.spec.height; ++y)
    for (int x = 0; x < seg.spec.width; ++x) {
      const std::size_t f = seg.spec.flat(GridIndex{x, y});
      if (seg.labels[f] >= seg.supercells.size())
        throw InvalidParams("label out of range in " + name);
      seg.supercells[seg.labels[f]].members.push_back(GridIndex{x, y});
    }
  return seg;
}

inline SegmentationParams segmentation_params_from_json(const nlohmann::json& j) {
  SegmentationParams params;
  if (j.contains("num_seeds")) params.num_seeds = j.at("num_seeds").get<int>();
  if (j.contains("compactness")) params.compactness = j.at("compactness").get<double>();
  if (j.contains("max_iters")) params.max_iters = j.at("max_iters").get<int>();
  if (j.contains("min_cell_count"))
    params.min_cell_count = j.at("min_cell_count").get<int>();
  if (j.contains("rng_seed")) params.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return params;
}

}  // namespace sogm
