#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sogm/common/io_util.hpp"
#include "sogm/core/grid.hpp"

namespace sogm {

// On-disk grid format: `<name>.json` manifest plus one `<name>.<layer>.f32`
// blob per layer (width*height little-endian float32 probabilities,
// row-major).

inline void save_grid(const SemanticGrid& grid, const std::filesystem::path& dir,
                      const std::string& name) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["width"] = grid.spec().width;
  manifest["height"] = grid.spec().height;
  manifest["resolution"] = grid.spec().resolution;
  manifest["origin"] = {grid.spec().origin_x, grid.spec().origin_y};
  manifest["eps"] = kProbEps;
  manifest["layers"] = grid.layer_names();
  write_file_text(dir / (name + ".json"), manifest.dump(2) + "\n");

  for (int n = 0; n < grid.layer_count(); ++n) {
    const auto cells = grid.log_odds_layer(n);
    std::vector<std::uint8_t> blob;
    blob.reserve(cells.size() * 4);
    for (const double l : cells)
      append_le_f32(blob, static_cast<float>(inverse_logit(l)));
    write_file_bytes(dir / (name + "." + grid.layer_names()[n] + ".f32"), blob);
  }
}

inline SemanticGrid load_grid(const std::filesystem::path& dir, const std::string& name) {
  const auto manifest_path = dir / (name + ".json");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file_text(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParams("bad grid manifest " + manifest_path.string() + ": " + e.what());
  }

  GridSpec spec;
  spec.width = manifest.at("width").get<int>();
  spec.height = manifest.at("height").get<int>();
  spec.resolution = manifest.at("resolution").get<double>();
  spec.origin_x = manifest.at("origin").at(0).get<double>();
  spec.origin_y = manifest.at("origin").at(1).get<double>();
  const auto names = manifest.at("layers").get<std::vector<std::string>>();

  SemanticGrid grid(spec, names);
  for (int n = 0; n < grid.layer_count(); ++n) {
    const auto blob = read_file_bytes(dir / (name + "." + names[n] + ".f32"));
    if (blob.size() != spec.cell_count() * 4)
      throw InvalidParams("layer blob size mismatch for " + names[n]);
    auto cells = grid.log_odds_layer(n);
    for (std::size_t f = 0; f < spec.cell_count(); ++f)
      cells[f] = logit(static_cast<double>(read_le_f32(blob.data() + 4 * f)));
  }
  return grid;
}

// Debug export: one row per cell with the probability of every layer.
inline void export_grid_csv(const SemanticGrid& grid, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "x,y";
  for (const auto& n : grid.layer_names()) out << "," << n;
  out << "\n";
  for (int y = 0; y < grid.spec().height; ++y)
    for (int x = 0; x < grid.spec().width; ++x) {
      out << x << "," << y;
      for (int n = 0; n < grid.layer_count(); ++n)
        out << "," << format_real(grid.probability(n, GridIndex{x, y}));
      out << "\n";
    }
  write_file_text(path, out.str());
}

}  // namespace sogm
