#pragma once

#include <array>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sogm/common/rng.hpp"
#include "sogm/core/grid.hpp"

namespace sogm::test {

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / (tag + "_" + std::to_string(rd()));
      if (std::filesystem::create_directories(candidate)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline SemanticGrid uniform_grid(int width, int height, int layers, double p = 0.5) {
  std::vector<std::string> names;
  for (int n = 0; n < layers; ++n) names.push_back("layer" + std::to_string(n));
  SemanticGrid grid(GridSpec{width, height, 1.0, 0.0, 0.0}, names);
  if (p != 0.5)
    for (int n = 0; n < layers; ++n)
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) grid.set_probability(n, GridIndex{x, y}, p);
  return grid;
}

// Left half at p_left, right half at p_right, single layer.
inline SemanticGrid two_half_grid(int width, int height, double p_left, double p_right) {
  SemanticGrid grid(GridSpec{width, height, 1.0, 0.0, 0.0}, {"layer0"});
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      grid.set_probability(0, GridIndex{x, y}, x < width / 2 ? p_left : p_right);
  return grid;
}

// Four homogeneous quadrants with distinct probabilities, single layer.
inline SemanticGrid quadrant_grid(int size, const std::array<double, 4>& probs) {
  SemanticGrid grid(GridSpec{size, size, 1.0, 0.0, 0.0}, {"layer0"});
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const int q = (y < size / 2 ? 0 : 2) + (x < size / 2 ? 0 : 1);
      grid.set_probability(0, GridIndex{x, y}, probs[q]);
    }
  return grid;
}

inline void add_logit_noise(SemanticGrid& grid, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  for (int n = 0; n < grid.layer_count(); ++n) {
    auto cells = grid.log_odds_layer(n);
    for (auto& l : cells) l = clamp_log_odds(l + rng.normal(0.0, sigma));
  }
}

}  // namespace sogm::test
