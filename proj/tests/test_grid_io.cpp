#include <catch2/catch.hpp>

#include <filesystem>

#include "helpers.hpp"
#include "sogm/core/grid_io.hpp"

using namespace sogm;

TEST_CASE("grid save/load round-trips within float32 precision") {
  test::TempDir dir("sogm_grid_io");
  auto grid = test::uniform_grid(6, 5, 2);
  Rng rng(7);
  for (int n = 0; n < 2; ++n)
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 6; ++x)
        grid.set_probability(n, GridIndex{x, y}, rng.uniform(0.01, 0.99));

  save_grid(grid, dir.path(), "map");
  const auto loaded = load_grid(dir.path(), "map");

  CHECK(loaded.spec() == grid.spec());
  CHECK(loaded.layer_names() == grid.layer_names());
  for (int n = 0; n < 2; ++n)
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 6; ++x)
        CHECK(loaded.probability(n, GridIndex{x, y}) ==
              Approx(grid.probability(n, GridIndex{x, y})).margin(1e-6));

  // Saving the loaded grid again reproduces the blobs byte for byte.
  save_grid(loaded, dir.path(), "map2");
  CHECK(hash_file(dir.path() / "map.layer0.f32") == hash_file(dir.path() / "map2.layer0.f32"));
  CHECK(hash_file(dir.path() / "map.layer1.f32") == hash_file(dir.path() / "map2.layer1.f32"));
}

TEST_CASE("layer blobs are little-endian float32 row-major") {
  test::TempDir dir("sogm_grid_blob");
  auto grid = test::uniform_grid(2, 1, 1);
  grid.set_probability(0, GridIndex{0, 0}, 0.25);
  grid.set_probability(0, GridIndex{1, 0}, 0.75);
  save_grid(grid, dir.path(), "g");
  const auto blob = read_file_bytes(dir.path() / "g.layer0.f32");
  REQUIRE(blob.size() == 8);
  CHECK(read_le_f32(blob.data()) == Approx(0.25f));
  CHECK(read_le_f32(blob.data() + 4) == Approx(0.75f));
}

TEST_CASE("missing grid files raise NotFound") {
  test::TempDir dir("sogm_grid_missing");
  CHECK_THROWS_AS(load_grid(dir.path(), "absent"), NotFound);
}

TEST_CASE("csv export lists every cell with per-layer probabilities") {
  test::TempDir dir("sogm_grid_csv");
  const auto grid = test::uniform_grid(3, 2, 2);
  export_grid_csv(grid, dir.path() / "grid.csv");
  const auto text = read_file_text(dir.path() / "grid.csv");
  CHECK(text.rfind("x,y,layer0,layer1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);  // header + 6 cells
}
