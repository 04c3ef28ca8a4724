#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "sogm/core/grid.hpp"

using namespace sogm;

TEST_CASE("fresh grids hold exactly 0.5 everywhere") {
  const auto grid = test::uniform_grid(8, 6, 3);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x) {
      const auto v = grid.probability_vector(GridIndex{x, y});
      REQUIRE(v.size() == 3);
      for (const double p : v) CHECK(p == 0.5);
    }
}

TEST_CASE("integrate_observation updates only the observed cells") {
  const auto grid = test::uniform_grid(4, 4, 1);
  LayerObservation obs{"layer0", {{GridIndex{1, 2}, 1.0}}};
  const auto updated = integrate_observation(grid, obs);
  CHECK(updated.probability(0, GridIndex{1, 2}) == Approx(inverse_logit(1.0)).margin(1e-12));
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      if (x == 1 && y == 2) continue;
      CHECK(updated.probability(0, GridIndex{x, y}) == 0.5);
    }
  CHECK(grid.probability(0, GridIndex{1, 2}) == 0.5);  // input untouched
}

TEST_CASE("observation fusion commutes") {
  const auto grid = test::uniform_grid(4, 4, 1);
  LayerObservation a{"layer0", {{GridIndex{0, 0}, 0.7}, {GridIndex{1, 1}, -0.4}}};
  LayerObservation b{"layer0", {{GridIndex{0, 0}, -1.2}, {GridIndex{2, 3}, 0.9}}};
  const auto ab = integrate_observation(integrate_observation(grid, a), b);
  const auto ba = integrate_observation(integrate_observation(grid, b), a);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      CHECK(ab.log_odds(0, GridIndex{x, y}) == ba.log_odds(0, GridIndex{x, y}));
}

TEST_CASE("repeated observations sum in log-odds space") {
  auto grid = test::uniform_grid(3, 3, 1);
  for (int i = 0; i < 10; ++i)
    apply_observation(grid, LayerObservation{"layer0", {{GridIndex{1, 1}, 0.3}}});
  // Summation oracle: ten updates of 0.3 land at 3.0.
  CHECK(grid.log_odds(0, GridIndex{1, 1}) == Approx(3.0).margin(1e-12));
}

TEST_CASE("unknown layers and out-of-bounds indices are rejected") {
  auto grid = test::uniform_grid(4, 4, 2);
  CHECK_THROWS_AS(
      apply_observation(grid, LayerObservation{"nope", {{GridIndex{0, 0}, 1.0}}}),
      UnknownLayer);
  CHECK_THROWS_AS(
      apply_observation(grid, LayerObservation{"layer0", {{GridIndex{4, 0}, 1.0}}}),
      IndexOutOfBounds);
  CHECK_THROWS_AS(grid.probability_vector(GridIndex{-1, 0}), IndexOutOfBounds);

  // A failed observation leaves the grid unchanged.
  CHECK_THROWS_AS(apply_observation(grid, LayerObservation{"layer0",
                                                           {{GridIndex{0, 0}, 2.0},
                                                            {GridIndex{9, 9}, 1.0}}}),
                  IndexOutOfBounds);
  CHECK(grid.probability(0, GridIndex{0, 0}) == 0.5);
}

TEST_CASE("probability_vector follows layer order and length") {
  auto grid = test::uniform_grid(2, 2, 1);
  apply_observation(grid, LayerObservation{"layer0", {{GridIndex{0, 0}, 2.0}}});
  const auto v = grid.probability_vector(GridIndex{0, 0});
  REQUIRE(v.size() == 1);
  CHECK(v[0] == Approx(inverse_logit(2.0)).margin(1e-12));
}

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(SemanticGrid(GridSpec{0, 4, 1.0, 0, 0}, {"a"}), InvalidParams);
  CHECK_THROWS_AS(SemanticGrid(GridSpec{4, 4, 0.0, 0, 0}, {"a"}), InvalidParams);
  CHECK_THROWS_AS(SemanticGrid(GridSpec{4, 4, 1.0, 0, 0}, {"a", "a"}), InvalidParams);
  CHECK_THROWS_AS(SemanticGrid(GridSpec{4, 4, 1.0, 0, 0}, {}), InvalidParams);
}

TEST_CASE("heading normalization lands in (-pi, pi]") {
  CHECK(normalize_heading(0.0) == 0.0);
  CHECK(normalize_heading(3.14159265358979312) == Approx(3.14159265358979312));
  CHECK(normalize_heading(-3.14159265358979312) == Approx(3.14159265358979312));
  CHECK(normalize_heading(7.0) == Approx(7.0 - 2.0 * 3.14159265358979312));
}
