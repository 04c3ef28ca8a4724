#include <catch2/catch.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sogm/pipeline/trajectory.hpp"
#include "sogm/seg/supercell.hpp"

using namespace sogm;

namespace {
const GridSpec kSpec{16, 16, 1.0, 0.0, 0.0};
}

TEST_CASE("bresenham pinned examples") {
  CHECK(bresenham_cells({0, 0}, {3, 0}, kSpec) ==
        std::vector<GridIndex>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  CHECK(bresenham_cells({0, 0}, {2, 2}, kSpec) ==
        std::vector<GridIndex>{{0, 0}, {1, 1}, {2, 2}});
  const auto line = bresenham_cells({0, 0}, {5, 2}, kSpec);
  CHECK(line.size() == 6);
  CHECK(line == test::reference_bresenham({0, 0}, {5, 2}));
}

TEST_CASE("bresenham endpoints must be inside the grid") {
  CHECK_THROWS_AS(bresenham_cells({0, 0}, {16, 0}, kSpec), IndexOutOfBounds);
  CHECK_THROWS_AS(bresenham_cells({-1, 0}, {3, 0}, kSpec), IndexOutOfBounds);
}

TEST_CASE("bresenham lines are 8-connected, monotone, repeat-free") {
  Rng rng(111);
  for (int trial = 0; trial < 200; ++trial) {
    const GridIndex a{static_cast<int>(rng.uniform_index(16)),
                      static_cast<int>(rng.uniform_index(16))};
    const GridIndex b{static_cast<int>(rng.uniform_index(16)),
                      static_cast<int>(rng.uniform_index(16))};
    const auto line = bresenham_cells(a, b, kSpec);
    REQUIRE(!line.empty());
    CHECK(line.front() == a);
    CHECK(line.back() == b);
    CHECK(line.size() ==
          static_cast<std::size_t>(std::max(std::abs(b.x - a.x), std::abs(b.y - a.y))) + 1);
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < line.size(); ++i) {
      CHECK(seen.insert({line[i].x, line[i].y}).second);
      if (i == 0) continue;
      const int dx = line[i].x - line[i - 1].x;
      const int dy = line[i].y - line[i - 1].y;
      CHECK(std::max(std::abs(dx), std::abs(dy)) == 1);
      if (b.x != a.x) CHECK(dx * (b.x - a.x) >= 0);
      if (b.y != a.y) CHECK(dy * (b.y - a.y) >= 0);
    }
  }
}

TEST_CASE("cellwise sampling of a homogeneous grid is constant") {
  auto grid = test::uniform_grid(16, 16, 2, 0.8);
  Trajectory traj{{Pose{0.5, 0.5, 0.0}, Pose{15.5, 9.5, 0.0}}, 1.0};
  const auto obs = sample_trajectory(grid, nullptr, nullptr, traj, RepresentationTag::cellwise);
  REQUIRE(obs.length() > 0);
  CHECK(obs.source == "cellwise");
  for (const auto& frame : obs.frames) {
    CHECK(frame[0] == Approx(logit(0.8)).margin(1e-12));
    CHECK(frame[1] == Approx(logit(0.8)).margin(1e-12));
  }
}

TEST_CASE("clustered sampling steps exactly at the region boundary") {
  const auto grid = test::two_half_grid(16, 8, 0.9, 0.1);
  const auto seg = extract_supercells(grid, SegmentationParams{2, 0.1, 10, 4, 1});
  Trajectory traj{{Pose{0.5, 4.5, 0.0}, Pose{15.5, 4.5, 0.0}}, 1.0};
  const auto obs = sample_trajectory(grid, &seg, nullptr, traj, RepresentationTag::clustered);
  REQUIRE(obs.length() == 16);
  for (int t = 0; t < 16; ++t)
    CHECK(obs.frames[t][0] == Approx(logit(t < 8 ? 0.9 : 0.1)).margin(1e-9));
}

TEST_CASE("point cloud sampling with one point is constant") {
  const auto grid = test::uniform_grid(10, 10, 1, 0.7);
  const auto seg = extract_supercells(grid, SegmentationParams{1, 0.25, 5, 1, 3});
  const auto pc = to_point_cloud(seg);
  Trajectory traj{{Pose{0.5, 0.5, 0.0}, Pose{9.5, 9.5, 0.0}}, 0.5};
  const auto obs = sample_trajectory(grid, nullptr, &pc, traj, RepresentationTag::pointcloud);
  REQUIRE(obs.length() > 0);
  for (const auto& frame : obs.frames)
    CHECK(frame[0] == Approx(logit(0.7)).margin(1e-9));
}

TEST_CASE("missing representation inputs are rejected") {
  const auto grid = test::uniform_grid(8, 8, 1);
  Trajectory traj{{Pose{0.5, 0.5, 0.0}, Pose{7.5, 7.5, 0.0}}, 1.0};
  CHECK_THROWS_AS(sample_trajectory(grid, nullptr, nullptr, traj, RepresentationTag::clustered),
                  InvalidParams);
  CHECK_THROWS_AS(
      sample_trajectory(grid, nullptr, nullptr, traj, RepresentationTag::pointcloud),
      InvalidParams);
}

TEST_CASE("trajectories outside the grid are rejected") {
  const auto grid = test::uniform_grid(8, 8, 1);
  Trajectory traj{{Pose{0.5, 0.5, 0.0}, Pose{20.0, 0.5, 0.0}}, 1.0};
  CHECK_THROWS_AS(sample_trajectory(grid, nullptr, nullptr, traj, RepresentationTag::cellwise),
                  IndexOutOfBounds);
}

TEST_CASE("trajectory validation") {
  Trajectory no_step{{Pose{0, 0, 0}, Pose{1, 0, 0}}, 0.0};
  CHECK_THROWS_AS(no_step.validate(), InvalidParams);
  Trajectory one_point{{Pose{0, 0, 0}}, 1.0};
  CHECK_THROWS_AS(one_point.validate(), InvalidParams);
}

TEST_CASE("polyline samples advance by the step across waypoints") {
  Trajectory traj{{Pose{0.0, 0.0, 0.0}, Pose{3.0, 0.0, 0.0}, Pose{3.0, 2.0, 0.0}}, 0.5};
  const auto samples = trajectory_samples(traj);
  REQUIRE(samples.size() == 11);  // arc length 5.0 at step 0.5, inclusive of 0
  CHECK(samples.front().first == 0.0);
  CHECK(samples.back().second == Approx(2.0).margin(1e-12));
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double d = std::hypot(samples[i].first - samples[i - 1].first,
                                samples[i].second - samples[i - 1].second);
    CHECK(d == Approx(0.5).margin(1e-9));
  }
}
