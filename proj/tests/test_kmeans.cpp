#include <catch2/catch.hpp>

#include <algorithm>
#include <vector>

#include "sogm/common/kmeans.hpp"
#include "sogm/common/rng.hpp"

using namespace sogm;

namespace {
std::vector<std::vector<double>> blob(Rng& rng, double cx, double cy, double spread, int n) {
  std::vector<std::vector<double>> points;
  for (int i = 0; i < n; ++i)
    points.push_back({cx + rng.normal(0.0, spread), cy + rng.normal(0.0, spread)});
  return points;
}
}  // namespace

TEST_CASE("kmeans recovers well-separated blobs") {
  Rng rng(42);
  auto points = blob(rng, -5.0, 0.0, 0.05, 60);
  const auto other = blob(rng, 5.0, 1.0, 0.05, 60);
  points.insert(points.end(), other.begin(), other.end());

  const auto res = kmeans(points, 2, 7);
  std::vector<std::vector<double>> centers = res.centers;
  std::sort(centers.begin(), centers.end());
  CHECK(centers[0][0] == Approx(-5.0).margin(0.05));
  CHECK(centers[1][0] == Approx(5.0).margin(0.05));
}

TEST_CASE("kmeans objective is non-increasing across Lloyd iterations") {
  Rng rng(3);
  std::vector<std::vector<double>> points;
  for (int i = 0; i < 200; ++i) points.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
  const auto res = kmeans(points, 5, 11);
  REQUIRE(res.inertia_trace.size() >= 1);
  for (std::size_t i = 1; i < res.inertia_trace.size(); ++i)
    CHECK(res.inertia_trace[i] <= res.inertia_trace[i - 1] + 1e-9);
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
  Rng rng(5);
  std::vector<std::vector<double>> points;
  for (int i = 0; i < 100; ++i) points.push_back({rng.uniform(0, 1), rng.uniform(0, 1)});
  const auto a = kmeans(points, 4, 123);
  const auto b = kmeans(points, 4, 123);
  CHECK(a.centers == b.centers);
  CHECK(a.assignment == b.assignment);
}

TEST_CASE("kmeans rejects bad inputs") {
  std::vector<std::vector<double>> points = {{0.0}, {1.0}};
  CHECK_THROWS_AS(kmeans(points, 3, 1), InvalidParams);
  CHECK_THROWS_AS(kmeans({}, 1, 1), InvalidParams);
}

TEST_CASE("rng streams are reproducible and forks are independent") {
  Rng a(99), b(99);
  for (int i = 0; i < 32; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng f1 = Rng(99).fork(1);
  Rng f2 = Rng(99).fork(2);
  CHECK(f1.next_u64() != f2.next_u64());
}
