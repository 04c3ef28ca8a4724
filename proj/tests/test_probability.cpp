#include <catch2/catch.hpp>

#include <algorithm>
#include <vector>

#include "sogm/common/rng.hpp"
#include "sogm/core/probability.hpp"

using namespace sogm;

TEST_CASE("logit at the symmetry point and the response plateau values") {
  CHECK(logit(0.5) == 0.0);
  CHECK(logit(0.88079708814621) == Approx(2.0).margin(1e-6));
  CHECK(logit(0.119202919304371) == Approx(-2.0).margin(1e-6));
}

TEST_CASE("inverse_logit closed-form values") {
  CHECK(inverse_logit(0.0) == 0.5);
  CHECK(inverse_logit(2.0) == Approx(0.8807970779778823).margin(1e-9));
  CHECK(inverse_logit(-2.0) == Approx(0.11920292202211755).margin(1e-9));
}

TEST_CASE("logit/inverse_logit round-trip over the probability sweep") {
  std::vector<double> ps = {kProbEps, 1.0 - kProbEps};
  for (int i = 1; i <= 99; ++i) ps.push_back(i / 100.0);
  for (const double p : ps)
    CHECK(inverse_logit(logit(p)) == Approx(p).margin(1e-9));
}

TEST_CASE("clamping absorbs boundary inputs") {
  CHECK(logit(0.0) == logit(kProbEps));
  CHECK(logit(1.0) == logit(1.0 - kProbEps));
  CHECK(std::isfinite(logit(0.0)));
  CHECK(std::isfinite(logit(1.0)));
  CHECK(clamp_probability(-0.3) == kProbEps);
  CHECK(clamp_probability(1.7) == 1.0 - kProbEps);
}

TEST_CASE("update_cell fuses by addition in log-odds space") {
  CHECK(update_cell(0.0, 0.85) == 0.85);

  // Odds-product oracle: fusing p with p gives p^2 / (p^2 + (1-p)^2).
  const double p = 0.8;
  const double fused = p * p / (p * p + (1.0 - p) * (1.0 - p));
  CHECK(fused == Approx(0.9411764706).margin(1e-9));
  CHECK(update_cell(logit(0.8), logit(0.8)) == Approx(logit(fused)).margin(1e-9));

  CHECK(update_cell(logit(0.8), logit(0.2)) == Approx(0.0).margin(1e-12));
}

TEST_CASE("update_cell clamps to the log-odds range") {
  double l = 0.0;
  for (int i = 0; i < 100; ++i) l = update_cell(l, 5.0);
  CHECK(l == kLogOddsMax);
  CHECK(inverse_logit(l) <= 1.0 - kProbEps + 1e-12);
}

TEST_CASE("fusion is order-independent over random permutations") {
  Rng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> updates;
    const int count = 2 + static_cast<int>(rng.uniform_index(8));
    for (int i = 0; i < count; ++i) updates.push_back(rng.uniform(-2.0, 2.0));

    double reference = 0.0;
    for (const double u : updates) reference = update_cell(reference, u);

    rng.shuffle(updates);
    double permuted = 0.0;
    for (const double u : updates) permuted = update_cell(permuted, u);
    CHECK(permuted == Approx(reference).margin(1e-12));
  }
}

TEST_CASE("neutral observations never change a cell") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const double l = rng.uniform(-kLogOddsMax, kLogOddsMax);
    CHECK(update_cell(l, 0.0) == l);
  }
}
