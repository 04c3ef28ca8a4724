#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sogm/hmm/forward_backward.hpp"
#include "sogm/hmm/init.hpp"
#include "sogm/hmm/model.hpp"
#include "sogm/hmm/viterbi.hpp"

using namespace sogm;

TEST_CASE("bakis topology masks and uniform initial rows") {
  SECTION("two states, no skip") {
    const auto m = make_bakis(2, 0);
    CHECK(m.topology_mask == std::vector<std::vector<bool>>{{true, true}, {false, true}});
    CHECK(m.transition[0] == std::vector<double>{0.5, 0.5});
    CHECK(m.transition[1] == std::vector<double>{0.0, 1.0});
    CHECK(m.start == std::vector<double>{1.0, 0.0});
  }
  SECTION("three states, skip one") {
    const auto m = make_bakis(3, 1);
    const std::vector<std::pair<int, int>> allowed = {{0, 0}, {0, 1}, {0, 2},
                                                      {1, 1}, {1, 2}, {2, 2}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const bool expect =
            std::find(allowed.begin(), allowed.end(), std::make_pair(i, j)) != allowed.end();
        CHECK(m.topology_mask[i][j] == expect);
      }
  }
  SECTION("single absorbing state") {
    const auto m = make_bakis(1, 0);
    CHECK(m.transition == std::vector<std::vector<double>>{{1.0}});
  }
  SECTION("model validation accepts the construction") {
    auto m = make_bakis(5, 2, 3);
    m.validate();
  }
}

TEST_CASE("single-state forward log-likelihood sums the emissions") {
  Rng rng(21);
  auto model = test::random_bakis_model(rng, 1, 0, 2);
  const auto obs = test::random_sequence(rng, 7, 2);
  double expected = 0.0;
  for (const auto& frame : obs.frames)
    expected += emission_logpdf(model.emissions[0], frame);
  CHECK(log_likelihood(model, obs) == Approx(expected).margin(1e-9));
}

TEST_CASE("single-frame forward log-likelihood mixes over start states") {
  Rng rng(22);
  auto model = test::random_bakis_model(rng, 3, 1, 2);
  ObservationSequence obs;
  obs.frames = {{0.4, -1.0}};
  double linear = 0.0;
  for (int s = 0; s < 3; ++s)
    linear += model.start[s] * std::exp(emission_logpdf(model.emissions[s], obs.frames[0]));
  CHECK(log_likelihood(model, obs) == Approx(std::log(linear)).margin(1e-9));
}

TEST_CASE("forward matches exhaustive path enumeration") {
  Rng rng(303);
  for (int trial = 0; trial < 25; ++trial) {
    const int S = 2 + static_cast<int>(rng.uniform_index(3));
    const int T = 3 + static_cast<int>(rng.uniform_index(4));
    const int N = 1 + static_cast<int>(rng.uniform_index(3));
    const auto model = test::random_bakis_model(rng, S, 1, N);
    const auto obs = test::random_sequence(rng, T, N);
    CHECK(log_likelihood(model, obs) ==
          Approx(test::enum_forward_loglik(model, obs)).margin(1e-9));
  }
}

TEST_CASE("posteriors normalize and pair posteriors marginalize") {
  Rng rng(404);
  const auto model = test::random_bakis_model(rng, 4, 1, 2);
  const auto obs = test::random_sequence(rng, 9, 2);
  const auto fb = forward_backward(model, obs);
  for (const auto& row : fb.gamma) {
    double sum = 0.0;
    for (const double g : row) sum += g;
    CHECK(sum == Approx(1.0).margin(1e-9));
  }
  for (int t = 0; t + 1 < obs.length(); ++t)
    for (int i = 0; i < 4; ++i) {
      double marginal = 0.0;
      for (int j = 0; j < 4; ++j) marginal += fb.xi[t][i][j];
      CHECK(marginal == Approx(fb.gamma[t][i]).margin(1e-9));
    }
}

TEST_CASE("empty sequences are rejected") {
  Rng rng(1);
  const auto model = test::random_bakis_model(rng, 2, 0, 1);
  CHECK_THROWS_AS(forward_backward(model, ObservationSequence{}), EmptySequence);
  CHECK_THROWS_AS(viterbi(model, ObservationSequence{}), EmptySequence);
}

TEST_CASE("single-state viterbi path is all zeros") {
  Rng rng(5);
  const auto model = test::random_bakis_model(rng, 1, 0, 2);
  const auto obs = test::random_sequence(rng, 6, 2);
  const auto res = viterbi(model, obs);
  CHECK(res.path == std::vector<int>(6, 0));
}

TEST_CASE("separated means flip the path at the switch point") {
  auto model = make_bakis(2, 0, 1);
  model.emissions[0].means[0][0] = -5.0;
  model.emissions[1].means[0][0] = 5.0;
  ObservationSequence obs;
  for (int t = 0; t < 5; ++t) obs.frames.push_back({-5.0});
  for (int t = 0; t < 5; ++t) obs.frames.push_back({5.0});
  const auto res = viterbi(model, obs);
  const std::vector<int> expected = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(res.path == expected);
  CHECK(res.path == test::enum_viterbi(model, obs).first);
}

TEST_CASE("viterbi matches exhaustive enumeration") {
  Rng rng(707);
  for (int trial = 0; trial < 25; ++trial) {
    const int S = 2 + static_cast<int>(rng.uniform_index(3));
    const int T = 3 + static_cast<int>(rng.uniform_index(5));
    const int N = 1 + static_cast<int>(rng.uniform_index(3));
    const auto model = test::random_bakis_model(rng, S, 1, N);
    const auto obs = test::random_sequence(rng, T, N);
    const auto dp = viterbi(model, obs);
    const auto [path, lp] = test::enum_viterbi(model, obs);
    CHECK(dp.log_probability == Approx(lp).margin(1e-9));
    CHECK(dp.path == path);
  }
}

TEST_CASE("joint translation of frames and means leaves the path unchanged") {
  Rng rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    auto model = test::random_bakis_model(rng, 3, 1, 2);
    const auto obs = test::random_sequence(rng, 8, 2);
    const auto base = viterbi(model, obs);

    const std::vector<double> shift = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto shifted_model = model;
    for (auto& gmm : shifted_model.emissions)
      for (auto& mean : gmm.means)
        for (std::size_t n = 0; n < mean.size(); ++n) mean[n] += shift[n];
    auto shifted_obs = obs;
    for (auto& frame : shifted_obs.frames)
      for (std::size_t n = 0; n < frame.size(); ++n) frame[n] += shift[n];

    CHECK(viterbi(shifted_model, shifted_obs).path == base.path);
  }
}
