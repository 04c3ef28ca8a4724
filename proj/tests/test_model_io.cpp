#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sogm/common/io_util.hpp"
#include "sogm/hmm/model_io.hpp"

using namespace sogm;

namespace {
HierarchicalModel irrational_model() {
  Rng rng(314);
  HierarchicalModel hm;
  hm.classes = {"ground", "table", "object"};
  hm.prior = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  for (int c = 0; c < 3; ++c)
    hm.submodels.push_back(test::random_bakis_model(rng, 4, 1, 3));
  return hm;
}
}  // namespace

TEST_CASE("model JSON round-trips bit-for-bit") {
  test::TempDir dir("sogm_model_io");
  const auto hm = irrational_model();
  save_model(hm, dir.path() / "model.json");
  const auto loaded = load_model(dir.path() / "model.json");

  REQUIRE(loaded.classes == hm.classes);
  CHECK(loaded.prior == hm.prior);
  for (int c = 0; c < 3; ++c) {
    CHECK(loaded.submodels[c].transition == hm.submodels[c].transition);
    CHECK(loaded.submodels[c].start == hm.submodels[c].start);
    CHECK(loaded.submodels[c].topology_mask == hm.submodels[c].topology_mask);
    for (int s = 0; s < 4; ++s) {
      CHECK(loaded.submodels[c].emissions[s].weights == hm.submodels[c].emissions[s].weights);
      CHECK(loaded.submodels[c].emissions[s].means == hm.submodels[c].emissions[s].means);
      CHECK(loaded.submodels[c].emissions[s].vars == hm.submodels[c].emissions[s].vars);
    }
  }

  // Saving the loaded model reproduces the file byte for byte.
  save_model(loaded, dir.path() / "model2.json");
  CHECK(hash_file(dir.path() / "model.json") == hash_file(dir.path() / "model2.json"));
}

TEST_CASE("reals are serialized as decimal strings") {
  const auto hm = irrational_model();
  const auto j = hierarchical_model_to_json(hm);
  CHECK(j.at("prior").at(0).is_string());
  CHECK(j.at("submodels").at(0).at("transition").at(0).at(0).is_string());
}

TEST_CASE("format_real survives pathological doubles") {
  for (const double v : {1.0 / 3.0, 1e-300, -1e300, 0.1, 123456789.123456789})
    CHECK(parse_real(format_real(v)) == v);
}

TEST_CASE("malformed model files are rejected") {
  test::TempDir dir("sogm_model_bad");
  write_file_text(dir.path() / "bad.json", "{ not json");
  CHECK_THROWS_AS(load_model(dir.path() / "bad.json"), InvalidParams);
  CHECK_THROWS_AS(load_model(dir.path() / "absent.json"), NotFound);
}
