#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "helpers.hpp"
#include "sogm/common/io_util.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SOGM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Content hashes of every file under root, excluding the manifest (its
// timing field is the one intentionally nondeterministic output).
std::map<std::string, std::uint64_t> hash_tree(const fs::path& root) {
  std::map<std::string, std::uint64_t> hashes;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "manifest.json") continue;
    hashes[fs::relative(entry.path(), root).string()] = sogm::hash_file(entry.path());
  }
  return hashes;
}

const char* kSmallConfig = R"({
  "scenario": {"n_scenes": 4, "seed": 7, "max_objects": 1, "noise_sigma": 0.3},
  "segmentation": {"num_seeds": 120},
  "model": {"num_states": 4, "max_iters": 20},
  "evaluation": {"representation": "clustered"}
})";

}  // namespace

TEST_CASE("cli pipeline: simulate, segment, train, decode") {
  sogm::test::TempDir dir("sogm_cli");
  const auto config = dir.path() / "config.json";
  sogm::write_file_text(config, kSmallConfig);

  REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                  (dir.path() / "data").string()) == 0);
  CHECK(fs::exists(dir.path() / "data/scenes/scene_003/grid.json"));
  CHECK(fs::exists(dir.path() / "data/scenes/scene_000/grid.anomaly.f32"));
  CHECK(fs::exists(dir.path() / "data/scenes/scene_000/labels.u8"));
  CHECK(fs::exists(dir.path() / "data/manifest.json"));

  REQUIRE(run_cli("segment --config " + config.string() + " --data " +
                  (dir.path() / "data").string() + " --out " +
                  (dir.path() / "seg").string()) == 0);
  CHECK(fs::exists(dir.path() / "seg/scenes/scene_000/seg.labels.u32"));
  CHECK(fs::exists(dir.path() / "seg/summary.csv"));

  REQUIRE(run_cli("train --config " + config.string() + " --data " +
                  (dir.path() / "data").string() + " --seg " + (dir.path() / "seg").string() +
                  " --out " + (dir.path() / "model").string()) == 0);
  CHECK(fs::exists(dir.path() / "model/model.json"));
  CHECK(fs::exists(dir.path() / "model/split.json"));
  CHECK(fs::exists(dir.path() / "model/traces.csv"));

  REQUIRE(run_cli("decode --config " + config.string() + " --data " +
                  (dir.path() / "data").string() + " --seg " + (dir.path() / "seg").string() +
                  " --model " + (dir.path() / "model/model.json").string() + " --out " +
                  (dir.path() / "dec").string()) == 0);
  CHECK(fs::exists(dir.path() / "dec/scores.csv"));
  const auto scores = sogm::read_file_text(dir.path() / "dec/scores.csv");
  CHECK(scores.rfind("scene_id,macro_f1\n", 0) == 0);
}

TEST_CASE("cli commands are idempotent: reruns produce byte-identical results") {
  sogm::test::TempDir dir("sogm_cli_det");
  const auto config = dir.path() / "config.json";
  sogm::write_file_text(config, kSmallConfig);

  for (const std::string out : {"a", "b"})
    REQUIRE(run_cli("simulate --config " + config.string() + " --out " +
                    (dir.path() / out).string()) == 0);
  CHECK(hash_tree(dir.path() / "a") == hash_tree(dir.path() / "b"));

  for (const std::string out : {"sa", "sb"})
    REQUIRE(run_cli("segment --config " + config.string() + " --data " +
                    (dir.path() / "a").string() + " --out " + (dir.path() / out).string()) ==
            0);
  CHECK(hash_tree(dir.path() / "sa") == hash_tree(dir.path() / "sb"));
}

TEST_CASE("cli evaluate writes scores in the requested formats") {
  sogm::test::TempDir dir("sogm_cli_eval");
  const auto config = dir.path() / "config.json";
  sogm::write_file_text(config, kSmallConfig);

  REQUIRE(run_cli("evaluate --config " + config.string() + " --out " +
                  (dir.path() / "eval").string() + " --plot") == 0);
  CHECK(fs::exists(dir.path() / "eval/scores.csv"));
  CHECK(fs::exists(dir.path() / "eval/results.json"));
  CHECK(fs::exists(dir.path() / "eval/plot.svg"));
  CHECK(fs::exists(dir.path() / "eval/model.json"));
  const auto csv = sogm::read_file_text(dir.path() / "eval/scores.csv");
  CHECK(csv.find("run_id,representation,classifier,bakis_length") == 0);
  CHECK(csv.find("clustered-hmm-S4-seed7") != std::string::npos);

  REQUIRE(run_cli("evaluate --config " + config.string() + " --out " +
                  (dir.path() / "csvonly").string() + " --format csv") == 0);
  CHECK(fs::exists(dir.path() / "csvonly/scores.csv"));
  CHECK(!fs::exists(dir.path() / "csvonly/results.json"));
}

TEST_CASE("cli evaluate sweeps the bakis length") {
  sogm::test::TempDir dir("sogm_cli_sweep");
  const auto config = dir.path() / "config.json";
  sogm::write_file_text(config, kSmallConfig);
  REQUIRE(run_cli("evaluate --config " + config.string() + " --out " +
                  (dir.path() / "sweep").string() +
                  " --sweep bakis_length --bakis-values 3,5 --format csv") == 0);
  const auto csv = sogm::read_file_text(dir.path() / "sweep/scores.csv");
  CHECK(csv.find(",hmm,3,") != std::string::npos);
  CHECK(csv.find(",hmm,5,") != std::string::npos);
}

TEST_CASE("cli evaluate sweeps the three representations") {
  sogm::test::TempDir dir("sogm_cli_repsweep");
  const auto config = dir.path() / "config.json";
  sogm::write_file_text(config, kSmallConfig);
  REQUIRE(run_cli("evaluate --config " + config.string() + " --out " +
                  (dir.path() / "reps").string() + " --sweep representation --format csv") ==
          0);
  const auto csv = sogm::read_file_text(dir.path() / "reps/scores.csv");
  for (const std::string rep : {"clustered", "cellwise", "pointcloud"})
    CHECK(csv.find(rep + ",hmm,") != std::string::npos);
}

TEST_CASE("cli exit codes distinguish error classes") {
  sogm::test::TempDir dir("sogm_cli_err");
  const auto config = dir.path() / "config.json";
  sogm::write_file_text(config, kSmallConfig);

  // Invalid config -> 2.
  sogm::write_file_text(dir.path() / "bad.json", R"({"scenario": {"n_scene": 2}})");
  CHECK(run_cli("simulate --config " + (dir.path() / "bad.json").string() + " --out " +
                (dir.path() / "x").string()) == 2);
  // Missing dataset -> 3.
  CHECK(run_cli("segment --config " + config.string() + " --data " +
                (dir.path() / "absent").string() + " --out " + (dir.path() / "y").string()) ==
        3);
  // Unknown flag -> 2 (usage error).
  CHECK(run_cli("simulate --frobnicate") == 2);
  // Baselines are not trainable artifacts -> 2 with a pointer to evaluate.
  sogm::write_file_text(dir.path() / "km.json",
                        R"({"classifier": {"type": "kmeans"}})");
  CHECK(run_cli("train --config " + (dir.path() / "km.json").string() + " --data " +
                (dir.path() / "absent").string() + " --out " + (dir.path() / "z").string()) ==
        2);
}
