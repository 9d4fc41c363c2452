// Copyright 2026 The hcisim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "hcisim/experiment.hpp"
#include "test_util.hpp"

namespace hcisim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool throws_config_error_mentioning(const json& j, const std::string& needle) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

// Byte-compares every artifact except the manifest, which holds a timestamp.
void expect_same_artifacts(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::size_t n_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++n_b;
  EXPECT_EQ(names.size(), n_b);
  for (const auto& name : names) {
    if (name == "manifest.json") continue;
    EXPECT_EQ(testing::read_file(a / name), testing::read_file(b / name)) << name;
  }
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HCISIM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, DefaultsDependOnExperiment) {
  EXPECT_EQ(parse_config({{"experiment", "lqg-reach"}}).n_trials, 1000);
  const ExperimentConfig fitts = parse_config({{"experiment", "fitts-sweep"}});
  EXPECT_EQ(fitts.plant.kind, PlantKind::PointMass1D);
  EXPECT_EQ(fitts.distances.size(), 3u);
  EXPECT_EQ(fitts.widths.size(), 2u);
  const ExperimentConfig mpc = parse_config({{"experiment", "mpc-perturb"}});
  EXPECT_EQ(mpc.plant.kind, PlantKind::TwoLinkArm);
  ASSERT_EQ(mpc.mpc.perturbations.size(), 1u);
  EXPECT_EQ(mpc.mpc.perturbations[0].space, PerturbationSpace::EndEffector);
  const ExperimentConfig lev = parse_config({{"experiment", "levitate"}});
  EXPECT_EQ(lev.shapes.size(), 3u);
  EXPECT_DOUBLE_EQ(lev.topp.margin, 0.01);
}

TEST(Config, ErrorsNameTheOffendingField) {
  EXPECT_TRUE(throws_config_error_mentioning({{"experiment", "lqg-reach"}, {"bogus", 1}}, "bogus"));
  EXPECT_TRUE(throws_config_error_mentioning(
      {{"experiment", "mpc-reach"}, {"plant", {{"kind", "point-mass-1d"}, {"m1", 1.0}}}}, "plant.m1"));
  EXPECT_TRUE(throws_config_error_mentioning({{"experiment", "lqg-reach"}, {"task", {{"distance", -0.1}}}},
                                             "task.distance"));
  EXPECT_TRUE(throws_config_error_mentioning({{"experiment", "teleport"}}, "experiment"));
  EXPECT_TRUE(throws_config_error_mentioning(json::object(), "experiment"));
  EXPECT_TRUE(throws_config_error_mentioning({{"experiment", "levitate"}, {"shapes", {"triangle"}}},
                                             "triangle"));
  EXPECT_TRUE(throws_config_error_mentioning({{"experiment", "mpc-reach"}, {"initial_state", {0.0, 0.0}}},
                                             "initial_state"));
  EXPECT_TRUE(throws_config_error_mentioning({{"experiment", "analyze"}}, "analysis"));
  EXPECT_THROW(parse_config({{"experiment", "lqg-reach"}, {"n_trials", 0}}), ConfigError);
}

TEST(Config, ReadingBadFilesIsAConfigError) {
  const fs::path dir = testing::temp_dir("bad_config");
  std::ofstream(dir / "broken.json") << "{\"experiment\": ";
  EXPECT_THROW(read_config_file((dir / "broken.json").string()), ConfigError);
  EXPECT_THROW(read_config_file((dir / "missing.json").string()), ConfigError);
}

TEST(Config, OverridesSetDottedPaths) {
  json j = {{"experiment", "levitate"}, {"shapes", {{{"kind", "circle"}, {"radius", 0.01}}}}};
  apply_override(j, "seed", "5");
  apply_override(j, "levitation.margin", "0.02");
  apply_override(j, "shapes.0.radius", "0.012");
  apply_override(j, "description", "plain text");
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["levitation"]["margin"], 0.02);
  EXPECT_EQ(j["shapes"][0]["radius"], 0.012);
  EXPECT_EQ(j["description"], "plain text");
  const ExperimentConfig c = parse_config(j);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_DOUBLE_EQ(c.shapes.at(0).radius, 0.012);
  EXPECT_THROW(apply_override(j, "", "1"), ConfigError);
}

TEST(Config, HashIgnoresOutputDirectoryOnly) {
  const json a = {{"experiment", "lqg-reach"}, {"seed", 1}};
  json b = a;
  b["output_dir"] = "/somewhere/else";
  json c = a;
  c["seed"] = 2;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Registry, ListingsAreSorted) {
  const auto plants = list_plants();
  const auto shapes = list_shapes();
  auto sorted = [](const auto& v) {
    return std::is_sorted(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  };
  EXPECT_TRUE(sorted(plants));
  EXPECT_TRUE(sorted(shapes));
  auto has = [](const auto& v, const std::string& name) {
    return std::any_of(v.begin(), v.end(), [&](const auto& p) { return p.first == name; });
  };
  EXPECT_TRUE(has(plants, "two-link-arm"));
  EXPECT_TRUE(has(shapes, "circle"));
  const auto names = experiment_names();
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
}

TEST(Run, LqgReachIsReproducibleAndWritesManifestLast) {
  const json j = {{"experiment", "lqg-reach"}, {"seed", 3}, {"n_trials", 50}, {"save_trajectories", 2}};
  const ExperimentConfig c = parse_config(j);
  const fs::path a = testing::temp_dir("lqg_a");
  const fs::path b = testing::temp_dir("lqg_b");
  const RunSummary sa = run_experiment(c, a);
  run_experiment(c, b);
  expect_same_artifacts(a, b);
  EXPECT_TRUE(std::is_sorted(sa.files.begin(), sa.files.end()));
  EXPECT_TRUE(fs::exists(a / "trial_0001.json"));
  EXPECT_FALSE(fs::exists(a / "trial_0002.json"));

  const json manifest = json::parse(testing::read_file(a / "manifest.json"));
  EXPECT_EQ(manifest["config_hash"], config_hash(j));
  EXPECT_EQ(manifest["seed"], 3);
  // The manifest lists every other artifact; the run summary includes it.
  auto listed = manifest["files"].get<std::vector<std::string>>();
  listed.push_back("manifest.json");
  std::sort(listed.begin(), listed.end());
  EXPECT_EQ(listed, sa.files);

  // A different seed changes the rollouts.
  const fs::path d = testing::temp_dir("lqg_d");
  run_experiment(parse_config({{"experiment", "lqg-reach"}, {"seed", 4}, {"n_trials", 50}}), d);
  EXPECT_NE(testing::read_file(a / "trials.csv"), testing::read_file(d / "trials.csv"));
}

TEST(Run, MpcTrajectoriesFeedTheAnalyzer) {
  const json j = {{"experiment", "mpc-reach"}, {"plant", {{"kind", "point-mass-1d"}}},
                  {"n_trials", 2}, {"seed", 2}, {"save_trajectories", 2}};
  const fs::path dir = testing::temp_dir("mpc_run");
  const fs::path again = testing::temp_dir("mpc_run_again");
  run_experiment(parse_config(j), dir);
  run_experiment(parse_config(j), again);
  expect_same_artifacts(dir, again);
  const json summary = json::parse(testing::read_file(dir / "summary.json"));
  EXPECT_EQ(summary["reached"], 2);
  ASSERT_TRUE(fs::exists(dir / "trial_0000.csv"));

  const json aj = {{"experiment", "analyze"},
                   {"analysis",
                    {{"inputs", {{{"path", (dir / "trial_0000.csv").string()}, {"distance", 0.1}, {"width", 0.01}},
                                 {{"path", (dir / "trial_0001.csv").string()}, {"distance", 0.2}, {"width", 0.01}}}}}}};
  const fs::path out = testing::temp_dir("analyze_run");
  const RunSummary s = run_experiment(parse_config(aj), out);
  ASSERT_EQ(s.report["inputs"].size(), 2u);
  EXPECT_EQ(s.report["inputs"][0]["profile"]["velocity_peaks"], 1);
  EXPECT_TRUE(fs::exists(out / "trials.csv"));

  const json wrong_plant = {{"experiment", "analyze"},
                            {"plant", {{"kind", "two-link-arm"}}},
                            {"analysis", {{"inputs", {(dir / "trial_0000.csv").string()}}}}};
  EXPECT_THROW(run_experiment(parse_config(wrong_plant), testing::temp_dir("analyze_bad")), RunError);
}

TEST(Run, LevitateCircleReportsAnalyticComparison) {
  const json j = {{"experiment", "levitate"},
                  {"levitation", {{"gravity", 0.0}, {"damping", 0.0}, {"cycles", 1}, {"warmup_cycles", 0}}},
                  {"shapes", {{{"kind", "circle"}, {"radius", 0.01}}}}};
  const fs::path dir = testing::temp_dir("levitate_run");
  run_experiment(parse_config(j), dir);
  const json report = json::parse(testing::read_file(dir / "circle_report.json"));
  EXPECT_LT(std::abs(report["relative_error_vs_analytic"].get<double>()), 0.01);
  EXPECT_TRUE(fs::exists(dir / "circle_trap.csv"));
  EXPECT_TRUE(fs::exists(dir / "levitate.json"));
}

TEST(Cli, ExitCodesAndListings) {
  const fs::path dir = testing::temp_dir("cli");
  const fs::path log = dir / "log.txt";
  EXPECT_EQ(run_cli("--version", log), 0);
  EXPECT_NE(testing::read_file(log).find(kVersion), std::string::npos);

  EXPECT_EQ(run_cli("list-shapes", log), 0);
  EXPECT_NE(testing::read_file(log).find("circle"), std::string::npos);
  EXPECT_EQ(run_cli("list-plants", log), 0);
  EXPECT_NE(testing::read_file(log).find("two-link-arm"), std::string::npos);

  std::ofstream(dir / "ok.json") << R"({"experiment": "lqg-reach", "n_trials": 10})";
  std::ofstream(dir / "bad.json") << R"({"experiment": "lqg-reach", "task": {"distance": -1}})";
  EXPECT_EQ(run_cli("validate " + (dir / "ok.json").string(), log), 0);
  EXPECT_EQ(run_cli("validate " + (dir / "bad.json").string(), log), 2);
  EXPECT_EQ(run_cli("run " + (dir / "bad.json").string() + " --out " + (dir / "bad_out").string(), log), 2);
  EXPECT_FALSE(fs::exists(dir / "bad_out"));
  EXPECT_EQ(run_cli("validate " + (dir / "ok.json").string() + " --task.distance=-1", log), 2);
  EXPECT_EQ(run_cli("validate " + (dir / "missing.json").string(), log), 2);

  const fs::path out = dir / "out";
  EXPECT_EQ(run_cli("run " + (dir / "ok.json").string() + " --out " + out.string() + " --seed 9", log), 0);
  const json manifest = json::parse(testing::read_file(out / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["config"]["n_trials"], 10);
}

}  // namespace
}  // namespace hcisim
