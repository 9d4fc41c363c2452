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

// Config-driven batch experiments.
//
// A config is one JSON object. Every section is optional and falls back to
// documented defaults; unknown keys are rejected. Experiments:
//   lqg-reach    LQG reaches with Monte-Carlo rollouts
//   fitts-sweep  MPC point-to-point reaches over a D x W grid, Fitts fit
//   mpc-reach    MPC reaches on any plant
//   mpc-perturb  MPC reaches with injected perturbations
//   levitate     time-optimal trap schedules for a list of shapes
//   analyze      profile metrics (and a Fitts fit) for saved trajectories

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcisim/analysis.hpp"
#include "hcisim/levitation.hpp"
#include "hcisim/lqg.hpp"
#include "hcisim/mpc.hpp"

namespace hcisim {

/// Raised for failures after validation; names the module and operation.
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& module, const std::string& operation, const std::string& what)
      : std::runtime_error(module + "/" + operation + ": " + what) {}
};

struct AnalysisInput {
  std::string path;
  double distance = 0.0;  // optional condition, 0 when absent
  double width = 0.0;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  int n_trials = 1;
  std::string output_dir;  // empty: use the caller's default
  int save_trajectories = 1;

  PlantSpec plant;
  StateVector initial_state;
  CostSpec cost;
  NoiseSpec noise;
  SolverOptions solver;
  MpcConfig mpc;

  ReachTask task;

  std::vector<double> distances;
  std::vector<double> widths;

  TrapParams trap;
  ToppOptions topp;
  RenderOptions render;
  std::vector<PathSpec> shapes;

  std::vector<AnalysisInput> inputs;

  nlohmann::json normalized;  // config as given, after overrides
};

std::vector<std::string> experiment_names();  // sorted

/// Parses and validates; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Reads a JSON config file; unreadable or malformed files raise ConfigError.
nlohmann::json read_config_file(const std::string& path);

/// Sets `dotted.path` in the config. `value` is parsed as JSON when possible
/// and taken as a string otherwise. Numeric segments index arrays.
void apply_override(nlohmann::json& config, const std::string& dotted_path, const std::string& value);

/// FNV-1a 64 of the canonical dump with output_dir removed, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

struct RunSummary {
  std::vector<std::string> files;  // relative to the output directory, sorted
  nlohmann::json report;
};

/// Runs the experiment and writes all artifacts, the manifest last.
RunSummary run_experiment(const ExperimentConfig& config, const std::filesystem::path& output_dir);

/// Registry listings: name and parameter names, sorted by name.
std::vector<std::pair<std::string, std::vector<std::string>>> list_plants();
std::vector<std::pair<std::string, std::vector<std::string>>> list_shapes();

}  // namespace hcisim
