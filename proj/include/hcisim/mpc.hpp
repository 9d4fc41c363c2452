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

// Receding-horizon control: plan H steps, execute the first m controls on the
// (noisy) plant, observe the realized state, plan again.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcisim/ocp_solver.hpp"

namespace hcisim {

enum class PerturbationSpace { State, EndEffector };

/// Added to the realized state once `step` controls have been executed.
/// EndEffector deltas are mapped to the position states through the
/// pseudo-inverse of the end-effector Jacobian at that state.
struct Perturbation {
  int step = 0;
  Vector delta;
  PerturbationSpace space = PerturbationSpace::State;
};

struct MpcConfig {
  int planning_horizon = 50;
  int apply_steps = 1;
  int max_wall_steps = 300;
  double target_radius = 0.01;  // m
  double max_speed = 0.05;      // m/s
  bool warm_start = true;
  SolverOptions solver_options;
  std::vector<Perturbation> perturbations;

  void validate() const;
};

struct ReplanRecord {
  int step = 0;  // executed steps before this plan
  double plan_cost = 0.0;
  int iterations = 0;
  bool converged = false;
  double solve_seconds = 0.0;
};

inline constexpr const char* kTargetReached = "target reached";
inline constexpr const char* kMaxSteps = "max steps";

struct MpcLog {
  std::vector<ReplanRecord> replans;
  Trajectory trajectory;  // executed
  std::string termination;
  double final_distance = 0.0;
  double final_speed = 0.0;
};

/// The cost's TerminalDistance term defines the target used for termination;
/// its other terms are re-applied over every planning window.
MpcLog run_mpc(const PlantSpec& plant, const CostSpec& cost, const StateVector& x0,
               const MpcConfig& config, const NoiseSpec& noise, std::uint64_t seed);

/// Executed steps times dt. Throws std::invalid_argument unless the log ended
/// with the target reached.
double mpc_movement_time(const MpcLog& log);

/// Previous plan shifted by `shift` steps and padded with zeros.
std::vector<ControlVector> shift_controls(const std::vector<ControlVector>& controls, int shift);

/// Solve wall times are left out unless requested so that logs of identical
/// runs serialize identically.
nlohmann::json mpc_log_to_json(const MpcLog& log, bool include_timing = false);

}  // namespace hcisim
