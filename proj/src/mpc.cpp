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

#include "hcisim/mpc.hpp"

#include <chrono>

namespace hcisim {

namespace {

StateVector apply_perturbation(const PlantSpec& plant, const StateVector& x, const Perturbation& p) {
  StateVector out = x;
  if (p.space == PerturbationSpace::State) {
    require_dim(p.delta.size(), plant.state_dim(), "mpc: perturbation delta");
    return out + p.delta;
  }
  require_dim(p.delta.size(), end_effector_dim(plant), "mpc: end-effector perturbation delta");
  const Matrix J = end_effector_jacobian(plant, x);
  out += J.completeOrthogonalDecomposition().pseudoInverse() * p.delta;
  return out;
}

}  // namespace

void MpcConfig::validate() const {
  if (planning_horizon < 1) throw ConfigError("mpc.planning_horizon must be >= 1");
  if (apply_steps < 1 || apply_steps > planning_horizon) {
    throw ConfigError("mpc.apply_steps must lie in [1, planning_horizon]");
  }
  if (max_wall_steps < 1) throw ConfigError("mpc.max_wall_steps must be >= 1");
  if (!(target_radius > 0.0)) throw ConfigError("mpc.target_radius must be > 0");
  if (!(max_speed > 0.0)) throw ConfigError("mpc.max_speed must be > 0");
  for (const auto& p : perturbations) {
    if (p.step < 1) throw ConfigError("mpc.perturbations[].step must be >= 1");
    if (!p.delta.allFinite()) throw ConfigError("mpc.perturbations[].delta must be finite");
  }
  solver_options.validate();
}

std::vector<ControlVector> shift_controls(const std::vector<ControlVector>& controls, int shift) {
  std::vector<ControlVector> out(controls.size());
  for (std::size_t k = 0; k < controls.size(); ++k) {
    const std::size_t src = k + static_cast<std::size_t>(shift);
    out[k] = src < controls.size() ? controls[src] : ControlVector::Zero(controls[k].size());
  }
  return out;
}

MpcLog run_mpc(const PlantSpec& plant, const CostSpec& cost, const StateVector& x0,
               const MpcConfig& config, const NoiseSpec& noise, std::uint64_t seed) {
  config.validate();
  noise.validate(plant.control_dim());
  const CostSpec window = cost.with_horizon(config.planning_horizon);
  OcpProblem problem{plant, window, x0};
  problem.validate();
  const CostTerm* goal = window.distance_term();
  if (!goal) throw ConfigError("mpc: cost needs a terminal_distance term to define the target");

  auto reached = [&](const StateVector& x, MpcLog& log) {
    log.final_distance = target_distance(*goal, plant, x);
    log.final_speed = end_effector_velocity(plant, x).norm();
    return log.final_distance < config.target_radius && log.final_speed < config.max_speed;
  };

  MpcLog log;
  log.trajectory.dt = plant.dt;
  log.trajectory.seed = seed;
  log.trajectory.states.push_back(x0);
  if (reached(x0, log)) {
    log.termination = kTargetReached;
    return log;
  }

  Rng rng = make_stream(seed, 0);
  std::vector<ControlVector> previous;
  StateVector x = x0;
  int executed = 0;
  while (executed < config.max_wall_steps) {
    problem.x0 = x;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<ControlVector> warm =
        config.warm_start && !previous.empty() ? shift_controls(previous, config.apply_steps)
                                               : std::vector<ControlVector>{};
    OcpSolution plan = solve(problem, config.solver_options, warm);
    const auto t1 = std::chrono::steady_clock::now();

    log.replans.push_back({executed, plan.cost, plan.iterations, plan.converged,
                           std::chrono::duration<double>(t1 - t0).count()});

    for (int j = 0; j < config.apply_steps && executed < config.max_wall_steps; ++j) {
      const ControlVector& u = plan.controls()[j];
      bool saturated = false;
      x = step(plant, x, u, noise, rng, &saturated);
      ++executed;
      for (const auto& p : config.perturbations) {
        if (p.step == executed) x = apply_perturbation(plant, x, p);
      }
      if (!x.allFinite()) {
        throw NonFiniteError("mpc: non-finite state after executed step " + std::to_string(executed));
      }
      log.trajectory.controls.push_back(clamp_control(plant, u));
      log.trajectory.flags.push_back(saturated ? kFlagSaturated : 0);
      log.trajectory.states.push_back(x);
      if (reached(x, log)) {
        log.termination = kTargetReached;
        return log;
      }
    }
    previous = plan.controls();
  }
  log.termination = kMaxSteps;
  return log;
}

double mpc_movement_time(const MpcLog& log) {
  if (log.termination != kTargetReached) {
    throw std::invalid_argument("mpc_movement_time: run ended with '" + log.termination +
                                "', not '" + kTargetReached + "'");
  }
  return log.trajectory.horizon() * log.trajectory.dt;
}

nlohmann::json mpc_log_to_json(const MpcLog& log, bool include_timing) {
  nlohmann::json replans = nlohmann::json::array();
  for (const auto& r : log.replans) {
    nlohmann::json j = {{"step", r.step},
                        {"plan_cost", r.plan_cost},
                        {"iterations", r.iterations},
                        {"converged", r.converged}};
    if (include_timing) j["solve_seconds"] = r.solve_seconds;
    replans.push_back(std::move(j));
  }
  return {{"termination", log.termination},
          {"executed_steps", log.trajectory.horizon()},
          {"final_distance", log.final_distance},
          {"final_speed", log.final_speed},
          {"replans", std::move(replans)}};
}

}  // namespace hcisim
