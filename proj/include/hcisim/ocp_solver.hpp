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

// Iterative LQR for finite-horizon problems over any plant/cost pair.
//
// Each iteration linearizes the dynamics and quadratizes the cost along the
// nominal trajectory, runs a Levenberg-regularized backward pass, and tries
// the step sizes 1, 1/2, ..., 2^-10 in order. The first step that strictly
// lowers the cost is accepted. Control bounds are only enforced by clamping
// inside the rollout.

#pragma once

#include <string>
#include <vector>

#include "hcisim/costs.hpp"

namespace hcisim {

struct OcpProblem {
  PlantSpec plant;
  CostSpec cost;  // cost.horizon is the problem horizon N
  StateVector x0;

  int horizon() const { return cost.horizon; }
  double dt() const { return plant.dt; }
  void validate() const;
};

struct SolverOptions {
  int max_iterations = 200;
  double cost_tolerance = 1e-8;  // relative improvement
  double mu_init = 1e-6;
  double mu_min = 1e-9;
  double mu_max = 1e10;
  double mu_factor = 10.0;
  std::vector<double> line_search_steps = default_line_search_steps();

  void validate() const;
  static std::vector<double> default_line_search_steps();
};

struct OcpSolution {
  Trajectory trajectory;             // noise-free nominal
  std::vector<Matrix> feedback_gains;  // K(k), u = u_nom + K (x - x_nom)
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;  // initial cost, then every accepted iterate
  double final_mu = 0.0;
  std::string status;

  const std::vector<ControlVector>& controls() const { return trajectory.controls; }
};

struct Candidate {
  Trajectory trajectory;
  double cost = 0.0;
};

/// Noise-free rollout of `controls` from the problem's x0 and its cost.
Candidate evaluate_candidate(const OcpProblem& problem, const std::vector<ControlVector>& controls);

/// `warm_start` (length N) seeds the nominal controls; empty means zeros.
OcpSolution solve(const OcpProblem& problem, const SolverOptions& options = {},
                  const std::vector<ControlVector>& warm_start = {});

}  // namespace hcisim
