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

// Composable movement costs.
//
//   TerminalDistance   w * |pos(x_N) - target|^2, pos = position states or
//                      end-effector position
//   TerminalStability  w * |vel(x_N)|^2 over the velocity states
//   ControlEffort      w * sum_k |u_k|^2
//   JointAcceleration  w * sum_k |(vel(x_{k+1}) - vel(x_k)) / dt|^2
//   TimeConstant       w per step
//
// Stage terms are summed over k = 0..N-1; terminal terms act on x_N only.

#pragma once

#include <string>
#include <vector>

#include "hcisim/dynamics.hpp"

namespace hcisim {

enum class CostKind { TerminalDistance, TerminalStability, ControlEffort, JointAcceleration, TimeConstant };
enum class DistanceSpace { State, EndEffector };

std::string cost_kind_name(CostKind kind);
CostKind cost_kind_from_name(const std::string& name);

struct CostTerm {
  CostKind kind = CostKind::ControlEffort;
  double weight = 0.0;
  DistanceSpace space = DistanceSpace::State;  // TerminalDistance only
  Vector target;                               // TerminalDistance only

  bool is_terminal() const {
    return kind == CostKind::TerminalDistance || kind == CostKind::TerminalStability;
  }

  static CostTerm terminal_distance(double weight, Vector target,
                                    DistanceSpace space = DistanceSpace::State);
  static CostTerm terminal_stability(double weight);
  static CostTerm control_effort(double weight);
  static CostTerm joint_acceleration(double weight);
  static CostTerm time_constant(double weight);
};

struct CostSpec {
  std::vector<CostTerm> terms;
  int horizon = 1;

  /// Throws ConfigError when a term does not fit the plant or the spec is
  /// degenerate (no positive weight, horizon < 1).
  void validate(const PlantSpec& plant) const;

  CostSpec scaled(double factor) const;
  CostSpec with_horizon(int n) const;

  /// First TerminalDistance term, if any.
  const CostTerm* distance_term() const;
};

double evaluate(const CostSpec& spec, const Trajectory& traj, const PlantSpec& plant);

/// Value of a single term on a trajectory (weight included).
double evaluate_term(const CostTerm& term, const Trajectory& traj, const PlantSpec& plant);

/// Distance of the controlled point to the term's target.
double target_distance(const CostTerm& term, const PlantSpec& plant, const StateVector& x);

struct StageExpansion {
  double l = 0.0;
  Vector l_x;
  Vector l_u;   // empty at k = N
  Matrix l_xx;
  Matrix l_uu;
  Matrix l_xu;  // n x m
};

/// Stage cost l_k(x, u); at k = N only terminal terms contribute and `u` is
/// ignored. JointAcceleration uses the noise-free successor step(x, u).
double stage_cost(const CostSpec& spec, const StateVector& x, const ControlVector& u, int k,
                  const PlantSpec& plant);

/// Second-order expansion of the stage cost. Exact for quadratic terms,
/// Gauss-Newton for terms composed with kinematics or dynamics. `lin`, when
/// supplied, must be the linearization of the plant at (x, u).
StageExpansion quadratize(const CostSpec& spec, const StateVector& x, const ControlVector& u,
                          int k, const PlantSpec& plant, const Linearization* lin = nullptr);

}  // namespace hcisim
