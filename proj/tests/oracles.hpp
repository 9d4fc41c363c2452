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

// Independent reference computations shared by the unit tests and the
// acceptance runner.

#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hcisim/ocp_solver.hpp"
#include "test_util.hpp"

namespace hcisim::testing {

/// Random LQ instance expressible with the cost library: a 2-state,
/// 1-control linear plant (state 0 a position, state 1 a velocity), terminal
/// weights on both states and a control-effort weight.
struct LqInstance {
  Matrix A, B, Q, R, Q_N;
  Vector x0;
  double distance_weight = 0.0;
  double stability_weight = 0.0;
  double effort_weight = 0.0;
};

inline LqInstance random_lq_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  LqInstance lq;
  lq.A = Matrix::Identity(2, 2) + 0.3 * uniform(rng, 4, -1.0, 1.0).reshaped(2, 2);
  lq.B = uniform(rng, 2, -1.0, 1.0);
  lq.distance_weight = std::pow(10.0, 2.0 * w(rng));
  lq.stability_weight = std::pow(10.0, 2.0 * w(rng) - 1.0);
  lq.effort_weight = std::pow(10.0, 2.0 * w(rng) - 2.0);
  lq.Q = Matrix::Zero(2, 2);
  lq.R = lq.effort_weight * Matrix::Identity(1, 1);
  lq.Q_N = Matrix::Zero(2, 2);
  lq.Q_N(0, 0) = lq.distance_weight;
  lq.Q_N(1, 1) = lq.stability_weight;
  lq.x0 = Vector(2);
  lq.x0 << u(rng), u(rng);
  return lq;
}

inline OcpProblem to_ocp(const LqInstance& lq, int horizon) {
  OcpProblem p;
  p.plant = make_linear_plant(lq.A, lq.B, 1, 0.1);
  p.cost.horizon = horizon;
  p.cost.terms = {CostTerm::terminal_distance(lq.distance_weight, Vector::Zero(1)),
                  CostTerm::terminal_stability(lq.stability_weight),
                  CostTerm::control_effort(lq.effort_weight)};
  p.x0 = lq.x0;
  return p;
}

/// Scalar Riccati recursion written out by hand; gains for u = -L x.
inline std::vector<double> scalar_riccati_gains(double a, double b, double q, double r, double q_n,
                                                int horizon) {
  std::vector<double> gains(horizon);
  double p = q_n;
  for (int k = horizon - 1; k >= 0; --k) {
    const double l = b * p * a / (r + b * b * p);
    p = q + a * a * p - a * b * p * l;
    gains[k] = l;
  }
  return gains;
}

/// Minimum of the open-loop two-step cost over a uniform control grid.
inline double brute_force_two_step(double a, double b, double q, double r, double q_n, double x0,
                                   double lo, double hi, double grid_step) {
  const int n = static_cast<int>(std::lround((hi - lo) / grid_step));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double u0 = lo + i * grid_step;
    const double x1 = a * x0 + b * u0;
    const double c1 = q * x0 * x0 + r * u0 * u0 + q * x1 * x1;
    for (int j = 0; j <= n; ++j) {
      const double u1 = lo + j * grid_step;
      const double x2 = a * x1 + b * u1;
      best = std::min(best, c1 + r * u1 * u1 + q_n * x2 * x2);
    }
  }
  return best;
}

}  // namespace hcisim::testing
