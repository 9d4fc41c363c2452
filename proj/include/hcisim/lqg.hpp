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

// Finite-horizon LQR and LQG with signal-dependent control noise.
//
// Plant:       x(k+1) = A x + B (u + sigma_u * diag(eps) u) + B additive
//              y(k)   = H x + w
// Estimator:   xh(k+1) = A xh + B u + K(k) (y - H xh)
// Controller:  u(k) = -L(k) xh(k)
// Objective:   E[ sum_k x'Qx + u'Ru + x(N)' Q_N x(N) ]
//
// Control gains and estimator gains are computed by alternating backward
// (controller given estimator) and forward (estimator given controller)
// passes until the gains stop changing.

#pragma once

#include <cstdint>
#include <vector>

#include "hcisim/dynamics.hpp"

namespace hcisim {

struct LqrSolution {
  std::vector<Matrix> gains;  // L(k), k = 0..N-1, u = -L x
  std::vector<Matrix> value;  // P(k), k = 0..N, P(N) = Q_N
};

/// Backward Riccati recursion. Throws std::domain_error when R + B'PB is
/// singular.
LqrSolution lqr_solve(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                      const Matrix& Q_N, int horizon);

/// Expected cost of the closed loop u = -L x from a known initial state.
double lqr_cost(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                const Matrix& Q_N, const std::vector<Matrix>& gains, const Vector& x0);

struct LqgProblem {
  Matrix A;
  Matrix B;
  Matrix H;
  Matrix Q;    // stage state cost
  Matrix R;    // control cost, positive definite
  Matrix Q_N;  // terminal state cost
  NoiseSpec noise;
  Vector x0_mean;
  Matrix x0_cov;
  int horizon = 1;
  double dt = 0.01;  // only used to time-stamp rollouts

  void validate() const;
};

struct LqgSolution {
  std::vector<Matrix> L;  // control gains, N
  std::vector<Matrix> K;  // estimator gains, N
  double predicted_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

LqgSolution lqg_solve(const LqgProblem& problem, double tol = 1e-9, int max_iter = 500);

/// Predicted mean and covariance of the true state at every step under the
/// solution (moment propagation, no sampling).
struct StateMoments {
  std::vector<Vector> mean;
  std::vector<Matrix> covariance;
};
StateMoments lqg_moments(const LqgProblem& problem, const LqgSolution& solution);

/// Closed-loop Monte-Carlo simulation. Trial i draws from stream
/// make_stream(seed, i); each trajectory records true states and estimates.
std::vector<Trajectory> lqg_rollout(const LqgProblem& problem, const LqgSolution& solution,
                                    int n_trials, std::uint64_t seed);

/// 1D point-to-point reach on a point mass, expressed in error coordinates
/// x = (p - D, v), starting at rest at p = 0.
struct ReachTask {
  double distance = 0.2;        // m
  int horizon = 50;             // steps
  double dt = 0.01;             // s
  double mass = 1.0;            // kg
  double damping = 0.0;         // N s/m
  double distance_weight = 1e3; // on (p_N - D)^2
  double stability_weight = 1e2;// on v_N^2
  double effort_weight = 1e-4;  // per step on u^2
  double additive_std = 0.0;    // N
  double signal_dependent_scale = 0.0;
  double observation_std_position = 1e-3;  // m
  double observation_std_velocity = 1e-2;  // m/s
};

LqgProblem make_reach_problem(const ReachTask& task);

}  // namespace hcisim
