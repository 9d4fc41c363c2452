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

#include "hcisim/lqg.hpp"

#include <algorithm>
#include <cmath>

namespace hcisim {

namespace {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double max_abs_diff(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return d;
}

// Gain (R + B'PB)^{-1} B'PA shared by LQR and the LQG controller pass so the
// two agree bit-for-bit when the noise terms vanish.
Matrix riccati_gain(const Matrix& A, const Matrix& B, const Matrix& P, const Matrix& control_hessian) {
  Eigen::LDLT<Matrix> ldlt(control_hessian);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-14 * std::max(1.0, ldlt.vectorD().cwiseAbs().maxCoeff())) {
    throw std::domain_error("riccati: R + B'PB is singular, problem is ill-posed");
  }
  return ldlt.solve(B.transpose() * P * A);
}

Matrix process_covariance(const LqgProblem& p) {
  const auto& add = p.noise.additive_control_std;
  if (add.size() == 0) return Matrix::Zero(p.A.rows(), p.A.rows());
  return p.B * add.array().square().matrix().asDiagonal() * p.B.transpose();
}

Matrix observation_covariance(const LqgProblem& p) {
  const auto& obs = p.noise.observation_std;
  if (obs.size() == 0) return Matrix::Zero(p.H.rows(), p.H.rows());
  return obs.array().square().matrix().asDiagonal();
}

struct ControllerPass {
  std::vector<Matrix> L;
  double expected_cost = 0.0;
};

// Optimal control gains for fixed estimator gains.
ControllerPass controller_pass(const LqgProblem& p, const std::vector<Matrix>& K) {
  const int N = p.horizon;
  const double s2 = p.noise.signal_dependent_scale * p.noise.signal_dependent_scale;
  const Matrix Wx = process_covariance(p);
  const Matrix Wy = observation_covariance(p);
  const Eigen::Index n = p.A.rows();

  ControllerPass out;
  out.L.resize(N);
  Matrix Sx = p.Q_N;
  Matrix Se = Matrix::Zero(n, n);
  double s = 0.0;
  for (int k = N - 1; k >= 0; --k) {
    s += (Sx * Wx).trace() + (Se * (Wx + K[k] * Wy * K[k].transpose())).trace();
    Matrix H = p.R + p.B.transpose() * Sx * p.B;
    if (s2 > 0.0) {
      const Matrix BtSB = p.B.transpose() * (Sx + Se) * p.B;
      H += s2 * Matrix(BtSB.diagonal().asDiagonal());
    }
    const Matrix L = riccati_gain(p.A, p.B, Sx, H);
    const Matrix AKH = p.A - K[k] * p.H;
    const Matrix Se_next = symmetrize(p.A.transpose() * Sx * p.B * L + AKH.transpose() * Se * AKH);
    Sx = symmetrize(p.Q + p.A.transpose() * Sx * (p.A - p.B * L));
    Se = Se_next;
    out.L[k] = L;
  }
  out.expected_cost = p.x0_mean.dot(Sx * p.x0_mean) + ((Sx + Se) * p.x0_cov).trace() + s;
  return out;
}

struct EstimatorPass {
  std::vector<Matrix> K;
  std::vector<Vector> mean;        // E[x(k)]
  std::vector<Matrix> error_cov;   // E[e e']
  std::vector<Matrix> estimate_m2; // E[xh xh']
};

Matrix innovation_inverse(const Matrix& S) {
  if (!S.allFinite()) throw NonFiniteError("lqg: non-finite innovation covariance");
  if (S.cwiseAbs().maxCoeff() == 0.0) return Matrix::Zero(S.rows(), S.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (eig.eigenvalues().minCoeff() < -1e-9 * scale) {
    throw std::domain_error("lqg: innovation covariance is indefinite");
  }
  // Pseudo-inverse: directions with no innovation carry no correction.
  Vector inv = Vector::Zero(S.rows());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    const double ev = eig.eigenvalues()[i];
    if (ev > 1e-12 * scale) inv[i] = 1.0 / ev;
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

// Optimal linear estimator gains for fixed control gains.
EstimatorPass estimator_pass(const LqgProblem& p, const std::vector<Matrix>& L) {
  const int N = p.horizon;
  const double s2 = p.noise.signal_dependent_scale * p.noise.signal_dependent_scale;
  const Matrix Wx = process_covariance(p);
  const Matrix Wy = observation_covariance(p);

  EstimatorPass out;
  out.K.resize(N);
  Matrix Se = p.x0_cov;
  Matrix Sxh = p.x0_mean * p.x0_mean.transpose();
  Vector mean = p.x0_mean;
  out.mean.push_back(mean);
  out.error_cov.push_back(Se);
  out.estimate_m2.push_back(Sxh);
  for (int k = 0; k < N; ++k) {
    const Matrix S = p.H * Se * p.H.transpose() + Wy;
    const Matrix K = p.A * Se * p.H.transpose() * innovation_inverse(symmetrize(S));
    const Matrix ABL = p.A - p.B * L[k];
    Matrix Se_next = Wx + (p.A - K * p.H) * Se * p.A.transpose();
    if (s2 > 0.0) {
      const Matrix LSL = L[k] * Sxh * L[k].transpose();
      Se_next += s2 * p.B * Matrix(LSL.diagonal().asDiagonal()) * p.B.transpose();
    }
    const Matrix Sxh_next = K * p.H * Se * p.A.transpose() + ABL * Sxh * ABL.transpose();
    Se = symmetrize(Se_next);
    Sxh = symmetrize(Sxh_next);
    mean = ABL * mean;
    out.K[k] = K;
    out.mean.push_back(mean);
    out.error_cov.push_back(Se);
    out.estimate_m2.push_back(Sxh);
  }
  return out;
}

Matrix covariance_sqrt(const Matrix& cov) {
  if (cov.cwiseAbs().maxCoeff() == 0.0) return Matrix::Zero(cov.rows(), cov.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(cov));
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

}  // namespace

LqrSolution lqr_solve(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                      const Matrix& Q_N, int horizon) {
  if (horizon < 1) throw DimensionError("lqr_solve: horizon must be >= 1");
  const Eigen::Index n = A.rows();
  require_dim(A.cols(), n, "lqr_solve: A columns");
  require_dim(B.rows(), n, "lqr_solve: B rows");
  require_dim(Q.rows(), n, "lqr_solve: Q");
  require_dim(Q_N.rows(), n, "lqr_solve: Q_N");
  require_dim(R.rows(), B.cols(), "lqr_solve: R");

  LqrSolution sol;
  sol.gains.resize(horizon);
  sol.value.resize(horizon + 1);
  sol.value[horizon] = Q_N;
  Matrix P = Q_N;
  for (int k = horizon - 1; k >= 0; --k) {
    const Matrix L = riccati_gain(A, B, P, R + B.transpose() * P * B);
    P = symmetrize(Q + A.transpose() * P * (A - B * L));
    sol.gains[k] = L;
    sol.value[k] = P;
  }
  return sol;
}

double lqr_cost(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                const Matrix& Q_N, const std::vector<Matrix>& gains, const Vector& x0) {
  Vector x = x0;
  double cost = 0.0;
  for (const auto& L : gains) {
    const Vector u = -L * x;
    cost += x.dot(Q * x) + u.dot(R * u);
    x = A * x + B * u;
  }
  return cost + x.dot(Q_N * x);
}

void LqgProblem::validate() const {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (horizon < 1) throw ConfigError("lqg: horizon must be >= 1");
  if (A.cols() != n || B.rows() != n || H.cols() != n || Q.rows() != n || Q.cols() != n ||
      Q_N.rows() != n || Q_N.cols() != n || R.rows() != m || R.cols() != m ||
      x0_mean.size() != n || x0_cov.rows() != n || x0_cov.cols() != n) {
    throw DimensionError("lqg: inconsistent problem dimensions");
  }
  auto symmetric = [](const Matrix& M) {
    return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff());
  };
  auto min_eig = [](const Matrix& M) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(M).eigenvalues().minCoeff();
  };
  if (!symmetric(R) || min_eig(R) <= 0.0) throw ConfigError("lqg: R must be symmetric positive definite");
  for (const auto* M : {&Q, &Q_N, &x0_cov}) {
    if (!symmetric(*M) || min_eig(*M) < -1e-12) {
      throw ConfigError("lqg: Q, Q_N and x0_cov must be symmetric positive semidefinite");
    }
  }
  noise.validate(static_cast<int>(m));
  if (noise.observation_std.size() != 0 && noise.observation_std.size() != H.rows()) {
    throw ConfigError("lqg: observation_std must match the number of observations");
  }
}

LqgSolution lqg_solve(const LqgProblem& problem, double tol, int max_iter) {
  problem.validate();
  if (max_iter < 1) throw ConfigError("lqg: max_iter must be >= 1");

  const auto lqr = lqr_solve(problem.A, problem.B, problem.Q, problem.R, problem.Q_N,
                             problem.horizon);
  std::vector<Matrix> L = lqr.gains;
  std::vector<Matrix> K = estimator_pass(problem, L).K;

  LqgSolution sol;
  double cost = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    auto ctrl = controller_pass(problem, K);
    auto est = estimator_pass(problem, ctrl.L);
    const double change = std::max(max_abs_diff(ctrl.L, L), max_abs_diff(est.K, K));
    L = std::move(ctrl.L);
    K = std::move(est.K);
    cost = ctrl.expected_cost;
    sol.iterations = it;
    if (change < tol) {
      sol.converged = true;
      break;
    }
  }
  // Cost of the final pair (the controller pass above used the previous K).
  sol.predicted_cost = controller_pass(problem, K).expected_cost;
  if (!std::isfinite(sol.predicted_cost)) sol.predicted_cost = cost;
  sol.L = std::move(L);
  sol.K = std::move(K);
  return sol;
}

StateMoments lqg_moments(const LqgProblem& problem, const LqgSolution& solution) {
  const auto est = estimator_pass(problem, solution.L);
  StateMoments out;
  for (std::size_t k = 0; k < est.mean.size(); ++k) {
    out.mean.push_back(est.mean[k]);
    out.covariance.push_back(
        symmetrize(est.estimate_m2[k] - est.mean[k] * est.mean[k].transpose() + est.error_cov[k]));
  }
  return out;
}

std::vector<Trajectory> lqg_rollout(const LqgProblem& problem, const LqgSolution& solution,
                                    int n_trials, std::uint64_t seed) {
  problem.validate();
  const int N = problem.horizon;
  if (static_cast<int>(solution.L.size()) != N || static_cast<int>(solution.K.size()) != N) {
    throw DimensionError("lqg_rollout: solution does not match the problem horizon");
  }
  const Eigen::Index n = problem.A.rows();
  const Eigen::Index m = problem.B.cols();
  const Eigen::Index p = problem.H.rows();
  const Matrix x0_root = covariance_sqrt(problem.x0_cov);
  const double sdn = problem.noise.signal_dependent_scale;
  const Vector add = problem.noise.additive_control_std.size() ? problem.noise.additive_control_std
                                                               : Vector::Zero(m);
  const Vector obs = problem.noise.observation_std.size() ? problem.noise.observation_std
                                                          : Vector::Zero(p);
  const bool any_add = !add.isZero(0.0);
  const bool any_obs = !obs.isZero(0.0);
  const bool any_x0 = !x0_root.isZero(0.0);

  std::vector<Trajectory> trials;
  trials.reserve(std::max(0, n_trials));
  for (int trial = 0; trial < n_trials; ++trial) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(trial));
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&](Eigen::Index size) {
      Vector v(size);
      for (Eigen::Index i = 0; i < size; ++i) v[i] = normal(rng);
      return v;
    };

    Trajectory traj;
    traj.dt = problem.dt;
    traj.seed = seed;
    Vector x = problem.x0_mean;
    if (any_x0) x += x0_root * draw(n);
    Vector xh = problem.x0_mean;
    traj.states.push_back(x);
    traj.estimates.push_back(xh);
    for (int k = 0; k < N; ++k) {
      Vector y = problem.H * x;
      if (any_obs) y += obs.cwiseProduct(draw(p));
      const Vector u = -solution.L[k] * xh;
      Vector applied = u;
      if (sdn > 0.0) applied += sdn * u.cwiseProduct(draw(m));
      if (any_add) applied += add.cwiseProduct(draw(m));
      x = problem.A * x + problem.B * applied;
      xh = problem.A * xh + problem.B * u + solution.K[k] * (y - problem.H * xh);
      traj.states.push_back(x);
      traj.estimates.push_back(xh);
      traj.controls.push_back(u);
      traj.flags.push_back(0);
    }
    trials.push_back(std::move(traj));
  }
  return trials;
}

LqgProblem make_reach_problem(const ReachTask& task) {
  if (!(task.distance > 0.0)) throw ConfigError("reach: distance must be > 0");
  const PlantSpec plant = make_point_mass_1d({task.mass, task.damping}, task.dt);
  const auto lin = linear_model(plant);

  LqgProblem p;
  p.A = lin.A;
  p.B = lin.B;
  p.H = Matrix::Identity(2, 2);
  p.Q = Matrix::Zero(2, 2);
  p.R = task.effort_weight * Matrix::Identity(1, 1);
  p.Q_N = Matrix::Zero(2, 2);
  p.Q_N(0, 0) = task.distance_weight;
  p.Q_N(1, 1) = task.stability_weight;
  p.noise.additive_control_std = Vector::Constant(1, task.additive_std);
  p.noise.signal_dependent_scale = task.signal_dependent_scale;
  p.noise.observation_std = Vector(2);
  p.noise.observation_std << task.observation_std_position, task.observation_std_velocity;
  p.x0_mean = Vector(2);
  p.x0_mean << -task.distance, 0.0;
  p.x0_cov = Matrix::Zero(2, 2);
  p.horizon = task.horizon;
  p.dt = task.dt;
  return p;
}

}  // namespace hcisim
