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

#include "hcisim/ocp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hcisim {

namespace {

bool has_exact_model(const PlantSpec& plant) {
  return plant.kind == PlantKind::PointMass1D || plant.kind == PlantKind::PointMass2D ||
         plant.kind == PlantKind::Linear;
}

struct BackwardResult {
  std::vector<Vector> k;   // feedforward
  std::vector<Matrix> K;   // feedback
  double dv1 = 0.0;        // expected reduction, linear in alpha
  double dv2 = 0.0;        // expected reduction, quadratic in alpha
  bool ok = false;
};

struct Expansion {
  std::vector<Linearization> dyn;
  std::vector<StageExpansion> cost;
};

Expansion expand(const OcpProblem& p, const Trajectory& nominal) {
  const int N = p.horizon();
  // Derivatives are taken on the unbounded plant; clamping only acts in rollouts.
  PlantSpec free_plant = p.plant;
  free_plant.control_bounds.reset();
  const bool exact = has_exact_model(p.plant);
  const Linearization exact_lin = exact ? linear_model(free_plant) : Linearization{};

  Expansion e;
  e.dyn.reserve(N);
  e.cost.reserve(N + 1);
  for (int k = 0; k < N; ++k) {
    const auto& x = nominal.states[k];
    const auto& u = nominal.controls[k];
    e.dyn.push_back(exact ? exact_lin : linearize(free_plant, x, u));
    e.cost.push_back(quadratize(p.cost, x, u, k, free_plant, &e.dyn.back()));
  }
  e.cost.push_back(quadratize(p.cost, nominal.states[N], ControlVector(), N, free_plant));
  return e;
}

BackwardResult backward_pass(const Expansion& e, double mu) {
  const int N = static_cast<int>(e.dyn.size());
  BackwardResult r;
  r.k.resize(N);
  r.K.resize(N);
  Vector Vx = e.cost[N].l_x;
  Matrix Vxx = e.cost[N].l_xx;
  for (int k = N - 1; k >= 0; --k) {
    const auto& A = e.dyn[k].A;
    const auto& B = e.dyn[k].B;
    const auto& l = e.cost[k];
    const Vector Qx = l.l_x + A.transpose() * Vx;
    const Vector Qu = l.l_u + B.transpose() * Vx;
    const Matrix Qxx = l.l_xx + A.transpose() * Vxx * A;
    const Matrix Quu = l.l_uu + B.transpose() * Vxx * B;
    const Matrix Qux = l.l_xu.transpose() + B.transpose() * Vxx * A;

    Matrix Quu_reg = Quu;
    Quu_reg.diagonal().array() += mu;
    Eigen::LLT<Matrix> llt(0.5 * (Quu_reg + Quu_reg.transpose()));
    if (llt.info() != Eigen::Success) return r;

    const Vector kff = -llt.solve(Qu);
    const Matrix Kfb = -llt.solve(Qux);
    if (!kff.allFinite() || !Kfb.allFinite()) return r;

    r.dv1 += kff.dot(Qu);
    r.dv2 += 0.5 * kff.dot(Quu * kff);
    Vx = Qx + Kfb.transpose() * Quu * kff + Kfb.transpose() * Qu + Qux.transpose() * kff;
    Vxx = Qxx + Kfb.transpose() * Quu * Kfb + Kfb.transpose() * Qux + Qux.transpose() * Kfb;
    Vxx = 0.5 * (Vxx + Vxx.transpose());
    r.k[k] = kff;
    r.K[k] = Kfb;
  }
  r.ok = true;
  return r;
}

std::vector<ControlVector> forward_controls(const OcpProblem& p, const Trajectory& nominal,
                                            const BackwardResult& bp, double alpha) {
  const int N = p.horizon();
  std::vector<ControlVector> controls(N);
  StateVector x = p.x0;
  for (int k = 0; k < N; ++k) {
    const ControlVector u =
        nominal.controls[k] + alpha * bp.k[k] + bp.K[k] * (x - nominal.states[k]);
    controls[k] = clamp_control(p.plant, u);
    if (!controls[k].allFinite()) return {};
    x = step(p.plant, x, controls[k]);
    if (!x.allFinite()) return {};
  }
  return controls;
}

}  // namespace

void OcpProblem::validate() const {
  plant.validate();
  cost.validate(plant);
  require_dim(x0.size(), plant.state_dim(), "ocp: x0");
  require_finite(x0, "ocp: x0");
}

std::vector<double> SolverOptions::default_line_search_steps() {
  std::vector<double> steps;
  for (int i = 0; i <= 10; ++i) steps.push_back(std::ldexp(1.0, -i));
  return steps;
}

void SolverOptions::validate() const {
  if (max_iterations < 1) throw ConfigError("solver.max_iterations must be >= 1");
  if (!(cost_tolerance > 0.0)) throw ConfigError("solver.cost_tolerance must be > 0");
  if (!(mu_min > 0.0) || !(mu_max >= mu_min) || !(mu_init >= mu_min) || !(mu_init <= mu_max)) {
    throw ConfigError("solver: need 0 < mu_min <= mu_init <= mu_max");
  }
  if (!(mu_factor > 1.0)) throw ConfigError("solver.mu_factor must be > 1");
  if (line_search_steps.empty()) throw ConfigError("solver.line_search_steps must be non-empty");
  for (double a : line_search_steps) {
    if (!(a > 0.0) || !(a <= 1.0)) throw ConfigError("solver.line_search_steps must lie in (0, 1]");
  }
}

Candidate evaluate_candidate(const OcpProblem& problem, const std::vector<ControlVector>& controls) {
  require_dim(static_cast<Eigen::Index>(controls.size()), problem.horizon(),
              "evaluate_candidate: controls");
  Candidate c;
  c.trajectory = rollout(problem.plant, problem.x0, controls, NoiseSpec{}, 0);
  c.cost = evaluate(problem.cost, c.trajectory, problem.plant);
  return c;
}

OcpSolution solve(const OcpProblem& problem, const SolverOptions& options,
                  const std::vector<ControlVector>& warm_start) {
  problem.validate();
  options.validate();
  const int N = problem.horizon();
  const int m = problem.plant.control_dim();

  std::vector<ControlVector> init(N, ControlVector::Zero(m));
  if (!warm_start.empty()) {
    require_dim(static_cast<Eigen::Index>(warm_start.size()), N, "solve: warm start length");
    for (int k = 0; k < N; ++k) {
      require_dim(warm_start[k].size(), m, "solve: warm start control");
      init[k] = warm_start[k];
    }
  }

  Candidate nominal = evaluate_candidate(problem, init);
  if (!std::isfinite(nominal.cost)) throw NonFiniteError("solve: initial controls give a non-finite cost");

  OcpSolution sol;
  sol.cost_history.push_back(nominal.cost);
  double mu = options.mu_init;
  BackwardResult last;
  Expansion expansion;
  bool need_expansion = true;

  for (int it = 1; it <= options.max_iterations; ++it) {
    sol.iterations = it;
    if (need_expansion) {
      expansion = expand(problem, nominal.trajectory);
      need_expansion = false;
    }

    BackwardResult bp = backward_pass(expansion, mu);
    while (!bp.ok) {
      mu = std::max(mu * options.mu_factor, options.mu_min);
      if (mu > options.mu_max) break;
      bp = backward_pass(expansion, mu);
    }
    if (!bp.ok) {
      sol.status = "backward pass failed at maximum regularization";
      break;
    }
    last = bp;

    const double expected = -(bp.dv1 + bp.dv2);
    if (expected <= options.cost_tolerance * std::abs(nominal.cost) + 1e-14) {
      sol.converged = true;
      sol.status = "expected reduction below tolerance";
      break;
    }

    bool accepted = false;
    for (double alpha : options.line_search_steps) {
      auto controls = forward_controls(problem, nominal.trajectory, bp, alpha);
      if (controls.empty()) continue;
      Candidate trial = evaluate_candidate(problem, controls);
      if (!std::isfinite(trial.cost) || !(trial.cost < nominal.cost)) continue;

      const double improvement =
          (nominal.cost - trial.cost) / std::max(std::abs(nominal.cost), 1e-300);
      nominal = std::move(trial);
      sol.cost_history.push_back(nominal.cost);
      need_expansion = true;
      accepted = true;
      mu = std::max(mu / options.mu_factor, options.mu_min);
      if (improvement < options.cost_tolerance) {
        sol.converged = true;
        sol.status = "relative improvement below tolerance";
      }
      break;
    }
    if (sol.converged) break;
    if (!accepted) {
      mu *= options.mu_factor;
      if (mu > options.mu_max) {
        sol.status = "line search failed at maximum regularization";
        break;
      }
    }
  }
  if (sol.status.empty()) sol.status = "maximum iterations reached";

  // Feedback gains along the returned nominal, unregularized when possible.
  if (need_expansion) expansion = expand(problem, nominal.trajectory);
  BackwardResult gains = backward_pass(expansion, 0.0);
  if (!gains.ok) gains = backward_pass(expansion, mu);
  if (gains.ok) {
    sol.feedback_gains = std::move(gains.K);
  } else if (last.ok) {
    sol.feedback_gains = std::move(last.K);
  } else {
    sol.feedback_gains.assign(N, Matrix::Zero(m, problem.plant.state_dim()));
  }

  sol.trajectory = std::move(nominal.trajectory);
  sol.cost = nominal.cost;
  sol.final_mu = mu;
  return sol;
}

}  // namespace hcisim
