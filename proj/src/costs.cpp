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

#include "hcisim/costs.hpp"

#include <cmath>

namespace hcisim {

namespace {

Matrix velocity_selector(const PlantSpec& plant) {
  const auto idx = velocity_indices(plant);
  Matrix S = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), plant.state_dim());
  for (std::size_t i = 0; i < idx.size(); ++i) S(static_cast<Eigen::Index>(i), idx[i]) = 1.0;
  return S;
}

Vector distance_residual(const CostTerm& term, const PlantSpec& plant, const StateVector& x) {
  if (term.space == DistanceSpace::EndEffector) {
    return end_effector_position(plant, x) - term.target;
  }
  const auto idx = position_indices(plant);
  Vector r(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    r[static_cast<Eigen::Index>(i)] = x[idx[i]] - term.target[static_cast<Eigen::Index>(i)];
  }
  return r;
}

Matrix distance_jacobian(const CostTerm& term, const PlantSpec& plant, const StateVector& x) {
  if (term.space == DistanceSpace::EndEffector) return end_effector_jacobian(plant, x);
  const auto idx = position_indices(plant);
  Matrix J = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), plant.state_dim());
  for (std::size_t i = 0; i < idx.size(); ++i) J(static_cast<Eigen::Index>(i), idx[i]) = 1.0;
  return J;
}

void require_finite_expansion(const StageExpansion& e) {
  const bool ok = std::isfinite(e.l) && e.l_x.allFinite() && e.l_u.allFinite() &&
                  e.l_xx.allFinite() && e.l_uu.allFinite() && e.l_xu.allFinite();
  if (!ok) throw NonFiniteError("quadratize: non-finite derivative");
}

}  // namespace

std::string cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::TerminalDistance: return "terminal_distance";
    case CostKind::TerminalStability: return "terminal_stability";
    case CostKind::ControlEffort: return "control_effort";
    case CostKind::JointAcceleration: return "joint_acceleration";
    case CostKind::TimeConstant: return "time_constant";
  }
  return "unknown";
}

CostKind cost_kind_from_name(const std::string& name) {
  for (auto kind : {CostKind::TerminalDistance, CostKind::TerminalStability, CostKind::ControlEffort,
                    CostKind::JointAcceleration, CostKind::TimeConstant}) {
    if (cost_kind_name(kind) == name) return kind;
  }
  throw ConfigError("unknown cost kind '" + name + "'");
}

CostTerm CostTerm::terminal_distance(double weight, Vector target, DistanceSpace space) {
  return CostTerm{CostKind::TerminalDistance, weight, space, std::move(target)};
}
CostTerm CostTerm::terminal_stability(double weight) {
  return CostTerm{CostKind::TerminalStability, weight, DistanceSpace::State, {}};
}
CostTerm CostTerm::control_effort(double weight) {
  return CostTerm{CostKind::ControlEffort, weight, DistanceSpace::State, {}};
}
CostTerm CostTerm::joint_acceleration(double weight) {
  return CostTerm{CostKind::JointAcceleration, weight, DistanceSpace::State, {}};
}
CostTerm CostTerm::time_constant(double weight) {
  return CostTerm{CostKind::TimeConstant, weight, DistanceSpace::State, {}};
}

void CostSpec::validate(const PlantSpec& plant) const {
  if (horizon < 1) throw ConfigError("cost.horizon must be >= 1");
  if (terms.empty()) throw ConfigError("cost.terms must be non-empty");
  bool any_positive = false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const std::string where = "cost.terms[" + std::to_string(i) + "]";
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
      throw ConfigError(where + ".weight must be >= 0");
    }
    any_positive = any_positive || t.weight > 0.0;
    if (t.kind == CostKind::TerminalDistance) {
      const Eigen::Index want = t.space == DistanceSpace::EndEffector
                                    ? end_effector_dim(plant)
                                    : static_cast<Eigen::Index>(position_indices(plant).size());
      if (t.target.size() != want) {
        throw ConfigError(where + ".target must have dimension " + std::to_string(want) +
                          " for plant " + plant_name(plant.kind));
      }
      if (!t.target.allFinite()) throw ConfigError(where + ".target must be finite");
    }
  }
  if (!any_positive) throw ConfigError("cost.terms need at least one positive weight");
}

CostSpec CostSpec::scaled(double factor) const {
  CostSpec out = *this;
  for (auto& t : out.terms) t.weight *= factor;
  return out;
}

CostSpec CostSpec::with_horizon(int n) const {
  CostSpec out = *this;
  out.horizon = n;
  return out;
}

const CostTerm* CostSpec::distance_term() const {
  for (const auto& t : terms) {
    if (t.kind == CostKind::TerminalDistance) return &t;
  }
  return nullptr;
}

double target_distance(const CostTerm& term, const PlantSpec& plant, const StateVector& x) {
  return distance_residual(term, plant, x).norm();
}

double evaluate_term(const CostTerm& term, const Trajectory& traj, const PlantSpec& plant) {
  const auto& xN = traj.states.back();
  switch (term.kind) {
    case CostKind::TerminalDistance:
      return term.weight * distance_residual(term, plant, xN).squaredNorm();
    case CostKind::TerminalStability:
      return term.weight * (velocity_selector(plant) * xN).squaredNorm();
    case CostKind::ControlEffort: {
      double sum = 0.0;
      for (const auto& u : traj.controls) sum += u.squaredNorm();
      return term.weight * sum;
    }
    case CostKind::JointAcceleration: {
      const Matrix S = velocity_selector(plant);
      double sum = 0.0;
      for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
        sum += (S * (traj.states[k + 1] - traj.states[k]) / traj.dt).squaredNorm();
      }
      return term.weight * sum;
    }
    case CostKind::TimeConstant:
      return term.weight * static_cast<double>(traj.horizon());
  }
  return 0.0;
}

double evaluate(const CostSpec& spec, const Trajectory& traj, const PlantSpec& plant) {
  traj.check();
  if (traj.horizon() != spec.horizon) {
    throw DimensionError("evaluate: trajectory horizon " + std::to_string(traj.horizon()) +
                         " does not match cost horizon " + std::to_string(spec.horizon));
  }
  double total = 0.0;
  for (const auto& term : spec.terms) total += evaluate_term(term, traj, plant);
  return total;
}

double stage_cost(const CostSpec& spec, const StateVector& x, const ControlVector& u, int k,
                  const PlantSpec& plant) {
  const bool terminal = k == spec.horizon;
  double l = 0.0;
  StateVector next;
  for (const auto& t : spec.terms) {
    if (t.is_terminal() != terminal || t.weight == 0.0) continue;
    switch (t.kind) {
      case CostKind::TerminalDistance:
        l += t.weight * distance_residual(t, plant, x).squaredNorm();
        break;
      case CostKind::TerminalStability:
        l += t.weight * (velocity_selector(plant) * x).squaredNorm();
        break;
      case CostKind::ControlEffort:
        l += t.weight * u.squaredNorm();
        break;
      case CostKind::JointAcceleration: {
        if (next.size() == 0) next = step(plant, x, u);
        const Matrix S = velocity_selector(plant);
        l += t.weight * (S * (next - x) / plant.dt).squaredNorm();
        break;
      }
      case CostKind::TimeConstant:
        l += t.weight;
        break;
    }
  }
  return l;
}

StageExpansion quadratize(const CostSpec& spec, const StateVector& x, const ControlVector& u,
                          int k, const PlantSpec& plant, const Linearization* lin) {
  if (k < 0 || k > spec.horizon) throw DimensionError("quadratize: stage index out of range");
  const int n = plant.state_dim();
  const bool terminal = k == spec.horizon;
  const int m = terminal ? 0 : plant.control_dim();

  StageExpansion e;
  e.l_x = Vector::Zero(n);
  e.l_u = Vector::Zero(m);
  e.l_xx = Matrix::Zero(n, n);
  e.l_uu = Matrix::Zero(m, m);
  e.l_xu = Matrix::Zero(n, m);

  Linearization local;
  for (const auto& t : spec.terms) {
    if (t.is_terminal() != terminal || t.weight == 0.0) continue;
    const double w = t.weight;
    switch (t.kind) {
      case CostKind::TerminalDistance: {
        const Vector r = distance_residual(t, plant, x);
        const Matrix J = distance_jacobian(t, plant, x);
        e.l += w * r.squaredNorm();
        e.l_x += 2.0 * w * J.transpose() * r;
        e.l_xx += 2.0 * w * J.transpose() * J;
        break;
      }
      case CostKind::TerminalStability: {
        const Matrix S = velocity_selector(plant);
        const Vector v = S * x;
        e.l += w * v.squaredNorm();
        e.l_x += 2.0 * w * S.transpose() * v;
        e.l_xx += 2.0 * w * S.transpose() * S;
        break;
      }
      case CostKind::ControlEffort:
        e.l += w * u.squaredNorm();
        e.l_u += 2.0 * w * u;
        e.l_uu += 2.0 * w * Matrix::Identity(m, m);
        break;
      case CostKind::JointAcceleration: {
        if (!lin) {
          local = linearize(plant, x, u);
          lin = &local;
        }
        const Matrix S = velocity_selector(plant);
        const StateVector next = step(plant, x, u);
        const Vector r = S * (next - x) / plant.dt;
        const Matrix Jx = (S * lin->A - S) / plant.dt;
        const Matrix Ju = S * lin->B / plant.dt;
        e.l += w * r.squaredNorm();
        e.l_x += 2.0 * w * Jx.transpose() * r;
        e.l_u += 2.0 * w * Ju.transpose() * r;
        e.l_xx += 2.0 * w * Jx.transpose() * Jx;
        e.l_uu += 2.0 * w * Ju.transpose() * Ju;
        e.l_xu += 2.0 * w * Jx.transpose() * Ju;
        break;
      }
      case CostKind::TimeConstant:
        e.l += w;
        break;
    }
  }
  require_finite_expansion(e);
  return e;
}

}  // namespace hcisim
