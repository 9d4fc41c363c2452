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

#include "hcisim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace hcisim {

namespace {

void require_positive(double value, const std::string& name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(name + " must be a finite value > 0 (got " + std::to_string(value) + ")");
  }
}

void require_non_negative(double value, const std::string& name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ConfigError(name + " must be a finite value >= 0 (got " + std::to_string(value) + ")");
  }
}

StateVector step_point_mass(const PlantSpec& plant, const StateVector& x,
                            const ControlVector& u, int dims) {
  const auto& pm = plant.point_mass();
  const double dt = plant.dt;
  StateVector next(x.size());
  for (int i = 0; i < dims; ++i) {
    const double p = x[i];
    const double v = x[dims + i];
    const double v_next = v + dt * (u[i] - pm.damping * v) / pm.mass;
    next[dims + i] = v_next;
    next[i] = p + dt * v_next;
  }
  return next;
}

StateVector step_arm(const PlantSpec& plant, const StateVector& x, const ControlVector& u) {
  const auto& arm = plant.arm();
  const double dt = plant.dt;
  const double tau = arm.muscle_tau;

  const Eigen::Vector2d q = x.segment<2>(0);
  const Eigen::Vector2d dq = x.segment<2>(2);
  const Eigen::Vector2d act = x.segment<2>(4);
  const Eigen::Vector2d dact = x.segment<2>(6);

  // tau^2 a'' + 2 tau a' + a = u
  const Eigen::Vector2d ddact = (u.head<2>() - act - 2.0 * tau * dact) / (tau * tau);
  const Eigen::Vector2d dact_next = dact + dt * ddact;
  const Eigen::Vector2d act_next = act + dt * dact_next;

  const Eigen::Vector2d ddq = arm_acceleration(arm, q, dq, arm.muscle_gain * act);
  const Eigen::Vector2d dq_next = dq + dt * ddq;
  const Eigen::Vector2d q_next = q + dt * dq_next;

  StateVector next(8);
  next << q_next, dq_next, act_next, dact_next;
  return next;
}

StateVector step_particle(const PlantSpec& plant, const StateVector& x, const ControlVector& u) {
  const auto& pp = plant.particle();
  const double dt = plant.dt;
  const Eigen::Vector3d stiffness(pp.k_r, pp.k_r, pp.k_z);
  const Eigen::Vector3d v = x.segment<3>(3);
  Eigen::Vector3d force = stiffness.cwiseProduct(u.head<3>()) - pp.damping * v;
  force.z() -= pp.mass * pp.gravity;
  const Eigen::Vector3d v_next = v + dt * force / pp.mass;
  StateVector next(6);
  next << x.head<3>() + dt * v_next, v_next;
  return next;
}

StateVector step_deterministic(const PlantSpec& plant, const StateVector& x,
                               const ControlVector& u) {
  switch (plant.kind) {
    case PlantKind::PointMass1D:
      return step_point_mass(plant, x, u, 1);
    case PlantKind::PointMass2D:
      return step_point_mass(plant, x, u, 2);
    case PlantKind::TwoLinkArm:
      return step_arm(plant, x, u);
    case PlantKind::LevitatedParticle:
      return step_particle(plant, x, u);
    case PlantKind::Linear: {
      const auto& lin = plant.linear();
      return lin.A * x + lin.B * u;
    }
  }
  throw std::logic_error("unknown plant kind");
}

void check_step_inputs(const PlantSpec& plant, const StateVector& x, const ControlVector& u) {
  require_dim(x.size(), plant.state_dim(), "step: state");
  require_dim(u.size(), plant.control_dim(), "step: control");
  require_finite(x, "step: state");
  require_finite(u, "step: control");
}

}  // namespace

int PlantSpec::state_dim() const {
  switch (kind) {
    case PlantKind::PointMass1D: return 2;
    case PlantKind::PointMass2D: return 4;
    case PlantKind::TwoLinkArm: return 8;
    case PlantKind::LevitatedParticle: return 6;
    case PlantKind::Linear: return static_cast<int>(linear().A.rows());
  }
  return 0;
}

int PlantSpec::control_dim() const {
  switch (kind) {
    case PlantKind::PointMass1D: return 1;
    case PlantKind::PointMass2D: return 2;
    case PlantKind::TwoLinkArm: return 2;
    case PlantKind::LevitatedParticle: return 3;
    case PlantKind::Linear: return static_cast<int>(linear().B.cols());
  }
  return 0;
}

void PlantSpec::validate() const {
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw ConfigError("plant.dt must lie in (0, 0.1] s (got " + std::to_string(dt) + ")");
  }
  switch (kind) {
    case PlantKind::PointMass1D:
    case PlantKind::PointMass2D:
      require_positive(point_mass().mass, "plant.mass");
      require_non_negative(point_mass().damping, "plant.damping");
      break;
    case PlantKind::TwoLinkArm: {
      const auto& a = arm();
      require_positive(a.l1, "plant.l1");
      require_positive(a.l2, "plant.l2");
      require_positive(a.m1, "plant.m1");
      require_positive(a.m2, "plant.m2");
      require_positive(a.muscle_tau, "plant.muscle_tau");
      require_positive(a.muscle_gain, "plant.muscle_gain");
      require_non_negative(a.joint_damping, "plant.joint_damping");
      require_non_negative(a.gravity, "plant.gravity");
      break;
    }
    case PlantKind::LevitatedParticle: {
      const auto& p = particle();
      require_positive(p.mass, "plant.mass");
      require_positive(p.k_r, "plant.k_r");
      require_positive(p.k_z, "plant.k_z");
      require_positive(p.capture_radius, "plant.capture_radius");
      require_non_negative(p.damping, "plant.damping");
      require_non_negative(p.gravity, "plant.gravity");
      break;
    }
    case PlantKind::Linear: {
      const auto& lin = linear();
      if (lin.A.rows() != lin.A.cols() || lin.A.rows() == 0) {
        throw ConfigError("plant.A must be square and non-empty");
      }
      if (lin.B.rows() != lin.A.rows() || lin.B.cols() == 0) {
        throw ConfigError("plant.B must have as many rows as plant.A");
      }
      if (!lin.A.allFinite() || !lin.B.allFinite()) throw ConfigError("plant.A/B not finite");
      if (lin.position_dims < 1 || 2 * lin.position_dims > lin.A.rows()) {
        throw ConfigError("plant.position_dims out of range");
      }
      break;
    }
  }
  if (control_bounds) {
    const int m = control_dim();
    if (control_bounds->lower.size() != m || control_bounds->upper.size() != m) {
      throw ConfigError("plant.control_bounds dimension must equal the control dimension");
    }
    if ((control_bounds->lower.array() > control_bounds->upper.array()).any()) {
      throw ConfigError("plant.control_bounds lower exceeds upper");
    }
  }
}

PlantSpec make_point_mass_1d(PointMassParams params, double dt) {
  PlantSpec plant{PlantKind::PointMass1D, dt, params, std::nullopt};
  plant.validate();
  return plant;
}

PlantSpec make_point_mass_2d(PointMassParams params, double dt) {
  PlantSpec plant{PlantKind::PointMass2D, dt, params, std::nullopt};
  plant.validate();
  return plant;
}

PlantSpec make_two_link_arm(TwoLinkArmParams params, double dt) {
  PlantSpec plant{PlantKind::TwoLinkArm, dt, params,
                  ControlBounds{Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)}};
  plant.validate();
  return plant;
}

PlantSpec make_levitated_particle(ParticleParams params, double dt) {
  PlantSpec plant{PlantKind::LevitatedParticle, dt, params, std::nullopt};
  plant.validate();
  return plant;
}

PlantSpec make_linear_plant(Matrix A, Matrix B, int position_dims, double dt) {
  PlantSpec plant{PlantKind::Linear, dt, LinearParams{std::move(A), std::move(B), position_dims},
                  std::nullopt};
  plant.validate();
  return plant;
}

std::string plant_name(PlantKind kind) {
  switch (kind) {
    case PlantKind::PointMass1D: return "point-mass-1d";
    case PlantKind::PointMass2D: return "point-mass-2d";
    case PlantKind::TwoLinkArm: return "two-link-arm";
    case PlantKind::LevitatedParticle: return "levitated-particle";
    case PlantKind::Linear: return "linear";
  }
  return "unknown";
}

PlantKind plant_kind_from_name(const std::string& name) {
  for (auto kind : {PlantKind::PointMass1D, PlantKind::PointMass2D, PlantKind::TwoLinkArm,
                    PlantKind::LevitatedParticle, PlantKind::Linear}) {
    if (plant_name(kind) == name) return kind;
  }
  throw ConfigError("unknown plant kind '" + name + "'");
}

bool NoiseSpec::is_zero() const {
  const bool additive = additive_control_std.size() == 0 || additive_control_std.isZero(0.0);
  const bool observation = observation_std.size() == 0 || observation_std.isZero(0.0);
  return additive && observation && signal_dependent_scale == 0.0;
}

void NoiseSpec::validate(int control_dim) const {
  if (additive_control_std.size() != 0 && additive_control_std.size() != control_dim) {
    throw ConfigError("noise.additive_control_std dimension must equal the control dimension");
  }
  if (additive_control_std.size() != 0 &&
      !(additive_control_std.array() >= 0.0).all()) {
    throw ConfigError("noise.additive_control_std entries must be >= 0");
  }
  if (!(signal_dependent_scale >= 0.0) || !std::isfinite(signal_dependent_scale)) {
    throw ConfigError("noise.signal_dependent_scale must be >= 0");
  }
  if (observation_std.size() != 0 && !(observation_std.array() >= 0.0).all()) {
    throw ConfigError("noise.observation_std entries must be >= 0");
  }
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

void Trajectory::check() const {
  if (!(dt > 0.0)) throw DimensionError("trajectory: dt must be > 0");
  if (states.size() != controls.size() + 1) {
    throw DimensionError("trajectory: states must number controls + 1");
  }
  if (!flags.empty() && flags.size() != controls.size()) {
    throw DimensionError("trajectory: flags must number controls");
  }
}

ControlVector clamp_control(const PlantSpec& plant, const ControlVector& u, bool* saturated) {
  if (saturated) *saturated = false;
  if (!plant.control_bounds) return u;
  const ControlVector clamped =
      u.cwiseMax(plant.control_bounds->lower).cwiseMin(plant.control_bounds->upper);
  if (saturated) *saturated = (clamped.array() != u.array()).any();
  return clamped;
}

StateVector step(const PlantSpec& plant, const StateVector& x, const ControlVector& u,
                 bool* saturated) {
  check_step_inputs(plant, x, u);
  return step_deterministic(plant, x, clamp_control(plant, u, saturated));
}

StateVector step(const PlantSpec& plant, const StateVector& x, const ControlVector& u,
                 const NoiseSpec& noise, Rng& rng, bool* saturated) {
  check_step_inputs(plant, x, u);
  ControlVector applied = clamp_control(plant, u, saturated);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (noise.signal_dependent_scale > 0.0) {
    for (Eigen::Index i = 0; i < applied.size(); ++i) {
      applied[i] *= 1.0 + noise.signal_dependent_scale * normal(rng);
    }
  }
  if (noise.additive_control_std.size() == applied.size() &&
      !noise.additive_control_std.isZero(0.0)) {
    for (Eigen::Index i = 0; i < applied.size(); ++i) {
      applied[i] += noise.additive_control_std[i] * normal(rng);
    }
  }
  StateVector next = step_deterministic(plant, x, applied);
  require_finite(next, "step: next state");
  return next;
}

Trajectory rollout(const PlantSpec& plant, const StateVector& x0,
                   const std::vector<ControlVector>& controls, const NoiseSpec& noise,
                   std::uint64_t seed) {
  if (controls.empty()) throw DimensionError("rollout: controls must be non-empty");
  require_dim(x0.size(), plant.state_dim(), "rollout: x0");
  require_finite(x0, "rollout: x0");

  Trajectory traj;
  traj.dt = plant.dt;
  traj.seed = seed;
  traj.states.reserve(controls.size() + 1);
  traj.controls.reserve(controls.size());
  traj.flags.reserve(controls.size());
  traj.states.push_back(x0);

  Rng rng(seed);
  for (const auto& u : controls) {
    bool saturated = false;
    traj.states.push_back(step(plant, traj.states.back(), u, noise, rng, &saturated));
    traj.controls.push_back(clamp_control(plant, u));
    traj.flags.push_back(saturated ? kFlagSaturated : 0);
  }
  return traj;
}

Linearization linearize(const PlantSpec& plant, const StateVector& x, const ControlVector& u,
                        double relative_step) {
  const int n = plant.state_dim();
  const int m = plant.control_dim();
  require_dim(x.size(), n, "linearize: state");
  require_dim(u.size(), m, "linearize: control");

  Linearization lin{Matrix(n, n), Matrix(n, m)};
  StateVector xp = x;
  for (int j = 0; j < n; ++j) {
    const double h = relative_step * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const StateVector fp = step_deterministic(plant, xp, clamp_control(plant, u));
    xp[j] = x[j] - h;
    const StateVector fm = step_deterministic(plant, xp, clamp_control(plant, u));
    xp[j] = x[j];
    lin.A.col(j) = (fp - fm) / (2.0 * h);
  }
  ControlVector up = u;
  for (int j = 0; j < m; ++j) {
    const double h = relative_step * std::max(1.0, std::abs(u[j]));
    up[j] = u[j] + h;
    const StateVector fp = step_deterministic(plant, x, clamp_control(plant, up));
    up[j] = u[j] - h;
    const StateVector fm = step_deterministic(plant, x, clamp_control(plant, up));
    up[j] = u[j];
    lin.B.col(j) = (fp - fm) / (2.0 * h);
  }
  if (!lin.A.allFinite() || !lin.B.allFinite()) {
    throw NonFiniteError("linearize: non-finite Jacobian entry");
  }
  return lin;
}

Linearization linear_model(const PlantSpec& plant) {
  switch (plant.kind) {
    case PlantKind::PointMass1D:
    case PlantKind::PointMass2D: {
      const int d = plant.kind == PlantKind::PointMass1D ? 1 : 2;
      const auto& pm = plant.point_mass();
      const double dt = plant.dt;
      const double keep = 1.0 - dt * pm.damping / pm.mass;
      const Matrix I = Matrix::Identity(d, d);
      Linearization lin{Matrix::Zero(2 * d, 2 * d), Matrix::Zero(2 * d, d)};
      lin.A.topLeftCorner(d, d) = I;
      lin.A.topRightCorner(d, d) = dt * keep * I;
      lin.A.bottomRightCorner(d, d) = keep * I;
      lin.B.topRows(d) = (dt * dt / pm.mass) * I;
      lin.B.bottomRows(d) = (dt / pm.mass) * I;
      return lin;
    }
    case PlantKind::Linear:
      return Linearization{plant.linear().A, plant.linear().B};
    default:
      throw std::invalid_argument("linear_model: plant " + plant_name(plant.kind) + " is nonlinear");
  }
}

ArmKinematics forward_kinematics(const TwoLinkArmParams& arm, const Eigen::Vector2d& q) {
  const double c1 = std::cos(q[0]);
  const double s1 = std::sin(q[0]);
  const double c12 = std::cos(q[0] + q[1]);
  const double s12 = std::sin(q[0] + q[1]);
  ArmKinematics k;
  k.position << arm.l1 * c1 + arm.l2 * c12, arm.l1 * s1 + arm.l2 * s12;
  k.jacobian << -arm.l1 * s1 - arm.l2 * s12, -arm.l2 * s12,
                 arm.l1 * c1 + arm.l2 * c12,  arm.l2 * c12;
  return k;
}

Eigen::Matrix2d arm_mass_matrix(const TwoLinkArmParams& arm, double q2) {
  const double lc1 = 0.5 * arm.l1;
  const double lc2 = 0.5 * arm.l2;
  const double i1 = arm.m1 * arm.l1 * arm.l1 / 12.0;
  const double i2 = arm.m2 * arm.l2 * arm.l2 / 12.0;
  const double c2 = std::cos(q2);
  Eigen::Matrix2d M;
  M(0, 0) = i1 + i2 + arm.m1 * lc1 * lc1 +
            arm.m2 * (arm.l1 * arm.l1 + lc2 * lc2 + 2.0 * arm.l1 * lc2 * c2);
  M(0, 1) = i2 + arm.m2 * (lc2 * lc2 + arm.l1 * lc2 * c2);
  M(1, 0) = M(0, 1);
  M(1, 1) = i2 + arm.m2 * lc2 * lc2;
  return M;
}

Eigen::Vector2d arm_acceleration(const TwoLinkArmParams& arm, const Eigen::Vector2d& q,
                                 const Eigen::Vector2d& dq, const Eigen::Vector2d& torque) {
  const double lc1 = 0.5 * arm.l1;
  const double lc2 = 0.5 * arm.l2;
  const double h = arm.m2 * arm.l1 * lc2 * std::sin(q[1]);

  Eigen::Vector2d coriolis;
  coriolis << -h * dq[1] * (2.0 * dq[0] + dq[1]), h * dq[0] * dq[0];

  Eigen::Vector2d gravity = Eigen::Vector2d::Zero();
  if (arm.gravity != 0.0) {
    const double c1 = std::cos(q[0]);
    const double c12 = std::cos(q[0] + q[1]);
    gravity << (arm.m1 * lc1 + arm.m2 * arm.l1) * arm.gravity * c1 +
                   arm.m2 * lc2 * arm.gravity * c12,
        arm.m2 * lc2 * arm.gravity * c12;
  }

  const Eigen::Vector2d rhs = torque - coriolis - gravity - arm.joint_damping * dq;
  return arm_mass_matrix(arm, q[1]).ldlt().solve(rhs);
}

std::vector<int> position_indices(const PlantSpec& plant) {
  switch (plant.kind) {
    case PlantKind::PointMass1D: return {0};
    case PlantKind::PointMass2D: return {0, 1};
    case PlantKind::TwoLinkArm: return {0, 1};
    case PlantKind::LevitatedParticle: return {0, 1, 2};
    case PlantKind::Linear: {
      std::vector<int> idx(plant.linear().position_dims);
      for (int i = 0; i < plant.linear().position_dims; ++i) idx[i] = i;
      return idx;
    }
  }
  return {};
}

std::vector<int> velocity_indices(const PlantSpec& plant) {
  auto idx = position_indices(plant);
  const int offset = static_cast<int>(idx.size());
  for (auto& i : idx) i += offset;
  return idx;
}

int end_effector_dim(const PlantSpec& plant) {
  return plant.kind == PlantKind::TwoLinkArm ? 2 : static_cast<int>(position_indices(plant).size());
}

Vector end_effector_position(const PlantSpec& plant, const StateVector& x) {
  if (plant.kind == PlantKind::TwoLinkArm) {
    return forward_kinematics(plant.arm(), x.head<2>()).position;
  }
  const auto idx = position_indices(plant);
  Vector p(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) p[i] = x[idx[i]];
  return p;
}

Vector end_effector_velocity(const PlantSpec& plant, const StateVector& x) {
  if (plant.kind == PlantKind::TwoLinkArm) {
    return forward_kinematics(plant.arm(), x.head<2>()).jacobian * x.segment<2>(2);
  }
  const auto idx = velocity_indices(plant);
  Vector v(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) v[i] = x[idx[i]];
  return v;
}

Matrix end_effector_jacobian(const PlantSpec& plant, const StateVector& x) {
  const int n = plant.state_dim();
  if (plant.kind == PlantKind::TwoLinkArm) {
    Matrix J = Matrix::Zero(2, n);
    J.leftCols(2) = forward_kinematics(plant.arm(), x.head<2>()).jacobian;
    return J;
  }
  const auto idx = position_indices(plant);
  Matrix J = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), n);
  for (std::size_t i = 0; i < idx.size(); ++i) J(static_cast<Eigen::Index>(i), idx[i]) = 1.0;
  return J;
}

}  // namespace hcisim
