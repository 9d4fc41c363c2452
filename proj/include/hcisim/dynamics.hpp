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

// Discrete-time plants. Every plant advances with semi-implicit Euler:
// velocities are updated from forces evaluated at the current state, then
// positions are updated from the new velocities.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "hcisim/common.hpp"

namespace hcisim {

/// State and control layouts:
///   PointMass1D        x = (p, v)                          u = force [N]
///   PointMass2D        x = (px, py, vx, vy)                u = (fx, fy) [N]
///   TwoLinkArm         x = (q1, q2, dq1, dq2,              u = excitation,
///                           a1, a2, da1, da2)                  nominally [-1, 1]
///                      joint torque = muscle_gain * a
///   LevitatedParticle  x = (px, py, pz, vx, vy, vz)        u = trap position
///                                                              relative to p [m]
///   Linear             x(k+1) = A x(k) + B u(k)
enum class PlantKind { PointMass1D, PointMass2D, TwoLinkArm, LevitatedParticle, Linear };

struct PointMassParams {
  double mass = 1.0;     // kg
  double damping = 0.0;  // N s/m
};

struct TwoLinkArmParams {
  double l1 = 0.30;  // m
  double l2 = 0.33;  // m
  double m1 = 1.4;   // kg, uniform rod
  double m2 = 1.0;   // kg, uniform rod
  double joint_damping = 0.0;  // N m s/rad
  double muscle_tau = 0.04;    // s
  double muscle_gain = 10.0;   // N m per unit activation
  double gravity = 0.0;        // m/s^2, acts along -y of the arm plane
};

struct ParticleParams {
  double mass = 0.7e-6;   // kg (expanded polystyrene bead)
  double k_r = 0.03;      // N/m, radial (x, y)
  double k_z = 0.06;      // N/m, axial (z)
  double damping = 1e-7;  // N s/m
  double capture_radius = 343.0 / 40000.0 / 4.0;  // m, quarter wavelength
  double gravity = 9.81;  // m/s^2 along -z
  double frequency = 40000.0;  // Hz, documentation only
};

struct LinearParams {
  Matrix A;
  Matrix B;
  int position_dims = 1;  // leading states treated as positions, the next
                          // position_dims states as velocities
};

struct ControlBounds {
  Vector lower;
  Vector upper;
};

struct PlantSpec {
  PlantKind kind = PlantKind::PointMass1D;
  double dt = 0.01;
  std::variant<PointMassParams, TwoLinkArmParams, ParticleParams, LinearParams> params;
  std::optional<ControlBounds> control_bounds;

  int state_dim() const;
  int control_dim() const;

  /// Throws ConfigError naming the offending parameter.
  void validate() const;

  const PointMassParams& point_mass() const { return std::get<PointMassParams>(params); }
  const TwoLinkArmParams& arm() const { return std::get<TwoLinkArmParams>(params); }
  const ParticleParams& particle() const { return std::get<ParticleParams>(params); }
  const LinearParams& linear() const { return std::get<LinearParams>(params); }
};

PlantSpec make_point_mass_1d(PointMassParams params = {}, double dt = 0.01);
PlantSpec make_point_mass_2d(PointMassParams params = {}, double dt = 0.01);
PlantSpec make_two_link_arm(TwoLinkArmParams params = {}, double dt = 0.01);
PlantSpec make_levitated_particle(ParticleParams params = {}, double dt = 1e-3);
PlantSpec make_linear_plant(Matrix A, Matrix B, int position_dims, double dt);

std::string plant_name(PlantKind kind);
PlantKind plant_kind_from_name(const std::string& name);

struct NoiseSpec {
  Vector additive_control_std;        // empty means zero
  double signal_dependent_scale = 0;  // actual = commanded * (1 + scale * eps)
  Vector observation_std;             // empty means zero

  bool is_zero() const;
  void validate(int control_dim) const;
};

using Rng = std::mt19937_64;

/// Independent stream for trial `stream` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

inline constexpr int kFlagSaturated = 1;

struct Trajectory {
  double dt = 0.0;
  std::vector<StateVector> states;      // N + 1
  std::vector<ControlVector> controls;  // N
  std::vector<int> flags;               // N, bit kFlagSaturated
  std::uint64_t seed = 0;
  std::vector<StateVector> estimates;   // optional, N + 1 when present

  int horizon() const { return static_cast<int>(controls.size()); }
  void check() const;
};

/// One step. Controls outside the declared bounds are clamped and
/// `saturated` (when given) is set.
StateVector step(const PlantSpec& plant, const StateVector& x, const ControlVector& u,
                 const NoiseSpec& noise, Rng& rng, bool* saturated = nullptr);

/// Noise-free step.
StateVector step(const PlantSpec& plant, const StateVector& x, const ControlVector& u,
                 bool* saturated = nullptr);

Trajectory rollout(const PlantSpec& plant, const StateVector& x0,
                   const std::vector<ControlVector>& controls, const NoiseSpec& noise,
                   std::uint64_t seed);

ControlVector clamp_control(const PlantSpec& plant, const ControlVector& u,
                            bool* saturated = nullptr);

struct Linearization {
  Matrix A;  // d step / d x
  Matrix B;  // d step / d u
};

/// Central differences of the noise-free step with per-entry perturbation
/// relative_step * max(1, |entry|).
Linearization linearize(const PlantSpec& plant, const StateVector& x, const ControlVector& u,
                        double relative_step = 1e-6);

/// Exact (A, B) of the linear plants (point masses and Linear). Throws
/// std::invalid_argument for nonlinear plants.
Linearization linear_model(const PlantSpec& plant);

struct ArmKinematics {
  Eigen::Vector2d position;
  Eigen::Matrix2d jacobian;
};

ArmKinematics forward_kinematics(const TwoLinkArmParams& arm, const Eigen::Vector2d& q);

/// Joint accelerations of the rigid two-link arm under joint torques.
Eigen::Vector2d arm_acceleration(const TwoLinkArmParams& arm, const Eigen::Vector2d& q,
                                 const Eigen::Vector2d& dq, const Eigen::Vector2d& torque);

Eigen::Matrix2d arm_mass_matrix(const TwoLinkArmParams& arm, double q2);

std::vector<int> position_indices(const PlantSpec& plant);
std::vector<int> velocity_indices(const PlantSpec& plant);

/// Cartesian position of the controlled point: the fingertip for the arm,
/// the position states for every other plant.
Vector end_effector_position(const PlantSpec& plant, const StateVector& x);
Vector end_effector_velocity(const PlantSpec& plant, const StateVector& x);
/// d end_effector_position / d x.
Matrix end_effector_jacobian(const PlantSpec& plant, const StateVector& x);
int end_effector_dim(const PlantSpec& plant);

}  // namespace hcisim
