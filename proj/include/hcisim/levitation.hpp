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

// Rendering closed shapes with a particle held in a moving acoustic trap.
//
// The trap acts as an anisotropic spring, F = K (trap - p) - b v - m g e_z,
// K = diag(k_r, k_r, k_z). A path q(s), s in [0, 1), is timed by
// beta(s) = (ds/dt)^2; the trap offset needed to move the particle along the
// path must stay inside the capture region:
//   |horizontal offset| <= r_max   and   |vertical offset| <= r_max.
// topp_solve finds the fastest periodic timing law on an s-grid by repeated
// forward and backward sweeps below the maximum-velocity curve.

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hcisim/dynamics.hpp"

namespace hcisim {

using TrapParams = ParticleParams;
using Vec3 = Eigen::Vector3d;

void validate_trap_params(const TrapParams& params);

/// Trap position that makes the spring force supply m a + b v plus gravity
/// compensation.
Vec3 required_trap(const Vec3& p, const Vec3& v, const Vec3& a, const TrapParams& params);

/// Largest of |horizontal offset| / r_max and |vertical offset| / r_max.
double capture_ratio(const Vec3& offset, const TrapParams& params);

enum class ShapeKind { Circle, Ellipse, Cardioid, RoundedSquare, Sampled };

std::string shape_name(ShapeKind kind);
ShapeKind shape_kind_from_name(const std::string& name);
std::vector<std::string> shape_names();  // sorted

/// Plane the shape is drawn in: "xy" (horizontal), "xz" or "yz".
enum class Plane { XY, XZ, YZ };
std::string plane_name(Plane plane);
Plane plane_from_name(const std::string& name);

struct PathSpec {
  ShapeKind kind = ShapeKind::Circle;
  double radius = 0.01;            // circle
  double semi_a = 0.012;           // ellipse, first in-plane axis
  double semi_b = 0.006;           // ellipse, second in-plane axis
  double scale = 0.004;            // cardioid
  double sharpness = 0.9;          // cardioid, < 1 keeps the cusp regular
  double side = 0.02;              // rounded square
  double corner_radius = 0.004;    // rounded square
  std::vector<Eigen::Vector2d> points;  // sampled closed curve, in-plane
  Vec3 center = Vec3::Zero();
  Plane plane = Plane::XY;
  int samples = 400;

  void validate() const;
};

struct PathPoint {
  double s = 0.0;
  Vec3 q;
  Vec3 dq;   // dq/ds
  Vec3 ddq;  // d2q/ds2
};

/// A validated path ready for repeated evaluation (sampled curves are
/// interpolated by a periodic cubic spline with chord-length knots).
class Path {
 public:
  explicit Path(PathSpec spec);
  PathPoint at(double s) const;
  const PathSpec& spec() const { return spec_; }

 private:
  PathSpec spec_;
  std::shared_ptr<const void> spline_;
};

/// Evaluates the path at s; periodic in s.
PathPoint path_point(const PathSpec& path, double s);

/// `n` samples at s = i / n.
std::vector<PathPoint> sample_path(const PathSpec& path, int n);

struct ToppOptions {
  int grid = 1000;
  double margin = 0.01;  // fraction of r_max held back for tracking error
  double output_rate = 10000.0;  // Hz
  int max_sweeps = 5000;

  void validate() const;
};

struct TimingLaw {
  std::vector<double> s;     // grid, s_i = i / N
  std::vector<double> beta;  // (ds/dt)^2 at s_i
  std::vector<double> t;     // time at s_i, t_0 = 0
  double period = 0.0;
  // Particle schedule at the output rate over one period.
  std::vector<double> sample_times;
  std::vector<Vec3> particle_position;
  std::vector<Vec3> particle_velocity;
  std::vector<Vec3> particle_acceleration;
  int sweeps = 0;
  std::optional<Path> path;  // empty for a stationary law
};

struct ScheduleState {
  double s = 0.0;
  Vec3 position;
  Vec3 velocity;
  Vec3 acceleration;
};

/// Particle state prescribed by the law at any time (periodic in the period):
/// constant d2s/dt2 on each grid segment.
ScheduleState evaluate_schedule(const TimingLaw& law, double t);

struct TrapTrajectory {
  std::vector<double> times;
  std::vector<Vec3> positions;
  double peak_offset_ratio = 0.0;  // capture_ratio at worst sample
  double peak_offset = 0.0;        // m, Euclidean
  bool feasible = false;
};

struct ToppResult {
  TimingLaw law;
  TrapTrajectory trap;
  double max_violation = 0.0;  // grid constraint, units of r_max, <= 0 when met
};

class InfeasiblePathError : public std::runtime_error {
 public:
  InfeasiblePathError(const std::string& what, double s) : std::runtime_error(what), s_(s) {}
  double s() const { return s_; }

 private:
  double s_;
};

ToppResult topp_solve(const PathSpec& path, const TrapParams& params, const ToppOptions& options = {});

/// Worst grid constraint value max(capture_ratio) - budget over a timing law,
/// with d beta / ds taken as central differences.
double timing_violation(const PathSpec& path, const TrapParams& params,
                        const std::vector<double>& beta, double budget);

/// Period of the fastest constant-speed law that satisfies the grid
/// constraints.
double constant_speed_period(const PathSpec& path, const TrapParams& params,
                             const ToppOptions& options = {});

/// Builds the schedule and trap samples for a given beta on the uniform grid.
ToppResult make_schedule(const PathSpec& path, const TrapParams& params,
                         const std::vector<double>& beta, const ToppOptions& options);

/// Closed-form period of the circle at the centripetal limit (g = 0, b = 0,
/// horizontal plane).
double circle_period(double radius, const TrapParams& params, double budget_fraction = 1.0);

struct TrackingReport {
  double max_deviation = 0.0;  // m
  double rms_deviation = 0.0;  // m
  std::vector<double> cycle_drift;  // per cycle after the first, m
  double max_drift_after_warmup = 0.0;
  double peak_capture_ratio = 0.0;
  bool escaped = false;
  double escape_time = -1.0;
};

enum class Playback {
  Continuous,  // trap evaluated from the timing law at every integration step
  Sampled,     // linear interpolation of the exported trap samples
};

struct RenderOptions {
  int cycles = 10;
  int warmup_cycles = 3;
  double dt = 1e-6;  // integration step, s
  Playback playback = Playback::Continuous;
};

/// Forward-simulates the particle under the trap schedule, repeated
/// periodically, starting from the scheduled initial state. Deviations are
/// measured against the scheduled particle position.
TrackingReport simulate_render(const TimingLaw& law, const TrapTrajectory& trap,
                               const TrapParams& params, const RenderOptions& options = {});

/// Stationary law and trap for a single hover point.
ToppResult hover_schedule(const Vec3& point, const TrapParams& params, double duration,
                          double output_rate = 10000.0);

void write_trap_csv(const std::string& path, const TrapTrajectory& trap);

}  // namespace hcisim
