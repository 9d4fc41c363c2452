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

// Movement regularities: Fitts' law regression, the speed-curvature power
// law, and velocity/acceleration profile shape.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcisim/dynamics.hpp"

namespace hcisim {

class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shannon index of difficulty log2(D / W + 1).
double index_of_difficulty(double distance, double width);

struct TrialRecord {
  double distance = 0.0;  // D, m
  double width = 0.0;     // W, m
  double movement_time = 0.0;  // s
  Vector endpoint;
  double endpoint_error = 0.0;  // m, signed along the movement for 1D tasks
  int velocity_peaks = 0;
  double time_to_peak_ratio = 0.0;
  int accel_zero_crossings = 0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // clamped to [0, 1]
  int n_points = 0;
};

/// Ordinary least squares y = intercept + slope x. Zero variance in y gives
/// slope 0 and R^2 0; zero variance in x throws AnalysisError.
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Movement time against ID; needs at least two distinct IDs.
FitResult fitts_fit(const std::vector<TrialRecord>& trials);

/// Sampled planar or spatial motion. Velocity and acceleration may be given
/// exactly; otherwise they are derived by finite differences.
struct MotionSamples {
  double dt = 0.0;
  std::vector<Vector> position;
  std::vector<Vector> velocity;
  std::vector<Vector> acceleration;

  std::size_t size() const { return position.size(); }
};

/// Central differences inside, one-sided at the ends.
std::vector<Vector> differentiate(const std::vector<Vector>& samples, double dt);

MotionSamples motion_from_positions(const std::vector<Vector>& positions, double dt);

/// End-effector motion of a trajectory: positions from kinematics, velocities
/// from the velocity states, accelerations by differentiating velocities.
MotionSamples motion_from_trajectory(const PlantSpec& plant, const Trajectory& traj);

struct PowerLawFit {
  double exponent = 0.0;  // slope of log speed on log curvature
  double log_gain = 0.0;  // intercept
  double r_squared = 0.0;
  int n_points = 0;
};

inline constexpr double kMinSpeed = 1e-6;      // m/s
inline constexpr double kMinCurvature = 1e-6;  // 1/m

/// Fits log v = log k + exponent * log kappa over samples [begin, end) of a
/// planar motion (first two coordinates). end = 0 means the last sample.
PowerLawFit power_law_fit(const MotionSamples& motion, std::size_t begin = 0, std::size_t end = 0);

struct ProfileMetrics {
  int velocity_peaks = 0;
  double time_to_peak_ratio = 0.0;
  int accel_zero_crossings = 0;
  double peak_speed = 0.0;
};

/// Speed peaks below `peak_threshold_fraction` of the maximum are ignored and
/// a plateau counts as one peak. Zero crossings are counted on the tangential
/// acceleration smoothed by a centered 5-sample moving average, ignoring
/// values within 1% of its peak magnitude.
ProfileMetrics velocity_profile_metrics(const MotionSamples& motion,
                                        double peak_threshold_fraction = 0.05);

struct EndpointStats {
  Vector mean;
  Vector stddev;  // per coordinate, sample standard deviation
  int n = 0;
};

EndpointStats endpoint_statistics(const std::vector<Vector>& endpoints);

nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json metrics_to_json(const ProfileMetrics& m);

/// Tidy per-trial table: D,W,ID,MT,peaks,ratio,endpoint_error.
void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& trials);

}  // namespace hcisim
