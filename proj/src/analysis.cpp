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

#include "hcisim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hcisim/trajectory_io.hpp"

namespace hcisim {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
  const int n = static_cast<int>(v.size());
  const int half = window / 2;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += v[j];
    out[i] = s / (hi - lo + 1);
  }
  return out;
}

const std::vector<Vector>& velocity_or_derived(const MotionSamples& m, std::vector<Vector>& storage) {
  if (!m.velocity.empty()) {
    if (m.velocity.size() != m.position.size()) {
      throw DimensionError("analysis: velocity samples do not match positions");
    }
    return m.velocity;
  }
  storage = differentiate(m.position, m.dt);
  return storage;
}

const std::vector<Vector>& acceleration_or_derived(const MotionSamples& m,
                                                   const std::vector<Vector>& velocity,
                                                   std::vector<Vector>& storage) {
  if (!m.acceleration.empty()) {
    if (m.acceleration.size() != m.position.size()) {
      throw DimensionError("analysis: acceleration samples do not match positions");
    }
    return m.acceleration;
  }
  storage = differentiate(velocity, m.dt);
  return storage;
}

}  // namespace

double index_of_difficulty(double distance, double width) {
  if (!(distance > 0.0) || !(width > 0.0)) {
    throw AnalysisError("index_of_difficulty: D and W must be > 0");
  }
  return std::log2(distance / width + 1.0);
}

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("linear_fit: x and y differ in length");
  if (x.size() < 2) throw AnalysisError("linear_fit: need at least 2 points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw AnalysisError("linear_fit: degenerate regressor (zero variance)");

  FitResult fit;
  fit.n_points = static_cast<int>(x.size());
  fit.slope = syy > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

FitResult fitts_fit(const std::vector<TrialRecord>& trials) {
  std::vector<double> ids, mts;
  for (const auto& t : trials) {
    if (!(t.movement_time > 0.0)) throw AnalysisError("fitts_fit: movement times must be > 0");
    ids.push_back(index_of_difficulty(t.distance, t.width));
    mts.push_back(t.movement_time);
  }
  std::vector<double> distinct = ids;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                 distinct.end());
  if (distinct.size() < 2) throw AnalysisError("fitts_fit: need at least 2 distinct ID values");
  return linear_fit(ids, mts);
}

std::vector<Vector> differentiate(const std::vector<Vector>& samples, double dt) {
  if (!(dt > 0.0)) throw AnalysisError("differentiate: dt must be > 0");
  const std::size_t n = samples.size();
  if (n < 2) throw AnalysisError("differentiate: need at least 2 samples");
  std::vector<Vector> d(n);
  d[0] = (samples[1] - samples[0]) / dt;
  d[n - 1] = (samples[n - 1] - samples[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * dt);
  return d;
}

MotionSamples motion_from_positions(const std::vector<Vector>& positions, double dt) {
  MotionSamples m;
  m.dt = dt;
  m.position = positions;
  m.velocity = differentiate(positions, dt);
  m.acceleration = differentiate(m.velocity, dt);
  return m;
}

MotionSamples motion_from_trajectory(const PlantSpec& plant, const Trajectory& traj) {
  traj.check();
  MotionSamples m;
  m.dt = traj.dt;
  for (const auto& x : traj.states) {
    m.position.push_back(end_effector_position(plant, x));
    m.velocity.push_back(end_effector_velocity(plant, x));
  }
  m.acceleration = differentiate(m.velocity, m.dt);
  return m;
}

PowerLawFit power_law_fit(const MotionSamples& motion, std::size_t begin, std::size_t end) {
  const std::size_t n = motion.size();
  if (end == 0) end = n;
  if (begin >= end || end > n) throw AnalysisError("power_law_fit: invalid sample window");
  for (const auto& p : motion.position) {
    if (p.size() < 2) throw DimensionError("power_law_fit: motion must be planar");
  }
  std::vector<Vector> vs, as;
  const auto& vel = velocity_or_derived(motion, vs);
  const auto& acc = acceleration_or_derived(motion, vel, as);

  std::vector<double> log_k, log_v;
  for (std::size_t i = begin; i < end; ++i) {
    const double vx = vel[i][0], vy = vel[i][1];
    const double speed = std::hypot(vx, vy);
    if (speed <= kMinSpeed) continue;
    const double kappa = std::abs(vx * acc[i][1] - vy * acc[i][0]) / (speed * speed * speed);
    if (kappa < kMinCurvature || !std::isfinite(kappa)) continue;
    log_k.push_back(std::log(kappa));
    log_v.push_back(std::log(speed));
  }
  if (log_k.size() < 20) {
    throw AnalysisError("power_law_fit: insufficient valid samples (" +
                        std::to_string(log_k.size()) + " < 20)");
  }
  const double mk = mean_of(log_k);
  double var = 0.0;
  for (double v : log_k) var += (v - mk) * (v - mk);
  if (std::sqrt(var / log_k.size()) < 1e-9) {
    throw AnalysisError("power_law_fit: degenerate regressor (single curvature value)");
  }
  const FitResult f = linear_fit(log_k, log_v);
  return {f.slope, f.intercept, f.r_squared, f.n_points};
}

ProfileMetrics velocity_profile_metrics(const MotionSamples& motion, double peak_threshold_fraction) {
  const std::size_t n = motion.size();
  if (n < 10) throw AnalysisError("velocity_profile_metrics: need at least 10 samples");
  if (!(peak_threshold_fraction >= 0.0) || !(peak_threshold_fraction < 1.0)) {
    throw AnalysisError("velocity_profile_metrics: threshold fraction must lie in [0, 1)");
  }
  std::vector<Vector> vs, as;
  const auto& vel = velocity_or_derived(motion, vs);
  const auto& acc = acceleration_or_derived(motion, vel, as);

  std::vector<double> speed(n);
  for (std::size_t i = 0; i < n; ++i) speed[i] = vel[i].norm();
  const auto peak_it = std::max_element(speed.begin(), speed.end());
  const double vmax = *peak_it;
  if (!(vmax > 0.0)) throw AnalysisError("velocity_profile_metrics: degenerate (motionless) trajectory");

  ProfileMetrics out;
  out.peak_speed = vmax;
  out.time_to_peak_ratio = static_cast<double>(peak_it - speed.begin()) / static_cast<double>(n - 1);

  // Local maxima over runs of (numerically) equal speed. Runs touching either
  // end only count when they cover the whole signal.
  const double tol = 1e-9 * vmax;
  std::size_t a = 0;
  while (a < n) {
    std::size_t b = a;
    while (b + 1 < n && std::abs(speed[b + 1] - speed[a]) <= tol) ++b;
    const bool whole = a == 0 && b == n - 1;
    const bool interior = a > 0 && b + 1 < n && speed[a - 1] < speed[a] - tol &&
                          speed[b + 1] < speed[b] - tol;
    if ((whole || interior) && speed[a] >= peak_threshold_fraction * vmax) ++out.velocity_peaks;
    a = b + 1;
  }

  std::vector<double> tangential(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (speed[i] > kMinSpeed) tangential[i] = vel[i].dot(acc[i]) / speed[i];
  }
  const auto smooth = moving_average(tangential, 5);
  double amax = 0.0;
  for (double v : smooth) amax = std::max(amax, std::abs(v));
  const double dead = 0.01 * amax;
  int last_sign = 0;
  for (double v : smooth) {
    if (std::abs(v) <= dead) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++out.accel_zero_crossings;
    last_sign = sign;
  }
  return out;
}

EndpointStats endpoint_statistics(const std::vector<Vector>& endpoints) {
  if (endpoints.empty()) throw AnalysisError("endpoint_statistics: no endpoints");
  const Eigen::Index d = endpoints.front().size();
  EndpointStats st;
  st.n = static_cast<int>(endpoints.size());
  st.mean = Vector::Zero(d);
  for (const auto& e : endpoints) {
    require_dim(e.size(), d, "endpoint_statistics: endpoint");
    st.mean += e;
  }
  st.mean /= st.n;
  st.stddev = Vector::Zero(d);
  if (st.n > 1) {
    for (const auto& e : endpoints) st.stddev += (e - st.mean).cwiseAbs2();
    st.stddev = (st.stddev / (st.n - 1)).cwiseSqrt();
  }
  return st;
}

nlohmann::json fit_to_json(const FitResult& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"r_squared", fit.r_squared},
          {"n_points", fit.n_points}};
}

nlohmann::json metrics_to_json(const ProfileMetrics& m) {
  return {{"velocity_peaks", m.velocity_peaks},
          {"time_to_peak_ratio", m.time_to_peak_ratio},
          {"accel_zero_crossings", m.accel_zero_crossings},
          {"peak_speed", m.peak_speed}};
}

void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& trials) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "D,W,ID,MT,peaks,ratio,endpoint_error\n";
  for (const auto& t : trials) {
    out << format_real(t.distance) << ',' << format_real(t.width) << ','
        << format_real(index_of_difficulty(t.distance, t.width)) << ','
        << format_real(t.movement_time) << ',' << t.velocity_peaks << ','
        << format_real(t.time_to_peak_ratio) << ',' << format_real(t.endpoint_error) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace hcisim
