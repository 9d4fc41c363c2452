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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hcisim/analysis.hpp"
#include "reach_suite.hpp"
#include "test_util.hpp"

namespace hcisim {
namespace {

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

// Harmonic motion on an ellipse, x = a cos(w t), y = b sin(w t): speed and
// curvature obey v = (a b w^3)^(1/3) kappa^(-1/3) exactly.
MotionSamples harmonic_ellipse(double a, double b, double w, int n, bool exact_derivatives) {
  const double dt = 2.0 * std::numbers::pi / w / n;
  std::vector<Vector> pos, vel, acc;
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    pos.push_back(vec2(a * std::cos(w * t), b * std::sin(w * t)));
    vel.push_back(vec2(-a * w * std::sin(w * t), b * w * std::cos(w * t)));
    acc.push_back(vec2(-a * w * w * std::cos(w * t), -b * w * w * std::sin(w * t)));
  }
  if (!exact_derivatives) return motion_from_positions(pos, dt);
  MotionSamples m;
  m.dt = dt;
  m.position = pos;
  m.velocity = vel;
  m.acceleration = acc;
  return m;
}

// Minimum-jerk 1D reach of length d over duration T.
MotionSamples minimum_jerk(double d, double T, int n) {
  std::vector<Vector> pos;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    pos.push_back(Vector::Constant(1, d * (10 * std::pow(s, 3) - 15 * std::pow(s, 4) + 6 * std::pow(s, 5))));
  }
  return motion_from_positions(pos, T / (n - 1));
}

TEST(Fitts, IndexOfDifficultyIsShannonForm) {
  EXPECT_DOUBLE_EQ(index_of_difficulty(0.3, 0.1), 2.0);
  EXPECT_DOUBLE_EQ(index_of_difficulty(0.07, 0.01), 3.0);
  EXPECT_THROW(index_of_difficulty(0.1, 0.0), AnalysisError);
}

TEST(Fitts, RecoversExactAffineLaw) {
  const double a = 0.137, b = 0.211;
  std::vector<TrialRecord> trials;
  for (double d : {0.05, 0.1, 0.2, 0.4}) {
    for (double w : {0.005, 0.01, 0.02}) {
      TrialRecord t;
      t.distance = d;
      t.width = w;
      t.movement_time = a + b * std::log2(d / w + 1.0);
      trials.push_back(t);
    }
  }
  const FitResult fit = fitts_fit(trials);
  EXPECT_NEAR(fit.intercept, a, 1e-9);
  EXPECT_NEAR(fit.slope, b, 1e-9);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.n_points, 12);
}

TEST(Fitts, RejectsDegenerateDesigns) {
  TrialRecord t;
  t.distance = 0.1;
  t.width = 0.01;
  t.movement_time = 0.5;
  EXPECT_THROW(fitts_fit({t, t, t}), AnalysisError);
  t.movement_time = 0.0;
  TrialRecord u = t;
  u.distance = 0.2;
  EXPECT_THROW(fitts_fit({t, u}), AnalysisError);
}

TEST(LinearFit, HandlesEdgeCases) {
  const FitResult flat = linear_fit({1.0, 2.0, 3.0}, {4.0, 4.0, 4.0});
  EXPECT_EQ(flat.slope, 0.0);
  EXPECT_EQ(flat.intercept, 4.0);
  EXPECT_EQ(flat.r_squared, 0.0);
  EXPECT_THROW(linear_fit({1.0, 1.0}, {1.0, 2.0}), AnalysisError);
  EXPECT_THROW(linear_fit({1.0}, {1.0}), AnalysisError);
  EXPECT_THROW(linear_fit({1.0, 2.0}, {1.0}), DimensionError);
  // Noisy points: compare against the normal equations.
  const std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y = {1.1, 2.9, 5.2, 6.8, 9.1};
  const FitResult f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 19.9 / 10.0, 1e-12);
  EXPECT_NEAR(f.intercept, 5.02 - 2.0 * 1.99, 1e-12);
  EXPECT_GT(f.r_squared, 0.99);
  EXPECT_LT(f.r_squared, 1.0);
}

TEST(PowerLaw, TwoThirdsEllipseGivesMinusOneThird) {
  const double a = 0.1, b = 0.04, w = 2.0;
  const PowerLawFit fit = power_law_fit(harmonic_ellipse(a, b, w, 500, true));
  EXPECT_NEAR(fit.exponent, -1.0 / 3.0, 1e-6);
  EXPECT_NEAR(fit.log_gain, std::log(a * b * w * w * w) / 3.0, 1e-6);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-9);
}

TEST(PowerLaw, FiniteDifferencedPositionsStayClose) {
  const MotionSamples m = harmonic_ellipse(0.1, 0.04, 2.0, 2000, false);
  // One-sided differences at the ends are first order; fit the interior.
  const PowerLawFit fit = power_law_fit(m, 2, m.size() - 2);
  EXPECT_NEAR(fit.exponent, -1.0 / 3.0, 1e-4);
}

TEST(PowerLaw, DegenerateMotionIsRejected) {
  // Constant-speed circle has a single curvature value: degenerate.
  EXPECT_THROW(power_law_fit(harmonic_ellipse(0.05, 0.05, 1.0, 200, true)), AnalysisError);
  MotionSamples line;
  line.dt = 0.01;
  for (int i = 0; i < 50; ++i) line.position.push_back(vec2(0.01 * i, 0.0));
  EXPECT_THROW(power_law_fit(line), AnalysisError);
  MotionSamples one_d;
  one_d.dt = 0.01;
  one_d.position.assign(50, Vector::Zero(1));
  EXPECT_THROW(power_law_fit(one_d), DimensionError);
}

TEST(Profile, MinimumJerkIsBellShaped) {
  const ProfileMetrics m = velocity_profile_metrics(minimum_jerk(0.2, 0.5, 101));
  EXPECT_EQ(m.velocity_peaks, 1);
  EXPECT_NEAR(m.time_to_peak_ratio, 0.5, 1e-12);
  EXPECT_EQ(m.accel_zero_crossings, 1);
  EXPECT_NEAR(m.peak_speed, 1.875 * 0.2 / 0.5, 2e-3);
}

TEST(Profile, TwoSubmovementsGiveTwoPeaks) {
  MotionSamples a = minimum_jerk(0.2, 0.5, 101);
  const MotionSamples b = minimum_jerk(0.1, 0.5, 101);
  std::vector<Vector> pos = a.position;
  for (std::size_t i = 1; i < b.size(); ++i) pos.push_back(a.position.back() + b.position[i]);
  const ProfileMetrics m = velocity_profile_metrics(motion_from_positions(pos, a.dt));
  EXPECT_EQ(m.velocity_peaks, 2);
  EXPECT_EQ(m.accel_zero_crossings, 3);
  EXPECT_LT(m.time_to_peak_ratio, 0.5);
}

TEST(Profile, PlateauCountsOnceAndSmallBumpsAreIgnored) {
  MotionSamples m;
  m.dt = 0.01;
  std::vector<double> speed = {0, 1, 2, 3, 3, 3, 3, 2, 1, 0.02, 0.03, 0.02, 0};
  for (double v : speed) {
    m.position.push_back(Vector::Zero(1));
    m.velocity.push_back(Vector::Constant(1, v));
  }
  EXPECT_EQ(velocity_profile_metrics(m).velocity_peaks, 1);
  EXPECT_EQ(velocity_profile_metrics(m, 0.0).velocity_peaks, 2);
  MotionSamples still = m;
  for (auto& v : still.velocity) v.setZero();
  EXPECT_THROW(velocity_profile_metrics(still), AnalysisError);
}

TEST(Profile, ReachSuiteIsSinglePeakedAndBellShaped) {
  for (const auto& r : testing::run_reach_suite()) {
    EXPECT_TRUE(r.converged) << r.name;
    const ProfileMetrics m = velocity_profile_metrics(r.motion);
    EXPECT_EQ(m.velocity_peaks, 1) << r.name;
    EXPECT_GE(m.time_to_peak_ratio, 0.3) << r.name;
    EXPECT_LE(m.time_to_peak_ratio, 0.7) << r.name;
    EXPECT_EQ(m.accel_zero_crossings, 1) << r.name;
  }
}

TEST(Differentiate, ExactForLinearAndCentralForQuadratic) {
  std::vector<Vector> lin, quad;
  const double dt = 0.1;
  for (int i = 0; i < 10; ++i) {
    lin.push_back(Vector::Constant(1, 3.0 * i * dt));
    quad.push_back(Vector::Constant(1, std::pow(i * dt, 2)));
  }
  for (const auto& d : differentiate(lin, dt)) EXPECT_NEAR(d[0], 3.0, 1e-12);
  const auto dq = differentiate(quad, dt);
  for (int i = 1; i < 9; ++i) EXPECT_NEAR(dq[i][0], 2.0 * i * dt, 1e-12);
  EXPECT_THROW(differentiate(lin, 0.0), AnalysisError);
}

TEST(Endpoints, SampleStatistics) {
  const EndpointStats st = endpoint_statistics({vec2(1.0, 0.0), vec2(3.0, 0.0), vec2(5.0, 3.0)});
  EXPECT_EQ(st.n, 3);
  EXPECT_NEAR(st.mean[0], 3.0, 1e-15);
  EXPECT_NEAR(st.mean[1], 1.0, 1e-15);
  EXPECT_NEAR(st.stddev[0], 2.0, 1e-15);
  EXPECT_NEAR(st.stddev[1], std::sqrt(3.0), 1e-15);
  EXPECT_EQ(endpoint_statistics({vec2(1.0, 2.0)}).stddev, Vector::Zero(2));
  EXPECT_THROW(endpoint_statistics({}), AnalysisError);
}

TEST(TrialsCsv, WritesTidyTable) {
  TrialRecord t;
  t.distance = 0.3;
  t.width = 0.1;
  t.movement_time = 0.5;
  t.velocity_peaks = 1;
  t.time_to_peak_ratio = 0.45;
  const auto path = testing::temp_dir("trials_csv") / "trials.csv";
  write_trials_csv(path.string(), {t, t});
  const std::string text = testing::read_file(path.string());
  EXPECT_EQ(text.rfind("D,W,ID,MT,peaks,ratio,endpoint_error\n", 0), 0u);
  EXPECT_NE(text.find(",0.5,1,"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace hcisim
