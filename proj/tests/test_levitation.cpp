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

#include "hcisim/levitation.hpp"
#include "test_util.hpp"

namespace hcisim {
namespace {

TrapParams weightless() {
  TrapParams p;
  p.gravity = 0.0;
  p.damping = 0.0;
  return p;
}

PathSpec circle(double radius) {
  PathSpec s;
  s.kind = ShapeKind::Circle;
  s.radius = radius;
  return s;
}

PathSpec shape(ShapeKind kind) {
  PathSpec s;
  s.kind = kind;
  return s;
}

TEST(Trap, RequiredTrapBalancesSpringForce) {
  TrapParams p;
  const Vec3 pos(0.001, -0.002, 0.003);
  const Vec3 vel(0.1, 0.2, -0.3);
  const Vec3 acc(1.0, -2.0, 0.5);
  const Vec3 trap = required_trap(pos, vel, acc, p);
  const Vec3 spring(p.k_r * (trap.x() - pos.x()), p.k_r * (trap.y() - pos.y()),
                    p.k_z * (trap.z() - pos.z()));
  const Vec3 force = spring - p.damping * vel - Vec3(0.0, 0.0, p.mass * p.gravity);
  EXPECT_LT((force - p.mass * acc).norm(), 1e-15);
}

TEST(Trap, CaptureRatioUsesHorizontalNormAndVerticalMagnitude) {
  TrapParams p;
  p.capture_radius = 0.002;
  EXPECT_DOUBLE_EQ(capture_ratio(Vec3(0.0006, 0.0008, 0.0), p), 0.5);
  EXPECT_DOUBLE_EQ(capture_ratio(Vec3(0.0006, 0.0008, -0.0016), p), 0.8);
}

TEST(Path, DerivativesMatchFiniteDifferences) {
  PathSpec sampled = shape(ShapeKind::Sampled);
  for (int i = 0; i < 12; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 12;
    sampled.points.emplace_back(0.01 * std::cos(a), 0.006 * std::sin(a) + 0.002 * std::cos(2 * a));
  }
  PathSpec vertical = shape(ShapeKind::Cardioid);
  vertical.plane = Plane::XZ;
  for (const PathSpec& spec : {circle(0.01), shape(ShapeKind::Ellipse), shape(ShapeKind::Cardioid),
                               shape(ShapeKind::RoundedSquare), sampled, vertical}) {
    const Path path(spec);
    const double h = 1e-6;
    for (double s : {0.0, 0.013, 0.2, 0.37, 0.5, 0.61, 0.875, 0.999}) {
      const PathPoint p = path.at(s);
      const Vec3 dq = (path.at(s + h).q - path.at(s - h).q) / (2 * h);
      const Vec3 ddq = (path.at(s + h).dq - path.at(s - h).dq) / (2 * h);
      EXPECT_LT((p.dq - dq).norm(), 1e-6 * std::max(1.0, p.dq.norm())) << shape_name(spec.kind) << s;
      EXPECT_LT((p.ddq - ddq).norm(), 1e-5 * std::max(1.0, p.ddq.norm())) << shape_name(spec.kind) << s;
    }
    EXPECT_LT((path.at(0.0).q - path.at(1.0).q).norm(), 1e-12) << shape_name(spec.kind);
  }
}

TEST(Path, ShapesLieInTheirPlane) {
  PathSpec s = shape(ShapeKind::RoundedSquare);
  s.plane = Plane::YZ;
  s.center = Vec3(0.001, 0.002, 0.003);
  for (const auto& p : sample_path(s, 50)) {
    EXPECT_DOUBLE_EQ(p.q.x(), 0.001);
    EXPECT_DOUBLE_EQ(p.dq.x(), 0.0);
  }
  for (const auto& p : sample_path(circle(0.01), 50)) EXPECT_NEAR(p.q.norm(), 0.01, 1e-15);
}

TEST(Topp, CircleMatchesClosedFormPeriod) {
  // Horizontal circle without gravity or drag: the offset is the centripetal
  // term m v^2 / (k_r R), so the fastest law runs at constant speed with
  // period 2 pi sqrt(m R / (k_r r_budget)).
  const TrapParams p = weightless();
  const double R = 0.01;
  ToppOptions o;
  const ToppResult res = topp_solve(circle(R), p, o);
  const double budget = (1.0 - o.margin) * p.capture_radius;
  const double expected = 2.0 * std::numbers::pi * std::sqrt(p.mass * R / (p.k_r * budget));
  EXPECT_NEAR(res.law.period / expected, 1.0, 1e-4);
  EXPECT_NEAR(res.law.period / circle_period(R, p), 1.0, 0.01);
  EXPECT_DOUBLE_EQ(circle_period(R, p, 1.0 - o.margin), expected);
  EXPECT_LE(res.max_violation, 1e-12);
  EXPECT_TRUE(res.trap.feasible);
}

TEST(Topp, BeatsOrMatchesConstantSpeed) {
  // Both periods come from bisection, so a tie (the circle) agrees only to
  // bisection precision.
  const TrapParams p;
  for (ShapeKind k : {ShapeKind::Circle, ShapeKind::Ellipse, ShapeKind::Cardioid, ShapeKind::RoundedSquare}) {
    ToppOptions o;
    o.grid = 400;
    const ToppResult res = topp_solve(shape(k), p, o);
    EXPECT_LE(res.law.period, constant_speed_period(shape(k), p, o) * (1.0 + 1e-6)) << shape_name(k);
    EXPECT_LE(res.max_violation, 1e-9) << shape_name(k);
  }
}

TEST(Topp, PeriodConvergesUnderGridRefinement) {
  const TrapParams p;
  ToppOptions coarse;
  coarse.grid = 1000;
  ToppOptions fine;
  fine.grid = 2000;
  for (ShapeKind k : {ShapeKind::Cardioid, ShapeKind::RoundedSquare}) {
    const double a = topp_solve(shape(k), p, coarse).law.period;
    const double b = topp_solve(shape(k), p, fine).law.period;
    EXPECT_LT(std::abs(a - b) / b, 1e-3) << shape_name(k);
  }
}

TEST(Topp, ScheduleFollowsThePathAndRespectsTheBudget) {
  const TrapParams p;
  const ToppResult res = topp_solve(shape(ShapeKind::Cardioid), p);
  const auto& law = res.law;
  ASSERT_TRUE(law.path.has_value());
  for (std::size_t i = 0; i < law.s.size(); i += 97) {
    const ScheduleState st = evaluate_schedule(law, law.t[i]);
    EXPECT_LT((st.position - law.path->at(law.s[i]).q).norm(), 1e-12) << i;
    // Periodic in time.
    const ScheduleState next = evaluate_schedule(law, law.t[i] + law.period);
    EXPECT_LT((next.position - st.position).norm(), 1e-12) << i;
  }
  EXPECT_LE(res.trap.peak_offset_ratio, 1.0);
  EXPECT_EQ(res.trap.times.size(), law.sample_times.size());
  EXPECT_NEAR(res.trap.times[1] - res.trap.times[0], 1e-4, 1e-15);
}

TEST(Render, DemoShapesRenderWithinBudget) {
  const TrapParams p;
  RenderOptions r;
  r.cycles = 3;
  r.warmup_cycles = 1;
  for (ShapeKind k : {ShapeKind::Cardioid, ShapeKind::RoundedSquare}) {
    const ToppResult res = topp_solve(shape(k), p);
    EXPECT_LE(res.law.period, 0.1) << shape_name(k);
    EXPECT_LE(res.max_violation, 0.0) << shape_name(k);
    const TrackingReport rep = simulate_render(res.law, res.trap, p, r);
    EXPECT_FALSE(rep.escaped) << shape_name(k);
    EXPECT_LT(rep.peak_capture_ratio, 1.0) << shape_name(k);
    EXPECT_LT(rep.max_deviation, 1e-4) << shape_name(k);
  }
}

TEST(Render, HoverStaysPut) {
  const TrapParams p;
  const Vec3 point(0.0, 0.0, 0.005);
  const ToppResult res = hover_schedule(point, p, 0.01);
  EXPECT_NEAR(res.trap.positions[0].z() - point.z(), p.mass * p.gravity / p.k_z, 1e-15);
  RenderOptions r;
  r.cycles = 2;
  r.warmup_cycles = 0;
  const TrackingReport rep = simulate_render(res.law, res.trap, p, r);
  EXPECT_FALSE(rep.escaped);
  EXPECT_LT(rep.max_deviation, 1e-12);
}

TEST(Render, TrapCsvHasHeaderAndOneRowPerSample) {
  const ToppResult res = hover_schedule(Vec3::Zero(), TrapParams{}, 0.001);
  const std::string path = (testing::temp_dir("trap_csv") / "trap.csv").string();
  write_trap_csv(path, res.trap);
  const std::string text = testing::read_file(path);
  EXPECT_EQ(text.rfind("t,trap_x,trap_y,trap_z\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + static_cast<long>(res.trap.times.size()));
}

TEST(Levitation, ValidationRejectsBadInput) {
  PathSpec s = circle(-1.0);
  EXPECT_THROW(s.validate(), ConfigError);
  s = shape(ShapeKind::RoundedSquare);
  s.corner_radius = s.side;
  EXPECT_THROW(s.validate(), ConfigError);
  s = shape(ShapeKind::Cardioid);
  s.sharpness = 1.0;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(shape_kind_from_name("triangle"), ConfigError);
  EXPECT_THROW(plane_from_name("xx"), ConfigError);
  TrapParams p;
  p.k_r = 0.0;
  EXPECT_THROW(topp_solve(circle(0.01), p), ConfigError);

  // Too heavy to hover: the gravity offset alone exceeds the capture radius.
  TrapParams heavy;
  heavy.mass = 1e-3;
  EXPECT_THROW(topp_solve(circle(0.01), heavy), InfeasiblePathError);
}

TEST(Levitation, ShapeNamesAreSorted) {
  const auto names = shape_names();
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  EXPECT_NE(std::find(names.begin(), names.end(), "circle"), names.end());
  EXPECT_EQ(shape_kind_from_name("rounded-square"), ShapeKind::RoundedSquare);
}

}  // namespace
}  // namespace hcisim
