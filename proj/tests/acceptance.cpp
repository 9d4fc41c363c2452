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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "gradient_suite.hpp"
#include "hcisim/experiment.hpp"
#include "oracles.hpp"
#include "reach_suite.hpp"

namespace hcisim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome riccati_oracle() {
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  bool converged = true;
  for (int i = 0; i < 20; ++i) {
    const auto lq = testing::random_lq_instance(rng);
    const OcpSolution sol = solve(testing::to_ocp(lq, 5));
    const auto lqr = lqr_solve(lq.A, lq.B, lq.Q, lq.R, lq.Q_N, 5);
    const double ref = lqr_cost(lq.A, lq.B, lq.Q, lq.R, lq.Q_N, lqr.gains, lq.x0);
    worst = std::max(worst, std::abs(sol.cost - ref) / std::max(ref, 1e-300));
    converged = converged && sol.converged;
  }
  return {converged && worst <= 1e-6, "worst relative cost error " + fmt(worst)};
}

Outcome brute_force() {
  const double a = 0.9, b = 0.5, q = 1.0, r = 0.3, qn = 2.0, x0 = 1.0;
  const Matrix A = Matrix::Constant(1, 1, a), B = Matrix::Constant(1, 1, b);
  const Matrix Q = Matrix::Constant(1, 1, q), R = Matrix::Constant(1, 1, r), QN = Matrix::Constant(1, 1, qn);
  const auto sol = lqr_solve(A, B, Q, R, QN, 2);
  const double cost = lqr_cost(A, B, Q, R, QN, sol.gains, Vector::Constant(1, x0));
  const double grid = testing::brute_force_two_step(a, b, q, r, qn, x0, -2.0, 2.0, 0.01);
  return {cost <= grid + 1e-4, "lqr " + fmt(cost) + " vs grid minimum " + fmt(grid)};
}

Outcome gradient_suite() {
  const auto rep = testing::run_gradient_suite(100, 2026);
  return {rep.worst <= 1e-5,
          std::to_string(rep.checks) + " checks, worst " + fmt(rep.worst) + " (" + rep.worst_case + ")"};
}

Outcome speed_accuracy() {
  std::string detail = "endpoint std";
  double previous = 0.0;
  bool increasing = true;
  for (double sdn : {0.1, 0.2, 0.4}) {
    ReachTask task;
    task.signal_dependent_scale = sdn;
    const LqgProblem p = make_reach_problem(task);
    const LqgSolution sol = lqg_solve(p);
    std::vector<Vector> ends;
    for (const auto& t : lqg_rollout(p, sol, 10000, 2026)) ends.push_back(t.states.back().head(1));
    const double sd = endpoint_statistics(ends).stddev[0];
    increasing = increasing && sol.converged && sd > previous;
    previous = sd;
    detail += " " + fmt(sd);
  }
  return {increasing, detail};
}

Outcome fitts_emergence() {
  // Fixed width, distance chosen so the IDs are evenly spaced in [1.5, 5].
  const double width = 0.01;
  json distances = json::array();
  for (int i = 0; i < 6; ++i) {
    const double id = 1.5 + 0.7 * i;
    distances.push_back(width * (std::exp2(id) - 1.0));
  }
  const json j = {{"experiment", "fitts-sweep"},
                  {"seed", 11},
                  {"n_trials", 20},
                  {"save_trajectories", 0},
                  {"conditions", {{"distances", distances}, {"widths", {width}}}}};
  const fs::path dir = fs::temp_directory_path() / "hcisim_acceptance_fitts";
  fs::remove_all(dir);
  const RunSummary s = run_experiment(parse_config(j), dir);
  const json& fit = s.report.at("fit");
  const double r2 = fit.at("r_squared").get<double>();
  const double slope = fit.at("slope").get<double>();
  return {r2 >= 0.9 && slope > 0.0, "R^2 " + fmt(r2) + ", slope " + fmt(slope) + " s/bit"};
}

Outcome profile_shape() {
  int checked = 0;
  bool ok = true;
  std::string detail;
  for (const auto& r : testing::run_reach_suite()) {
    if (!r.converged) continue;
    ++checked;
    const ProfileMetrics m = velocity_profile_metrics(r.motion);
    const bool good = m.velocity_peaks == 1 && m.time_to_peak_ratio >= 0.3 && m.time_to_peak_ratio <= 0.7 &&
                      m.accel_zero_crossings == 1;
    ok = ok && good;
    detail += (detail.empty() ? "" : ", ") + r.name + " ratio " + fmt(m.time_to_peak_ratio);
  }
  return {ok && checked > 0, std::to_string(checked) + " reaches: " + detail};
}

Outcome mpc_robustness() {
  const json j = {{"experiment", "mpc-perturb"}, {"seed", 7}, {"n_trials", 10}, {"save_trajectories", 0}};
  const fs::path dir = fs::temp_directory_path() / "hcisim_acceptance_perturb";
  fs::remove_all(dir);
  const RunSummary s = run_experiment(parse_config(j), dir);
  const int reached = s.report.at("reached").get<int>();
  return {reached == 10, std::to_string(reached) + "/10 reached after a 5 cm end-effector push at step 30"};
}

Outcome circle_oracle() {
  TrapParams p;
  p.gravity = 0.0;
  p.damping = 0.0;
  const double radius = 0.01;
  PathSpec circle;
  circle.kind = ShapeKind::Circle;
  circle.radius = radius;
  const double period = topp_solve(circle, p).law.period;
  const double analytic = 2.0 * std::numbers::pi * std::sqrt(p.mass * radius / (p.k_r * p.capture_radius));
  const double err = (period - analytic) / analytic;
  return {std::abs(err) <= 0.01, "T " + fmt(period) + " s vs " + fmt(analytic) + " s, error " + fmt(err)};
}

Outcome rendering_regime() {
  const TrapParams p;
  RenderOptions r;
  r.cycles = 10;
  bool ok = true;
  std::string detail;
  for (ShapeKind k : {ShapeKind::Cardioid, ShapeKind::RoundedSquare}) {
    PathSpec spec;
    spec.kind = k;
    const ToppResult res = topp_solve(spec, p);
    const TrackingReport rep = simulate_render(res.law, res.trap, p, r);
    ok = ok && res.law.period <= 0.1 && res.max_violation <= 0.0 && res.trap.feasible && !rep.escaped;
    detail += (detail.empty() ? "" : ", ") + shape_name(k) + " T " + fmt(res.law.period) + " s peak ratio " +
              fmt(rep.peak_capture_ratio) + (rep.escaped ? " ESCAPED" : "");
  }
  return {ok, detail};
}

Outcome analysis_exactness() {
  std::vector<TrialRecord> trials;
  for (int id = 1; id <= 5; ++id) {
    TrialRecord t;
    t.width = 0.01;
    t.distance = t.width * (std::exp2(id) - 1.0);
    t.movement_time = 0.1 + 0.15 * id;
    trials.push_back(t);
  }
  const FitResult fit = fitts_fit(trials);
  const double fit_err = std::max({std::abs(fit.slope - 0.15), std::abs(fit.intercept - 0.1),
                                   std::abs(fit.r_squared - 1.0)});

  // Harmonic ellipse motion satisfies v = (a b w^3)^(1/3) kappa^(-1/3); pick w
  // for a gain of 0.1.
  const double a = 0.1, b = 0.04, w = std::cbrt(0.001 / (a * b));
  const int n = 500;
  const double dt = 2.0 * std::numbers::pi / w / n;
  MotionSamples m;
  m.dt = dt;
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(w * i * dt), s = std::sin(w * i * dt);
    Vector pos(2), vel(2), acc(2);
    pos << a * c, b * s;
    vel << -a * w * s, b * w * c;
    acc << -a * w * w * c, -b * w * w * s;
    m.position.push_back(pos);
    m.velocity.push_back(vel);
    m.acceleration.push_back(acc);
  }
  const PowerLawFit pl = power_law_fit(m);
  const double pl_err = std::max(std::abs(pl.exponent + 1.0 / 3.0), std::abs(pl.log_gain - std::log(0.1)));
  return {fit_err <= 1e-9 && pl_err <= 1e-6, "fitts error " + fmt(fit_err) + ", power-law error " + fmt(pl_err)};
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  const std::vector<json> configs = {
      {{"experiment", "lqg-reach"}, {"seed", 5}, {"n_trials", 200}, {"save_trajectories", 2}},
      {{"experiment", "mpc-perturb"}, {"seed", 5}, {"n_trials", 2}, {"save_trajectories", 2}},
      {{"experiment", "fitts-sweep"}, {"seed", 5}, {"n_trials", 2},
       {"conditions", {{"distances", {0.05, 0.2}}, {"widths", {0.01}}}}},
      {{"experiment", "levitate"}, {"levitation", {{"cycles", 1}, {"warmup_cycles", 0}}}, {"shapes", {"circle"}}},
  };
  int files = 0;
  for (const auto& j : configs) {
    const ExperimentConfig c = parse_config(j);
    const fs::path root = fs::temp_directory_path() / ("hcisim_acceptance_repro_" + c.experiment);
    fs::remove_all(root);
    const RunSummary a = run_experiment(c, root / "a");
    const RunSummary b = run_experiment(c, root / "b");
    if (a.files != b.files) return {false, c.experiment + ": file lists differ"};
    for (const auto& f : a.files) {
      std::string x = read_all(root / "a" / f);
      std::string y = read_all(root / "b" / f);
      if (f == "manifest.json") {
        // Only the creation timestamp may differ.
        json mx = json::parse(x), my = json::parse(y);
        mx.erase("created_utc");
        my.erase("created_utc");
        x = mx.dump();
        y = my.dump();
      }
      if (x != y) return {false, c.experiment + ": " + f + " differs"};
      ++files;
    }
  }
  return {true, std::to_string(files) + " files identical across reruns of 4 experiments"};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0: no runtime limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace hcisim

int main() {
  using namespace hcisim;
  const std::vector<Criterion> criteria = {
      {1, "riccati-oracle", 1.0, riccati_oracle},
      {2, "brute-force-optimality", 5.0, brute_force},
      {3, "gradient-suite", 10.0, gradient_suite},
      {4, "speed-accuracy", 30.0, speed_accuracy},
      {5, "fitts-law", 300.0, fitts_emergence},
      {6, "profile-shape", 0.0, profile_shape},
      {7, "mpc-robustness", 120.0, mpc_robustness},
      {8, "circle-period", 1.0, circle_oracle},
      {9, "rendering-regime", 30.0, rendering_regime},
      {10, "analysis-exactness", 0.0, analysis_exactness},
      {11, "reproducibility", 0.0, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string detail = o.detail;
    if (c.limit_seconds > 0.0 && seconds > c.limit_seconds) {
      o.pass = false;
      detail += "; over the " + fmt(c.limit_seconds) + " s limit";
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %-24s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
