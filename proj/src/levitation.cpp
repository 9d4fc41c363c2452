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

#include "hcisim/levitation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "hcisim/trajectory_io.hpp"

namespace hcisim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpeedCap = 1e3;  // m/s, caps beta on straight pieces

using Vec2 = Eigen::Vector2d;

struct Planar {
  Vec2 q, dq, ddq;  // derivatives with respect to s
};

Vec3 embed(const Vec2& v, Plane plane) {
  switch (plane) {
    case Plane::XY: return {v.x(), v.y(), 0.0};
    case Plane::XZ: return {v.x(), 0.0, v.y()};
    case Plane::YZ: return {0.0, v.x(), v.y()};
  }
  return Vec3::Zero();
}

double wrap_unit(double s) {
  double w = s - std::floor(s);
  return w >= 1.0 ? 0.0 : w;
}

Vec2 rotate_quarter(const Vec2& v, int k) {
  Vec2 out = v;
  for (int i = 0; i < k; ++i) out = Vec2(-out.y(), out.x());
  return out;
}

// Corner of the rounded square: heading turns by pi/2 over length L = pi rc
// with curvature (1 / rc) sin^2(pi tau / L), so curvature is continuous and
// its smallest radius is rc.
struct Corner {
  double rc;
  double length;

  double heading(double tau) const {
    return (tau / 2.0 - length / (4.0 * std::numbers::pi) *
                            std::sin(2.0 * std::numbers::pi * tau / length)) / rc;
  }
  double curvature(double tau) const {
    const double sn = std::sin(std::numbers::pi * tau / length);
    return sn * sn / rc;
  }
  // Displacement after arc length tau, composite 8-point Gauss-Legendre.
  Vec2 displacement(double tau) const {
    static constexpr double kNodes[4] = {0.1834346424956498, 0.5255324099163290,
                                         0.7966664774136267, 0.9602898564975363};
    static constexpr double kWeights[4] = {0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
    constexpr int kPanels = 8;
    const double h = tau / kPanels;
    Vec2 sum = Vec2::Zero();
    for (int p = 0; p < kPanels; ++p) {
      const double mid = (p + 0.5) * h;
      for (int j = 0; j < 4; ++j) {
        for (double sign : {-1.0, 1.0}) {
          const double phi = heading(mid + sign * 0.5 * h * kNodes[j]);
          sum += 0.5 * h * kWeights[j] * Vec2(std::cos(phi), std::sin(phi));
        }
      }
    }
    return sum;
  }
};

Corner make_corner(double rc) { return Corner{rc, std::numbers::pi * rc}; }

// Straight length of each side; negative when the corners do not fit.
double rounded_square_straight(double side, double rc) {
  return side - 2.0 * make_corner(rc).displacement(std::numbers::pi * rc).x();
}

Planar rounded_square(double side, double rc, double s) {
  const Corner corner = make_corner(rc);
  const double straight = rounded_square_straight(side, rc);
  const double perimeter = 4.0 * (straight + corner.length);
  double sigma = wrap_unit(s) * perimeter;
  Planar out;
  for (int k = 0; k < 4; ++k) {
    const Vec2 dir = rotate_quarter(Vec2(1.0, 0.0), k);
    if (sigma < straight) {
      out.q = rotate_quarter(Vec2(-0.5 * straight, -0.5 * side), k) + sigma * dir;
      out.dq = perimeter * dir;
      out.ddq = Vec2::Zero();
      return out;
    }
    sigma -= straight;
    if (sigma < corner.length || k == 3) {
      const double tau = std::min(sigma, corner.length);
      const double phi = corner.heading(tau);
      const Vec2 tangent = rotate_quarter(Vec2(std::cos(phi), std::sin(phi)), k);
      out.q = rotate_quarter(Vec2(0.5 * straight, -0.5 * side) + corner.displacement(tau), k);
      out.dq = perimeter * tangent;
      out.ddq = perimeter * perimeter * corner.curvature(tau) * Vec2(-tangent.y(), tangent.x());
      return out;
    }
    sigma -= corner.length;
  }
  return out;
}

// Periodic cubic spline through closed-curve samples, chord-length knots.
struct Spline {
  std::vector<double> knots;  // cumulative chord length, size n + 1
  std::vector<Vec2> y;        // size n + 1, y[n] = y[0]
  std::vector<Vec2> m;        // second derivatives, size n + 1
  double length = 0.0;
};

Spline build_spline(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  Spline sp;
  sp.y = pts;
  sp.y.push_back(pts.front());
  sp.knots.assign(n + 1, 0.0);
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) {
    h[i] = (sp.y[i + 1] - sp.y[i]).norm();
    sp.knots[i + 1] = sp.knots[i] + h[i];
  }
  sp.length = sp.knots[n];

  Matrix A = Matrix::Zero(n, n);
  Matrix rhs(n, 2);
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n;
    const int next = (i + 1) % n;
    A(i, prev) += h[prev];
    A(i, i) += 2.0 * (h[prev] + h[i]);
    A(i, next) += h[i];
    const Vec2 slope = (sp.y[i + 1] - sp.y[i]) / h[i] - (sp.y[i] - sp.y[prev]) / h[prev];
    rhs.row(i) = 6.0 * slope.transpose();
  }
  const Matrix sol = A.partialPivLu().solve(rhs);
  sp.m.resize(n + 1);
  for (int i = 0; i < n; ++i) sp.m[i] = sol.row(i).transpose();
  sp.m[n] = sp.m[0];
  return sp;
}

Planar eval_spline(const Spline& sp, double s) {
  const double sigma = wrap_unit(s) * sp.length;
  const auto it = std::upper_bound(sp.knots.begin(), sp.knots.end(), sigma);
  const int n = static_cast<int>(sp.knots.size()) - 1;
  const int i = std::clamp(static_cast<int>(it - sp.knots.begin()) - 1, 0, n - 1);
  const double h = sp.knots[i + 1] - sp.knots[i];
  const double t = sigma - sp.knots[i];
  const double r = h - t;
  const Vec2& mi = sp.m[i];
  const Vec2& mj = sp.m[i + 1];
  const Vec2 ci = sp.y[i] / h - mi * h / 6.0;
  const Vec2 cj = sp.y[i + 1] / h - mj * h / 6.0;
  Planar out;
  out.q = mi * r * r * r / (6.0 * h) + mj * t * t * t / (6.0 * h) + ci * r + cj * t;
  out.dq = sp.length * (-mi * r * r / (2.0 * h) + mj * t * t / (2.0 * h) - ci + cj);
  out.ddq = sp.length * sp.length * (mi * r / h + mj * t / h);
  return out;
}

Planar planar_point(const PathSpec& path, const Spline* spline, double s) {
  Planar out;
  switch (path.kind) {
    case ShapeKind::Circle:
    case ShapeKind::Ellipse: {
      const double a = path.kind == ShapeKind::Circle ? path.radius : path.semi_a;
      const double b = path.kind == ShapeKind::Circle ? path.radius : path.semi_b;
      const double th = kTwoPi * s;
      out.q = Vec2(a * std::cos(th), b * std::sin(th));
      out.dq = kTwoPi * Vec2(-a * std::sin(th), b * std::cos(th));
      out.ddq = -kTwoPi * kTwoPi * Vec2(a * std::cos(th), b * std::sin(th));
      return out;
    }
    case ShapeKind::Cardioid: {
      const double a = path.scale;
      const double c = path.sharpness;
      const double th = kTwoPi * s;
      out.q = a * Vec2(2.0 * std::cos(th) - c * std::cos(2.0 * th),
                       2.0 * std::sin(th) - c * std::sin(2.0 * th));
      out.dq = kTwoPi * a * Vec2(-2.0 * std::sin(th) + 2.0 * c * std::sin(2.0 * th),
                                 2.0 * std::cos(th) - 2.0 * c * std::cos(2.0 * th));
      out.ddq = kTwoPi * kTwoPi * a *
                Vec2(-2.0 * std::cos(th) + 4.0 * c * std::cos(2.0 * th),
                     -2.0 * std::sin(th) + 4.0 * c * std::sin(2.0 * th));
      return out;
    }
    case ShapeKind::RoundedSquare:
      return rounded_square(path.side, path.corner_radius, s);
    case ShapeKind::Sampled:
      return eval_spline(*spline, s);
  }
  return out;
}

// Per-node data for the timing problem.
struct Node {
  Vec3 dq;
  Vec3 ddq;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool ok = false;
};

class Constraint {
 public:
  Constraint(const TrapParams& params, double budget)
      : m_(params.mass), b_(params.damping), g_(params.gravity), r_(budget),
        k_(params.k_r, params.k_r, params.k_z) {}

  Vec3 offset(const Node& n, double beta, double dbeta) const {
    Vec3 f = m_ * (n.ddq * beta + 0.5 * n.dq * dbeta) + b_ * n.dq * std::sqrt(beta);
    f.z() += m_ * g_;
    return f.cwiseQuotient(k_);
  }

  // Admissible d beta / ds at (node, beta).
  Interval slope_interval(const Node& n, double beta) const {
    Vec3 c = (m_ * n.ddq * beta + b_ * n.dq * std::sqrt(beta));
    c.z() += m_ * g_;
    c = c.cwiseQuotient(k_);
    const Vec3 d = (0.5 * m_ * n.dq).cwiseQuotient(k_);
    Interval out;
    out.lo = -std::numeric_limits<double>::infinity();
    out.hi = std::numeric_limits<double>::infinity();

    const double A = d.x() * d.x() + d.y() * d.y();
    const double B = 2.0 * (c.x() * d.x() + c.y() * d.y());
    const double C = c.x() * c.x() + c.y() * c.y() - r_ * r_;
    if (A == 0.0) {
      if (C > 0.0) return out;
    } else {
      const double disc = B * B - 4.0 * A * C;
      if (disc < 0.0) return out;
      const double root = std::sqrt(disc);
      const double q = -0.5 * (B + std::copysign(root, B));
      double r1 = q / A;
      double r2 = q != 0.0 ? C / q : -r1;
      if (r1 > r2) std::swap(r1, r2);
      out.lo = r1;
      out.hi = r2;
    }
    if (d.z() == 0.0) {
      if (std::abs(c.z()) > r_) return out;
    } else {
      double z1 = (-r_ - c.z()) / d.z();
      double z2 = (r_ - c.z()) / d.z();
      if (z1 > z2) std::swap(z1, z2);
      out.lo = std::max(out.lo, z1);
      out.hi = std::min(out.hi, z2);
    }
    out.ok = out.lo <= out.hi;
    return out;
  }

  double budget() const { return r_; }

 private:
  double m_, b_, g_, r_;
  Vec3 k_;
};

std::vector<Node> make_nodes(const Path& path, int n) {
  std::vector<Node> nodes(n);
  for (int i = 0; i < n; ++i) {
    const auto p = path.at(static_cast<double>(i) / n);
    nodes[i] = {p.dq, p.ddq};
  }
  return nodes;
}

// Largest beta in [0, hi] with pred(beta) true, assuming pred(0) holds and the
// true set is an interval starting at 0.
template <class Pred>
double bisect_max(double hi, Pred pred) {
  if (pred(hi)) return hi;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) lo = mid; else hi = mid;
  }
  return lo;
}

double period_of(const std::vector<double>& beta, std::vector<double>* times) {
  const int n = static_cast<int>(beta.size());
  const double ds = 1.0 / n;
  double t = 0.0;
  if (times) times->assign(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double denom = std::sqrt(beta[i]) + std::sqrt(beta[(i + 1) % n]);
    if (!(denom > 0.0)) {
      throw InfeasiblePathError("topp: timing law stalls between s = " + format_real(i * ds) +
                                    " and s = " + format_real((i + 1) * ds),
                                i * ds);
    }
    t += 2.0 * ds / denom;
    if (times) (*times)[i + 1] = t;
  }
  return t;
}

}  // namespace

void validate_trap_params(const TrapParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("levitation.") + name + " must be a finite value > 0");
    }
  };
  positive(p.mass, "mass");
  positive(p.k_r, "k_r");
  positive(p.k_z, "k_z");
  positive(p.capture_radius, "capture_radius");
  if (!(p.damping >= 0.0) || !std::isfinite(p.damping)) {
    throw ConfigError("levitation.damping must be a finite value >= 0");
  }
  if (!std::isfinite(p.gravity)) throw ConfigError("levitation.gravity must be finite");
}

Vec3 required_trap(const Vec3& p, const Vec3& v, const Vec3& a, const TrapParams& params) {
  Vec3 force = params.mass * a + params.damping * v;
  force.z() += params.mass * params.gravity;
  return p + force.cwiseQuotient(Vec3(params.k_r, params.k_r, params.k_z));
}

double capture_ratio(const Vec3& offset, const TrapParams& params) {
  return std::max(offset.head<2>().norm(), std::abs(offset.z())) / params.capture_radius;
}

std::string shape_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Cardioid: return "cardioid";
    case ShapeKind::RoundedSquare: return "rounded-square";
    case ShapeKind::Sampled: return "sampled";
  }
  return "unknown";
}

std::vector<std::string> shape_names() {
  std::vector<std::string> names;
  for (auto k : {ShapeKind::Circle, ShapeKind::Ellipse, ShapeKind::Cardioid,
                 ShapeKind::RoundedSquare, ShapeKind::Sampled}) {
    names.push_back(shape_name(k));
  }
  std::sort(names.begin(), names.end());
  return names;
}

ShapeKind shape_kind_from_name(const std::string& name) {
  for (auto k : {ShapeKind::Circle, ShapeKind::Ellipse, ShapeKind::Cardioid,
                 ShapeKind::RoundedSquare, ShapeKind::Sampled}) {
    if (shape_name(k) == name) return k;
  }
  throw ConfigError("unknown shape '" + name + "'");
}

std::string plane_name(Plane plane) {
  switch (plane) {
    case Plane::XY: return "xy";
    case Plane::XZ: return "xz";
    case Plane::YZ: return "yz";
  }
  return "unknown";
}

Plane plane_from_name(const std::string& name) {
  for (auto p : {Plane::XY, Plane::XZ, Plane::YZ}) {
    if (plane_name(p) == name) return p;
  }
  throw ConfigError("unknown plane '" + name + "' (expected xy, xz or yz)");
}

void PathSpec::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("path.") + name + " must be a finite value > 0");
    }
  };
  if (!center.allFinite()) throw ConfigError("path.center must be finite");
  if (samples < 3) throw ConfigError("path.samples must be >= 3");
  switch (kind) {
    case ShapeKind::Circle: positive(radius, "radius"); break;
    case ShapeKind::Ellipse: positive(semi_a, "semi_a"); positive(semi_b, "semi_b"); break;
    case ShapeKind::Cardioid:
      positive(scale, "scale");
      if (!(sharpness >= 0.0) || !(sharpness < 1.0)) {
        throw ConfigError("path.sharpness must lie in [0, 1); 1 is the cusped cardioid");
      }
      break;
    case ShapeKind::RoundedSquare:
      positive(side, "side");
      positive(corner_radius, "corner_radius");
      if (rounded_square_straight(side, corner_radius) < 0.0) {
        throw ConfigError("path.corner_radius is too large for path.side");
      }
      break;
    case ShapeKind::Sampled: {
      if (points.size() < 4) throw ConfigError("path.points needs at least 4 points");
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].allFinite()) throw ConfigError("path.points must be finite");
        if ((points[(i + 1) % points.size()] - points[i]).norm() == 0.0) {
          throw ConfigError("path.points must not repeat consecutive points");
        }
      }
      break;
    }
  }
}

Path::Path(PathSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.kind == ShapeKind::Sampled) {
    auto sp = std::make_shared<Spline>(build_spline(spec_.points));
    spline_ = sp;
  }
}

PathPoint Path::at(double s) const {
  const auto* sp = static_cast<const Spline*>(spline_.get());
  const Planar p = planar_point(spec_, sp, s);
  PathPoint out;
  out.s = s;
  out.q = spec_.center + embed(p.q, spec_.plane);
  out.dq = embed(p.dq, spec_.plane);
  out.ddq = embed(p.ddq, spec_.plane);
  return out;
}

PathPoint path_point(const PathSpec& path, double s) { return Path(path).at(s); }

std::vector<PathPoint> sample_path(const PathSpec& spec, int n) {
  if (n < 3) throw ConfigError("sample_path: need at least 3 samples");
  const Path path(spec);
  std::vector<PathPoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(path.at(static_cast<double>(i) / n));
  return out;
}

void ToppOptions::validate() const {
  if (grid < 100) throw ConfigError("levitation.grid must be >= 100");
  if (!(margin >= 0.0) || !(margin < 1.0)) throw ConfigError("levitation.margin must lie in [0, 1)");
  if (!(output_rate > 0.0) || !std::isfinite(output_rate)) {
    throw ConfigError("levitation.output_rate must be > 0");
  }
  if (max_sweeps < 1) throw ConfigError("levitation.max_sweeps must be >= 1");
}

double timing_violation(const PathSpec& spec, const TrapParams& params,
                        const std::vector<double>& beta, double budget) {
  const int n = static_cast<int>(beta.size());
  const auto nodes = make_nodes(Path(spec), n);
  const Constraint con(params, budget);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double dbeta = (beta[(i + 1) % n] - beta[(i + n - 1) % n]) * n / 2.0;
    const Vec3 o = con.offset(nodes[i], beta[i], dbeta);
    const double size = std::max(o.head<2>().norm(), std::abs(o.z()));
    worst = std::max(worst, (size - budget) / params.capture_radius);
  }
  return worst;
}

double circle_period(double radius, const TrapParams& params, double budget_fraction) {
  return kTwoPi * std::sqrt(params.mass * radius /
                            (params.k_r * params.capture_radius * budget_fraction));
}

ScheduleState evaluate_schedule(const TimingLaw& law, double t) {
  ScheduleState out;
  if (!law.path) {
    if (law.particle_position.empty()) throw DimensionError("evaluate_schedule: empty law");
    out.position = law.particle_position.front();
    out.velocity = Vec3::Zero();
    out.acceleration = Vec3::Zero();
    return out;
  }
  const int n = static_cast<int>(law.beta.size());
  const double ds = 1.0 / n;
  const double T = law.period;
  const double tau = t - T * std::floor(t / T);
  const auto it = std::upper_bound(law.t.begin(), law.t.end(), tau);
  const int seg = std::clamp(static_cast<int>(it - law.t.begin()) - 1, 0, n - 1);
  const double u = tau - law.t[seg];
  const double rate0 = std::sqrt(law.beta[seg]);
  const double accel = (law.beta[(seg + 1) % n] - law.beta[seg]) / (2.0 * ds);
  out.s = law.s[seg] + rate0 * u + 0.5 * accel * u * u;
  const double sdot = rate0 + accel * u;
  const auto pt = law.path->at(out.s);
  out.position = pt.q;
  out.velocity = pt.dq * sdot;
  out.acceleration = pt.ddq * sdot * sdot + pt.dq * accel;
  return out;
}

ToppResult make_schedule(const PathSpec& spec, const TrapParams& params,
                         const std::vector<double>& beta, const ToppOptions& options) {
  const Path path(spec);
  const int n = static_cast<int>(beta.size());
  const double ds = 1.0 / n;

  ToppResult res;
  auto& law = res.law;
  law.beta = beta;
  law.s.resize(n);
  for (int i = 0; i < n; ++i) law.s[i] = i * ds;
  law.period = period_of(beta, &law.t);

  law.path = path;
  const int samples = static_cast<int>(std::ceil(law.period * options.output_rate - 1e-9));
  for (int j = 0; j < samples; ++j) {
    const double tj = j / options.output_rate;
    const ScheduleState st = evaluate_schedule(law, tj);
    law.sample_times.push_back(tj);
    law.particle_position.push_back(st.position);
    law.particle_velocity.push_back(st.velocity);
    law.particle_acceleration.push_back(st.acceleration);

    const Vec3 trap = required_trap(st.position, st.velocity, st.acceleration, params);
    const Vec3 offset = trap - st.position;
    res.trap.times.push_back(tj);
    res.trap.positions.push_back(trap);
    res.trap.peak_offset_ratio = std::max(res.trap.peak_offset_ratio, capture_ratio(offset, params));
    res.trap.peak_offset = std::max(res.trap.peak_offset, offset.norm());
  }
  res.trap.feasible = res.trap.peak_offset_ratio <= 1.0 + 1e-9;
  res.max_violation = timing_violation(spec, params, beta, (1.0 - options.margin) * params.capture_radius);
  return res;
}

ToppResult topp_solve(const PathSpec& spec, const TrapParams& params, const ToppOptions& options) {
  validate_trap_params(params);
  options.validate();
  const Path path(spec);
  const int n = options.grid;
  const double ds = 1.0 / n;
  const auto nodes = make_nodes(path, n);
  const Constraint con(params, (1.0 - options.margin) * params.capture_radius);

  auto feasible = [&](int i, double beta) { return con.slope_interval(nodes[i], beta).ok; };

  // Maximum-velocity curve.
  std::vector<double> beta(n);
  for (int i = 0; i < n; ++i) {
    if (!feasible(i, 0.0)) {
      throw InfeasiblePathError("topp: path infeasible at s = " + format_real(i * ds) +
                                    " even at rest (gravity offset or curvature exceeds the "
                                    "capture budget)",
                                i * ds);
    }
    const double cap = std::pow(kSpeedCap / nodes[i].dq.norm(), 2);
    beta[i] = bisect_max(cap, [&](double b) { return feasible(i, b); });
  }

  int sweeps = 0;
  for (; sweeps < options.max_sweeps; ++sweeps) {
    double change = 0.0;
    auto lower = [&](int i, double value) {
      if (value < beta[i]) {
        change = std::max(change, (beta[i] - value) / std::max(beta[i], 1e-300));
        beta[i] = std::max(value, 0.0);
      }
    };
    // Forward: acceleration limits on segment (i, j) seen from both ends.
    for (int k = 0; k < n; ++k) {
      const int i = k;
      const int j = (k + 1) % n;
      const Interval at_i = con.slope_interval(nodes[i], beta[i]);
      lower(j, beta[i] + ds * at_i.hi);
      const double bi = beta[i];
      auto ok_j = [&](double b) {
        const Interval at_j = con.slope_interval(nodes[j], b);
        return at_j.ok && (b - bi) / ds <= at_j.hi;
      };
      if (!ok_j(beta[j])) lower(j, bisect_max(beta[j], ok_j));
    }
    // Backward: deceleration limits.
    for (int k = n - 1; k >= 0; --k) {
      const int i = k;
      const int j = (k + 1) % n;
      const Interval at_j = con.slope_interval(nodes[j], beta[j]);
      lower(i, beta[j] - ds * at_j.lo);
      const double bj = beta[j];
      auto ok_i = [&](double b) {
        const Interval at_i = con.slope_interval(nodes[i], b);
        return at_i.ok && (bj - b) / ds >= at_i.lo;
      };
      if (!ok_i(beta[i])) lower(i, bisect_max(beta[i], ok_i));
    }
    if (change <= 1e-14) {
      ++sweeps;
      break;
    }
  }

  ToppResult res = make_schedule(spec, params, beta, options);
  res.law.sweeps = sweeps;
  return res;
}

double constant_speed_period(const PathSpec& spec, const TrapParams& params,
                             const ToppOptions& options) {
  validate_trap_params(params);
  options.validate();
  const int n = options.grid;
  const Path path(spec);
  std::vector<double> speed_scale(n);
  for (int i = 0; i < n; ++i) speed_scale[i] = 1.0 / path.at(static_cast<double>(i) / n).dq.squaredNorm();
  const double budget = (1.0 - options.margin) * params.capture_radius;
  auto law = [&](double v) {
    std::vector<double> beta(n);
    for (int i = 0; i < n; ++i) beta[i] = v * v * speed_scale[i];
    return beta;
  };
  const double v = bisect_max(kSpeedCap, [&](double v) {
    return v == 0.0 || timing_violation(spec, params, law(v), budget) <= 0.0;
  });
  if (!(v > 0.0)) throw InfeasiblePathError("constant-speed law infeasible at every speed", 0.0);
  return period_of(law(v), nullptr);
}

ToppResult hover_schedule(const Vec3& point, const TrapParams& params, double duration,
                          double output_rate) {
  validate_trap_params(params);
  if (!(duration > 0.0) || !(output_rate > 0.0)) {
    throw ConfigError("hover_schedule: duration and output_rate must be > 0");
  }
  ToppResult res;
  res.law.period = duration;
  const int samples = static_cast<int>(std::ceil(duration * output_rate - 1e-9));
  const Vec3 trap = required_trap(point, Vec3::Zero(), Vec3::Zero(), params);
  for (int j = 0; j < samples; ++j) {
    const double tj = j / output_rate;
    res.law.sample_times.push_back(tj);
    res.law.particle_position.push_back(point);
    res.law.particle_velocity.push_back(Vec3::Zero());
    res.law.particle_acceleration.push_back(Vec3::Zero());
    res.trap.times.push_back(tj);
    res.trap.positions.push_back(trap);
  }
  res.trap.peak_offset_ratio = capture_ratio(trap - point, params);
  res.trap.peak_offset = (trap - point).norm();
  res.trap.feasible = res.trap.peak_offset_ratio <= 1.0;
  return res;
}

TrackingReport simulate_render(const TimingLaw& law, const TrapTrajectory& trap,
                               const TrapParams& params, const RenderOptions& options) {
  validate_trap_params(params);
  if (options.cycles < 1) throw ConfigError("render.cycles must be >= 1");
  if (options.warmup_cycles < 0) throw ConfigError("render.warmup_cycles must be >= 0");
  if (!(options.dt > 0.0) || !(options.dt <= 0.1)) throw ConfigError("render.dt must lie in (0, 0.1]");
  const std::size_t ns = trap.times.size();
  if (ns < 1 || law.sample_times.size() != ns || law.particle_position.size() != ns ||
      law.particle_velocity.size() != ns || !(law.period > 0.0)) {
    throw DimensionError("simulate_render: schedule and trap samples do not match");
  }
  const double T = law.period;

  // Periodic linear interpolation of the exported trap samples.
  auto sampled_trap = [&](double t) {
    const double tau = t - T * std::floor(t / T);
    const auto it = std::upper_bound(trap.times.begin(), trap.times.end(), tau);
    const std::size_t j =
        static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - trap.times.begin() - 1, 0));
    const std::size_t next = j + 1 < ns ? j + 1 : 0;
    const double t0 = trap.times[j];
    const double t1 = j + 1 < ns ? trap.times[j + 1] : T;
    const double w = t1 > t0 ? std::clamp((tau - t0) / (t1 - t0), 0.0, 1.0) : 0.0;
    return Vec3((1.0 - w) * trap.positions[j] + w * trap.positions[next]);
  };

  const PlantSpec plant = make_levitated_particle(params, options.dt);
  StateVector x(6);
  x << law.particle_position[0], law.particle_velocity[0];

  const long steps = static_cast<long>(std::ceil(options.cycles * T / plant.dt));
  TrackingReport rep;
  double sum_sq = 0.0;
  long count = 0;
  std::vector<std::vector<Vec3>> phase(options.cycles, std::vector<Vec3>(ns));
  std::size_t next_sample = 0;  // index over cycles * ns
  const std::size_t total_samples = static_cast<std::size_t>(options.cycles) * ns;

  auto record_samples = [&](double t_prev, const Vec3& p_prev, double t_now, const Vec3& p_now) {
    while (next_sample < total_samples) {
      const std::size_t c = next_sample / ns;
      const std::size_t j = next_sample % ns;
      const double ts = c * T + trap.times[j];
      if (ts > t_now) break;
      const double w = t_now > t_prev ? (ts - t_prev) / (t_now - t_prev) : 1.0;
      phase[c][j] = (1.0 - w) * p_prev + w * p_now;
      ++next_sample;
    }
  };

  record_samples(0.0, x.head<3>(), 0.0, x.head<3>());
  for (long k = 0; k < steps; ++k) {
    const double t = k * plant.dt;
    const Vec3 p = x.head<3>();
    const ScheduleState want = evaluate_schedule(law, t);
    const Vec3 trap_now = options.playback == Playback::Continuous
                              ? required_trap(want.position, want.velocity, want.acceleration, params)
                              : sampled_trap(t);
    const double ratio = capture_ratio(trap_now - p, params);
    rep.peak_capture_ratio = std::max(rep.peak_capture_ratio, ratio);
    if (ratio > 1.0) {
      rep.escaped = true;
      rep.escape_time = t;
      break;
    }
    const double dev = (p - want.position).norm();
    rep.max_deviation = std::max(rep.max_deviation, dev);
    sum_sq += dev * dev;
    ++count;

    x = step(plant, x, ControlVector(trap_now - p));
    if (!x.allFinite()) throw NonFiniteError("simulate_render: non-finite particle state");
    record_samples(t, p, t + plant.dt, x.head<3>());
  }
  rep.rms_deviation = count > 0 ? std::sqrt(sum_sq / count) : 0.0;

  const std::size_t complete_cycles = next_sample / ns;
  for (std::size_t c = 1; c < complete_cycles; ++c) {
    double drift = 0.0;
    for (std::size_t j = 0; j < ns; ++j) drift = std::max(drift, (phase[c][j] - phase[c - 1][j]).norm());
    rep.cycle_drift.push_back(drift);
    if (static_cast<int>(c) >= options.warmup_cycles) {
      rep.max_drift_after_warmup = std::max(rep.max_drift_after_warmup, drift);
    }
  }
  return rep;
}

void write_trap_csv(const std::string& path, const TrapTrajectory& trap) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "t,trap_x,trap_y,trap_z\n";
  for (std::size_t i = 0; i < trap.times.size(); ++i) {
    const auto& p = trap.positions[i];
    out << format_real(trap.times[i]) << ',' << format_real(p.x()) << ',' << format_real(p.y())
        << ',' << format_real(p.z()) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace hcisim
