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

#include "hcisim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hcisim/trajectory_io.hpp"

namespace hcisim {

namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------- parsing

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

const json& object_at(const json& parent, const char* key, const std::string& where) {
  static const json kEmpty = json::object();
  if (!parent.contains(key)) return kEmpty;
  const json& j = parent.at(key);
  if (!j.is_object()) throw ConfigError(join(where, key) + " must be an object");
  return j;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return it.key() == a; });
    if (!known) throw ConfigError("unknown key '" + join(where, it.key()) + "'");
  }
}

double number(const json& j, const std::string& where, const char* key, double def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(where, key) + " must be a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& where, const char* key, int def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(where, key) + " must be an integer");
  const auto value = v.get<long long>();
  if (value < -1000000000LL || value > 1000000000LL) {
    throw ConfigError(join(where, key) + " is out of range");
  }
  return static_cast<int>(value);
}

bool boolean(const json& j, const std::string& where, const char* key, bool def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(join(where, key) + " must be true or false");
  return v.get<bool>();
}

std::string string(const json& j, const std::string& where, const char* key, const std::string& def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(join(where, key) + " must be a string");
  return v.get<std::string>();
}

Vector numbers(const json& v, const std::string& name) {
  if (v.is_number()) return Vector::Constant(1, v.get<double>());
  if (!v.is_array()) throw ConfigError(name + " must be an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(name + " must be an array of numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

Vector vector_field(const json& j, const std::string& where, const char* key, const Vector& def) {
  if (!j.contains(key)) return def;
  return numbers(j.at(key), join(where, key));
}

Matrix matrix_field(const json& j, const std::string& where, const char* key) {
  const std::string name = join(where, key);
  if (!j.contains(key)) throw ConfigError(name + " is required");
  const json& v = j.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(name + " must be a non-empty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols || cols == 0) {
      throw ConfigError(name + " rows must be equally long arrays of numbers");
    }
    const Vector row = numbers(v[r], name);
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

std::vector<double> positive_list(const json& j, const std::string& where, const char* key,
                                  const std::vector<double>& def) {
  if (!j.contains(key)) return def;
  const Vector v = numbers(j.at(key), join(where, key));
  if (v.size() == 0) throw ConfigError(join(where, key) + " must be non-empty");
  std::vector<double> out(v.data(), v.data() + v.size());
  for (double x : out) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(join(where, key) + " entries must be > 0");
  }
  return out;
}

PlantSpec parse_plant(const json& root, PlantKind default_kind) {
  const std::string w = "plant";
  const json& j = object_at(root, "plant", "");
  const PlantKind kind = [&] {
    try {
      return plant_kind_from_name(string(j, w, "kind", plant_name(default_kind)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("plant.kind: ") + e.what());
    }
  }();

  PlantSpec plant;
  switch (kind) {
    case PlantKind::PointMass1D:
    case PlantKind::PointMass2D: {
      check_keys(j, w, {"kind", "dt", "mass", "damping", "control_bounds"});
      PointMassParams p;
      p.mass = number(j, w, "mass", p.mass);
      p.damping = number(j, w, "damping", p.damping);
      const double dt = number(j, w, "dt", 0.01);
      plant = kind == PlantKind::PointMass1D ? make_point_mass_1d(p, dt) : make_point_mass_2d(p, dt);
      break;
    }
    case PlantKind::TwoLinkArm: {
      check_keys(j, w, {"kind", "dt", "l1", "l2", "m1", "m2", "joint_damping", "muscle_tau",
                        "muscle_gain", "gravity", "control_bounds"});
      TwoLinkArmParams p;
      p.l1 = number(j, w, "l1", p.l1);
      p.l2 = number(j, w, "l2", p.l2);
      p.m1 = number(j, w, "m1", p.m1);
      p.m2 = number(j, w, "m2", p.m2);
      p.joint_damping = number(j, w, "joint_damping", p.joint_damping);
      p.muscle_tau = number(j, w, "muscle_tau", p.muscle_tau);
      p.muscle_gain = number(j, w, "muscle_gain", p.muscle_gain);
      p.gravity = number(j, w, "gravity", p.gravity);
      plant = make_two_link_arm(p, number(j, w, "dt", 0.01));
      break;
    }
    case PlantKind::LevitatedParticle: {
      check_keys(j, w, {"kind", "dt", "mass", "k_r", "k_z", "damping", "capture_radius", "gravity",
                        "frequency", "control_bounds"});
      ParticleParams p;
      p.mass = number(j, w, "mass", p.mass);
      p.k_r = number(j, w, "k_r", p.k_r);
      p.k_z = number(j, w, "k_z", p.k_z);
      p.damping = number(j, w, "damping", p.damping);
      p.capture_radius = number(j, w, "capture_radius", p.capture_radius);
      p.gravity = number(j, w, "gravity", p.gravity);
      p.frequency = number(j, w, "frequency", p.frequency);
      plant = make_levitated_particle(p, number(j, w, "dt", 1e-3));
      break;
    }
    case PlantKind::Linear: {
      check_keys(j, w, {"kind", "dt", "A", "B", "position_dims", "control_bounds"});
      plant = make_linear_plant(matrix_field(j, w, "A"), matrix_field(j, w, "B"),
                                integer(j, w, "position_dims", 1), number(j, w, "dt", 0.01));
      break;
    }
  }
  if (j.contains("control_bounds")) {
    const json& b = j.at("control_bounds");
    if (b.is_null()) {
      plant.control_bounds.reset();
    } else {
      if (!b.is_object()) throw ConfigError("plant.control_bounds must be an object or null");
      check_keys(b, "plant.control_bounds", {"lower", "upper"});
      if (!b.contains("lower") || !b.contains("upper")) {
        throw ConfigError("plant.control_bounds needs lower and upper");
      }
      plant.control_bounds = ControlBounds{numbers(b.at("lower"), "plant.control_bounds.lower"),
                                           numbers(b.at("upper"), "plant.control_bounds.upper")};
    }
  }
  plant.validate();
  return plant;
}

StateVector default_initial_state(const PlantSpec& plant) {
  StateVector x = StateVector::Zero(plant.state_dim());
  if (plant.kind == PlantKind::TwoLinkArm) {
    x[0] = 0.3;
    x[1] = 1.6;
  }
  return x;
}

DistanceSpace default_space(const PlantSpec& plant) {
  return plant.kind == PlantKind::TwoLinkArm ? DistanceSpace::EndEffector : DistanceSpace::State;
}

std::vector<CostTerm> default_reach_terms(const PlantSpec& plant, const StateVector& x0) {
  std::vector<CostTerm> terms;
  if (plant.kind == PlantKind::TwoLinkArm) {
    Vector target = end_effector_position(plant, x0);
    target[0] += 0.25;
    terms = {CostTerm::terminal_distance(1e3, target, DistanceSpace::EndEffector),
             CostTerm::terminal_stability(1e1), CostTerm::control_effort(1e-3),
             CostTerm::joint_acceleration(1e-4)};
  } else if (plant.kind == PlantKind::PointMass1D || plant.kind == PlantKind::PointMass2D) {
    Vector target = end_effector_position(plant, x0);
    target[0] += 0.2;
    terms = {CostTerm::terminal_distance(1e3, target), CostTerm::terminal_stability(1e2),
             CostTerm::control_effort(1e-4)};
  }
  return terms;
}

CostSpec parse_cost(const json& root, const PlantSpec& plant, int horizon,
                    const std::vector<CostTerm>& default_terms, bool allow_missing_target) {
  const std::string w = "cost";
  const json& j = object_at(root, "cost", "");
  check_keys(j, w, {"horizon", "terms"});
  CostSpec cost;
  cost.horizon = integer(j, w, "horizon", horizon);
  if (!j.contains("terms")) {
    if (default_terms.empty()) {
      throw ConfigError("cost.terms is required for plant " + plant_name(plant.kind));
    }
    cost.terms = default_terms;
  } else {
    const json& terms = j.at("terms");
    if (!terms.is_array()) throw ConfigError("cost.terms must be an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tw = "cost.terms[" + std::to_string(i) + "]";
      const json& t = terms[i];
      if (!t.is_object()) throw ConfigError(tw + " must be an object");
      check_keys(t, tw, {"kind", "weight", "target", "space"});
      if (!t.contains("kind")) throw ConfigError(tw + ".kind is required");
      if (!t.contains("weight")) throw ConfigError(tw + ".weight is required");
      CostTerm term;
      try {
        term.kind = cost_kind_from_name(string(t, tw, "kind", ""));
      } catch (const ConfigError& e) {
        throw ConfigError(tw + ".kind: " + e.what());
      }
      term.weight = number(t, tw, "weight", 0.0);
      if (term.kind == CostKind::TerminalDistance) {
        const std::string space = string(t, tw, "space", default_space(plant) == DistanceSpace::EndEffector
                                                             ? "end_effector"
                                                             : "state");
        if (space == "end_effector") {
          term.space = DistanceSpace::EndEffector;
        } else if (space == "state") {
          term.space = DistanceSpace::State;
        } else {
          throw ConfigError(tw + ".space must be 'state' or 'end_effector'");
        }
        if (t.contains("target")) {
          term.target = numbers(t.at("target"), tw + ".target");
        } else if (!allow_missing_target) {
          throw ConfigError(tw + ".target is required");
        }
      } else if (t.contains("target") || t.contains("space")) {
        throw ConfigError(tw + ": target and space only apply to terminal_distance");
      }
      cost.terms.push_back(std::move(term));
    }
  }
  return cost;
}

SolverOptions parse_solver(const json& root) {
  const std::string w = "solver";
  const json& j = object_at(root, "solver", "");
  check_keys(j, w, {"max_iterations", "cost_tolerance", "mu_init", "mu_min", "mu_max", "mu_factor",
                    "line_search_steps"});
  SolverOptions o;
  o.max_iterations = integer(j, w, "max_iterations", o.max_iterations);
  o.cost_tolerance = number(j, w, "cost_tolerance", o.cost_tolerance);
  o.mu_init = number(j, w, "mu_init", o.mu_init);
  o.mu_min = number(j, w, "mu_min", o.mu_min);
  o.mu_max = number(j, w, "mu_max", o.mu_max);
  o.mu_factor = number(j, w, "mu_factor", o.mu_factor);
  if (j.contains("line_search_steps")) {
    const Vector steps = numbers(j.at("line_search_steps"), "solver.line_search_steps");
    o.line_search_steps.assign(steps.data(), steps.data() + steps.size());
  }
  o.validate();
  return o;
}

NoiseSpec parse_noise(const json& root, const PlantSpec& plant, double default_sdn) {
  const std::string w = "noise";
  const json& j = object_at(root, "noise", "");
  check_keys(j, w, {"additive_control_std", "signal_dependent_scale", "observation_std"});
  NoiseSpec n;
  n.signal_dependent_scale = number(j, w, "signal_dependent_scale", default_sdn);
  if (j.contains("additive_control_std")) {
    Vector a = numbers(j.at("additive_control_std"), "noise.additive_control_std");
    if (a.size() == 1 && plant.control_dim() > 1) a = Vector::Constant(plant.control_dim(), a[0]);
    n.additive_control_std = a;
  }
  n.observation_std = vector_field(j, w, "observation_std", Vector());
  n.validate(plant.control_dim());
  return n;
}

MpcConfig parse_mpc(const json& root, const PlantSpec& plant, const MpcConfig& defaults) {
  const std::string w = "mpc";
  const json& j = object_at(root, "mpc", "");
  check_keys(j, w, {"planning_horizon", "apply_steps", "max_wall_steps", "target_radius",
                    "max_speed", "warm_start", "perturbations"});
  MpcConfig c = defaults;
  c.planning_horizon = integer(j, w, "planning_horizon", c.planning_horizon);
  c.apply_steps = integer(j, w, "apply_steps", c.apply_steps);
  c.max_wall_steps = integer(j, w, "max_wall_steps", c.max_wall_steps);
  c.target_radius = number(j, w, "target_radius", c.target_radius);
  c.max_speed = number(j, w, "max_speed", c.max_speed);
  c.warm_start = boolean(j, w, "warm_start", c.warm_start);
  if (j.contains("perturbations")) {
    const json& ps = j.at("perturbations");
    if (!ps.is_array()) throw ConfigError("mpc.perturbations must be an array");
    c.perturbations.clear();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string pw = "mpc.perturbations[" + std::to_string(i) + "]";
      const json& p = ps[i];
      if (!p.is_object()) throw ConfigError(pw + " must be an object");
      check_keys(p, pw, {"step", "delta", "space"});
      Perturbation pert;
      pert.step = integer(p, pw, "step", 0);
      if (!p.contains("delta")) throw ConfigError(pw + ".delta is required");
      pert.delta = numbers(p.at("delta"), pw + ".delta");
      const std::string space = string(p, pw, "space", "end_effector");
      if (space == "end_effector") {
        pert.space = PerturbationSpace::EndEffector;
        if (pert.delta.size() != end_effector_dim(plant)) {
          throw ConfigError(pw + ".delta must have dimension " + std::to_string(end_effector_dim(plant)));
        }
      } else if (space == "state") {
        pert.space = PerturbationSpace::State;
        if (pert.delta.size() != plant.state_dim()) {
          throw ConfigError(pw + ".delta must have dimension " + std::to_string(plant.state_dim()));
        }
      } else {
        throw ConfigError(pw + ".space must be 'state' or 'end_effector'");
      }
      c.perturbations.push_back(std::move(pert));
    }
  }
  c.solver_options = parse_solver(root);
  c.validate();
  return c;
}

ReachTask parse_task(const json& root) {
  const std::string w = "task";
  const json& j = object_at(root, "task", "");
  check_keys(j, w, {"distance", "horizon", "dt", "mass", "damping", "distance_weight",
                    "stability_weight", "effort_weight", "additive_std", "signal_dependent_scale",
                    "observation_std_position", "observation_std_velocity"});
  ReachTask t;
  t.distance = number(j, w, "distance", t.distance);
  t.horizon = integer(j, w, "horizon", t.horizon);
  t.dt = number(j, w, "dt", t.dt);
  t.mass = number(j, w, "mass", t.mass);
  t.damping = number(j, w, "damping", t.damping);
  t.distance_weight = number(j, w, "distance_weight", t.distance_weight);
  t.stability_weight = number(j, w, "stability_weight", t.stability_weight);
  t.effort_weight = number(j, w, "effort_weight", t.effort_weight);
  t.additive_std = number(j, w, "additive_std", t.additive_std);
  t.signal_dependent_scale = number(j, w, "signal_dependent_scale", 0.2);
  t.observation_std_position = number(j, w, "observation_std_position", t.observation_std_position);
  t.observation_std_velocity = number(j, w, "observation_std_velocity", t.observation_std_velocity);
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("task.") + name + " must be a finite value > 0");
    }
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("task.") + name + " must be a finite value >= 0");
    }
  };
  positive(t.distance, "distance");
  if (t.horizon < 1) throw ConfigError("task.horizon must be >= 1");
  positive(t.dt, "dt");
  if (t.dt > 0.1) throw ConfigError("task.dt must be <= 0.1");
  positive(t.mass, "mass");
  non_negative(t.damping, "damping");
  non_negative(t.distance_weight, "distance_weight");
  non_negative(t.stability_weight, "stability_weight");
  positive(t.effort_weight, "effort_weight");
  non_negative(t.additive_std, "additive_std");
  non_negative(t.signal_dependent_scale, "signal_dependent_scale");
  non_negative(t.observation_std_position, "observation_std_position");
  non_negative(t.observation_std_velocity, "observation_std_velocity");
  return t;
}

void parse_levitation(const json& root, ExperimentConfig& c) {
  const std::string w = "levitation";
  const json& j = object_at(root, "levitation", "");
  check_keys(j, w, {"mass", "k_r", "k_z", "damping", "capture_radius", "gravity", "frequency",
                    "grid", "margin", "output_rate", "max_sweeps", "cycles", "warmup_cycles",
                    "render_dt", "playback"});
  TrapParams& p = c.trap;
  p.mass = number(j, w, "mass", p.mass);
  p.k_r = number(j, w, "k_r", p.k_r);
  p.k_z = number(j, w, "k_z", p.k_z);
  p.damping = number(j, w, "damping", p.damping);
  p.capture_radius = number(j, w, "capture_radius", p.capture_radius);
  p.gravity = number(j, w, "gravity", p.gravity);
  p.frequency = number(j, w, "frequency", p.frequency);
  validate_trap_params(p);
  c.topp.grid = integer(j, w, "grid", c.topp.grid);
  c.topp.margin = number(j, w, "margin", c.topp.margin);
  c.topp.output_rate = number(j, w, "output_rate", c.topp.output_rate);
  c.topp.max_sweeps = integer(j, w, "max_sweeps", c.topp.max_sweeps);
  c.topp.validate();
  c.render.cycles = integer(j, w, "cycles", c.render.cycles);
  c.render.warmup_cycles = integer(j, w, "warmup_cycles", c.render.warmup_cycles);
  c.render.dt = number(j, w, "render_dt", c.render.dt);
  const std::string playback = string(j, w, "playback", "continuous");
  if (playback == "continuous") {
    c.render.playback = Playback::Continuous;
  } else if (playback == "sampled") {
    c.render.playback = Playback::Sampled;
  } else {
    throw ConfigError("levitation.playback must be 'continuous' or 'sampled'");
  }
  if (c.render.cycles < 1) throw ConfigError("levitation.cycles must be >= 1");
  if (c.render.warmup_cycles < 0) throw ConfigError("levitation.warmup_cycles must be >= 0");
  if (!(c.render.dt > 0.0) || !(c.render.dt <= 1e-3)) {
    throw ConfigError("levitation.render_dt must lie in (0, 1e-3]");
  }

  std::vector<json> shapes;
  if (root.contains("shapes")) {
    const json& s = root.at("shapes");
    if (!s.is_array() || s.empty()) throw ConfigError("shapes must be a non-empty array");
    shapes.assign(s.begin(), s.end());
  } else {
    shapes = {"cardioid", "circle", "rounded-square"};
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const std::string sw = "shapes[" + std::to_string(i) + "]";
    const json& s = shapes[i];
    PathSpec path;
    auto kind_of = [&](const std::string& name) {
      try {
        return shape_kind_from_name(name);
      } catch (const ConfigError& e) {
        throw ConfigError(sw + ": " + e.what());
      }
    };
    if (s.is_string()) {
      path.kind = kind_of(s.get<std::string>());
    } else if (s.is_object()) {
      check_keys(s, sw, {"kind", "radius", "semi_a", "semi_b", "scale", "sharpness", "side",
                         "corner_radius", "points", "center", "plane", "samples"});
      if (!s.contains("kind")) throw ConfigError(sw + ".kind is required");
      path.kind = kind_of(string(s, sw, "kind", ""));
      path.radius = number(s, sw, "radius", path.radius);
      path.semi_a = number(s, sw, "semi_a", path.semi_a);
      path.semi_b = number(s, sw, "semi_b", path.semi_b);
      path.scale = number(s, sw, "scale", path.scale);
      path.sharpness = number(s, sw, "sharpness", path.sharpness);
      path.side = number(s, sw, "side", path.side);
      path.corner_radius = number(s, sw, "corner_radius", path.corner_radius);
      path.samples = integer(s, sw, "samples", path.samples);
      if (s.contains("center")) {
        const Vector center = numbers(s.at("center"), sw + ".center");
        if (center.size() != 3) throw ConfigError(sw + ".center must have 3 entries");
        path.center = center;
      }
      try {
        path.plane = plane_from_name(string(s, sw, "plane", "xy"));
      } catch (const ConfigError& e) {
        throw ConfigError(sw + ".plane: " + e.what());
      }
      if (s.contains("points")) {
        const json& pts = s.at("points");
        if (!pts.is_array()) throw ConfigError(sw + ".points must be an array of [x, y] pairs");
        for (const auto& pt : pts) {
          const Vector v = numbers(pt, sw + ".points");
          if (v.size() != 2) throw ConfigError(sw + ".points entries must be [x, y] pairs");
          path.points.emplace_back(v[0], v[1]);
        }
      }
    } else {
      throw ConfigError(sw + " must be a shape name or an object");
    }
    if (path.kind == ShapeKind::Sampled && path.points.empty()) {
      throw ConfigError(sw + ": the sampled shape needs points");
    }
    try {
      path.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(sw + ": " + e.what());
    }
    c.shapes.push_back(std::move(path));
  }
}

void parse_analysis(const json& root, ExperimentConfig& c) {
  const json& j = object_at(root, "analysis", "");
  check_keys(j, "analysis", {"inputs"});
  if (!j.contains("inputs")) throw ConfigError("analysis.inputs is required");
  const json& inputs = j.at("inputs");
  if (!inputs.is_array() || inputs.empty()) throw ConfigError("analysis.inputs must be a non-empty array");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string iw = "analysis.inputs[" + std::to_string(i) + "]";
    AnalysisInput in;
    if (inputs[i].is_string()) {
      in.path = inputs[i].get<std::string>();
    } else if (inputs[i].is_object()) {
      check_keys(inputs[i], iw, {"path", "distance", "width"});
      in.path = string(inputs[i], iw, "path", "");
      in.distance = number(inputs[i], iw, "distance", 0.0);
      in.width = number(inputs[i], iw, "width", 0.0);
      if ((in.distance > 0.0) != (in.width > 0.0) || in.distance < 0.0 || in.width < 0.0) {
        throw ConfigError(iw + ": distance and width must both be > 0 when given");
      }
    } else {
      throw ConfigError(iw + " must be a path or an object");
    }
    if (in.path.empty()) throw ConfigError(iw + ".path is required");
    c.inputs.push_back(std::move(in));
  }
}

// ------------------------------------------------------------------ output

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng rng = make_stream(seed, stream);
  return rng();
}

std::string indexed(const std::string& stem, int i, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04d", i);
  return stem + buf + ext;
}

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::string path(const std::string& name) {
    files_.insert(name);
    return (dir_ / name).string();
  }
  void json_file(const std::string& name, const json& j) { save_json(path(name), j); }
  void trajectory(const std::string& name, const Trajectory& t) { save_trajectory_csv(path(name), t); }
  std::vector<std::string> files() const { return {files_.begin(), files_.end()}; }

 private:
  std::filesystem::path dir_;
  std::set<std::string> files_;
};

template <class F>
auto guarded(const char* module, const char* operation, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const RunError&) {
    throw;
  } catch (const std::exception& e) {
    throw RunError(module, operation, e.what());
  }
}

json vector_json(const Vector& v) { return vector_to_json(v); }

std::optional<ProfileMetrics> try_metrics(const MotionSamples& m) {
  try {
    return velocity_profile_metrics(m);
  } catch (const AnalysisError&) {
    return std::nullopt;
  }
}

json metrics_or_null(const std::optional<ProfileMetrics>& m) {
  return m ? metrics_to_json(*m) : json(nullptr);
}

// Reach in error coordinates shifted back to absolute position.
Trajectory absolute_reach(const Trajectory& t, double distance) {
  Trajectory out = t;
  for (auto& x : out.states) x[0] += distance;
  for (auto& x : out.estimates) x[0] += distance;
  return out;
}

json run_lqg_reach(const ExperimentConfig& c, Writer& out) {
  const LqgProblem problem = make_reach_problem(c.task);
  const LqgSolution sol = guarded("lqg", "lqg_solve", [&] { return lqg_solve(problem); });
  const StateMoments moments = lqg_moments(problem, sol);
  const auto trials =
      guarded("lqg", "lqg_rollout", [&] { return lqg_rollout(problem, sol, c.n_trials, c.seed); });
  const PlantSpec plant = make_point_mass_1d({c.task.mass, c.task.damping}, c.task.dt);

  Trajectory mean;
  mean.dt = c.task.dt;
  mean.seed = c.seed;
  mean.states = moments.mean;
  for (int k = 0; k < problem.horizon; ++k) {
    mean.controls.push_back(-sol.L[k] * moments.mean[k]);
    mean.flags.push_back(0);
  }
  const Trajectory mean_abs = absolute_reach(mean, c.task.distance);
  out.trajectory("mean_trajectory.csv", mean_abs);
  const auto mean_metrics = try_metrics(motion_from_trajectory(plant, mean_abs));

  std::ofstream csv(out.path("trials.csv"));
  csv << "trial,endpoint,endpoint_error,velocity_peaks,time_to_peak_ratio,accel_zero_crossings\n";
  std::vector<Vector> endpoints;
  for (int i = 0; i < c.n_trials; ++i) {
    const Trajectory abs = absolute_reach(trials[i], c.task.distance);
    const double endpoint = abs.states.back()[0];
    endpoints.push_back(Vector::Constant(1, endpoint));
    const auto m = try_metrics(motion_from_trajectory(plant, abs));
    csv << i << ',' << format_real(endpoint) << ',' << format_real(endpoint - c.task.distance) << ','
        << (m ? std::to_string(m->velocity_peaks) : "") << ','
        << (m ? format_real(m->time_to_peak_ratio) : "") << ','
        << (m ? std::to_string(m->accel_zero_crossings) : "") << '\n';
    if (i < c.save_trajectories) {
      out.json_file(indexed("trial", i, ".json"), trajectory_to_json(abs));
    }
  }
  if (!csv) throw RunError("cli", "write", "failed writing trials.csv");

  const EndpointStats st = endpoint_statistics(endpoints);
  json report = {
      {"experiment", "lqg-reach"},
      {"lqg", {{"iterations", sol.iterations}, {"converged", sol.converged},
               {"predicted_cost", sol.predicted_cost}}},
      {"endpoint", {{"mean", st.mean[0]}, {"std", st.stddev[0]}, {"n", st.n},
                    {"predicted_mean", moments.mean.back()[0] + c.task.distance},
                    {"predicted_std", std::sqrt(moments.covariance.back()(0, 0))}}},
      {"mean_profile", metrics_or_null(mean_metrics)},
  };
  out.json_file("report.json", report);
  return report;
}

json run_fitts_sweep(const ExperimentConfig& c, Writer& out) {
  std::vector<TrialRecord> reached;
  json conditions = json::array();
  int condition = 0;
  for (double D : c.distances) {
    for (double W : c.widths) {
      CostSpec cost = c.cost;
      for (auto& t : cost.terms) {
        if (t.kind == CostKind::TerminalDistance) {
          t.target = end_effector_position(c.plant, c.initial_state);
          t.target[0] += D;
        }
      }
      MpcConfig mpc = c.mpc;
      mpc.target_radius = 0.5 * W;

      const std::string name = indexed("condition", condition, ".csv");
      std::ofstream csv(out.path(name));
      csv << "trial,D,W,ID,reached,MT,velocity_peaks,time_to_peak_ratio,endpoint_error\n";
      double mt_sum = 0.0;
      int n_reached = 0;
      for (int i = 0; i < c.n_trials; ++i) {
        const std::uint64_t seed =
            trial_seed(c.seed, static_cast<std::uint64_t>(condition) * c.n_trials + i);
        const MpcLog log = guarded("mpc", "run_mpc", [&] {
          return run_mpc(c.plant, cost, c.initial_state, mpc, c.noise, seed);
        });
        const bool ok = log.termination == kTargetReached;
        const Vector end = end_effector_position(c.plant, log.trajectory.states.back());
        TrialRecord rec;
        rec.distance = D;
        rec.width = W;
        rec.endpoint = end;
        rec.endpoint_error = end[0] - cost.distance_term()->target[0];
        if (ok) rec.movement_time = mpc_movement_time(log);
        const auto m = try_metrics(motion_from_trajectory(c.plant, log.trajectory));
        if (m) {
          rec.velocity_peaks = m->velocity_peaks;
          rec.time_to_peak_ratio = m->time_to_peak_ratio;
          rec.accel_zero_crossings = m->accel_zero_crossings;
        }
        csv << i << ',' << format_real(D) << ',' << format_real(W) << ','
            << format_real(index_of_difficulty(D, W)) << ',' << (ok ? 1 : 0) << ','
            << (ok ? format_real(rec.movement_time) : "") << ',' << rec.velocity_peaks << ','
            << format_real(rec.time_to_peak_ratio) << ',' << format_real(rec.endpoint_error) << '\n';
        if (ok && rec.movement_time > 0.0) {
          reached.push_back(rec);
          mt_sum += rec.movement_time;
          ++n_reached;
        }
        if (i < c.save_trajectories) {
          out.trajectory(indexed(indexed("condition", condition, ""), i, ".csv"), log.trajectory);
        }
      }
      if (!csv) throw RunError("cli", "write", "failed writing " + name);
      conditions.push_back({{"condition", condition},
                            {"D", D},
                            {"W", W},
                            {"ID", index_of_difficulty(D, W)},
                            {"trials", c.n_trials},
                            {"reached", n_reached},
                            {"mean_movement_time", n_reached ? json(mt_sum / n_reached) : json(nullptr)}});
      ++condition;
    }
  }
  write_trials_csv(out.path("trials.csv"), reached);
  const FitResult fit = guarded("analysis", "fitts_fit", [&] { return fitts_fit(reached); });
  json report = {{"experiment", "fitts-sweep"},
                 {"index_of_difficulty", "shannon"},
                 {"fit", fit_to_json(fit)},
                 {"conditions", conditions}};
  out.json_file("fitts.json", report);
  return report;
}

json run_mpc_trials(const ExperimentConfig& c, Writer& out) {
  json trials = json::array();
  int n_reached = 0;
  for (int i = 0; i < c.n_trials; ++i) {
    const std::uint64_t seed = trial_seed(c.seed, static_cast<std::uint64_t>(i));
    const MpcLog log = guarded("mpc", "run_mpc", [&] {
      return run_mpc(c.plant, c.cost, c.initial_state, c.mpc, c.noise, seed);
    });
    const bool ok = log.termination == kTargetReached;
    n_reached += ok ? 1 : 0;
    int iterations = 0;
    for (const auto& r : log.replans) iterations += r.iterations;
    const auto m = log.trajectory.horizon() > 0
                       ? try_metrics(motion_from_trajectory(c.plant, log.trajectory))
                       : std::nullopt;
    trials.push_back({{"trial", i},
                      {"seed", seed},
                      {"termination", log.termination},
                      {"executed_steps", log.trajectory.horizon()},
                      {"movement_time", ok ? json(mpc_movement_time(log)) : json(nullptr)},
                      {"final_distance", log.final_distance},
                      {"final_speed", log.final_speed},
                      {"solver_iterations", iterations},
                      {"profile", metrics_or_null(m)}});
    if (i < c.save_trajectories) {
      if (log.trajectory.horizon() > 0) out.trajectory(indexed("trial", i, ".csv"), log.trajectory);
      out.json_file(indexed("trial", i, "_log.json"), mpc_log_to_json(log));
    }
  }
  json report = {{"experiment", c.experiment},
                 {"plant", plant_name(c.plant.kind)},
                 {"trials", c.n_trials},
                 {"reached", n_reached},
                 {"per_trial", trials}};
  out.json_file("summary.json", report);
  return report;
}

json tracking_json(const TrackingReport& r) {
  return {{"escaped", r.escaped},
          {"escape_time", r.escaped ? json(r.escape_time) : json(nullptr)},
          {"max_deviation", r.max_deviation},
          {"rms_deviation", r.rms_deviation},
          {"max_drift_after_warmup", r.max_drift_after_warmup},
          {"cycle_drift", r.cycle_drift},
          {"peak_capture_ratio", r.peak_capture_ratio}};
}

json run_levitate(const ExperimentConfig& c, Writer& out) {
  json shapes = json::array();
  std::map<std::string, int> seen;
  for (const auto& path : c.shapes) {
    std::string name = shape_name(path.kind);
    const int count = seen[name]++;
    if (count > 0) name += "_" + std::to_string(count);

    const ToppResult res = guarded("levitation", "topp_solve", [&] { return topp_solve(path, c.trap, c.topp); });
    const double baseline = guarded("levitation", "constant_speed_period",
                                    [&] { return constant_speed_period(path, c.trap, c.topp); });
    const TrackingReport track = guarded("levitation", "simulate_render", [&] {
      return simulate_render(res.law, res.trap, c.trap, c.render);
    });
    write_trap_csv(out.path(name + "_trap.csv"), res.trap);

    json report = {{"shape", name},
                   {"kind", shape_name(path.kind)},
                   {"plane", plane_name(path.plane)},
                   {"period", res.law.period},
                   {"frequency", 1.0 / res.law.period},
                   {"grid", c.topp.grid},
                   {"margin", c.topp.margin},
                   {"sweeps", res.law.sweeps},
                   {"max_violation", res.max_violation},
                   {"feasible", res.trap.feasible && res.max_violation <= 1e-9},
                   {"peak_offset_ratio", res.trap.peak_offset_ratio},
                   {"peak_offset", res.trap.peak_offset},
                   {"constant_speed_period", baseline},
                   {"output_rate", c.topp.output_rate},
                   {"samples", res.trap.times.size()},
                   {"tracking", tracking_json(track)}};
    if (path.kind == ShapeKind::Circle && path.plane == Plane::XY) {
      const double analytic = circle_period(path.radius, c.trap);
      report["analytic_period"] = analytic;
      report["analytic_period_at_budget"] = circle_period(path.radius, c.trap, 1.0 - c.topp.margin);
      report["relative_error_vs_analytic"] = (res.law.period - analytic) / analytic;
    }
    out.json_file(name + "_report.json", report);
    shapes.push_back(report);
  }
  json summary = {{"experiment", "levitate"},
                  {"params", {{"mass", c.trap.mass}, {"k_r", c.trap.k_r}, {"k_z", c.trap.k_z},
                              {"damping", c.trap.damping}, {"capture_radius", c.trap.capture_radius},
                              {"gravity", c.trap.gravity}, {"frequency", c.trap.frequency}}},
                  {"shapes", shapes}};
  out.json_file("levitate.json", summary);
  return summary;
}

json run_analyze(const ExperimentConfig& c, Writer& out) {
  json inputs = json::array();
  std::vector<TrialRecord> records;
  for (const auto& in : c.inputs) {
    const Trajectory t = guarded("analysis", "load_trajectory", [&] { return load_trajectory(in.path); });
    if (static_cast<int>(t.states.front().size()) != c.plant.state_dim()) {
      throw RunError("analysis", "load_trajectory",
                     in.path + ": state dimension does not match plant " + plant_name(c.plant.kind));
    }
    const MotionSamples motion = motion_from_trajectory(c.plant, t);
    const ProfileMetrics m =
        guarded("analysis", "velocity_profile_metrics", [&] { return velocity_profile_metrics(motion); });
    const double mt = t.horizon() * t.dt;
    json entry = {{"path", in.path},
                  {"movement_time", mt},
                  {"endpoint", vector_json(motion.position.back())},
                  {"profile", metrics_to_json(m)}};
    if (in.distance > 0.0) {
      TrialRecord rec;
      rec.distance = in.distance;
      rec.width = in.width;
      rec.movement_time = mt;
      rec.endpoint = motion.position.back();
      rec.endpoint_error = (motion.position.back() - motion.position.front()).norm() - in.distance;
      rec.velocity_peaks = m.velocity_peaks;
      rec.time_to_peak_ratio = m.time_to_peak_ratio;
      rec.accel_zero_crossings = m.accel_zero_crossings;
      records.push_back(rec);
      entry["ID"] = index_of_difficulty(in.distance, in.width);
    }
    inputs.push_back(entry);
  }
  json report = {{"experiment", "analyze"}, {"inputs", inputs}};
  if (!records.empty()) {
    write_trials_csv(out.path("trials.csv"), records);
    try {
      report["fitts"] = fit_to_json(fitts_fit(records));
    } catch (const AnalysisError& e) {
      report["fitts"] = {{"error", e.what()}};
    }
  }
  out.json_file("analysis.json", report);
  return report;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"analyze", "fitts-sweep", "levitate", "lqg-reach", "mpc-perturb", "mpc-reach"};
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& config, const std::string& dotted_path, const std::string& value) {
  if (dotted_path.empty()) throw ConfigError("empty override path");
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  json* node = &config;
  std::stringstream ss(dotted_path);
  std::string segment;
  std::vector<std::string> segments;
  while (std::getline(ss, segment, '.')) {
    if (segment.empty()) throw ConfigError("malformed override path '" + dotted_path + "'");
    segments.push_back(segment);
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string& s = segments[i];
    const bool last = i + 1 == segments.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw ConfigError("override '" + dotted_path + "': '" + s + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("override '" + dotted_path + "': index out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) {
        throw ConfigError("override '" + dotted_path + "': '" + s + "' is not inside an object");
      }
      node = &(*node)[s];
    }
    if (last) *node = parsed;
  }
}

std::string config_hash(const json& config) {
  json copy = config;
  if (copy.is_object()) copy.erase("output_dir");
  const std::string text = copy.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j, "", {"experiment", "description", "seed", "n_trials", "output_dir",
                     "save_trajectories", "plant", "initial_state", "cost", "noise", "solver", "mpc",
                     "task", "conditions", "levitation", "shapes", "analysis"});
  ExperimentConfig c;
  c.normalized = j;
  if (!j.contains("experiment")) throw ConfigError("experiment is required");
  c.experiment = string(j, "", "experiment", "");
  const auto names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
    throw ConfigError("experiment '" + c.experiment + "' is unknown");
  }
  string(j, "", "description", "");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("seed must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  const int default_trials = c.experiment == "lqg-reach" ? 1000 : c.experiment == "fitts-sweep" ? 20
                           : c.experiment == "mpc-reach" || c.experiment == "mpc-perturb" ? 10 : 1;
  c.n_trials = integer(j, "", "n_trials", default_trials);
  if (c.n_trials < 1) throw ConfigError("n_trials must be >= 1");
  c.output_dir = string(j, "", "output_dir", "");
  c.save_trajectories = integer(j, "", "save_trajectories", 1);
  if (c.save_trajectories < 0) throw ConfigError("save_trajectories must be >= 0");

  const std::string& e = c.experiment;
  if (e == "lqg-reach") {
    c.task = parse_task(j);
  } else if (e == "fitts-sweep" || e == "mpc-reach" || e == "mpc-perturb" || e == "analyze") {
    const PlantKind default_kind = e == "fitts-sweep" ? PlantKind::PointMass1D
                                 : e == "analyze"     ? PlantKind::PointMass1D
                                                      : PlantKind::TwoLinkArm;
    c.plant = parse_plant(j, default_kind);
    c.initial_state = j.contains("initial_state")
                          ? numbers(j.at("initial_state"), "initial_state")
                          : default_initial_state(c.plant);
    if (c.initial_state.size() != c.plant.state_dim()) {
      throw ConfigError("initial_state must have dimension " + std::to_string(c.plant.state_dim()));
    }
    if (!c.initial_state.allFinite()) throw ConfigError("initial_state must be finite");
  }

  if (e == "fitts-sweep") {
    if (c.plant.kind != PlantKind::PointMass1D && c.plant.kind != PlantKind::PointMass2D) {
      throw ConfigError("plant.kind must be point-mass-1d or point-mass-2d for fitts-sweep");
    }
    const json& cond = object_at(j, "conditions", "");
    check_keys(cond, "conditions", {"distances", "widths"});
    c.distances = positive_list(cond, "conditions", "distances", {0.05, 0.1, 0.2});
    c.widths = positive_list(cond, "conditions", "widths", {0.01, 0.02});
    MpcConfig defaults;
    defaults.planning_horizon = 40;
    defaults.max_wall_steps = 400;
    c.mpc = parse_mpc(j, c.plant, defaults);
    const std::vector<CostTerm> terms = {
        CostTerm::terminal_distance(1e3, Vector()), CostTerm::terminal_stability(1e2),
        CostTerm::control_effort(1e-4)};
    c.cost = parse_cost(j, c.plant, c.mpc.planning_horizon, terms, true);
    bool has_distance = false;
    for (auto& t : c.cost.terms) {
      if (t.kind != CostKind::TerminalDistance) continue;
      if (t.target.size() != 0) throw ConfigError("cost.terms: fitts-sweep sets the target per condition; omit target");
      if (t.space != DistanceSpace::State) throw ConfigError("cost.terms: fitts-sweep uses state-space distance");
      t.target = end_effector_position(c.plant, c.initial_state);
      has_distance = true;
    }
    if (!has_distance) throw ConfigError("cost.terms needs a terminal_distance term");
    c.cost.horizon = c.mpc.planning_horizon;
    c.cost.validate(c.plant);
    c.noise = parse_noise(j, c.plant, 0.2);
  } else if (e == "mpc-reach" || e == "mpc-perturb") {
    MpcConfig defaults;
    defaults.planning_horizon = 40;
    defaults.max_wall_steps = 300;
    if (e == "mpc-perturb") {
      Perturbation p;
      p.step = 30;
      p.space = PerturbationSpace::EndEffector;
      p.delta = Vector::Zero(end_effector_dim(c.plant));
      p.delta[p.delta.size() > 1 ? 1 : 0] = 0.05;
      defaults.perturbations.push_back(p);
    }
    c.mpc = parse_mpc(j, c.plant, defaults);
    if (e == "mpc-perturb" && c.mpc.perturbations.empty()) {
      throw ConfigError("mpc.perturbations must be non-empty for mpc-perturb");
    }
    c.cost = parse_cost(j, c.plant, c.mpc.planning_horizon,
                        default_reach_terms(c.plant, c.initial_state), false);
    c.cost.horizon = c.mpc.planning_horizon;
    c.cost.validate(c.plant);
    if (!c.cost.distance_term()) throw ConfigError("cost.terms needs a terminal_distance term");
    c.noise = parse_noise(j, c.plant, 0.1);
  } else if (e == "levitate") {
    parse_levitation(j, c);
  } else if (e == "analyze") {
    parse_analysis(j, c);
  }
  return c;
}

RunSummary run_experiment(const ExperimentConfig& c, const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw RunError("cli", "run", "cannot create output directory '" + output_dir.string() + "': " + ec.message());

  Writer out(output_dir);
  RunSummary summary;
  const std::string& e = c.experiment;
  if (e == "lqg-reach") {
    summary.report = run_lqg_reach(c, out);
  } else if (e == "fitts-sweep") {
    summary.report = run_fitts_sweep(c, out);
  } else if (e == "mpc-reach" || e == "mpc-perturb") {
    summary.report = run_mpc_trials(c, out);
  } else if (e == "levitate") {
    summary.report = run_levitate(c, out);
  } else if (e == "analyze") {
    summary.report = run_analyze(c, out);
  }

  summary.files = out.files();
  json manifest = {{"toolkit", "hcisim"},
                   {"version", kVersion},
                   {"experiment", e},
                   {"seed", c.seed},
                   {"config_hash", config_hash(c.normalized)},
                   {"config", c.normalized},
                   {"files", summary.files},
                   {"created_utc", utc_timestamp()}};
  save_json((output_dir / "manifest.json").string(), manifest);
  summary.files.push_back("manifest.json");
  std::sort(summary.files.begin(), summary.files.end());
  return summary;
}

std::vector<std::pair<std::string, std::vector<std::string>>> list_plants() {
  return {
      {"levitated-particle",
       {"capture_radius", "control_bounds", "damping", "dt", "frequency", "gravity", "k_r", "k_z", "mass"}},
      {"linear", {"A", "B", "control_bounds", "dt", "position_dims"}},
      {"point-mass-1d", {"control_bounds", "damping", "dt", "mass"}},
      {"point-mass-2d", {"control_bounds", "damping", "dt", "mass"}},
      {"two-link-arm",
       {"control_bounds", "dt", "gravity", "joint_damping", "l1", "l2", "m1", "m2", "muscle_gain",
        "muscle_tau"}},
  };
}

std::vector<std::pair<std::string, std::vector<std::string>>> list_shapes() {
  return {
      {"cardioid", {"center", "plane", "scale", "sharpness"}},
      {"circle", {"center", "plane", "radius"}},
      {"ellipse", {"center", "plane", "semi_a", "semi_b"}},
      {"rounded-square", {"center", "corner_radius", "plane", "side"}},
      {"sampled", {"center", "plane", "points"}},
  };
}

}  // namespace hcisim
