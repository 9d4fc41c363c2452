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

#include "hcisim/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hcisim {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  traj.check();
  const Eigen::Index n = traj.states.front().size();
  const Eigen::Index m = traj.controls.empty() ? 0 : traj.controls.front().size();
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
  out << ",flags\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << format_real(static_cast<double>(k) * traj.dt);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_real(traj.states[k][i]);
    const bool has_control = k < traj.controls.size();
    for (Eigen::Index i = 0; i < m; ++i) {
      out << ',';
      if (has_control) out << format_real(traj.controls[k][i]);
    }
    out << ',' << (has_control && !traj.flags.empty() ? traj.flags[k] : 0) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trajectory csv: empty input");
  const auto header = split(line, ',');
  if (header.size() < 3 || header.front() != "t" || header.back() != "flags") {
    throw std::invalid_argument("trajectory csv: header must be t,x...,u...,flags");
  }
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  for (std::size_t i = 1; i + 1 < header.size(); ++i) {
    if (header[i] == "x" + std::to_string(n)) {
      if (m != 0) throw std::invalid_argument("trajectory csv: state column after control column");
      ++n;
    } else if (header[i] == "u" + std::to_string(m)) {
      ++m;
    } else {
      throw std::invalid_argument("trajectory csv: unexpected column '" + header[i] + "'");
    }
  }

  Trajectory traj;
  std::vector<double> times;
  bool last_row_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (last_row_seen) throw std::invalid_argument("trajectory csv: rows after final state row");
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw std::invalid_argument("trajectory csv: row has wrong number of fields");
    }
    times.push_back(parse_real(fields[0]));
    StateVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = parse_real(fields[1 + i]);
    traj.states.push_back(x);
    if (m > 0 && fields[1 + n].empty()) {
      last_row_seen = true;
      continue;
    }
    ControlVector u(m);
    for (Eigen::Index i = 0; i < m; ++i) u[i] = parse_real(fields[1 + n + i]);
    traj.controls.push_back(u);
    traj.flags.push_back(std::stoi(fields.back()));
  }
  if (m == 0) {
    throw std::invalid_argument("trajectory csv: no control columns");
  }
  if (!last_row_seen) throw std::invalid_argument("trajectory csv: missing final state row");
  traj.dt = times.size() > 1 ? times[1] - times[0] : 0.0;
  traj.check();
  return traj;
}

nlohmann::json vector_to_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vector_to_json(m.row(r).transpose()));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected non-empty array of rows");
  const auto cols = j.front().size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != cols) throw std::invalid_argument("matrix: ragged rows");
    m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r]).transpose();
  }
  return m;
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
  traj.check();
  nlohmann::json j;
  j["dt"] = traj.dt;
  j["seed"] = traj.seed;
  auto& states = j["states"] = nlohmann::json::array();
  for (const auto& x : traj.states) states.push_back(vector_to_json(x));
  auto& controls = j["controls"] = nlohmann::json::array();
  for (const auto& u : traj.controls) controls.push_back(vector_to_json(u));
  j["flags"] = traj.flags.empty() ? std::vector<int>(traj.controls.size(), 0) : traj.flags;
  if (!traj.estimates.empty()) {
    auto& est = j["estimates"] = nlohmann::json::array();
    for (const auto& x : traj.estimates) est.push_back(vector_to_json(x));
  }
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory traj;
  traj.dt = j.at("dt").get<double>();
  traj.seed = j.value("seed", std::uint64_t{0});
  for (const auto& x : j.at("states")) traj.states.push_back(vector_from_json(x));
  for (const auto& u : j.at("controls")) traj.controls.push_back(vector_from_json(u));
  traj.flags = j.value("flags", std::vector<int>(traj.controls.size(), 0));
  if (j.contains("estimates")) {
    for (const auto& x : j.at("estimates")) traj.estimates.push_back(vector_from_json(x));
  }
  traj.check();
  return traj;
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file '" + path + "'");
  if (ends_with(path, ".json")) return trajectory_from_json(nlohmann::json::parse(in));
  return read_trajectory_csv(in);
}

void save_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_trajectory_csv(out, traj);
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace hcisim
