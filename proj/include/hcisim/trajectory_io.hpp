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

// Trajectory serialization.
//
// CSV: header `t,x0,...,x{n-1},u0,...,u{m-1},flags`, one row per state. The
// final row leaves the control columns empty. Reals use 17 significant digits.
// JSON: {"dt", "seed", "states", "controls", "flags"[, "estimates"]}.

#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "hcisim/dynamics.hpp"

namespace hcisim {

/// printf("%.17g"), which round-trips every double.
std::string format_real(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);

nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);  // row-major nested arrays
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

/// Load a trajectory from a .csv or .json file.
Trajectory load_trajectory(const std::string& path);
void save_trajectory_csv(const std::string& path, const Trajectory& traj);
void save_json(const std::string& path, const nlohmann::json& j);

}  // namespace hcisim
