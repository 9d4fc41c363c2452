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

// Batch experiment runner.
//
//   hcisim run CONFIG [--out DIR] [--shape NAME]... [--seed N] [--a.b VALUE]...
//   hcisim validate CONFIG [--a.b VALUE]...
//   hcisim list-shapes | list-plants
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid config or arguments.
// The output directory is --out, else the config's output_dir, else
// $HCISIM_OUTPUT_DIR/<experiment>, else hcisim_out/<experiment>.

#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hcisim/experiment.hpp"

namespace {

using hcisim::ConfigError;
using json = nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

// Dotted options (--noise.signal_dependent_scale 0.2 or --a.b=0.2) are config
// overrides; they are pulled out before CLI11 sees the arguments.
std::vector<std::pair<std::string, std::string>> take_overrides(std::vector<std::string>& args) {
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string key = a.substr(2);
    std::string value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    }
    if (key.find('.') == std::string::npos) {
      rest.push_back(a);
      continue;
    }
    if (eq == std::string::npos) {
      if (i + 1 >= args.size()) throw ConfigError("override --" + key + " needs a value");
      value = args[++i];
    }
    overrides.emplace_back(key, value);
  }
  args = std::move(rest);
  return overrides;
}

json load_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides,
                 const std::vector<std::string>& shapes, const std::optional<std::uint64_t>& seed) {
  json config = hcisim::read_config_file(path);
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : overrides) hcisim::apply_override(config, key, value);
  if (!shapes.empty()) config["shapes"] = shapes;
  if (seed) config["seed"] = *seed;
  return config;
}

std::filesystem::path output_dir(const std::string& flag, const hcisim::ExperimentConfig& c) {
  if (!flag.empty()) return flag;
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("HCISIM_OUTPUT_DIR"); env && *env) {
    return std::filesystem::path(env) / c.experiment;
  }
  return std::filesystem::path("hcisim_out") / c.experiment;
}

void print_listing(const std::vector<std::pair<std::string, std::vector<std::string>>>& entries) {
  for (const auto& [name, params] : entries) {
    std::cout << name << ':';
    for (const auto& p : params) std::cout << ' ' << p;
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::pair<std::string, std::string>> overrides;
  try {
    overrides = take_overrides(args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  CLI::App app{"hcisim: optimal-control models of interaction"};
  app.set_version_flag("--version", std::string(hcisim::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::vector<std::string> shapes;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--out,-o", out_flag, "Output directory");
  run->add_option("--shape", shapes, "Shape name (levitate); repeatable");
  run->add_option("--seed", seed, "Override the config seed");

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", config_path, "JSON config file")->required();
  validate->add_option("--shape", shapes, "Shape name (levitate); repeatable");
  validate->add_option("--seed", seed, "Override the config seed");

  auto* list_shapes = app.add_subcommand("list-shapes", "List built-in levitation shapes");
  auto* list_plants = app.add_subcommand("list-plants", "List built-in plants");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*list_shapes) {
    print_listing(hcisim::list_shapes());
    return 0;
  }
  if (*list_plants) {
    print_listing(hcisim::list_plants());
    return 0;
  }

  hcisim::ExperimentConfig config;
  try {
    config = hcisim::parse_config(load_config(config_path, overrides, shapes, seed));
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  }

  if (*validate) {
    std::cout << "ok: " << config.experiment << " (config hash "
              << hcisim::config_hash(config.normalized) << ")\n";
    return 0;
  }

  const auto dir = output_dir(out_flag, config);
  try {
    const auto summary = hcisim::run_experiment(config, dir);
    std::cout << config.experiment << ": wrote " << summary.files.size() << " files to "
              << dir.string() << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
