// Copyright 2026 The RSL Authors
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

// rsl: evaluate resource and quantum speed limits for a scenario.
//
//   rsl run --config scenario.json [--<key> <value>...]
//   rsl sweep --config scenario.json --axis gamma=0.1,1 --axis p=0,0.5
//   rsl verify --level fast|full

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rsl/acceptance.hpp"
#include "rsl/errors.hpp"
#include "rsl/outputs.hpp"
#include "rsl/scenario.hpp"

namespace {

using nlohmann::json;

constexpr int kUsageError = 2;

struct ConfigSource {
  std::string path;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigSource& source) {
  cmd->add_option("--config", source.path, "Scenario configuration (JSON)");
  for (const auto& key : rsl::config_keys()) {
    cmd->add_option_function<std::string>(
        "--" + key, [&source, key](const std::string& v) { source.overrides[key] = v; },
        "Override config key '" + key + "'");
  }
}

json load_config(const ConfigSource& source) {
  json config = json::object();
  if (!source.path.empty()) {
    std::ifstream in(source.path);
    if (!in) throw rsl::ConfigError("config", "cannot read " + source.path);
    config = json::parse(in, nullptr, false);
    if (config.is_discarded()) throw rsl::ConfigError("config", source.path + " is not valid JSON");
  }
  for (const auto& [key, value] : source.overrides) rsl::apply_override(config, key, value);
  return config;
}

std::filesystem::path run_one(const json& raw, const std::optional<std::filesystem::path>& dir) {
  const auto config = rsl::ScenarioConfig::from_json(raw);
  const auto reports = rsl::run_scenario(config);
  const auto out_dir = dir.value_or(rsl::resolve_output_dir(config.output_dir));
  rsl::emit_outputs(reports, config.to_json(), out_dir);
  for (const auto& r : reports) {
    for (const auto& d : r.diagnostics) {
      std::cerr << "tau=" << rsl::format_number(r.tau) << ": " << d << '\n';
    }
  }
  return out_dir;
}

int run(const ConfigSource& source) {
  const auto dir = run_one(load_config(source), std::nullopt);
  std::cout << "wrote " << (dir / "results.csv").string() << ", results.json, bounds.svg\n";
  return 0;
}

int sweep(const ConfigSource& source, const std::vector<std::string>& axis_specs) {
  json base = load_config(source);
  std::map<std::string, std::vector<json>> axes;
  if (base.contains("sweep")) {
    for (const auto& [key, values] : base["sweep"].items()) {
      if (!values.is_array()) throw rsl::ConfigError("sweep." + key, "expected an array");
      axes[key] = values.get<std::vector<json>>();
    }
    base.erase("sweep");
  }
  for (const auto& spec : axis_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw rsl::ConfigError("axis", "expected key=v1,v2,..., got " + spec);
    json holder = json::object();
    rsl::apply_override(holder, spec.substr(0, eq), spec.substr(eq + 1));
    const json& v = holder.begin().value();
    axes[spec.substr(0, eq)] = v.is_array() ? v.get<std::vector<json>>() : std::vector<json>{v};
  }
  if (axes.empty()) throw rsl::ConfigError("axis", "sweep needs at least one axis");

  const auto configs = rsl::expand_sweep(base, axes);
  // Validate everything before writing anything.
  std::vector<rsl::ScenarioConfig> parsed;
  for (const auto& c : configs) parsed.push_back(rsl::ScenarioConfig::from_json(c));
  const auto root = rsl::resolve_output_dir(parsed.front().output_dir);

  std::string index = "run";
  for (const auto& [key, values] : axes) index += "," + key;
  index += '\n';
  for (std::size_t i = 0; i < configs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    run_one(configs[i], root / name);
    index += name;
    for (const auto& [key, values] : axes) index += "," + configs[i][key].dump();
    index += '\n';
  }
  std::ofstream(root / "sweep.csv") << index;
  std::cout << "wrote " << configs.size() << " runs under " << root.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource and quantum speed limits for small open quantum systems"};
  app.require_subcommand(1);

  ConfigSource run_source;
  auto* run_cmd = app.add_subcommand("run", "Evaluate the bounds for one scenario");
  add_config_options(run_cmd, run_source);

  ConfigSource sweep_source;
  std::vector<std::string> axes;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a cartesian grid of scenarios");
  add_config_options(sweep_cmd, sweep_source);
  sweep_cmd->add_option("--axis", axes, "Sweep axis as key=v1,v2,... (repeatable)");

  std::string level = "fast";
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  verify_cmd->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(run_source);
    if (*sweep_cmd) return sweep(sweep_source, axes);
    return rsl::verify_suite(rsl::verify_level_from_string(level), std::cout);
  } catch (const rsl::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
