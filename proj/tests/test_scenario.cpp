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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "rsl/errors.hpp"
#include "rsl/outputs.hpp"
#include "rsl/scenario.hpp"
#include "rsl/states.hpp"

using namespace rsl;
using nlohmann::json;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

json dephasing_config() {
  return {{"scenario", "dephasing"}, {"gamma", 1.0}, {"p", 0.5}, {"tau_list", {0.5, 1.0, 2.0}},
          {"grid_points", 401}};
}

std::string config_error_field(const json& j) {
  try {
    ScenarioConfig::from_json(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return {};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rsl-test-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("configuration errors name the offending key", "[scenario]") {
  CHECK(config_error_field({{"scenario", "amplitude"}, {"tau_list", {1.0}}}) == "scenario");
  auto j = dephasing_config();
  j["colour"] = "blue";
  CHECK(config_error_field(j) == "colour");
  j = dephasing_config();
  j["tau_list"] = json::array();
  CHECK(config_error_field(j) == "tau_list");
  j = dephasing_config();
  j["tau_list"] = {1.0, -1.0};
  CHECK(config_error_field(j) == "tau_list");
  j = dephasing_config();
  j["gamma"] = 0.0;
  CHECK(config_error_field(j) == "gamma");
  j = {{"scenario", "dephasing-nm"}, {"gamma", 1.0}, {"k", 0.5}, {"tau_list", {1.0}}};
  CHECK(config_error_field(j) == "k");
  j = dephasing_config();
  j["omega"] = 2.0;
  CHECK_FALSE(config_error_field(j).empty());
  j = dephasing_config();
  j["grid_points"] = 2;
  CHECK(config_error_field(j) == "grid_points");
  j = dephasing_config();
  j["framing"] = "sideways";
  CHECK(config_error_field(j) == "framing");
  CHECK(config_error_field(dephasing_config()).empty());
}

TEST_CASE("configurations round-trip through JSON", "[scenario]") {
  const auto config = ScenarioConfig::from_json(dephasing_config());
  const auto again = ScenarioConfig::from_json(config.to_json());
  CHECK(again.to_json() == config.to_json());
  CHECK(config.channel_spec().kind == ChannelKind::Dephasing);
  CHECK(max_norm_distance(config.initial(), werner_state(0.5)) < 1e-15);
  CHECK(config.free_state_oracle().kind() == FreeStateKind::WernerSeparable);
  const json serialized = config.to_json();
  for (const auto& key : serialized.items()) {
    CHECK(std::find(config_keys().begin(), config_keys().end(), key.key()) != config_keys().end());
  }
}

TEST_CASE("command-line overrides", "[scenario]") {
  json j = dephasing_config();
  apply_override(j, "gamma", "2.5");
  CHECK(j["gamma"] == 2.5);
  apply_override(j, "tau_list", "0.1,0.2");
  CHECK(j["tau_list"] == json({0.1, 0.2}));
  apply_override(j, "tau_list", "[1, 2]");
  CHECK(j["tau_list"] == json({1, 2}));
  apply_override(j, "initial_state", "bell");
  CHECK(j["initial_state"] == "bell");
  apply_override(j, "output_dir", "out/here");
  CHECK(j["output_dir"] == "out/here");
}

TEST_CASE("initial-state descriptors", "[scenario]") {
  CHECK(max_norm_distance(parse_initial_state("werner(0.3)"), werner_state(0.3)) < 1e-15);
  CHECK(max_norm_distance(parse_initial_state("bell"), bell_state<double>()) < 1e-15);
  CHECK(max_norm_distance(parse_initial_state("plus-y"), plus_y_state<double>()) < 1e-15);
  const auto d = parse_initial_state("diag(0.9, 0.1)");
  CHECK_THAT(d(0, 0).real(), WithinAbs(0.9, 1e-15));
  CHECK(parse_initial_state("random(3)", 7).dim() == 3);
  CHECK(max_norm_distance(parse_initial_state("random", 7), parse_initial_state("random", 7)) == 0.0);
  const json literal = {{{0.5, 0.0}, {0.0, -0.5}}, {{0.0, 0.5}, {0.5, 0.0}}};
  CHECK(max_norm_distance(parse_initial_state(literal), plus_y_state<double>()) < 1e-15);
  CHECK_THROWS(parse_initial_state("werner(1.5)"));
  CHECK_THROWS(parse_initial_state("diag(0.9, 0.2)"));
  CHECK_THROWS(parse_initial_state("ghz"));
}

TEST_CASE("dephasing scenario saturates the resource bound", "[scenario]") {
  const auto reports = run_scenario(ScenarioConfig::from_json(dephasing_config()));
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    CHECK_THAT(r.T_M / r.tau, WithinAbs(1.0, 1e-3));
    CHECK(r.quadrature_points == 401);
    CHECK_FALSE(r.T_g.has_value());
  }
  CHECK(reports[0].tau == 0.5);
  CHECK(reports[2].tau == 2.0);
}

TEST_CASE("thermal scenario", "[scenario]") {
  json j = {{"scenario", "thermal"}, {"omega", 4.0}, {"gamma", 2.0}, {"beta", 0.2},
            {"tau_list", {0.25, 1.0}}, {"framing", "degradation"}, {"grid_points", 401}};
  const auto config = ScenarioConfig::from_json(j);
  CHECK(config.free_state_oracle().kind() == FreeStateKind::Gibbs);
  const auto reports = run_scenario(config);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    CHECK(r.delta_M < 0.0);
    CHECK(r.T_M <= r.tau * (1 + 1e-5));
    CHECK(r.T_d.has_value());
    CHECK_FALSE(r.T_g.has_value());
  }
}

TEST_CASE("CSV and JSON outputs", "[scenario][outputs]") {
  BoundReport a;
  a.tau = 1.0;
  a.delta_M = -0.123456789012345;
  a.T_M = 0.75;
  a.T_tilde = kInfiniteBound;
  a.T_d = 0.5;
  a.quadrature_points = 1001;
  BoundReport b = a;
  b.tau = 2.0;
  b.T_g = 1.5;
  b.T_d.reset();
  const std::vector<BoundReport> reports = {a, b};

  const auto csv = results_csv(reports);
  std::istringstream lines(csv);
  std::string header, row1, row2, extra;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == kCsvHeader);
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(row1.find(",inf,") != std::string::npos);
  CHECK(row1.find("0.000000000000e+00,7.500000000000e-01") != std::string::npos);
  CHECK(row1.find(",,5.000000000000e-01,") != std::string::npos);  // empty T_g
  CHECK(row2.find("1.500000000000e+00,,") != std::string::npos);    // empty T_d

  const auto back = parse_results_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK_THAT(back[0].delta_M, WithinRel(a.delta_M, 1e-12));
  CHECK(std::isinf(back[0].T_tilde));
  CHECK_FALSE(back[0].T_g.has_value());
  CHECK(back[1].T_g == 1.5);
  CHECK(back[1].quadrature_points == 1001);

  const auto j = results_json(reports, {{"scenario", "dephasing"}});
  CHECK(j["reports"][0]["T_g"].is_null());
  CHECK(j["reports"][0]["T_tilde"] == "inf");
  CHECK(j["reports"][1]["T_g"] == 1.5);
  CHECK(j["config"]["scenario"] == "dephasing");

  const auto svg = bounds_svg(reports, "a <test>");
  CHECK(svg.starts_with("<svg"));
  CHECK(svg.find("a &lt;test&gt;") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
}

TEST_CASE("emitted files are deterministic", "[scenario][outputs]") {
  const auto config = ScenarioConfig::from_json(dephasing_config());
  const auto first = scratch_dir("first"), second = scratch_dir("second");
  emit_outputs(run_scenario(config), config.to_json(), first);
  emit_outputs(run_scenario(config), config.to_json(), second);
  for (const char* name : {"results.csv", "results.json", "bounds.svg"}) {
    INFO(name);
    REQUIRE(std::filesystem::exists(first / name));
    CHECK(slurp(first / name) == slurp(second / name));
  }
  const auto rows = parse_results_csv(slurp(first / "results.csv"));
  CHECK(rows.size() == 3);
  std::filesystem::remove_all(first);
  std::filesystem::remove_all(second);

  // A regular file where the directory should go.
  const auto blocker = scratch_dir("blocker");
  std::ofstream(blocker) << "x";
  const std::vector<BoundReport> one(1);
  CHECK_THROWS_AS(emit_outputs(one, json::object(), blocker / "sub"), std::runtime_error);
  std::filesystem::remove(blocker);
}

TEST_CASE("output directory override", "[scenario][outputs]") {
  ::setenv("RSL_OUTPUT_DIR", "/tmp/elsewhere", 1);
  CHECK(resolve_output_dir("results") == "/tmp/elsewhere");
  ::setenv("RSL_OUTPUT_DIR", "", 1);
  CHECK(resolve_output_dir("results") == "results");
  ::unsetenv("RSL_OUTPUT_DIR");
  CHECK(resolve_output_dir("results") == "results");
}

TEST_CASE("sweep expansion", "[scenario]") {
  const auto runs = expand_sweep(dephasing_config(), {{"gamma", {0.5, 1.0}}, {"p", {0.0, 0.25, 0.5}}});
  REQUIRE(runs.size() == 6);
  CHECK(runs[0]["gamma"] == 0.5);
  CHECK(runs[0]["p"] == 0.0);
  CHECK(runs[1]["p"] == 0.25);
  CHECK(runs[5]["gamma"] == 1.0);
  CHECK(runs[5]["p"] == 0.5);
  CHECK(runs[3]["tau_list"] == dephasing_config()["tau_list"]);
  CHECK(expand_sweep(dephasing_config(), {}).size() == 1);
}
