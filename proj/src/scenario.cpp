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

#include "rsl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "rsl/errors.hpp"
#include "rsl/states.hpp"

namespace rsl {

using nlohmann::json;

namespace {

const std::set<std::string> kScenarios = {"dephasing",    "dephasing-nm", "depolarising",
                                          "depolarising-nm", "thermal",  "custom"};

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<Modulation> kModulations[] = {{Modulation::Oscillating, "oscillating"},
                                                 {Modulation::Printed, "printed"}};
constexpr EnumName<ThermalOccupation> kOccupations[] = {
    {ThermalOccupation::DetailedBalance, "detailed-balance"},
    {ThermalOccupation::AsWritten, "as-written"}};
constexpr EnumName<GridSpacing> kSpacings[] = {{GridSpacing::Graded, "graded"},
                                               {GridSpacing::Uniform, "uniform"}};
constexpr EnumName<QuadratureRule> kRules[] = {{QuadratureRule::Simpson, "simpson"},
                                               {QuadratureRule::Trapezoid, "trapezoid"}};
constexpr EnumName<Framing> kFramings[] = {{Framing::None, "none"},
                                           {Framing::Generation, "generation"},
                                           {Framing::Degradation, "degradation"},
                                           {Framing::Both, "both"}};

template <typename Enum, std::size_t N>
Enum enum_from(const EnumName<Enum> (&table)[N], const std::string& field, const json& value) {
  if (value.is_string()) {
    for (const auto& e : table) {
      if (value.get<std::string>() == e.name) return e.value;
    }
  }
  std::string allowed;
  for (const auto& e : table) allowed += std::string(allowed.empty() ? "" : ", ") + e.name;
  throw ConfigError(field, "expected one of {" + allowed + "}, got " + value.dump());
}

template <typename Enum, std::size_t N>
std::string enum_name(const EnumName<Enum> (&table)[N], Enum value) {
  for (const auto& e : table) {
    if (e.value == value) return e.name;
  }
  return "?";
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number, got " + j.dump());
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

std::uint64_t natural(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(field, "expected a non-negative integer, got " + j.dump());
  }
  return j.get<std::uint64_t>();
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

std::vector<double> parse_arguments(const std::string& args) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument("bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

DensityMatrixd random_state(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrixd g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = {normal(rng), normal(rng)};
  }
  const ComplexMatrixd m = g * g.adjoint();
  std::vector<Index> dims;
  if (dim == 4) dims = {2, 2};
  return DensityMatrixd(ComplexMatrixd(m / m.trace().real()), dims);
}

DensityMatrixd matrix_literal(const json& rows) {
  const auto n = static_cast<Index>(rows.size());
  ComplexMatrixd m(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw std::invalid_argument("matrix literal must be square");
    }
    for (Index j = 0; j < n; ++j) {
      const json& e = row[static_cast<std::size_t>(j)];
      if (e.is_number()) {
        m(i, j) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, j) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw std::invalid_argument("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  std::vector<Index> dims;
  if (n == 4) dims = {2, 2};
  return DensityMatrixd(m, dims);
}

bool werner_scenario(const std::string& channel) { return channel != "thermal"; }

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "scenario", "channel",    "gamma",      "k",       "p",         "omega",
      "beta",     "initial_state", "oracle",  "tau_list", "grid_points", "epsilon",
      "floor",    "output_dir", "seed",       "modulation", "occupation", "spacing",
      "quadrature", "substeps", "framing"};
  return keys;
}

DensityMatrixd parse_initial_state(const json& descriptor, std::uint64_t seed) {
  if (descriptor.is_array()) return matrix_literal(descriptor);
  if (!descriptor.is_string()) {
    throw std::invalid_argument("initial state must be a string or a matrix literal");
  }
  const std::string s = descriptor.get<std::string>();
  if (s == "bell") return bell_state<double>();
  if (s == "plus-y") return plus_y_state<double>();
  if (s == "random") return random_state(2, seed);

  static const std::regex call(R"(\s*([a-z]+)\s*\((.*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, call)) throw std::invalid_argument("unknown initial state '" + s + "'");
  const std::string name = m[1];
  const std::vector<double> args = parse_arguments(m[2]);
  if (name == "werner" && args.size() == 1) return werner_state(args[0]);
  if (name == "random" && args.size() == 1 && args[0] >= 1 && args[0] == std::floor(args[0])) {
    return random_state(static_cast<Index>(args[0]), seed);
  }
  if (name == "diag" && !args.empty()) {
    RealVector<double> p(static_cast<Index>(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i) p(static_cast<Index>(i)) = args[i];
    std::vector<Index> dims;
    if (args.size() == 4) dims = {2, 2};
    return DensityMatrixd::diagonal(p, dims);
  }
  throw std::invalid_argument("unknown initial state '" + s + "'");
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, "unknown key");
    }
  }

  ScenarioConfig c;
  if (!j.contains("scenario")) throw ConfigError("scenario", "missing");
  c.scenario = text(j["scenario"], "scenario");
  if (!kScenarios.contains(c.scenario)) {
    throw ConfigError("scenario", "unknown scenario '" + c.scenario + "'");
  }
  if (j.contains("channel")) c.channel = text(j["channel"], "channel");
  if (c.scenario == "custom") {
    if (!c.channel) throw ConfigError("channel", "required for scenario 'custom'");
    try {
      channel_kind_from_string(*c.channel);
    } catch (const std::exception& e) {
      throw ConfigError("channel", e.what());
    }
  } else if (c.channel && *c.channel != c.scenario) {
    throw ConfigError("channel", "only allowed with scenario 'custom'");
  }
  const std::string kind = c.channel.value_or(c.scenario);

  if (j.contains("gamma")) c.gamma = number(j["gamma"], "gamma");
  if (j.contains("k")) c.k = number(j["k"], "k");
  if (j.contains("p")) c.p = number(j["p"], "p");
  if (j.contains("omega")) c.omega = number(j["omega"], "omega");
  if (j.contains("beta")) c.beta = number(j["beta"], "beta");
  if (j.contains("initial_state")) c.initial_state = j["initial_state"];
  if (j.contains("oracle")) c.oracle = text(j["oracle"], "oracle");
  if (j.contains("grid_points")) c.grid_points = natural(j["grid_points"], "grid_points");
  if (j.contains("epsilon")) c.epsilon = number(j["epsilon"], "epsilon");
  if (j.contains("floor")) c.floor = number(j["floor"], "floor");
  if (j.contains("output_dir")) c.output_dir = text(j["output_dir"], "output_dir");
  if (j.contains("seed")) c.seed = natural(j["seed"], "seed");
  if (j.contains("modulation")) c.modulation = enum_from(kModulations, "modulation", j["modulation"]);
  if (j.contains("occupation")) c.occupation = enum_from(kOccupations, "occupation", j["occupation"]);
  if (j.contains("spacing")) c.spacing = enum_from(kSpacings, "spacing", j["spacing"]);
  if (j.contains("quadrature")) c.quadrature = enum_from(kRules, "quadrature", j["quadrature"]);
  if (j.contains("substeps")) c.substeps = natural(j["substeps"], "substeps");
  if (j.contains("framing")) c.framing = enum_from(kFramings, "framing", j["framing"]);

  if (!j.contains("tau_list")) throw ConfigError("tau_list", "missing");
  const json& taus = j["tau_list"];
  if (taus.is_number()) {
    c.tau_list = {number(taus, "tau_list")};
  } else if (taus.is_array()) {
    for (const auto& t : taus) c.tau_list.push_back(number(t, "tau_list"));
  } else {
    throw ConfigError("tau_list", "expected a number or an array of numbers");
  }
  if (c.tau_list.empty()) throw ConfigError("tau_list", "must not be empty");
  for (double t : c.tau_list) {
    if (!(t > 0.0)) throw ConfigError("tau_list", "durations must be > 0");
  }

  const bool non_monotonic = kind.ends_with("-nm");
  const bool thermal = kind == "thermal";
  if (!(c.gamma > 0.0)) throw ConfigError("gamma", "must be > 0");
  if (non_monotonic && !c.k) throw ConfigError("k", "required for non-monotonic channels");
  if (!non_monotonic && c.k) throw ConfigError("k", "only allowed for non-monotonic channels");
  if (non_monotonic && !(*c.k > c.gamma)) throw ConfigError("k", "must exceed gamma");
  for (auto [field, value] : {std::pair{"omega", &c.omega}, std::pair{"beta", &c.beta}}) {
    if (thermal && !*value) throw ConfigError(field, "required for the thermal channel");
    if (!thermal && *value) throw ConfigError(field, "only allowed for the thermal channel");
    if (thermal && !(**value > 0.0)) throw ConfigError(field, "must be > 0");
  }
  if (c.p) {
    if (thermal) throw ConfigError("p", "not used by the thermal channel");
    if (!c.initial_state.is_null()) throw ConfigError("p", "conflicts with initial_state");
    if (!(*c.p >= 0.0 && *c.p <= 1.0)) throw ConfigError("p", "must lie in [0, 1]");
  }
  if (c.grid_points < 3) throw ConfigError("grid_points", "must be >= 3");
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1e-3)) throw ConfigError("epsilon", "must lie in [0, 1e-3]");
  if (!(c.floor > 0.0 && c.floor <= kMaxLogFloor)) throw ConfigError("floor", "must lie in (0, 1e-6]");
  if (c.substeps < 1) throw ConfigError("substeps", "must be >= 1");

  DensityMatrixd rho0;
  try {
    rho0 = c.initial();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("initial_state", e.what());
  }
  try {
    if (thermal && rho0.dim() != 2) throw std::invalid_argument("thermal channel needs a qubit state");
    c.channel_spec().validate();
  } catch (const std::exception& e) {
    throw ConfigError("initial_state", e.what());
  }
  FreeStateOracle oracle = FreeStateOracle::incoherent();
  try {
    oracle = c.free_state_oracle();
  } catch (const std::exception& e) {
    throw ConfigError("oracle", e.what());
  }
  if (!oracle.supports(rho0)) {
    throw ConfigError("oracle", oracle.name() + " does not support the initial state");
  }
  return c;
}

json ScenarioConfig::to_json() const {
  json j;
  j["scenario"] = scenario;
  if (channel) j["channel"] = *channel;
  j["gamma"] = gamma;
  if (k) j["k"] = *k;
  if (p) j["p"] = *p;
  if (omega) j["omega"] = *omega;
  if (beta) j["beta"] = *beta;
  if (!initial_state.is_null()) j["initial_state"] = initial_state;
  if (!oracle.empty()) j["oracle"] = oracle;
  j["tau_list"] = tau_list;
  j["grid_points"] = grid_points;
  j["epsilon"] = epsilon;
  j["floor"] = floor;
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  j["modulation"] = enum_name(kModulations, modulation);
  j["occupation"] = enum_name(kOccupations, occupation);
  j["spacing"] = enum_name(kSpacings, spacing);
  j["quadrature"] = enum_name(kRules, quadrature);
  j["substeps"] = substeps;
  j["framing"] = enum_name(kFramings, framing);
  return j;
}

ChannelSpec ScenarioConfig::channel_spec() const {
  ChannelSpec spec;
  spec.kind = channel_kind_from_string(channel.value_or(scenario));
  spec.gamma = gamma;
  spec.k = k.value_or(0.0);
  spec.omega = omega.value_or(0.0);
  spec.beta = beta.value_or(0.0);
  spec.modulation = modulation;
  spec.occupation = occupation;
  return spec;
}

DensityMatrixd ScenarioConfig::initial() const {
  if (!initial_state.is_null()) return parse_initial_state(initial_state, seed);
  const std::string kind = channel.value_or(scenario);
  if (kind == "thermal") return plus_y_state<double>();
  if (p) return werner_state(*p);
  throw ConfigError("initial_state", "missing (give initial_state or p)");
}

FreeStateOracle ScenarioConfig::free_state_oracle() const {
  std::string name = oracle;
  const std::string kind = channel.value_or(scenario);
  if (name.empty()) {
    if (kind == "thermal") {
      name = "gibbs";
    } else {
      name = werner_scenario(kind) && in_werner_family(initial()) ? "werner-separable"
                                                                  : "incoherent";
    }
  }
  if (name == "incoherent") return FreeStateOracle::incoherent();
  if (name == "werner-separable") return FreeStateOracle::werner_separable();
  if (name == "gibbs") {
    if (!omega || !beta) throw std::invalid_argument("gibbs oracle needs omega and beta");
    return FreeStateOracle::gibbs(*omega, *beta);
  }
  throw std::invalid_argument("unknown oracle '" + name + "'");
}

GridOptions ScenarioConfig::grid_options() const {
  return {.points = grid_points, .spacing = spacing, .rule = quadrature, .substeps = substeps};
}

BoundOptions ScenarioConfig::bound_options() const {
  return {.floor = floor, .epsilon = epsilon, .framing = framing};
}

void apply_override(json& config, const std::string& key, const std::string& value) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError(key, "unknown key");
  }
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded() && value.find(',') != std::string::npos) {
    parsed = json::parse("[" + value + "]", nullptr, false);
  }
  config[key] = parsed.is_discarded() ? json(value) : parsed;
}

std::vector<BoundReport> run_scenario(const ScenarioConfig& config) {
  const ChannelSpec channel = config.channel_spec();
  const DensityMatrixd rho0 = config.initial();
  const FreeStateOracle oracle = config.free_state_oracle();
  const GridOptions grid = config.grid_options();
  const BoundOptions options = config.bound_options();

  std::vector<std::future<BoundReport>> jobs;
  jobs.reserve(config.tau_list.size());
  for (double tau : config.tau_list) {
    jobs.push_back(std::async(std::launch::async, [&, tau] {
      try {
        return evaluate_bounds(make_trajectory(channel, rho0, tau, grid), oracle, options);
      } catch (const IntegrationFailure& e) {
        std::ostringstream msg;
        msg << "scenario " << config.scenario << ", tau = " << tau << ": " << e.what();
        throw IntegrationFailure(msg.str());
      }
    }));
  }
  std::vector<BoundReport> reports;
  reports.reserve(jobs.size());
  for (auto& job : jobs) reports.push_back(job.get());
  return reports;
}

std::vector<json> expand_sweep(const json& base,
                               const std::map<std::string, std::vector<json>>& axes) {
  std::vector<json> out{base};
  for (const auto& [key, values] : axes) {
    if (values.empty()) throw ConfigError(key, "sweep axis has no values");
    std::vector<json> next;
    next.reserve(out.size() * values.size());
    for (const auto& partial : out) {
      for (const auto& v : values) {
        json c = partial;
        c[key] = v;
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace rsl
