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

#include "rsl/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsl {

using nlohmann::json;

namespace {

constexpr std::size_t kColumns = 12;

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

double parse_number(const std::string& field) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw std::invalid_argument("bad CSV number '" + field + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json json_optional(const std::optional<double>& v) {
  return v ? json_number(*v) : json(nullptr);
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", value);
  return buf;
}

std::string results_csv(std::span<const BoundReport> reports) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : reports) {
    const std::string fields[kColumns] = {
        format_number(r.tau),     format_number(r.delta_M), format_number(r.delta_S),
        format_number(r.T_M),     format_number(r.T_tilde), format_number(r.T_qsl),
        optional_number(r.T_g),   optional_number(r.T_d),   format_number(r.x_M),
        format_number(r.x_tilde), format_number(r.epsilon_used),
        std::to_string(r.quadrature_points)};
    for (std::size_t i = 0; i < kColumns; ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<BoundReport> parse_results_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("results CSV has an unexpected header");
  }
  std::vector<BoundReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != kColumns) throw std::invalid_argument("results CSV row has wrong arity");
    BoundReport r;
    r.tau = parse_number(f[0]);
    r.delta_M = parse_number(f[1]);
    r.delta_S = parse_number(f[2]);
    r.T_M = parse_number(f[3]);
    r.T_tilde = parse_number(f[4]);
    r.T_qsl = parse_number(f[5]);
    if (!f[6].empty()) r.T_g = parse_number(f[6]);
    if (!f[7].empty()) r.T_d = parse_number(f[7]);
    r.x_M = parse_number(f[8]);
    r.x_tilde = parse_number(f[9]);
    r.epsilon_used = parse_number(f[10]);
    r.quadrature_points = std::stoul(f[11]);
    out.push_back(std::move(r));
  }
  return out;
}

json results_json(std::span<const BoundReport> reports, const json& config) {
  json rows = json::array();
  for (const auto& r : reports) {
    rows.push_back({{"tau", json_number(r.tau)},
                    {"delta_M", json_number(r.delta_M)},
                    {"delta_S", json_number(r.delta_S)},
                    {"T_M", json_number(r.T_M)},
                    {"T_tilde", json_number(r.T_tilde)},
                    {"T_qsl", json_number(r.T_qsl)},
                    {"T_g", json_optional(r.T_g)},
                    {"T_d", json_optional(r.T_d)},
                    {"x_M", json_number(r.x_M)},
                    {"x_tilde", json_number(r.x_tilde)},
                    {"epsilon_used", json_number(r.epsilon_used)},
                    {"quadrature_points", r.quadrature_points},
                    {"diagnostics", r.diagnostics}});
  }
  return {{"config", config}, {"reports", rows}};
}

std::string bounds_svg(std::span<const BoundReport> reports, std::string_view title) {
  struct Series {
    const char* name;
    const char* colour;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Series> series = {{"T_M", "#1f77b4", {}},   {"T_tilde", "#d62728", {}},
                                {"T_qsl", "#2ca02c", {}}, {"T_g", "#9467bd", {}},
                                {"T_d", "#8c564b", {}}};
  std::vector<BoundReport> sorted(reports.begin(), reports.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.tau < b.tau; });
  double tau_max = 0.0;
  double y_max = 0.0;
  for (const auto& r : sorted) {
    tau_max = std::max(tau_max, r.tau);
    const std::optional<double> values[] = {r.T_M, r.T_tilde, r.T_qsl, r.T_g, r.T_d};
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (values[s] && std::isfinite(*values[s])) {
        series[s].points.emplace_back(r.tau, *values[s]);
        y_max = std::max(y_max, *values[s]);
      }
    }
  }
  y_max = std::max(y_max, tau_max);
  if (!(tau_max > 0.0)) tau_max = 1.0;
  if (!(y_max > 0.0)) y_max = 1.0;
  y_max *= 1.05;

  constexpr double width = 640, height = 480, left = 70, right = 150, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  const auto px = [&](double x) { return left + pw * x / tau_max; };
  const auto py = [&](double y) { return top + ph * (1.0 - y / y_max); };
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << width << R"(" height=")"
      << height << R"(" viewBox="0 0 )" << width << ' ' << height
      << R"(" font-family="sans-serif" font-size="12">)" << '\n';
  svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  if (!title.empty()) {
    svg << R"(<text x=")" << fmt(left + pw / 2) << R"(" y="24" text-anchor="middle">)"
        << escape_xml(title) << "</text>\n";
  }
  svg << R"(<rect x=")" << left << R"(" y=")" << top << R"(" width=")" << pw << R"(" height=")"
      << ph << R"(" fill="none" stroke="black"/>)" << '\n';
  for (int i = 0; i <= 5; ++i) {
    const double xv = tau_max * i / 5.0, yv = y_max * i / 5.0;
    svg << R"(<text x=")" << fmt(px(xv)) << R"(" y=")" << fmt(top + ph + 18)
        << R"(" text-anchor="middle">)" << fmt(xv) << "</text>\n";
    svg << R"(<text x=")" << fmt(left - 6) << R"(" y=")" << fmt(py(yv) + 4)
        << R"(" text-anchor="end">)" << fmt(yv) << "</text>\n";
  }
  svg << R"(<text x=")" << fmt(left + pw / 2) << R"(" y=")" << fmt(height - 16)
      << R"(" text-anchor="middle">tau</text>)" << '\n';
  svg << R"(<text x="18" y=")" << fmt(top + ph / 2) << R"(" text-anchor="middle" transform="rotate(-90 18 )"
      << fmt(top + ph / 2) << R"x()">bound</text>)x" << '\n';

  svg << R"(<line x1=")" << fmt(px(0)) << R"(" y1=")" << fmt(py(0)) << R"(" x2=")"
      << fmt(px(tau_max)) << R"(" y2=")" << fmt(py(tau_max))
      << R"(" stroke="gray" stroke-dasharray="6 4"/>)" << '\n';
  double legend_y = top + 10;
  svg << R"(<line x1=")" << fmt(width - right + 12) << R"(" y1=")" << fmt(legend_y) << R"(" x2=")"
      << fmt(width - right + 36) << R"(" y2=")" << fmt(legend_y)
      << R"(" stroke="gray" stroke-dasharray="6 4"/>)"
      << R"(<text x=")" << fmt(width - right + 42) << R"(" y=")" << fmt(legend_y + 4)
      << R"(">tau</text>)" << '\n';
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    svg << R"(<polyline fill="none" stroke=")" << s.colour << R"(" stroke-width="1.5" points=")";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      svg << (i ? " " : "") << fmt(px(s.points[i].first)) << ',' << fmt(py(s.points[i].second));
    }
    svg << R"("/>)" << '\n';
    for (const auto& [x, y] : s.points) {
      svg << R"(<circle cx=")" << fmt(px(x)) << R"(" cy=")" << fmt(py(y)) << R"(" r="2.5" fill=")"
          << s.colour << R"("/>)" << '\n';
    }
    legend_y += 18;
    svg << R"(<line x1=")" << fmt(width - right + 12) << R"(" y1=")" << fmt(legend_y)
        << R"(" x2=")" << fmt(width - right + 36) << R"(" y2=")" << fmt(legend_y)
        << R"(" stroke=")" << s.colour << R"(" stroke-width="1.5"/>)"
        << R"(<text x=")" << fmt(width - right + 42) << R"(" y=")" << fmt(legend_y + 4) << R"(">)"
        << s.name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::filesystem::path resolve_output_dir(const std::string& configured) {
  const char* env = std::getenv("RSL_OUTPUT_DIR");
  if (env && *env) return env;
  return configured;
}

void emit_outputs(std::span<const BoundReport> reports, const json& config,
                  const std::filesystem::path& dir) {
  if (reports.empty()) throw std::invalid_argument("emit_outputs: no reports");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "results.csv", results_csv(reports));
  write_file(dir / "results.json", results_json(reports, config).dump(2) + "\n");
  std::string title;
  if (config.contains("scenario") && config["scenario"].is_string()) {
    title = config["scenario"].get<std::string>();
  }
  write_file(dir / "bounds.svg", bounds_svg(reports, title));
}

}  // namespace rsl
