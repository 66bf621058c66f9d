// Copyright 2026 The qrs-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario configuration, dispatch and report serialization behind the
// qrs-sim command line tool.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrs/bell.hpp"

namespace qrs::cli {

enum class Scenario { kIntroMeasurement, kPairCorrelations, kBell, kBellAncilla, kChshScan };
enum class Format { kJson, kCsv };

std::string_view to_string(Scenario scenario);
std::string_view to_string(Format format);

// Residuals at or above this fail a run.
inline constexpr double kResidualLimit = 1e-10;

// chsh-scan sweeps delta over [start, stop] and evaluates the quadruple
// (0, 2 delta, delta, 3 delta). steps == 1 evaluates `start` only.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 1;
};

struct ScenarioSpec {
  Scenario scenario = Scenario::kBell;
  Complex a{std::numbers::sqrt2 / 2.0, 0.0};
  Complex b{std::numbers::sqrt2 / 2.0, 0.0};
  double theta1 = 0.0;
  double theta2 = std::numbers::pi / 2.0;
  bell::ChshAngles angles;
  std::optional<Grid> grid;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Format format = Format::kJson;
  std::optional<std::string> out;

  bell::ExperimentConfig experiment() const;
};

// Option name (without leading dashes) -> raw value. Keys match the config
// file keys: scenario, a, b, theta1, theta2, angles, grid, seed, samples,
// format, out.
using Settings = std::map<std::string, std::string>;

// Reads `key = value` lines; '#' starts a comment. Throws ConfigError with
// the file name and line number.
Settings read_config_file(const std::string& path);

// Merges file settings (if any) with flags, flags winning, and validates.
// Throws ConfigError naming the offending flag or file line, or
// NotNormalized for coefficients with |a|^2 + |b|^2 != 1.
ScenarioSpec parse_config(const Settings& flags, const std::optional<std::string>& config_path = {});

struct ReportTable {
  std::string kind;
  std::vector<std::size_t> shape;
  std::vector<double> values;  // row-major

  double sum() const;
};

struct ChshPoint {
  bell::ChshAngles angles;
  double entangled = 0.0;
  double factorized = 0.0;
};

struct Check {
  std::string name;
  double residual = 0.0;
  // Gated checks decide the exit status; the others are informational.
  bool gated = true;

  bool passed() const { return !gated || residual < kResidualLimit; }
};

struct RunReport {
  ScenarioSpec spec;
  std::vector<ReportTable> tables;
  std::vector<ChshPoint> chsh;
  std::vector<Check> checks;

  bool passed() const;
  std::vector<Check> failures() const;
};

RunReport run(const ScenarioSpec& spec);

void write_csv(const RunReport& report, std::ostream& out);
void write_json(const RunReport& report, std::ostream& out);
std::string render(const RunReport& report, Format format);
// Writes to `path`, throwing IoError if the file cannot be written.
void emit(const RunReport& report, Format format, const std::string& path);

}  // namespace qrs::cli
