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

// qrs-sim: runs one scenario and writes a CSV or JSON report.
//
// Exit status: 0 success, 1 invariant failure (or runtime error), 2 config
// error.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qrs/cli.hpp"
#include "qrs/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum reference-system simulator"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "Run a scenario and emit its report");

  std::map<std::string, std::string> values;
  const std::map<std::string, std::string> options{
      {"scenario", "intro-measurement | pair-correlations | bell | bell-ancilla | chsh-scan"},
      {"a", "coefficient a as re[,im] (c_1 = a)"},
      {"b", "coefficient b as re[,im] (c_2 = -b)"},
      {"theta1", "measurement angle of side 1, radians"},
      {"theta2", "measurement angle of side 2, radians"},
      {"angles", "CHSH quadruple a,a',b,b' in radians"},
      {"grid", "chsh-scan sweep start,stop,steps over delta"},
      {"seed", "sampling seed (default 0)"},
      {"samples", "number of samples to draw (default 0)"},
      {"format", "csv | json (default json)"},
      {"out", "output path (default stdout)"},
  };
  for (const auto& [name, help] : options) {
    run->add_option("--" + name, values[name], help);
  }
  std::optional<std::string> config_path;
  run->add_option("--config", config_path, "flat key = value config file; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  qrs::cli::Settings flags;
  for (const auto& [name, help] : options) {
    if (run->count("--" + name) > 0) {
      flags[name] = values[name];
    }
  }

  qrs::cli::ScenarioSpec spec;
  try {
    spec = qrs::cli::parse_config(flags, config_path);
  } catch (const qrs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qrs::NotNormalized& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const qrs::cli::RunReport report = qrs::cli::run(spec);
    if (spec.out) {
      qrs::cli::emit(report, spec.format, *spec.out);
    } else {
      std::cout << qrs::cli::render(report, spec.format);
    }
    if (!report.passed()) {
      for (const auto& c : report.failures()) {
        std::cerr << "invariant failure: " << c.name << " residual " << c.residual << " >= "
                  << qrs::cli::kResidualLimit << '\n';
      }
      return kExitInvariant;
    }
  } catch (const qrs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}
