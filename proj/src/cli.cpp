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

#include "qrs/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "qrs/errors.hpp"

namespace qrs::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Setting {
  std::string value;
  std::string origin;  // "--theta1" or "file.cfg:3"
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    out.push_back(trim(item));
  }
  if (!s.empty() && s.back() == sep) {
    out.emplace_back();
  }
  return out;
}

double parse_double(const Setting& s) {
  const std::string text = trim(s.value);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(s.origin + ": expected a number, got '" + s.value + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const Setting& s) {
  const std::string text = trim(s.value);
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(s.origin + ": expected a non-negative integer, got '" + s.value + "'");
  }
  return value;
}

double parse_angle(const Setting& s) {
  const std::string text = trim(s.value);
  if (text.find("deg") != std::string::npos || text.find("\xC2\xB0") != std::string::npos) {
    throw ConfigError(s.origin + ": angles are given in radians; convert degrees with x*pi/180");
  }
  const double value = parse_double(s);
  if (std::abs(value) > kTwoPi + 1e-12) {
    throw ConfigError(s.origin + ": angle " + text +
                      " exceeds 2*pi; angles are given in radians, not degrees");
  }
  return value;
}

Complex parse_complex(const Setting& s) {
  const auto parts = split(s.value, ',');
  if (parts.empty() || parts.size() > 2) {
    throw ConfigError(s.origin + ": expected re[,im], got '" + s.value + "'");
  }
  const double re = parse_double({parts[0], s.origin});
  const double im = parts.size() == 2 ? parse_double({parts[1], s.origin}) : 0.0;
  return {re, im};
}

Scenario parse_scenario(const Setting& s) {
  const std::string name = trim(s.value);
  if (name == "intro-measurement") return Scenario::kIntroMeasurement;
  if (name == "pair-correlations") return Scenario::kPairCorrelations;
  if (name == "bell") return Scenario::kBell;
  if (name == "bell-ancilla") return Scenario::kBellAncilla;
  if (name == "chsh-scan") return Scenario::kChshScan;
  throw ConfigError(s.origin + ": unknown scenario '" + name +
                    "' (expected intro-measurement, pair-correlations, bell, bell-ancilla or "
                    "chsh-scan)");
}

Format parse_format(const Setting& s) {
  const std::string name = trim(s.value);
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  throw ConfigError(s.origin + ": format must be csv or json, got '" + name + "'");
}

bool known_key(std::string_view key) {
  static constexpr std::array<std::string_view, 11> keys{
      "scenario", "a", "b", "theta1", "theta2", "angles", "grid", "seed", "samples", "format", "out"};
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::map<std::string, Setting> read_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path + ": cannot open config file");
  }
  std::map<std::string, Setting> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = path + ":" + std::to_string(number);
    const auto hash = line.find('#');
    const std::string content = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (content.empty()) {
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const std::string key = trim(content.substr(0, eq));
    if (!known_key(key)) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    out[key] = {trim(content.substr(eq + 1)), where};
  }
  return out;
}

// Shortest decimal representation that round-trips.
std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

ReportTable table_from(std::string kind, const bell::CorrelationTable& t) {
  return {std::move(kind), {2, 2}, {t.p[0][0], t.p[0][1], t.p[1][0], t.p[1][1]}};
}

ReportTable table_from(std::string kind, const JointDistribution& t) {
  std::vector<std::size_t> shape;
  for (const auto& axis : t.axes()) {
    shape.push_back(axis.count);
  }
  return {std::move(kind), std::move(shape), t.values()};
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double out = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out = std::max(out, std::abs(x[i] - y[i]));
  }
  return out;
}

void add_sampling(RunReport& report, const JointDistribution& table, const ScenarioSpec& spec) {
  if (spec.samples == 0) {
    return;
  }
  AssignmentSampler sampler(table, spec.seed);
  std::vector<double> counts(table.values().size(), 0.0);
  for (std::size_t s = 0; s < spec.samples; ++s) {
    counts[table.flat_index(sampler.draw())] += 1.0;
  }
  const auto n = static_cast<double>(spec.samples);
  double max_z = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p = table.values()[i];
    const double f = counts[i] / n;
    counts[i] = f;
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    if (sigma > 0.0) {
      max_z = std::max(max_z, std::abs(f - p) / sigma);
    } else if (f != p) {
      max_z = std::numeric_limits<double>::infinity();
    }
  }
  std::vector<std::size_t> shape;
  for (const auto& axis : table.axes()) {
    shape.push_back(axis.count);
  }
  report.tables.push_back({"empirical", std::move(shape), std::move(counts)});
  report.checks.push_back({"sampling_max_z", max_z, false});
}

void run_intro(RunReport& report) {
  const ScenarioSpec& spec = report.spec;
  const StateVector psi = bell::single_measurement_state(spec.a, spec.b, spec.theta1);
  const ReferenceSystem whole(psi, true);
  const DensityOperator rho = state_of({"M"}, whole);

  std::vector<double> diagonal(3);
  double offdiagonal = 0.0;
  for (Eigen::Index r = 0; r < 3; ++r) {
    diagonal[static_cast<std::size_t>(r)] = rho.matrix()(r, r).real();
    for (Eigen::Index c = 0; c < 3; ++c) {
      if (r != c) {
        offdiagonal = std::max(offdiagonal, std::abs(rho.matrix()(r, c)));
      }
    }
  }
  // |<xi_j|psi>|^2 along the measured axis
  const auto [xi1, xi2] = bell::spin_eigenstates(spec.theta1, "P");
  Vector particle(2);
  particle << spec.a, spec.b;
  const StateVector initial(bell::spin_space("P"), particle);
  const std::vector<double> expected{0.0, std::norm(xi1.inner(initial)),
                                     std::norm(xi2.inner(initial))};

  const std::vector<CandidateBasis> readout{bell::outcome_basis(whole, "M")};
  const JointDistribution marginal = joint_distribution(std::span<const CandidateBasis>(readout), whole);

  report.tables.push_back({"rho_M_diagonal", {3}, diagonal});
  report.tables.push_back(table_from("device_marginal", marginal));
  report.checks.push_back({"rho_M_offdiagonal", offdiagonal, true});
  report.checks.push_back({"rho_M_vs_closed_form", max_abs_diff(diagonal, expected), true});
  report.checks.push_back({"norm_final_state", std::abs(psi.norm() - 1.0), true});
  add_sampling(report, marginal, spec);
}

void run_pair(RunReport& report) {
  const ScenarioSpec& spec = report.spec;
  const ReferenceSystem pair(bell::entangled_pair_state(spec.experiment()), true);
  const std::vector<CandidateBasis> bases{
      candidate_basis({bell::kParticle1}, pair,
                      {bell::pair_basis_state(0, 0), bell::pair_basis_state(0, 1)}),
      candidate_basis({bell::kParticle2}, pair,
                      {bell::pair_basis_state(1, 0), bell::pair_basis_state(1, 1)})};
  const JointDistribution table = joint_distribution(std::span<const CandidateBasis>(bases), pair);
  const std::vector<double> expected{std::norm(spec.a), 0.0, 0.0, std::norm(spec.b)};

  report.tables.push_back(table_from("pair", table));
  report.checks.push_back({"pair_vs_closed_form", max_abs_diff(table.values(), expected), true});
  add_sampling(report, table, spec);
}

void run_bell(RunReport& report) {
  const ScenarioSpec& spec = report.spec;
  const bell::ExperimentConfig config = spec.experiment();
  const StateVector final_state = bell::evolve_experiment(config);
  const auto entangled = bell::correlation_entangled(config);
  const auto factorized = bell::correlation_factorized(config);
  const auto direct = bell::correlation_postulate_c(config);

  report.tables.push_back(table_from("entangled", entangled));
  report.tables.push_back(table_from("factorized", factorized));
  report.tables.push_back(table_from("postulate_c", direct));
  double marginal_residual = 0.0;
  for (std::size_t side = 0; side < 2; ++side) {
    const auto from_state = bell::device_marginal(final_state, side);
    const auto closed = bell::device_marginal(config, side);
    report.tables.push_back({"marginal_" + std::to_string(side + 1), {2},
                             {from_state[0], from_state[1]}});
    marginal_residual = std::max({marginal_residual, std::abs(from_state[0] - closed[0]),
                                  std::abs(from_state[1] - closed[1])});
  }
  report.checks.push_back(
      {"route_residual", max_abs_diff(table_from("", entangled).values, table_from("", direct).values),
       true});
  report.checks.push_back({"marginal_residual", marginal_residual, true});
  report.checks.push_back({"norm_final_state", std::abs(final_state.norm() - 1.0), true});

  if (spec.samples > 0) {
    const ReferenceSystem isolated(final_state, true);
    const std::vector<CandidateBasis> bases{bell::outcome_basis(isolated, bell::kDevice1),
                                            bell::outcome_basis(isolated, bell::kDevice2)};
    add_sampling(report, joint_distribution(std::span<const CandidateBasis>(bases), isolated), spec);
  }
}

void run_bell_ancilla(RunReport& report) {
  const ScenarioSpec& spec = report.spec;
  bell::ExperimentConfig config = spec.experiment();
  config.ancilla = true;
  const StateVector final_state = bell::ancilla_experiment(config);
  const JointDistribution n4 = bell::ancilla_joint_distribution(config);
  const auto intuitive = bell::intuitive_joint(config);
  const auto collapsed = bell::correlation_postulate_c(config);
  const auto factorized = bell::correlation_factorized(config);
  const auto entangled = bell::correlation_entangled(config);

  const std::vector<double> intuitive_values(intuitive.values.begin(), intuitive.values.end());
  report.tables.push_back(table_from("postulate_c_n4", n4));
  report.tables.push_back({"intuitive", {2, 2, 2, 2}, intuitive_values});
  report.tables.push_back(table_from("collapsed", collapsed));
  report.tables.push_back(table_from("factorized", factorized));
  report.tables.push_back(table_from("entangled", entangled));

  const auto collapsed_values = table_from("", collapsed).values;
  report.checks.push_back({"n4_vs_intuitive", max_abs_diff(n4.values(), intuitive_values), true});
  report.checks.push_back({"collapsed_vs_factorized",
                           max_abs_diff(collapsed_values, table_from("", factorized).values), true});
  report.checks.push_back({"norm_final_state", std::abs(final_state.norm() - 1.0), true});
  report.checks.push_back({"collapsed_vs_entangled_gap",
                           max_abs_diff(collapsed_values, table_from("", entangled).values), false});
  add_sampling(report, n4, spec);
}

void run_chsh_scan(RunReport& report) {
  const ScenarioSpec& spec = report.spec;
  std::vector<bell::ChshAngles> points;
  if (spec.grid) {
    const Grid& g = *spec.grid;
    for (std::size_t i = 0; i < g.steps; ++i) {
      const double delta =
          g.steps == 1 ? g.start
                       : g.start + (g.stop - g.start) * static_cast<double>(i) /
                                       static_cast<double>(g.steps - 1);
      points.push_back({0.0, 2.0 * delta, delta, 3.0 * delta});
    }
  } else {
    points.push_back(spec.angles);
  }

  const bool singlet = std::abs(spec.a - spec.b) < 1e-12;
  double bound_excess = 0.0;
  double analytic_residual = 0.0;
  for (const auto& angles : points) {
    ChshPoint p{angles, bell::chsh(bell::CorrelationKind::kEntangled, angles, spec.a, spec.b),
                bell::chsh(bell::CorrelationKind::kFactorized, angles, spec.a, spec.b)};
    bound_excess = std::max(bound_excess, std::abs(p.factorized) - 2.0);
    if (singlet) {
      const auto e = [](double t1, double t2) { return -std::cos(t1 - t2); };
      const double analytic = e(angles.alpha, angles.beta) - e(angles.alpha, angles.beta_prime) +
                              e(angles.alpha_prime, angles.beta) +
                              e(angles.alpha_prime, angles.beta_prime);
      analytic_residual = std::max(analytic_residual, std::abs(p.entangled - analytic));
    }
    report.chsh.push_back(p);
  }
  report.checks.push_back({"factorized_bound_excess", std::max(0.0, bound_excess), true});
  if (singlet) {
    report.checks.push_back({"entangled_vs_singlet_analytic", analytic_residual, true});
  }
}

json spec_to_json(const ScenarioSpec& spec) {
  json j;
  j["scenario"] = std::string(to_string(spec.scenario));
  j["a"] = {spec.a.real(), spec.a.imag()};
  j["b"] = {spec.b.real(), spec.b.imag()};
  j["theta1"] = spec.theta1;
  j["theta2"] = spec.theta2;
  j["angles"] = {spec.angles.alpha, spec.angles.alpha_prime, spec.angles.beta,
                 spec.angles.beta_prime};
  if (spec.grid) {
    j["grid"] = {{"start", spec.grid->start}, {"stop", spec.grid->stop}, {"steps", spec.grid->steps}};
  } else {
    j["grid"] = nullptr;
  }
  j["seed"] = spec.seed;
  j["samples"] = spec.samples;
  return j;
}

}  // namespace

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kIntroMeasurement:
      return "intro-measurement";
    case Scenario::kPairCorrelations:
      return "pair-correlations";
    case Scenario::kBell:
      return "bell";
    case Scenario::kBellAncilla:
      return "bell-ancilla";
    case Scenario::kChshScan:
      return "chsh-scan";
  }
  return "unknown";
}

std::string_view to_string(Format format) { return format == Format::kCsv ? "csv" : "json"; }

bell::ExperimentConfig ScenarioSpec::experiment() const {
  bell::ExperimentConfig config;
  config.a = a;
  config.b = b;
  config.theta1 = theta1;
  config.theta2 = theta2;
  config.ancilla = scenario == Scenario::kBellAncilla;
  return config;
}

Settings read_config_file(const std::string& path) {
  Settings out;
  for (auto& [key, setting] : read_settings(path)) {
    out[key] = std::move(setting.value);
  }
  return out;
}

ScenarioSpec parse_config(const Settings& flags, const std::optional<std::string>& config_path) {
  std::map<std::string, Setting> merged;
  if (config_path) {
    merged = read_settings(*config_path);
  }
  for (const auto& [key, value] : flags) {
    if (!known_key(key)) {
      throw ConfigError("--" + key + ": unknown option");
    }
    merged[key] = {value, "--" + key};
  }

  ScenarioSpec spec;
  const auto find = [&](const std::string& key) -> const Setting* {
    const auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };

  if (const Setting* s = find("scenario")) {
    spec.scenario = parse_scenario(*s);
  } else {
    throw ConfigError("--scenario: missing required field 'scenario'");
  }
  if (const Setting* s = find("a")) spec.a = parse_complex(*s);
  if (const Setting* s = find("b")) spec.b = parse_complex(*s);
  if (const Setting* s = find("theta1")) spec.theta1 = parse_angle(*s);
  if (const Setting* s = find("theta2")) spec.theta2 = parse_angle(*s);
  if (const Setting* s = find("angles")) {
    const auto parts = split(s->value, ',');
    if (parts.size() != 4) {
      throw ConfigError(s->origin + ": expected four angles a,a',b,b'");
    }
    spec.angles = {parse_angle({parts[0], s->origin}), parse_angle({parts[1], s->origin}),
                   parse_angle({parts[2], s->origin}), parse_angle({parts[3], s->origin})};
  }
  if (const Setting* s = find("grid")) {
    if (spec.scenario != Scenario::kChshScan) {
      throw ConfigError(s->origin + ": grid applies to the chsh-scan scenario only");
    }
    const auto parts = split(s->value, ',');
    if (parts.size() != 3) {
      throw ConfigError(s->origin + ": expected start,stop,steps");
    }
    Grid g{parse_angle({parts[0], s->origin}), parse_angle({parts[1], s->origin}),
           parse_unsigned({parts[2], s->origin})};
    if (g.steps < 1) {
      throw ConfigError(s->origin + ": steps must be at least 1");
    }
    spec.grid = g;
  }
  if (const Setting* s = find("seed")) spec.seed = parse_unsigned(*s);
  if (const Setting* s = find("samples")) {
    spec.samples = parse_unsigned(*s);
    if (spec.samples > 0 && spec.scenario == Scenario::kChshScan) {
      throw ConfigError(s->origin + ": chsh-scan has no table to sample");
    }
  }
  if (const Setting* s = find("format")) spec.format = parse_format(*s);
  if (const Setting* s = find("out")) {
    if (trim(s->value).empty()) {
      throw ConfigError(s->origin + ": empty output path");
    }
    spec.out = trim(s->value);
  }

  const double n = std::norm(spec.a) + std::norm(spec.b);
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw NotNormalized("coefficients a, b have |a|^2 + |b|^2 = " + format_double(n) +
                        ", expected 1");
  }
  return spec;
}

double ReportTable::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

std::vector<Check> RunReport::failures() const {
  std::vector<Check> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const Check& c) { return !c.passed(); });
  return out;
}

RunReport run(const ScenarioSpec& spec) {
  RunReport report;
  report.spec = spec;
  switch (spec.scenario) {
    case Scenario::kIntroMeasurement:
      run_intro(report);
      break;
    case Scenario::kPairCorrelations:
      run_pair(report);
      break;
    case Scenario::kBell:
      run_bell(report);
      break;
    case Scenario::kBellAncilla:
      run_bell_ancilla(report);
      break;
    case Scenario::kChshScan:
      run_chsh_scan(report);
      break;
  }
  // Every probability table must be a distribution; empirical frequencies are
  // exact count ratios and are held to the same standard.
  for (const auto& t : report.tables) {
    double residual = std::abs(t.sum() - 1.0);
    for (double v : t.values) {
      residual = std::max({residual, -v, v - 1.0});
    }
    report.checks.push_back({"table:" + t.kind, residual, true});
  }
  return report;
}

void write_csv(const RunReport& report, std::ostream& out) {
  const std::string scenario(to_string(report.spec.scenario));
  out << "scenario,kind,i1,i2,i3,i4,value\n";
  for (const auto& t : report.tables) {
    std::size_t size = t.values.size();
    for (std::size_t flat = 0; flat < size; ++flat) {
      std::array<std::string, 4> index;
      std::size_t rem = flat;
      for (std::size_t a = t.shape.size(); a-- > 0;) {
        index[a] = std::to_string(rem % t.shape[a] + 1);
        rem /= t.shape[a];
      }
      out << scenario << ',' << t.kind << ',' << index[0] << ',' << index[1] << ',' << index[2]
          << ',' << index[3] << ',' << format_double(t.values[flat]) << '\n';
    }
  }
  for (std::size_t i = 0; i < report.chsh.size(); ++i) {
    const auto& p = report.chsh[i];
    const std::string point = std::to_string(i + 1);
    const std::array<std::pair<const char*, double>, 6> rows{{{"alpha", p.angles.alpha},
                                                              {"alpha_prime", p.angles.alpha_prime},
                                                              {"beta", p.angles.beta},
                                                              {"beta_prime", p.angles.beta_prime},
                                                              {"chsh_entangled", p.entangled},
                                                              {"chsh_factorized", p.factorized}}};
    for (const auto& [kind, value] : rows) {
      out << scenario << ',' << kind << ',' << point << ",,,," << format_double(value) << '\n';
    }
  }
  for (const auto& c : report.checks) {
    out << scenario << ",check:" << c.name << ",,,,," << format_double(c.residual) << '\n';
  }
}

void write_json(const RunReport& report, std::ostream& out) {
  json j;
  j["spec"] = spec_to_json(report.spec);
  json tables = json::array();
  for (const auto& t : report.tables) {
    tables.push_back({{"kind", t.kind}, {"shape", t.shape}, {"values", t.values}});
  }
  j["tables"] = std::move(tables);
  json chsh = json::array();
  for (const auto& p : report.chsh) {
    chsh.push_back({{"angles",
                     {p.angles.alpha, p.angles.alpha_prime, p.angles.beta, p.angles.beta_prime}},
                    {"entangled", p.entangled},
                    {"factorized", p.factorized}});
  }
  j["chsh"] = std::move(chsh);
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"residual", c.residual}, {"gated", c.gated}, {"passed", c.passed()}});
  }
  j["checks"] = std::move(checks);
  j["passed"] = report.passed();
  out << j.dump(2) << '\n';
}

std::string render(const RunReport& report, Format format) {
  std::ostringstream out;
  if (format == Format::kCsv) {
    write_csv(report, out);
  } else {
    write_json(report, out);
  }
  return out.str();
}

void emit(const RunReport& report, Format format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(path + ": cannot open for writing");
  }
  out << render(report, format);
  out.flush();
  if (!out) {
    throw IoError(path + ": write failed");
  }
}

}  // namespace qrs::cli
