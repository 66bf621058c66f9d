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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qrs/bell.hpp"
#include "qrs/calculus.hpp"
#include "qrs/cli.hpp"
#include "qrs/errors.hpp"

namespace py = pybind11;

namespace {

qrs::bell::CorrelationKind parse_kind(const std::string& name) {
  if (name == "entangled") return qrs::bell::CorrelationKind::kEntangled;
  if (name == "factorized") return qrs::bell::CorrelationKind::kFactorized;
  if (name == "postulate_c") return qrs::bell::CorrelationKind::kPostulateC;
  throw qrs::ConfigError("kind must be entangled, factorized or postulate_c, got '" + name + "'");
}

std::pair<std::vector<std::size_t>, std::vector<double>> flatten(const qrs::JointDistribution& t) {
  std::vector<std::size_t> shape;
  for (const auto& axis : t.axes()) {
    shape.push_back(axis.count);
  }
  return {std::move(shape), t.values()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum reference-system calculus and Bell-experiment simulator";

  auto base = py::register_exception<qrs::Error>(m, "QrsError", PyExc_RuntimeError);
  py::register_exception<qrs::NonDisjointSystems>(m, "NonDisjointSystems", base.ptr());
  py::register_exception<qrs::NotNormalized>(m, "NotNormalized", base.ptr());
  py::register_exception<qrs::ConfigError>(m, "ConfigError", base.ptr());

  using qrs::bell::ExperimentConfig;
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def(py::init([](qrs::Complex a, qrs::Complex b, double theta1, double theta2) {
             ExperimentConfig c;
             c.a = a;
             c.b = b;
             c.theta1 = theta1;
             c.theta2 = theta2;
             c.validate();
             return c;
           }),
           py::arg("a"), py::arg("b"), py::arg("theta1") = 0.0, py::arg("theta2") = 0.0)
      .def_readwrite("a", &ExperimentConfig::a)
      .def_readwrite("b", &ExperimentConfig::b)
      .def_readwrite("theta1", &ExperimentConfig::theta1)
      .def_readwrite("theta2", &ExperimentConfig::theta2)
      .def_readwrite("ancilla", &ExperimentConfig::ancilla)
      .def("validate", &ExperimentConfig::validate);

  using qrs::bell::ChshAngles;
  py::class_<ChshAngles>(m, "ChshAngles")
      .def(py::init<>())
      .def(py::init([](double a, double ap, double b, double bp) { return ChshAngles{a, ap, b, bp}; }),
           py::arg("alpha"), py::arg("alpha_prime"), py::arg("beta"), py::arg("beta_prime"))
      .def_readwrite("alpha", &ChshAngles::alpha)
      .def_readwrite("alpha_prime", &ChshAngles::alpha_prime)
      .def_readwrite("beta", &ChshAngles::beta)
      .def_readwrite("beta_prime", &ChshAngles::beta_prime);

  using qrs::bell::CorrelationTable;
  py::class_<CorrelationTable>(m, "CorrelationTable")
      .def_readonly("theta1", &CorrelationTable::theta1)
      .def_readonly("theta2", &CorrelationTable::theta2)
      .def_property_readonly("kind",
                             [](const CorrelationTable& t) { return std::string(to_string(t.kind)); })
      .def_readonly("p", &CorrelationTable::p)
      .def("sum", &CorrelationTable::sum)
      .def("correlator", &CorrelationTable::correlator)
      .def("marginal", &CorrelationTable::marginal, py::arg("side"));

  m.def("correlation_entangled", &qrs::bell::correlation_entangled, py::arg("config"));
  m.def("correlation_factorized", &qrs::bell::correlation_factorized, py::arg("config"));
  m.def("correlation_postulate_c", &qrs::bell::correlation_postulate_c, py::arg("config"));
  m.def(
      "device_marginal",
      [](const ExperimentConfig& config, std::size_t side) {
        return qrs::bell::device_marginal(qrs::bell::evolve_experiment(config), side);
      },
      py::arg("config"), py::arg("side"),
      "Readout distribution of device `side` (0 or 1) from the evolved state.");
  m.def(
      "evolve_experiment",
      [](const ExperimentConfig& config) {
        const qrs::StateVector psi = qrs::bell::evolve_experiment(config);
        std::vector<std::pair<std::string, std::size_t>> layout;
        for (const auto& e : psi.space().entries()) {
          layout.emplace_back(e.label, e.dimension);
        }
        return std::make_pair(layout, qrs::Vector(psi.amplitudes()));
      },
      py::arg("config"), "Returns ([(label, dim), ...], amplitudes).");
  m.def(
      "intuitive_joint",
      [](const ExperimentConfig& config) { return qrs::bell::intuitive_joint(config).values; },
      py::arg("config"), "Flat (l1, l2, j, k) table, row-major.");
  m.def(
      "ancilla_joint_distribution",
      [](const ExperimentConfig& config) {
        return flatten(qrs::bell::ancilla_joint_distribution(config));
      },
      py::arg("config"), "(shape, values) over (Mt1, Mt2, M1, M2).");
  m.def(
      "chsh",
      [](const std::string& kind, const ChshAngles& angles, qrs::Complex a, qrs::Complex b) {
        return qrs::bell::chsh(parse_kind(kind), angles, a, b);
      },
      py::arg("kind"), py::arg("angles"), py::arg("a"), py::arg("b"));

  m.def(
      "joint_distribution",
      [](const qrs::Vector& amplitudes,
         const std::vector<std::pair<std::string, std::size_t>>& layout,
         const std::vector<std::vector<std::string>>& systems) {
        std::vector<qrs::Subsystem> entries;
        for (const auto& [label, dim] : layout) {
          entries.push_back({label, dim});
        }
        const qrs::ReferenceSystem isolated(
            qrs::StateVector(qrs::SpaceRegistry(std::move(entries)), amplitudes), true);
        std::vector<qrs::SystemSet> sets;
        for (const auto& s : systems) {
          sets.emplace_back(s.begin(), s.end());
        }
        return flatten(qrs::joint_distribution(std::span<const qrs::SystemSet>(sets), isolated));
      },
      py::arg("amplitudes"), py::arg("layout"), py::arg("systems"),
      "Joint distribution of possible internal states over disjoint systems of an isolated "
      "state. Returns (shape, values).");

  m.def(
      "run_scenario",
      [](const std::map<std::string, std::string>& settings, const std::string& format) {
        qrs::cli::Settings flags(settings.begin(), settings.end());
        flags["format"] = format;
        const qrs::cli::ScenarioSpec spec = qrs::cli::parse_config(flags);
        const qrs::cli::RunReport report = qrs::cli::run(spec);
        return std::make_pair(qrs::cli::render(report, spec.format), report.passed());
      },
      py::arg("settings"), py::arg("format") = "json",
      "Runs a scenario from CLI-style settings; returns (report text, passed).");
}
