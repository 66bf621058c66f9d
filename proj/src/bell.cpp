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

#include "qrs/bell.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qrs/errors.hpp"

namespace qrs::bell {
namespace {

const std::string& particle_label(std::size_t side) { return side == 0 ? kParticle1 : kParticle2; }
const std::string& device_label(std::size_t side) { return side == 0 ? kDevice1 : kDevice2; }
const std::string& recorder_label(std::size_t side) { return side == 0 ? kRecorder1 : kRecorder2; }

void check_side(std::size_t side) {
  if (side > 1) {
    throw DimensionError("side must be 0 or 1, got " + std::to_string(side));
  }
}

// Swaps pointer digit 0 with digit `outcome` (1 or 2); identity otherwise.
Matrix pointer_swap(std::size_t outcome) {
  Matrix s = Matrix::Identity(3, 3);
  const auto o = static_cast<Eigen::Index>(outcome);
  s(0, 0) = 0.0;
  s(o, o) = 0.0;
  s(0, o) = 1.0;
  s(o, 0) = 1.0;
  return s;
}

// <xi_j(theta_i)|phi_{P_i,l}>
Complex overlap(const ExperimentConfig& config, std::size_t side, std::size_t j, std::size_t l) {
  const auto [xi1, xi2] = spin_eigenstates(config.theta(side), particle_label(side));
  const StateVector& xi = j == 0 ? xi1 : xi2;
  return xi.inner(pair_basis_state(side, l));
}

}  // namespace

void ExperimentConfig::validate() const {
  const double n = std::norm(a) + std::norm(b);
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw NotNormalized("|a|^2 + |b|^2 = " + std::to_string(n) + ", expected 1");
  }
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) {
    throw DimensionError("measurement angles must be finite");
  }
}

std::string_view to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::kEntangled:
      return "entangled";
    case CorrelationKind::kFactorized:
      return "factorized";
    case CorrelationKind::kPostulateC:
      return "postulate_c";
    case CorrelationKind::kEmpirical:
      return "empirical";
  }
  return "unknown";
}

double CorrelationTable::sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }

double CorrelationTable::correlator() const { return p[0][0] - p[0][1] - p[1][0] + p[1][1]; }

std::array<double, 2> CorrelationTable::marginal(std::size_t side) const {
  check_side(side);
  if (side == 0) {
    return {p[0][0] + p[0][1], p[1][0] + p[1][1]};
  }
  return {p[0][0] + p[1][0], p[0][1] + p[1][1]};
}

double IntuitiveTable::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

SpaceRegistry spin_space(const std::string& label) { return SpaceRegistry{{label, 2}}; }

SpaceRegistry pointer_space(const std::string& label) { return SpaceRegistry{{label, 3}}; }

StateVector pointer_state(const std::string& label, std::size_t digit) {
  return StateVector::basis(pointer_space(label), {digit});
}

StateVector pair_basis_state(std::size_t side, std::size_t l) {
  check_side(side);
  check_side(l);
  // particle 1: phi_1 = up, phi_2 = down; particle 2: phi_1 = down, phi_2 = up
  const std::size_t digit = side == 0 ? l : 1 - l;
  return StateVector::basis(spin_space(particle_label(side)), {digit});
}

StateVector entangled_pair_state(const ExperimentConfig& config) {
  config.validate();
  const SpaceRegistry space{{kParticle1, 2}, {kParticle2, 2}};
  Vector amplitudes = Vector::Zero(4);
  for (std::size_t l = 0; l < 2; ++l) {
    const StateVector term = tensor_product(pair_basis_state(0, l), pair_basis_state(1, l));
    amplitudes += config.coefficient(l) * term.amplitudes();
  }
  return StateVector(space, std::move(amplitudes));
}

std::pair<StateVector, StateVector> spin_eigenstates(double theta, const std::string& particle) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const SpaceRegistry space = spin_space(particle);
  Vector up_axis(2);
  up_axis << c, s;
  Vector down_axis(2);
  down_axis << -s, c;
  return {StateVector(space, std::move(up_axis)), StateVector(space, std::move(down_axis))};
}

Operator measurement_unitary(double theta, const std::string& particle,
                             const std::string& pointer) {
  const auto [xi1, xi2] = spin_eigenstates(theta, particle);
  const SpaceRegistry space = spin_space(particle).concat(pointer_space(pointer));
  Matrix u = Matrix::Zero(6, 6);
  const std::array<const StateVector*, 2> xi{&xi1, &xi2};
  for (std::size_t j = 0; j < 2; ++j) {
    const Vector& v = xi[j]->amplitudes();
    const Matrix proj = v * v.adjoint();
    const Operator term = tensor_product(Operator(spin_space(particle), proj),
                                         Operator(pointer_space(pointer), pointer_swap(j + 1)));
    u += term.matrix();
  }
  return Operator(space, std::move(u));
}

StateVector single_measurement_state(Complex alpha, Complex beta, double theta) {
  const SpaceRegistry spin = spin_space("P");
  Vector amplitudes(2);
  amplitudes << alpha, beta;
  const StateVector initial =
      tensor_product(StateVector(spin, std::move(amplitudes)), pointer_state("M", kPointerReady));
  return apply(measurement_unitary(theta, "P", "M"), initial);
}

StateVector evolve_experiment(const ExperimentConfig& config) {
  const StateVector pair = entangled_pair_state(config);
  const StateVector ready = tensor_product(pointer_state(kDevice1, kPointerReady),
                                           pointer_state(kDevice2, kPointerReady));
  const std::vector<std::string> order{kParticle1, kDevice1, kParticle2, kDevice2};
  StateVector state = reorder(tensor_product(pair, ready), order);
  state = apply(measurement_unitary(config.theta1, kParticle1, kDevice1), state);
  state = apply(measurement_unitary(config.theta2, kParticle2, kDevice2), state);
  return state;
}

StateVector record_basis_state(const ExperimentConfig& config, std::size_t side, std::size_t l) {
  check_side(side);
  const StateVector initial =
      tensor_product(pair_basis_state(side, l), pointer_state(device_label(side), kPointerReady));
  return apply(measurement_unitary(config.theta(side), particle_label(side), device_label(side)),
               initial);
}

StateVector ancilla_experiment(const ExperimentConfig& config) {
  StateVector state = tensor_product(
      evolve_experiment(config), tensor_product(pointer_state(kRecorder1, kPointerReady),
                                                pointer_state(kRecorder2, kPointerReady)));
  for (std::size_t side = 0; side < 2; ++side) {
    // sum_l |chi_l><chi_l| (x) S_l + (1 - sum_l |chi_l><chi_l|) (x) 1
    const SpaceRegistry system =
        spin_space(particle_label(side)).concat(pointer_space(device_label(side)));
    const SpaceRegistry recorder = pointer_space(recorder_label(side));
    Matrix support = Matrix::Zero(6, 6);
    Matrix v = Matrix::Zero(18, 18);
    for (std::size_t l = 0; l < 2; ++l) {
      const Vector chi = record_basis_state(config, side, l).amplitudes();
      const Matrix proj = chi * chi.adjoint();
      support += proj;
      v += tensor_product(Operator(system, proj), Operator(recorder, pointer_swap(l + 1))).matrix();
    }
    v += tensor_product(Operator(system, Matrix::Identity(6, 6) - support),
                        Operator::identity(recorder))
             .matrix();
    state = apply(Operator(system.concat(recorder), std::move(v)), state);
  }
  return state;
}

CandidateBasis outcome_basis(const ReferenceSystem& isolated, const std::string& device) {
  return candidate_basis({device}, isolated,
                         {pointer_state(device, 1), pointer_state(device, 2)});
}

std::array<double, 2> device_marginal(const StateVector& final_state, std::size_t side) {
  check_side(side);
  const ReferenceSystem isolated(final_state, true);
  const std::vector<CandidateBasis> bases{outcome_basis(isolated, device_label(side))};
  const JointDistribution table = joint_distribution(std::span<const CandidateBasis>(bases), isolated);
  return {table.values()[0], table.values()[1]};
}

std::array<double, 2> device_marginal(const ExperimentConfig& config, std::size_t side) {
  check_side(side);
  config.validate();
  std::array<double, 2> out{};
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t l = 0; l < 2; ++l) {
      out[j] += std::norm(config.coefficient(l)) * std::norm(overlap(config, side, j, l));
    }
  }
  return out;
}

CorrelationTable correlation_entangled(const ExperimentConfig& config) {
  config.validate();
  CorrelationTable table{config.theta1, config.theta2, CorrelationKind::kEntangled, {}};
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      Complex amplitude = 0.0;
      for (std::size_t l = 0; l < 2; ++l) {
        amplitude += config.coefficient(l) * overlap(config, 0, j, l) * overlap(config, 1, k, l);
      }
      table.p[j][k] = std::norm(amplitude);
    }
  }
  return table;
}

CorrelationTable correlation_factorized(const ExperimentConfig& config) {
  config.validate();
  CorrelationTable table{config.theta1, config.theta2, CorrelationKind::kFactorized, {}};
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      double p = 0.0;
      for (std::size_t l = 0; l < 2; ++l) {
        p += std::norm(config.coefficient(l)) * std::norm(overlap(config, 0, j, l)) *
             std::norm(overlap(config, 1, k, l));
      }
      table.p[j][k] = p;
    }
  }
  return table;
}

CorrelationTable correlation_postulate_c(const ExperimentConfig& config) {
  const StateVector final_state =
      config.ancilla ? ancilla_experiment(config) : evolve_experiment(config);
  const ReferenceSystem isolated(final_state, true);
  const std::vector<CandidateBasis> bases{outcome_basis(isolated, kDevice1),
                                          outcome_basis(isolated, kDevice2)};
  const JointDistribution joint = joint_distribution(std::span<const CandidateBasis>(bases), isolated);
  CorrelationTable table{config.theta1, config.theta2, CorrelationKind::kPostulateC, {}};
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      table.p[j][k] = joint.at({j, k});
    }
  }
  return table;
}

IntuitiveTable intuitive_joint(const ExperimentConfig& config) {
  config.validate();
  IntuitiveTable table;
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        table.at(l, l, j, k) = std::norm(config.coefficient(l)) *
                               std::norm(overlap(config, 0, j, l)) *
                               std::norm(overlap(config, 1, k, l));
      }
    }
  }
  return table;
}

JointDistribution ancilla_joint_distribution(const ExperimentConfig& config) {
  const ReferenceSystem isolated(ancilla_experiment(config), true);
  const std::vector<CandidateBasis> bases{
      outcome_basis(isolated, kRecorder1), outcome_basis(isolated, kRecorder2),
      outcome_basis(isolated, kDevice1), outcome_basis(isolated, kDevice2)};
  return joint_distribution(std::span<const CandidateBasis>(bases), isolated);
}

double correlator(CorrelationKind kind, const ExperimentConfig& config) {
  switch (kind) {
    case CorrelationKind::kEntangled:
      return correlation_entangled(config).correlator();
    case CorrelationKind::kFactorized:
      return correlation_factorized(config).correlator();
    case CorrelationKind::kPostulateC:
      return correlation_postulate_c(config).correlator();
    case CorrelationKind::kEmpirical:
      break;
  }
  throw ConfigError("correlator kind must be entangled, factorized or postulate_c");
}

double chsh(CorrelationKind kind, const ChshAngles& angles, Complex a, Complex b) {
  ExperimentConfig config;
  config.a = a;
  config.b = b;
  const auto e = [&](double t1, double t2) {
    config.theta1 = t1;
    config.theta2 = t2;
    return correlator(kind, config);
  };
  return e(angles.alpha, angles.beta) - e(angles.alpha, angles.beta_prime) +
         e(angles.alpha_prime, angles.beta) + e(angles.alpha_prime, angles.beta_prime);
}

}  // namespace qrs::bell
