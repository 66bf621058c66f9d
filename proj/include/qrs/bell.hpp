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

// Two spin-1/2 particles in a correlated state, each measured by its own
// pointer device along an axis in the x-z plane, optionally followed by a
// second pair of devices that record the internal-state index of each
// particle+device system.
//
// Labels: particles "P1", "P2"; devices "M1", "M2"; comparison devices
// "Mt1", "Mt2". Spin digit 0 is |up>, 1 is |down>. Pointer digit 0 is the
// ready state, digits 1 and 2 record outcomes j = 1, 2.
//
// Indices in this API are 0-based: outcome/candidate index 0 is index 1 in
// CSV reports. Outcome 0 is valued +1 and outcome 1 is valued -1 in
// correlators.

#include <array>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "qrs/calculus.hpp"
#include "qrs/linalg.hpp"

namespace qrs::bell {

inline const std::string kParticle1 = "P1";
inline const std::string kParticle2 = "P2";
inline const std::string kDevice1 = "M1";
inline const std::string kDevice2 = "M2";
inline const std::string kRecorder1 = "Mt1";
inline const std::string kRecorder2 = "Mt2";

inline constexpr std::size_t kPointerReady = 0;

struct ExperimentConfig {
  // c_1 = a, c_2 = -b
  Complex a{std::numbers::sqrt2 / 2.0, 0.0};
  Complex b{std::numbers::sqrt2 / 2.0, 0.0};
  double theta1 = 0.0;
  double theta2 = std::numbers::pi / 2.0;
  bool ancilla = false;

  // Throws NotNormalized unless |a|^2 + |b|^2 = 1 within 1e-12.
  void validate() const;
  // Pair-state coefficient c_{l+1}.
  Complex coefficient(std::size_t l) const { return l == 0 ? a : -b; }
  double theta(std::size_t side) const { return side == 0 ? theta1 : theta2; }
};

enum class CorrelationKind { kEntangled, kFactorized, kPostulateC, kEmpirical };

std::string_view to_string(CorrelationKind kind);

struct CorrelationTable {
  double theta1 = 0.0;
  double theta2 = 0.0;
  CorrelationKind kind = CorrelationKind::kEntangled;
  // p[j][k]: device 1 shows outcome j, device 2 shows outcome k.
  std::array<std::array<double, 2>, 2> p{};

  double sum() const;
  // E = sum_jk (-1)^(j+k) p[j][k]
  double correlator() const;
  std::array<double, 2> marginal(std::size_t side) const;
};

// Intuitive joint table over (l1, l2, j, k).
struct IntuitiveTable {
  std::array<double, 16> values{};

  double at(std::size_t l1, std::size_t l2, std::size_t j, std::size_t k) const {
    return values[((l1 * 2 + l2) * 2 + j) * 2 + k];
  }
  double& at(std::size_t l1, std::size_t l2, std::size_t j, std::size_t k) {
    return values[((l1 * 2 + l2) * 2 + j) * 2 + k];
  }
  double sum() const;
};

struct ChshAngles {
  double alpha = 0.0;
  double alpha_prime = std::numbers::pi / 2.0;
  double beta = std::numbers::pi / 4.0;
  double beta_prime = 3.0 * std::numbers::pi / 4.0;
};

SpaceRegistry spin_space(const std::string& label);
SpaceRegistry pointer_space(const std::string& label);

// Pointer basis state with the given digit (0 ready, 1 and 2 outcomes).
StateVector pointer_state(const std::string& label, std::size_t digit);

// |phi_{P_i,l}>: particle 1 uses (up, down), particle 2 uses (down, up).
StateVector pair_basis_state(std::size_t side, std::size_t l);

// sum_l c_l |phi_{P1,l}>|phi_{P2,l}> on P1 (x) P2.
StateVector entangled_pair_state(const ExperimentConfig& config);

// (cos(t/2)|up> + sin(t/2)|down>, -sin(t/2)|up> + cos(t/2)|down>)
std::pair<StateVector, StateVector> spin_eigenstates(double theta,
                                                     const std::string& particle = kParticle1);

// sum_j |xi_j><xi_j| (x) S_j on particle (x) pointer, S_j swapping the ready
// state with outcome j. Maps |xi_j>|m_0> to |xi_j>|m_j>.
Operator measurement_unitary(double theta, const std::string& particle,
                             const std::string& pointer);

// Single-particle measurement (alpha|up> + beta|down>)|m_0> -> |Psi> on
// "P" (x) "M" along the axis at angle theta.
StateVector single_measurement_state(Complex alpha, Complex beta, double theta = 0.0);

// Final state on P1 (x) M1 (x) P2 (x) M2.
StateVector evolve_experiment(const ExperimentConfig& config);

// chi_l on P_i (x) M_i: the image of |phi_{P_i,l}>|m_0> under the side's
// measurement unitary.
StateVector record_basis_state(const ExperimentConfig& config, std::size_t side, std::size_t l);

// evolve_experiment followed by recorders that copy the index l of chi_l
// into Mt_i. Final state on P1 (x) M1 (x) P2 (x) M2 (x) Mt1 (x) Mt2.
StateVector ancilla_experiment(const ExperimentConfig& config);

// Outcome pointer states {m_1, m_2} of `device` as a validated candidate basis.
CandidateBasis outcome_basis(const ReferenceSystem& isolated, const std::string& device);

// Device readout distribution from a final state, via the reduced device state.
std::array<double, 2> device_marginal(const StateVector& final_state, std::size_t side);
// Closed form sum_l |c_l|^2 |<xi_j|phi_l>|^2.
std::array<double, 2> device_marginal(const ExperimentConfig& config, std::size_t side);

// |sum_l c_l <xi1_j|phi1_l><xi2_k|phi2_l>|^2
CorrelationTable correlation_entangled(const ExperimentConfig& config);
// sum_l |c_l|^2 |<xi1_j|phi1_l>|^2 |<xi2_k|phi2_l>|^2
CorrelationTable correlation_factorized(const ExperimentConfig& config);
// Joint outcome distribution of (M1, M2) evaluated on the full final state,
// with the comparison devices attached when config.ancilla is set.
CorrelationTable correlation_postulate_c(const ExperimentConfig& config);

IntuitiveTable intuitive_joint(const ExperimentConfig& config);

// Distribution over (Mt1, Mt2, M1, M2) on the ancilla state.
JointDistribution ancilla_joint_distribution(const ExperimentConfig& config);

double correlator(CorrelationKind kind, const ExperimentConfig& config);
// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'); kind is entangled or factorized.
double chsh(CorrelationKind kind, const ChshAngles& angles, Complex a, Complex b);

}  // namespace qrs::bell
