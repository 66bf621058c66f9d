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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qrs/errors.hpp"
#include "test_util.hpp"

using namespace qrs;
using namespace qrs::bell;
using qrs::test_support::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;
const double kH = 1.0 / std::sqrt(2.0);

ExperimentConfig make(Complex a, Complex b, double t1, double t2) {
  ExperimentConfig c;
  c.a = a;
  c.b = b;
  c.theta1 = t1;
  c.theta2 = t2;
  return c;
}

ExperimentConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const auto [a, b] = oracle::random_coefficients(rng);
  return make(a, b, angle(rng), angle(rng));
}

double table_diff(const CorrelationTable& x, const oracle::Table2& y) {
  double d = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) d = std::max(d, std::abs(x.p[j][k] - y[j][k]));
  return d;
}

double table_diff(const CorrelationTable& x, const CorrelationTable& y) { return table_diff(x, y.p); }

}  // namespace

TEST(EntangledPairState, single_term_and_singlet) {
  const StateVector up_down = entangled_pair_state(make(1.0, 0.0, 0, 0));
  EXPECT_NEAR(std::abs(up_down[1] - 1.0), 0.0, 1e-15);
  const StateVector singlet = entangled_pair_state(make(kH, kH, 0, 0));
  EXPECT_NEAR(std::abs(singlet[1] - kH), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(singlet[2] + kH), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(singlet[0]) + std::abs(singlet[3]), 0.0, 1e-15);
  EXPECT_EQ(singlet.space().label_order(), (std::vector<std::string>{"P1", "P2"}));
}

TEST(EntangledPairState, reduced_particle_state) {
  const StateVector psi = entangled_pair_state(make(0.6, 0.8, 0, 0));
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.36;
  expected(1, 1) = 0.64;
  EXPECT_LT(max_abs(reduced_state(psi, {"P1"}).matrix() - expected), 1e-12);
}

TEST(EntangledPairState, rejects_unnormalized_coefficients) {
  EXPECT_THROW(entangled_pair_state(make(1.0, 1.0, 0, 0)), NotNormalized);
}

TEST(SpinEigenstates, z_axis_and_x_axis) {
  const auto [z1, z2] = spin_eigenstates(0.0);
  EXPECT_NEAR(std::abs(z1[0] - 1.0) + std::abs(z2[1] - 1.0), 0.0, 1e-15);
  const auto [x1, x2] = spin_eigenstates(kPi / 2.0);
  EXPECT_NEAR(std::abs(x1[0] - kH) + std::abs(x1[1] - kH), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x2[0] + kH) + std::abs(x2[1] - kH), 0.0, 1e-15);
}

TEST(SpinEigenstates, orthonormal_for_random_angles) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const auto [a, b] = spin_eigenstates(angle(rng));
    EXPECT_NEAR(std::abs(a.inner(b)), 0.0, 1e-15);
    EXPECT_NEAR(a.norm(), 1.0, 1e-15);
    EXPECT_NEAR(b.norm(), 1.0, 1e-15);
  }
}

TEST(MeasurementUnitary, records_axis_eigenstates) {
  const double theta = 0.83;
  const Operator u = measurement_unitary(theta, "P", "M");
  const auto [xi1, xi2] = spin_eigenstates(theta, "P");
  const StateVector in1 = tensor_product(xi1, pointer_state("M", 0));
  const StateVector out1 = tensor_product(xi1, pointer_state("M", 1));
  EXPECT_LT((apply(u, in1).amplitudes() - out1.amplitudes()).norm(), 1e-12);
  const StateVector in2 = tensor_product(xi2, pointer_state("M", 0));
  const StateVector out2 = tensor_product(xi2, pointer_state("M", 2));
  EXPECT_LT((apply(u, in2).amplitudes() - out2.amplitudes()).norm(), 1e-12);
}

TEST(MeasurementUnitary, general_input_branches_on_axis_overlaps) {
  const double theta = 2.1;
  const Complex alpha(0.6, 0.0);
  const Complex beta(0.0, 0.8);
  const StateVector psi = single_measurement_state(alpha, beta, theta);
  const auto [xi1, xi2] = spin_eigenstates(theta, "P");
  Vector spin(2);
  spin << alpha, beta;
  const StateVector initial(spin_space("P"), spin);
  const Vector expected = xi1.inner(initial) * tensor_product(xi1, pointer_state("M", 1)).amplitudes() +
                          xi2.inner(initial) * tensor_product(xi2, pointer_state("M", 2)).amplitudes();
  EXPECT_LT((psi.amplitudes() - expected).norm(), 1e-12);
}

TEST(MeasurementUnitary, unitary_for_random_angles) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const Matrix u = measurement_unitary(angle(rng), "P", "M").matrix();
    EXPECT_LT(max_abs(u.adjoint() * u - Matrix::Identity(6, 6)), 1e-12);
  }
}

TEST(EvolveExperiment, eigenstate_input_is_recorded) {
  const StateVector psi = evolve_experiment(make(1.0, 0.0, 0.0, 0.0));
  // |up>|m_1> |down>|m_2> on P1, M1, P2, M2
  const StateVector expected =
      StateVector::basis(SpaceRegistry{{"P1", 2}, {"M1", 3}, {"P2", 2}, {"M2", 3}}, {0, 1, 1, 2});
  EXPECT_LT((psi.amplitudes() - expected.amplitudes()).norm(), 1e-12);
}

TEST(EvolveExperiment, expanded_double_sum_and_unit_norm) {
  std::mt19937_64 rng(3);
  const std::array<std::array<std::size_t, 2>, 2> digits{{{0, 1}, {1, 0}}};
  for (int trial = 0; trial < 50; ++trial) {
    const ExperimentConfig c = random_config(rng);
    const StateVector psi = evolve_experiment(c);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    const auto [a1, a2] = spin_eigenstates(c.theta1, kParticle1);
    const auto [b1, b2] = spin_eigenstates(c.theta2, kParticle2);
    const std::array<const StateVector*, 2> xi1{&a1, &a2};
    const std::array<const StateVector*, 2> xi2{&b1, &b2};
    Vector rebuilt = Vector::Zero(static_cast<Eigen::Index>(psi.dimension()));
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        Complex amplitude = 0.0;
        for (std::size_t l = 0; l < 2; ++l) {
          amplitude += c.coefficient(l) * oracle::xi_component(c.theta1, j, digits[l][0]) *
                       oracle::xi_component(c.theta2, k, digits[l][1]);
        }
        const StateVector branch = tensor_product(tensor_product(*xi1[j], pointer_state(kDevice1, j + 1)),
                                                  tensor_product(*xi2[k], pointer_state(kDevice2, k + 1)));
        rebuilt += amplitude * branch.amplitudes();
      }
    }
    EXPECT_LT((psi.amplitudes() - rebuilt).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(EvolveExperiment, local_evolutions_factorize) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const ExperimentConfig c = random_config(rng);
    Vector branches = Vector::Zero(36);
    for (std::size_t l = 0; l < 2; ++l) {
      const StateVector side1 = apply(measurement_unitary(c.theta1, kParticle1, kDevice1),
                                      tensor_product(pair_basis_state(0, l), pointer_state(kDevice1, 0)));
      const StateVector side2 = apply(measurement_unitary(c.theta2, kParticle2, kDevice2),
                                      tensor_product(pair_basis_state(1, l), pointer_state(kDevice2, 0)));
      branches += c.coefficient(l) * tensor_product(side1, side2).amplitudes();
    }
    EXPECT_LT((evolve_experiment(c).amplitudes() - branches).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DeviceMarginal, singlet_is_uniform) {
  for (double t : {0.0, 0.3, 1.2, kPi}) {
    const auto m = device_marginal(evolve_experiment(make(kH, kH, t, 0.7)), 0);
    EXPECT_NEAR(m[0], 0.5, 1e-12);
    EXPECT_NEAR(m[1], 0.5, 1e-12);
  }
}

TEST(DeviceMarginal, single_branch_closed_form) {
  for (double t : {0.0, 0.3, 1.2, 2.5}) {
    const auto m = device_marginal(evolve_experiment(make(1.0, 0.0, t, 0.4)), 0);
    EXPECT_NEAR(m[0], std::pow(std::cos(t / 2.0), 2), 1e-12);
    EXPECT_NEAR(m[1], std::pow(std::sin(t / 2.0), 2), 1e-12);
  }
}

TEST(DeviceMarginal, independent_of_other_side_and_matches_closed_form) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 30; ++trial) {
    ExperimentConfig c = random_config(rng);
    const auto m1 = device_marginal(evolve_experiment(c), 0);
    const auto m2 = device_marginal(evolve_experiment(c), 1);
    const auto closed1 = device_marginal(c, 0);
    const auto closed2 = device_marginal(c, 1);
    EXPECT_NEAR(m1[0], closed1[0], 1e-12);
    EXPECT_NEAR(m2[1], closed2[1], 1e-12);
    ExperimentConfig other = c;
    other.theta2 = angle(rng);
    const auto moved = device_marginal(evolve_experiment(other), 0);
    EXPECT_NEAR(moved[0], m1[0], 1e-12);
    other = c;
    other.theta1 = angle(rng);
    EXPECT_NEAR(device_marginal(evolve_experiment(other), 1)[0], m2[0], 1e-12);
  }
}

TEST(CorrelationEntangled, singlet_parallel_axes_anticorrelate) {
  for (double t : {0.0, 0.9, 2.0}) {
    const auto table = correlation_entangled(make(kH, kH, t, t));
    EXPECT_NEAR(table.p[0][0], 0.0, 1e-12);
    EXPECT_NEAR(table.p[1][1], 0.0, 1e-12);
    EXPECT_NEAR(table.p[0][1], 0.5, 1e-12);
    EXPECT_NEAR(table.p[1][0], 0.5, 1e-12);
  }
}

TEST(CorrelationEntangled, singlet_correlator_is_minus_cosine) {
  for (int i = 0; i <= 24; ++i) {
    for (int k = 0; k <= 24; ++k) {
      const double t1 = -kPi + 2.0 * kPi * i / 24.0;
      const double t2 = -kPi + 2.0 * kPi * k / 24.0;
      EXPECT_NEAR(correlation_entangled(make(kH, kH, t1, t2)).correlator(), -std::cos(t1 - t2), 1e-12);
    }
  }
}

TEST(CorrelationEntangled, matches_two_spin_born_rule) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const ExperimentConfig c = random_config(rng);
    const auto expected = oracle::born_joint(c.a, c.b, c.theta1, c.theta2);
    EXPECT_LT(table_diff(correlation_entangled(c), expected), 1e-12);
    EXPECT_LT(table_diff(correlation_postulate_c(c), expected), 1e-12);
  }
}

TEST(CorrelationEntangled, product_state_has_no_interference) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const ExperimentConfig c = make(1.0, 0.0, angle(rng), angle(rng));
    const auto ent = correlation_entangled(c);
    EXPECT_LT(table_diff(ent, correlation_factorized(c)), 1e-12);
    const auto m1 = device_marginal(c, 0);
    const auto m2 = device_marginal(c, 1);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(ent.p[j][k], m1[j] * m2[k], 1e-12);
  }
}

TEST(CorrelationFactorized, singlet_correlator_is_product_of_cosines) {
  for (int i = 0; i <= 12; ++i) {
    for (int k = 0; k <= 12; ++k) {
      const double t1 = kPi * i / 12.0;
      const double t2 = kPi * k / 6.0;
      EXPECT_NEAR(correlation_factorized(make(kH, kH, t1, t2)).correlator(),
                  -std::cos(t1) * std::cos(t2), 1e-12);
    }
  }
}

TEST(CorrelationFactorized, z_axes_agree_with_entangled) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [a, b] = oracle::random_coefficients(rng);
    const ExperimentConfig c = make(a, b, 0.0, 0.0);
    EXPECT_LT(table_diff(correlation_factorized(c), correlation_entangled(c)), 1e-12);
  }
}

TEST(CorrelationFactorized, matches_branch_mixture_and_marginals) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const ExperimentConfig c = random_config(rng);
    const auto table = correlation_factorized(c);
    EXPECT_LT(table_diff(table, oracle::mixture_joint(c.a, c.b, c.theta1, c.theta2)), 1e-12);
    for (std::size_t side = 0; side < 2; ++side) {
      const auto m = table.marginal(side);
      const auto d = device_marginal(c, side);
      EXPECT_NEAR(m[0], d[0], 1e-12);
      EXPECT_NEAR(m[1], d[1], 1e-12);
    }
  }
}

TEST(IntuitiveJoint, structure) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const ExperimentConfig c = random_config(rng);
    const IntuitiveTable t = intuitive_joint(c);
    EXPECT_NEAR(t.sum(), 1.0, 1e-12);
    const auto fac = correlation_factorized(c);
    std::array<double, 2> diag{};
    for (std::size_t l1 = 0; l1 < 2; ++l1)
      for (std::size_t l2 = 0; l2 < 2; ++l2)
        for (std::size_t j = 0; j < 2; ++j)
          for (std::size_t k = 0; k < 2; ++k) {
            if (l1 != l2) {
              EXPECT_EQ(t.at(l1, l2, j, k), 0.0);
            } else {
              diag[l1] += t.at(l1, l2, j, k);
            }
          }
    EXPECT_NEAR(diag[0], std::norm(c.a), 1e-12);
    EXPECT_NEAR(diag[1], std::norm(c.b), 1e-12);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        const double m = t.at(0, 0, j, k) + t.at(0, 1, j, k) + t.at(1, 0, j, k) + t.at(1, 1, j, k);
        EXPECT_NEAR(m, fac.p[j][k], 1e-12);
      }
  }
}

TEST(AncillaExperiment, state_has_recorded_branch_structure) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    ExperimentConfig c = random_config(rng);
    const StateVector psi = ancilla_experiment(c);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    Vector expected = Vector::Zero(static_cast<Eigen::Index>(psi.dimension()));
    for (std::size_t l = 0; l < 2; ++l) {
      const StateVector branch = tensor_product(
          tensor_product(record_basis_state(c, 0, l), record_basis_state(c, 1, l)),
          tensor_product(pointer_state(kRecorder1, l + 1), pointer_state(kRecorder2, l + 1)));
      expected += c.coefficient(l) * branch.amplitudes();
    }
    EXPECT_LT((psi.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-12);
    for (std::size_t side = 0; side < 2; ++side) {
      EXPECT_NEAR(std::abs(record_basis_state(c, side, 0).inner(record_basis_state(c, side, 1))), 0.0,
                  1e-12);
    }
  }
}

TEST(AncillaExperiment, four_device_table_and_collapsed_correlations) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    ExperimentConfig c = random_config(rng);
    const JointDistribution n4 = ancilla_joint_distribution(c);
    const IntuitiveTable expected = intuitive_joint(c);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(n4.values()[i], expected.values[i], 1e-12);
    c.ancilla = true;
    EXPECT_LT(table_diff(correlation_postulate_c(c), correlation_factorized(c)), 1e-12);
  }
}

TEST(AncillaExperiment, comparison_changes_singlet_correlations) {
  // At (0, pi/2) every cell of both tables is 1/4; the difference peaks at
  // (pi/2, pi/2) where the entangled table has P(1,1) = 0 and the collapsed
  // one has 1/4.
  ExperimentConfig c = make(kH, kH, 0.0, kPi / 2.0);
  c.ancilla = true;
  EXPECT_LT(table_diff(correlation_postulate_c(c), correlation_entangled(c)), 1e-12);
  c.theta1 = kPi / 2.0;
  const auto collapsed = correlation_postulate_c(c);
  const auto entangled = correlation_entangled(c);
  EXPECT_NEAR(entangled.p[0][0], 0.0, 1e-12);
  EXPECT_NEAR(collapsed.p[0][0], 0.25, 1e-12);
  EXPECT_GT(table_diff(collapsed, entangled), 0.1);
}

TEST(Symmetry, swapping_particles_transposes_tables) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const ExperimentConfig c = random_config(rng);
    const ExperimentConfig s = make(-c.b, -c.a, c.theta2, c.theta1);
    for (auto f : {&correlation_entangled, &correlation_factorized, &correlation_postulate_c}) {
      const auto t = f(c);
      const auto u = f(s);
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(t.p[j][k], u.p[k][j], 1e-12);
    }
  }
}

TEST(NonComparability, particle_plus_device_and_device_overlap) {
  const ReferenceSystem r(evolve_experiment(ExperimentConfig{}), true);
  const std::vector<SystemSet> systems{{kParticle1, kDevice1}, {kDevice1}};
  EXPECT_THROW(joint_distribution(std::span<const SystemSet>(systems), r), NonDisjointSystems);
  const ReferenceSystem with_recorders(ancilla_experiment(ExperimentConfig{}), true);
  const std::vector<SystemSet> four{{kParticle1, kDevice1}, {kParticle2, kDevice2}, {kDevice1}, {kDevice2}};
  EXPECT_THROW(joint_distribution(std::span<const SystemSet>(four), with_recorders), NonDisjointSystems);
}

TEST(Chsh, singlet_reaches_tsirelson_value) {
  const double s = chsh(CorrelationKind::kEntangled, ChshAngles{}, kH, kH);
  EXPECT_NEAR(s, -2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(chsh(CorrelationKind::kPostulateC, ChshAngles{}, kH, kH), s, 1e-12);
}

TEST(Chsh, factorized_and_product_states_respect_bound) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 1000; ++trial) {
    const ChshAngles q{angle(rng), angle(rng), angle(rng), angle(rng)};
    const auto [a, b] = oracle::random_coefficients(rng);
    EXPECT_LE(std::abs(chsh(CorrelationKind::kFactorized, q, a, b)), 2.0 + 1e-9);
    EXPECT_LE(std::abs(chsh(CorrelationKind::kEntangled, q, 1.0, 0.0)), 2.0 + 1e-9);
  }
}

TEST(Chsh, empirical_kind_is_rejected) {
  EXPECT_THROW(chsh(CorrelationKind::kEmpirical, ChshAngles{}, kH, kH), ConfigError);
}
