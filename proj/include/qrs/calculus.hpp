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

// States relative to a quantum reference system, possible internal states,
// and joint probabilities of internal-state assignments over disjoint
// subsystems.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qrs/linalg.hpp"

namespace qrs {

// A system R together with its internal state |psi_R>. `isolated` is declared
// by whoever builds the scenario; it cannot be inferred from the state.
class ReferenceSystem {
 public:
  ReferenceSystem(StateVector internal_state, bool isolated)
      : internal_state_(std::move(internal_state)), isolated_(isolated) {}

  const StateVector& internal_state() const { return internal_state_; }
  const SpaceRegistry& space() const { return internal_state_.space(); }
  SystemSet labels() const { return internal_state_.space().labels(); }
  bool isolated() const { return isolated_; }

 private:
  StateVector internal_state_;
  bool isolated_;
};

// Possible internal states of one system, indexed 0..states.size()-1.
struct CandidateBasis {
  SystemSet system;
  std::vector<StateVector> states;
  std::vector<double> weights;
  bool degenerate = false;
};

struct AssignmentEntry {
  CandidateBasis basis;
  std::size_t index = 0;
};

struct CandidateAssignment {
  std::vector<AssignmentEntry> entries;
};

// Dense probability table over candidate indices, row-major over axes.
class JointDistribution {
 public:
  struct Axis {
    SystemSet system;
    std::size_t count = 0;
  };

  // Rejects negative entries below -1e-12 and sums off by more than 1e-10.
  JointDistribution(std::vector<Axis> axes, std::vector<double> values);

  const std::vector<Axis>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t rank() const { return axes_.size(); }
  double at(std::span<const std::size_t> index) const;
  double at(std::initializer_list<std::size_t> index) const;
  double sum() const;
  // Table over the listed axes (in the given order), summing out the rest.
  JointDistribution marginal(std::span<const std::size_t> keep_axes) const;

  std::size_t flat_index(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> values_;
};

// rho_S(R) = Tr_{R\S} |psi_R><psi_R|.
DensityOperator state_of(const SystemSet& system, const ReferenceSystem& reference);

// Eigenpairs of rho_S(I) with eigenvalue above 1e-12. Requires an isolated I.
Spectrum internal_state_candidates(const SystemSet& system, const ReferenceSystem& isolated);

// Candidate basis taken from internal_state_candidates.
CandidateBasis candidate_basis(const SystemSet& system, const ReferenceSystem& isolated);

// Candidate basis supplied by the caller, e.g. a pointer basis or an
// analytically known basis inside a degenerate eigenspace. Every state must
// be an eigenvector of rho_S(I), the set must be orthonormal, and its weights
// must cover the support of rho_S(I). Throws InvalidCandidateBasis otherwise.
CandidateBasis candidate_basis(const SystemSet& system, const ReferenceSystem& isolated,
                               std::vector<StateVector> states);

// Throws NonDisjointSystems naming the first overlapping pair.
void require_disjoint(std::span<const SystemSet> systems);

// Tr[pi_1 ... pi_n rho_{S_1+...+S_n}(I)], clamped to [0, 1].
double joint_probability(const CandidateAssignment& assignment, const ReferenceSystem& isolated);
// Same, with every basis taken from internal_state_candidates.
double joint_probability(std::span<const SystemSet> systems, std::span<const std::size_t> indices,
                         const ReferenceSystem& isolated);

JointDistribution joint_distribution(std::span<const SystemSet> systems,
                                     const ReferenceSystem& isolated);
JointDistribution joint_distribution(std::span<const CandidateBasis> bases,
                                     const ReferenceSystem& isolated);

// Draws index tuples from a table with a locally owned, explicitly seeded
// generator. The draw sequence is a pure function of (table, seed).
class AssignmentSampler {
 public:
  AssignmentSampler(JointDistribution table, std::uint64_t seed);

  std::vector<std::size_t> draw();
  const JointDistribution& table() const { return table_; }

 private:
  JointDistribution table_;
  std::vector<double> cumulative_;
  std::mt19937_64 engine_;
};

std::vector<std::size_t> sample_assignment(std::span<const SystemSet> systems,
                                           const ReferenceSystem& isolated, std::uint64_t seed);
std::vector<std::size_t> sample_assignment(std::span<const CandidateBasis> bases,
                                           const ReferenceSystem& isolated, std::uint64_t seed);

}  // namespace qrs
