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

#include "qrs/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "qrs/errors.hpp"

namespace qrs {
namespace {

constexpr double kZeroWeight = 1e-12;
constexpr double kTableTolerance = 1e-10;
constexpr double kBasisTolerance = 1e-10;

void require_isolated(const ReferenceSystem& reference, const char* what) {
  if (!reference.isolated()) {
    throw NotIsolated(std::string(what) + " requires an isolated reference system");
  }
}

void require_subset(const SystemSet& system, const ReferenceSystem& reference) {
  if (system.empty()) {
    throw UnknownLabel("empty system");
  }
  for (const auto& label : system) {
    if (!reference.space().contains(label)) {
      throw UnknownLabel("label '" + label + "' is not part of the reference system");
    }
  }
}

std::string describe(const SystemSet& s) {
  std::string out = "{";
  for (const auto& label : s) {
    if (out.size() > 1) {
      out += "+";
    }
    out += label;
  }
  return out + "}";
}

// Embedded projectors for every candidate of every axis, evaluated against
// the reduced state on the union of the systems.
// Projectors on disjoint factors commute and their product is the projector
// onto the tensor product of the chosen states, so
// Tr[pi_1 ... pi_n rho] = <v|rho|v> with v = phi_1 (x) ... (x) phi_n.
struct ProjectorTable {
  DensityOperator rho;
  std::vector<std::vector<StateVector>> states;

  double probability(std::span<const std::size_t> index) const {
    StateVector v = states[0][index[0]];
    for (std::size_t axis = 1; axis < states.size(); ++axis) {
      v = tensor_product(v, states[axis][index[axis]]);
    }
    const auto order = rho.space().label_order();
    const Vector x = reorder(v, order).amplitudes();
    const Complex tr = x.dot(rho.matrix() * x);
    if (std::abs(tr.imag()) > kTableTolerance) {
      throw Error("joint probability has imaginary part " + std::to_string(tr.imag()));
    }
    const double p = tr.real();
    if (p < -kZeroWeight || p > 1.0 + kZeroWeight) {
      throw Error("joint probability " + std::to_string(p) + " outside [0, 1]");
    }
    return std::clamp(p, 0.0, 1.0);
  }
};

ProjectorTable build_projectors(std::span<const CandidateBasis> bases,
                                const ReferenceSystem& isolated) {
  require_isolated(isolated, "joint probability");
  if (bases.empty()) {
    throw UnknownLabel("joint probability needs at least one system");
  }
  std::vector<SystemSet> systems;
  for (const auto& b : bases) {
    systems.push_back(b.system);
  }
  require_disjoint(systems);

  SystemSet joint;
  for (const auto& s : systems) {
    require_subset(s, isolated);
    joint.insert(s.begin(), s.end());
  }

  ProjectorTable table{state_of(joint, isolated), {}};
  for (const auto& b : bases) {
    table.states.push_back(b.states);
  }
  return table;
}

std::vector<CandidateBasis> eigen_bases(std::span<const SystemSet> systems,
                                        const ReferenceSystem& isolated) {
  require_isolated(isolated, "joint probability");
  require_disjoint(systems);
  std::vector<CandidateBasis> out;
  for (const auto& s : systems) {
    out.push_back(candidate_basis(s, isolated));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// JointDistribution

JointDistribution::JointDistribution(std::vector<Axis> axes, std::vector<double> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  std::size_t size = 1;
  for (const auto& a : axes_) {
    size *= a.count;
  }
  if (values_.size() != size) {
    throw DimensionError("table has " + std::to_string(values_.size()) + " entries, axes need " +
                         std::to_string(size));
  }
  for (double v : values_) {
    if (!(v >= -kZeroWeight)) {
      throw NotPositive("table entry " + std::to_string(v) + " is negative");
    }
  }
  const double total = sum();
  if (std::abs(total - 1.0) > kTableTolerance) {
    throw NotNormalized("table sums to " + std::to_string(total));
  }
}

std::size_t JointDistribution::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) {
    throw DimensionError("index rank does not match table rank");
  }
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    if (index[a] >= axes_[a].count) {
      throw DimensionError("index out of range on axis " + std::to_string(a));
    }
    flat = flat * axes_[a].count + index[a];
  }
  return flat;
}

std::vector<std::size_t> JointDistribution::unflatten(std::size_t flat) const {
  std::vector<std::size_t> out(axes_.size());
  for (std::size_t a = axes_.size(); a-- > 0;) {
    out[a] = flat % axes_[a].count;
    flat /= axes_[a].count;
  }
  return out;
}

double JointDistribution::at(std::span<const std::size_t> index) const {
  return values_[flat_index(index)];
}

double JointDistribution::at(std::initializer_list<std::size_t> index) const {
  const std::vector<std::size_t> i(index);
  return at(std::span<const std::size_t>(i));
}

double JointDistribution::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

JointDistribution JointDistribution::marginal(std::span<const std::size_t> keep_axes) const {
  std::vector<Axis> axes;
  for (std::size_t a : keep_axes) {
    if (a >= axes_.size()) {
      throw DimensionError("marginal axis out of range");
    }
    axes.push_back(axes_[a]);
  }
  std::size_t size = 1;
  for (const auto& a : axes) {
    size *= a.count;
  }
  std::vector<double> values(size, 0.0);
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    const auto index = unflatten(flat);
    std::size_t target = 0;
    for (std::size_t k = 0; k < keep_axes.size(); ++k) {
      target = target * axes[k].count + index[keep_axes[k]];
    }
    values[target] += values_[flat];
  }
  return JointDistribution(std::move(axes), std::move(values));
}

// ---------------------------------------------------------------------------
// Reference-system calculus

DensityOperator state_of(const SystemSet& system, const ReferenceSystem& reference) {
  require_subset(system, reference);
  return reduced_state(reference.internal_state(), system);
}

Spectrum internal_state_candidates(const SystemSet& system, const ReferenceSystem& isolated) {
  require_isolated(isolated, "possible internal states");
  Spectrum full = eig_hermitian(state_of(system, isolated));

  Spectrum out;
  out.gap_threshold = full.gap_threshold;
  for (auto& p : full.pairs) {
    if (p.eigenvalue > kZeroWeight) {
      out.pairs.push_back(std::move(p));
    }
  }
  for (std::size_t i = 1; i < out.pairs.size(); ++i) {
    if (out.pairs[i - 1].eigenvalue - out.pairs[i].eigenvalue < out.gap_threshold) {
      out.degenerate = true;
    }
  }
  return out;
}

CandidateBasis candidate_basis(const SystemSet& system, const ReferenceSystem& isolated) {
  Spectrum spectrum = internal_state_candidates(system, isolated);
  CandidateBasis basis;
  basis.system = system;
  basis.degenerate = spectrum.degenerate;
  for (auto& p : spectrum.pairs) {
    basis.weights.push_back(p.eigenvalue);
    basis.states.push_back(std::move(p.eigenvector));
  }
  return basis;
}

CandidateBasis candidate_basis(const SystemSet& system, const ReferenceSystem& isolated,
                               std::vector<StateVector> states) {
  require_isolated(isolated, "possible internal states");
  const DensityOperator rho = state_of(system, isolated);
  const auto order = rho.space().label_order();

  CandidateBasis basis;
  basis.system = system;
  double covered = 0.0;
  for (auto& phi : states) {
    if (phi.space().labels() != system) {
      throw InvalidCandidateBasis("candidate state is not defined on " + describe(system));
    }
    if (!(phi.space() == rho.space())) {
      phi = reorder(phi, order);
    }
    const Vector& v = phi.amplitudes();
    const Vector image = rho.matrix() * v;
    const double weight = v.dot(image).real();
    const double residual = (image - weight * v).norm();
    if (residual > kBasisTolerance) {
      throw InvalidCandidateBasis("candidate state is not an eigenvector of the state of " +
                                  describe(system) + " (residual " + std::to_string(residual) +
                                  ")");
    }
    for (const auto& other : basis.states) {
      if (std::abs(other.inner(phi)) > kBasisTolerance) {
        throw InvalidCandidateBasis("candidate states of " + describe(system) +
                                    " are not orthogonal");
      }
    }
    covered += weight;
    basis.weights.push_back(weight);
    basis.states.push_back(std::move(phi));
  }
  if (std::abs(covered - 1.0) > kBasisTolerance) {
    throw InvalidCandidateBasis("candidate states of " + describe(system) + " carry weight " +
                                std::to_string(covered) + ", not 1");
  }
  for (std::size_t i = 0; i < basis.weights.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.weights.size(); ++j) {
      if (basis.weights[i] > kZeroWeight &&
          std::abs(basis.weights[i] - basis.weights[j]) < kDegeneracyGap) {
        basis.degenerate = true;
      }
    }
  }
  return basis;
}

void require_disjoint(std::span<const SystemSet> systems) {
  for (std::size_t i = 0; i < systems.size(); ++i) {
    for (std::size_t j = i + 1; j < systems.size(); ++j) {
      SystemSet overlap;
      std::set_intersection(systems[i].begin(), systems[i].end(), systems[j].begin(),
                            systems[j].end(), std::inserter(overlap, overlap.begin()));
      if (!overlap.empty()) {
        throw NonDisjointSystems("systems " + describe(systems[i]) + " and " +
                                 describe(systems[j]) + " share " + describe(overlap) +
                                 "; no joint probability is defined for them");
      }
    }
  }
}

double joint_probability(const CandidateAssignment& assignment, const ReferenceSystem& isolated) {
  std::vector<CandidateBasis> bases;
  std::vector<std::size_t> index;
  for (const auto& e : assignment.entries) {
    if (e.index >= e.basis.states.size()) {
      throw DimensionError("candidate index " + std::to_string(e.index) + " out of range for " +
                           describe(e.basis.system));
    }
    bases.push_back(e.basis);
    index.push_back(e.index);
  }
  return build_projectors(bases, isolated).probability(index);
}

double joint_probability(std::span<const SystemSet> systems, std::span<const std::size_t> indices,
                         const ReferenceSystem& isolated) {
  if (systems.size() != indices.size()) {
    throw DimensionError("one candidate index per system is required");
  }
  CandidateAssignment assignment;
  auto bases = eigen_bases(systems, isolated);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    assignment.entries.push_back({std::move(bases[i]), indices[i]});
  }
  return joint_probability(assignment, isolated);
}

JointDistribution joint_distribution(std::span<const CandidateBasis> bases,
                                     const ReferenceSystem& isolated) {
  const ProjectorTable table = build_projectors(bases, isolated);
  std::vector<JointDistribution::Axis> axes;
  std::size_t size = 1;
  for (const auto& b : bases) {
    axes.push_back({b.system, b.states.size()});
    size *= b.states.size();
  }
  std::vector<double> values(size);
  std::vector<std::size_t> index(bases.size(), 0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    values[flat] = table.probability(index);
    for (std::size_t a = index.size(); a-- > 0;) {
      if (++index[a] < axes[a].count) {
        break;
      }
      index[a] = 0;
    }
  }
  return JointDistribution(std::move(axes), std::move(values));
}

JointDistribution joint_distribution(std::span<const SystemSet> systems,
                                     const ReferenceSystem& isolated) {
  const auto bases = eigen_bases(systems, isolated);
  return joint_distribution(std::span<const CandidateBasis>(bases), isolated);
}

// ---------------------------------------------------------------------------
// Sampling

AssignmentSampler::AssignmentSampler(JointDistribution table, std::uint64_t seed)
    : table_(std::move(table)), engine_(seed) {
  cumulative_.reserve(table_.values().size());
  double running = 0.0;
  for (double v : table_.values()) {
    running += v;
    cumulative_.push_back(running);
  }
}

std::vector<std::size_t> AssignmentSampler::draw() {
  // 53 high bits -> uniform double in [0, 1); independent of the standard
  // library's distribution implementations.
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53 * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t flat = static_cast<std::size_t>(it - cumulative_.begin());
  if (flat >= cumulative_.size()) {
    flat = cumulative_.size() - 1;
  }
  // Never land on a zero-probability cell at the top edge.
  while (flat > 0 && table_.values()[flat] == 0.0) {
    --flat;
  }
  return table_.unflatten(flat);
}

std::vector<std::size_t> sample_assignment(std::span<const CandidateBasis> bases,
                                           const ReferenceSystem& isolated, std::uint64_t seed) {
  AssignmentSampler sampler(joint_distribution(bases, isolated), seed);
  return sampler.draw();
}

std::vector<std::size_t> sample_assignment(std::span<const SystemSet> systems,
                                           const ReferenceSystem& isolated, std::uint64_t seed) {
  AssignmentSampler sampler(joint_distribution(systems, isolated), seed);
  return sampler.draw();
}

}  // namespace qrs
