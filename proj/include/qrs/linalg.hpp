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

// Dense complex linear algebra over labeled tensor-product Hilbert spaces.
//
// A composite space is an ordered list of named factors. The order fixes the
// index layout of every vector and matrix on that space: row-major, leftmost
// factor slowest-varying. All values are immutable after construction.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrs {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// A set of subsystem labels. Composite systems such as P1+M1 are {"P1","M1"}.
using SystemSet = std::set<std::string>;

inline constexpr std::size_t kMaxDimension = 4096;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kDegeneracyGap = 1e-9;

struct Subsystem {
  std::string label;
  std::size_t dimension = 1;

  bool operator==(const Subsystem&) const = default;
};

class SpaceRegistry {
 public:
  SpaceRegistry() = default;
  explicit SpaceRegistry(std::vector<Subsystem> entries);
  SpaceRegistry(std::initializer_list<Subsystem> entries);

  const std::vector<Subsystem>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t dimension() const { return dimension_; }

  bool contains(std::string_view label) const;
  // Position of `label` in the registry order. Throws UnknownLabel.
  std::size_t position(std::string_view label) const;
  std::size_t dimension_of(std::string_view label) const;
  SystemSet labels() const;
  std::vector<std::string> label_order() const;

  // Sub-registry holding only `keep`, in this registry's order.
  SpaceRegistry restricted_to(const SystemSet& keep) const;
  // Same factors in the given order; `order` must be a permutation.
  SpaceRegistry reordered(std::span<const std::string> order) const;
  // This registry followed by `tail`. Throws LabelCollision.
  SpaceRegistry concat(const SpaceRegistry& tail) const;

  bool operator==(const SpaceRegistry& other) const { return entries_ == other.entries_; }

 private:
  std::vector<Subsystem> entries_;
  std::size_t dimension_ = 1;
};

enum class Normalization { kStrict, kAuto };

class StateVector {
 public:
  // kStrict rejects vectors whose norm is off by more than kNormTolerance;
  // kAuto rescales any nonzero vector.
  StateVector(SpaceRegistry space, Vector amplitudes,
              Normalization mode = Normalization::kStrict);

  // Standard basis vector with one digit per factor, e.g. {1, 0} on P(2)⊗M(3).
  static StateVector basis(SpaceRegistry space, std::span<const std::size_t> digits);
  static StateVector basis(SpaceRegistry space, std::initializer_list<std::size_t> digits);

  const SpaceRegistry& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
  double norm() const { return amplitudes_.norm(); }

  // <this|other>; both vectors must live on the same registry.
  Complex inner(const StateVector& other) const;

 private:
  SpaceRegistry space_;
  Vector amplitudes_;
};

// A square matrix on a labeled space. No structural invariants beyond shape.
class Operator {
 public:
  Operator(SpaceRegistry space, Matrix matrix);
  static Operator identity(SpaceRegistry space);

  const SpaceRegistry& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  SpaceRegistry space_;
  Matrix matrix_;
};

// Hermitian, positive semidefinite, unit trace.
class DensityOperator {
 public:
  // Validates all three invariants (NotHermitian, NotPositive, NotNormalized).
  DensityOperator(SpaceRegistry space, Matrix matrix);
  static DensityOperator pure(const StateVector& psi);

  const SpaceRegistry& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  Complex trace() const { return matrix_.trace(); }

 private:
  struct Trusted {};
  DensityOperator(Trusted, SpaceRegistry space, Matrix matrix);

  friend DensityOperator partial_trace(const DensityOperator&, const SystemSet&);
  friend DensityOperator reduced_state(const StateVector&, const SystemSet&);

  SpaceRegistry space_;
  Matrix matrix_;
};

struct EigenPair {
  double eigenvalue;
  StateVector eigenvector;
};

// Eigenpairs sorted by descending eigenvalue. Within a run of eigenvalues
// closer than `gap_threshold`, vectors are ordered by descending
// lexicographic (re, im) comparison of their amplitudes. Every eigenvector
// has its largest-magnitude component made real and positive.
struct Spectrum {
  std::vector<EigenPair> pairs;
  bool degenerate = false;
  double gap_threshold = kDegeneracyGap;

  Matrix reconstruct() const;
};

StateVector tensor_product(const StateVector& a, const StateVector& b);
Operator tensor_product(const Operator& a, const Operator& b);

// Reduced operator on `keep`, which must be a subset of rho's labels.
DensityOperator partial_trace(const DensityOperator& rho, const SystemSet& keep);
// Same as partial_trace(DensityOperator::pure(psi), keep) without forming
// the full outer product.
DensityOperator reduced_state(const StateVector& psi, const SystemSet& keep);

Spectrum eig_hermitian(const DensityOperator& rho);
// Throws NotHermitian if `op` is not Hermitian within kHermitianTolerance.
Spectrum eig_hermitian(const Operator& op);

// |phi><phi| tensored with the identity on the rest of `full_space`.
Operator projector(const StateVector& phi, const SpaceRegistry& full_space);
// `local` tensored with the identity on the rest of `full_space`.
Operator embed(const Operator& local, const SpaceRegistry& full_space);
// Applies `local` to the factors it names, leaving the others untouched.
StateVector apply(const Operator& local, const StateVector& state);
// Same state with its factors permuted into `order`.
StateVector reorder(const StateVector& state, std::span<const std::string> order);

// Hermitian part deviation max|A - A^dagger|.
double hermitian_residual(const Matrix& m);

}  // namespace qrs
