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

#include "qrs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "qrs/errors.hpp"

namespace qrs {
namespace {

// Index bookkeeping for a factor subset inside a composite space.
// full[r * sub_dim + s] is the composite index whose subset digits encode `s`
// (in the subset's own order) and whose remaining digits encode `r` (in
// registry order).
struct Layout {
  std::size_t sub_dim = 1;
  std::size_t rest_dim = 1;
  std::vector<std::size_t> full;

  std::size_t at(std::size_t rest, std::size_t sub) const { return full[rest * sub_dim + sub]; }
};

Layout make_layout(const SpaceRegistry& space, std::span<const std::string> subset) {
  const auto& entries = space.entries();
  const std::size_t n = entries.size();

  std::vector<std::size_t> sub_stride(n, 0);
  std::vector<std::size_t> rest_stride(n, 0);
  std::vector<bool> in_subset(n, false);

  Layout layout;
  for (auto it = subset.rbegin(); it != subset.rend(); ++it) {
    const std::size_t p = space.position(*it);
    if (in_subset[p]) {
      throw LabelCollision("label '" + *it + "' listed twice");
    }
    in_subset[p] = true;
    sub_stride[p] = layout.sub_dim;
    layout.sub_dim *= entries[p].dimension;
  }
  for (std::size_t p = n; p-- > 0;) {
    if (!in_subset[p]) {
      rest_stride[p] = layout.rest_dim;
      layout.rest_dim *= entries[p].dimension;
    }
  }

  layout.full.assign(space.dimension(), 0);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    std::size_t rem = i;
    std::size_t sub = 0;
    std::size_t rest = 0;
    for (std::size_t p = n; p-- > 0;) {
      const std::size_t d = rem % entries[p].dimension;
      rem /= entries[p].dimension;
      if (in_subset[p]) {
        sub += d * sub_stride[p];
      } else {
        rest += d * rest_stride[p];
      }
    }
    layout.full[rest * layout.sub_dim + sub] = i;
  }
  return layout;
}

std::vector<std::string> ordered_subset(const SpaceRegistry& space, const SystemSet& keep) {
  for (const auto& label : keep) {
    if (!space.contains(label)) {
      throw UnknownLabel("label '" + label + "' is not part of the space");
    }
  }
  std::vector<std::string> out;
  for (const auto& e : space.entries()) {
    if (keep.count(e.label) != 0) {
      out.push_back(e.label);
    }
  }
  return out;
}

void fix_phase(Vector& v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    // Strictly greater keeps the first of equal-magnitude components.
    if (mag > best_mag + 1e-14) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag > 0.0) {
    v *= std::conj(v(best)) / best_mag;
    v(best) = Complex(best_mag, 0.0);
  }
}

bool lexicographically_greater(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > 1e-12) {
      return a(i).real() > b(i).real();
    }
    if (std::abs(a(i).imag() - b(i).imag()) > 1e-12) {
      return a(i).imag() > b(i).imag();
    }
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpaceRegistry

SpaceRegistry::SpaceRegistry(std::vector<Subsystem> entries) : entries_(std::move(entries)) {
  SystemSet seen;
  for (const auto& e : entries_) {
    if (e.label.empty()) {
      throw UnknownLabel("empty subsystem label");
    }
    if (e.dimension == 0) {
      throw DimensionError("subsystem '" + e.label + "' has dimension 0");
    }
    if (!seen.insert(e.label).second) {
      throw LabelCollision("label '" + e.label + "' appears twice");
    }
    if (dimension_ > kMaxDimension / e.dimension) {
      throw DimensionError("composite dimension exceeds " + std::to_string(kMaxDimension));
    }
    dimension_ *= e.dimension;
  }
}

SpaceRegistry::SpaceRegistry(std::initializer_list<Subsystem> entries)
    : SpaceRegistry(std::vector<Subsystem>(entries)) {}

bool SpaceRegistry::contains(std::string_view label) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Subsystem& e) { return e.label == label; });
}

std::size_t SpaceRegistry::position(std::string_view label) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].label == label) {
      return i;
    }
  }
  throw UnknownLabel("label '" + std::string(label) + "' is not part of the space");
}

std::size_t SpaceRegistry::dimension_of(std::string_view label) const {
  return entries_[position(label)].dimension;
}

SystemSet SpaceRegistry::labels() const {
  SystemSet out;
  for (const auto& e : entries_) {
    out.insert(e.label);
  }
  return out;
}

std::vector<std::string> SpaceRegistry::label_order() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    out.push_back(e.label);
  }
  return out;
}

SpaceRegistry SpaceRegistry::restricted_to(const SystemSet& keep) const {
  std::vector<Subsystem> out;
  for (const auto& label : ordered_subset(*this, keep)) {
    out.push_back(entries_[position(label)]);
  }
  return SpaceRegistry(std::move(out));
}

SpaceRegistry SpaceRegistry::reordered(std::span<const std::string> order) const {
  if (order.size() != entries_.size()) {
    throw UnknownLabel("reorder must name every factor exactly once");
  }
  std::vector<Subsystem> out;
  for (const auto& label : order) {
    out.push_back(entries_[position(label)]);
  }
  return SpaceRegistry(std::move(out));
}

SpaceRegistry SpaceRegistry::concat(const SpaceRegistry& tail) const {
  std::vector<Subsystem> out = entries_;
  for (const auto& e : tail.entries_) {
    if (contains(e.label)) {
      throw LabelCollision("label '" + e.label + "' appears in both spaces");
    }
    out.push_back(e);
  }
  return SpaceRegistry(std::move(out));
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(SpaceRegistry space, Vector amplitudes, Normalization mode)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension()) {
    throw DimensionError("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                         ", space has dimension " + std::to_string(space_.dimension()));
  }
  const double n = amplitudes_.norm();
  if (mode == Normalization::kAuto) {
    if (n == 0.0 || !std::isfinite(n)) {
      throw NotNormalized("cannot normalize a zero or non-finite vector");
    }
    amplitudes_ /= n;
  } else if (std::abs(n - 1.0) > kNormTolerance) {
    throw NotNormalized("state norm is " + std::to_string(n));
  }
}

StateVector StateVector::basis(SpaceRegistry space, std::span<const std::size_t> digits) {
  const auto& entries = space.entries();
  if (digits.size() != entries.size()) {
    throw DimensionError("basis state needs one digit per factor");
  }
  std::size_t index = 0;
  for (std::size_t p = 0; p < entries.size(); ++p) {
    if (digits[p] >= entries[p].dimension) {
      throw DimensionError("digit out of range for factor '" + entries[p].label + "'");
    }
    index = index * entries[p].dimension + digits[p];
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(space), std::move(v));
}

StateVector StateVector::basis(SpaceRegistry space, std::initializer_list<std::size_t> digits) {
  const std::vector<std::size_t> d(digits);
  return basis(std::move(space), std::span<const std::size_t>(d));
}

Complex StateVector::inner(const StateVector& other) const {
  if (!(space_ == other.space_)) {
    throw DimensionError("inner product of states on different spaces");
  }
  return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------
// Operator / DensityOperator

Operator::Operator(SpaceRegistry space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(space_.dimension());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw DimensionError("operator shape does not match its space");
  }
}

Operator Operator::identity(SpaceRegistry space) {
  const auto d = static_cast<Eigen::Index>(space.dimension());
  return Operator(std::move(space), Matrix::Identity(d, d));
}

double hermitian_residual(const Matrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator::DensityOperator(SpaceRegistry space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(space_.dimension());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw DimensionError("density matrix shape does not match its space");
  }
  const double herm = hermitian_residual(matrix_);
  if (herm > kHermitianTolerance) {
    throw NotHermitian("density matrix deviates from Hermitian by " + std::to_string(herm));
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kNormTolerance) {
    throw NotNormalized("density matrix trace is " + std::to_string(tr.real()));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues().minCoeff();
  if (lowest < -kNormTolerance) {
    throw NotPositive("density matrix has eigenvalue " + std::to_string(lowest));
  }
}

DensityOperator::DensityOperator(Trusted, SpaceRegistry space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  const Vector& v = psi.amplitudes();
  return DensityOperator(Trusted{}, psi.space(), v * v.adjoint());
}

// ---------------------------------------------------------------------------
// Operations

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  SpaceRegistry space = a.space().concat(b.space());
  const auto da = static_cast<Eigen::Index>(a.dimension());
  const auto db = static_cast<Eigen::Index>(b.dimension());
  Vector out(da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return StateVector(std::move(space), std::move(out));
}

Operator tensor_product(const Operator& a, const Operator& b) {
  SpaceRegistry space = a.space().concat(b.space());
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  Matrix out(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = 0; j < ma.cols(); ++j) {
      out.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) = ma(i, j) * mb;
    }
  }
  return Operator(std::move(space), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, const SystemSet& keep) {
  const auto order = ordered_subset(rho.space(), keep);
  const Layout layout = make_layout(rho.space(), order);
  const auto k = static_cast<Eigen::Index>(layout.sub_dim);
  Matrix out = Matrix::Zero(k, k);
  const Matrix& m = rho.matrix();
  for (std::size_t r = 0; r < layout.rest_dim; ++r) {
    for (std::size_t a = 0; a < layout.sub_dim; ++a) {
      const auto ia = static_cast<Eigen::Index>(layout.at(r, a));
      for (std::size_t b = 0; b < layout.sub_dim; ++b) {
        out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            m(ia, static_cast<Eigen::Index>(layout.at(r, b)));
      }
    }
  }
  return DensityOperator(DensityOperator::Trusted{}, rho.space().restricted_to(keep),
                         std::move(out));
}

DensityOperator reduced_state(const StateVector& psi, const SystemSet& keep) {
  const auto order = ordered_subset(psi.space(), keep);
  const Layout layout = make_layout(psi.space(), order);
  Matrix block(static_cast<Eigen::Index>(layout.sub_dim),
               static_cast<Eigen::Index>(layout.rest_dim));
  for (std::size_t r = 0; r < layout.rest_dim; ++r) {
    for (std::size_t s = 0; s < layout.sub_dim; ++s) {
      block(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) = psi[layout.at(r, s)];
    }
  }
  return DensityOperator(DensityOperator::Trusted{}, psi.space().restricted_to(keep),
                         block * block.adjoint());
}

Spectrum eig_hermitian(const Operator& op) {
  const double herm = hermitian_residual(op.matrix());
  if (herm > kHermitianTolerance) {
    throw NotHermitian("operator deviates from Hermitian by " + std::to_string(herm));
  }
  // Symmetrize so round-off in the input does not leak into the eigenvectors.
  const Matrix h = 0.5 * (op.matrix() + op.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NotHermitian("eigendecomposition did not converge");
  }

  struct Raw {
    double value;
    Vector vector;
  };
  std::vector<Raw> raw;
  const Eigen::Index n = h.rows();
  raw.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = n; i-- > 0;) {
    Vector v = solver.eigenvectors().col(i);
    fix_phase(v);
    raw.push_back({solver.eigenvalues()(i), std::move(v)});
  }

  Spectrum spectrum;
  // Eigen returns ascending order, so `raw` is already descending; reorder
  // inside runs of near-equal eigenvalues.
  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = start + 1;
    while (end < raw.size() && raw[end - 1].value - raw[end].value < kDegeneracyGap) {
      ++end;
    }
    if (end - start > 1) {
      spectrum.degenerate = true;
      std::stable_sort(raw.begin() + static_cast<std::ptrdiff_t>(start),
                       raw.begin() + static_cast<std::ptrdiff_t>(end),
                       [](const Raw& a, const Raw& b) {
                         return lexicographically_greater(a.vector, b.vector);
                       });
    }
    start = end;
  }
  for (auto& r : raw) {
    spectrum.pairs.push_back(
        {r.value, StateVector(op.space(), std::move(r.vector), Normalization::kAuto)});
  }
  return spectrum;
}

Spectrum eig_hermitian(const DensityOperator& rho) {
  return eig_hermitian(Operator(rho.space(), rho.matrix()));
}

Matrix Spectrum::reconstruct() const {
  if (pairs.empty()) {
    return Matrix();
  }
  const auto d = static_cast<Eigen::Index>(pairs.front().eigenvector.dimension());
  Matrix out = Matrix::Zero(d, d);
  for (const auto& p : pairs) {
    const Vector& v = p.eigenvector.amplitudes();
    out += p.eigenvalue * (v * v.adjoint());
  }
  return out;
}

Operator embed(const Operator& local, const SpaceRegistry& full_space) {
  const auto order = local.space().label_order();
  for (const auto& label : order) {
    if (full_space.dimension_of(label) != local.space().dimension_of(label)) {
      throw DimensionError("factor '" + label + "' has mismatched dimensions");
    }
  }
  const Layout layout = make_layout(full_space, order);
  const auto d = static_cast<Eigen::Index>(full_space.dimension());
  Matrix out = Matrix::Zero(d, d);
  const Matrix& m = local.matrix();
  for (std::size_t r = 0; r < layout.rest_dim; ++r) {
    for (std::size_t a = 0; a < layout.sub_dim; ++a) {
      for (std::size_t b = 0; b < layout.sub_dim; ++b) {
        out(static_cast<Eigen::Index>(layout.at(r, a)), static_cast<Eigen::Index>(layout.at(r, b))) =
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  return Operator(full_space, std::move(out));
}

Operator projector(const StateVector& phi, const SpaceRegistry& full_space) {
  const Vector& v = phi.amplitudes();
  return embed(Operator(phi.space(), v * v.adjoint()), full_space);
}

StateVector apply(const Operator& local, const StateVector& state) {
  const auto order = local.space().label_order();
  for (const auto& label : order) {
    if (state.space().dimension_of(label) != local.space().dimension_of(label)) {
      throw DimensionError("factor '" + label + "' has mismatched dimensions");
    }
  }
  const Layout layout = make_layout(state.space(), order);
  const auto k = static_cast<Eigen::Index>(layout.sub_dim);
  Vector out(static_cast<Eigen::Index>(state.dimension()));
  Vector slice(k);
  for (std::size_t r = 0; r < layout.rest_dim; ++r) {
    for (std::size_t s = 0; s < layout.sub_dim; ++s) {
      slice(static_cast<Eigen::Index>(s)) = state[layout.at(r, s)];
    }
    const Vector mapped = local.matrix() * slice;
    for (std::size_t s = 0; s < layout.sub_dim; ++s) {
      out(static_cast<Eigen::Index>(layout.at(r, s))) = mapped(static_cast<Eigen::Index>(s));
    }
  }
  return StateVector(state.space(), std::move(out));
}

StateVector reorder(const StateVector& state, std::span<const std::string> order) {
  SpaceRegistry target = state.space().reordered(order);
  const Layout layout = make_layout(state.space(), order);
  Vector out(static_cast<Eigen::Index>(state.dimension()));
  for (std::size_t s = 0; s < layout.sub_dim; ++s) {
    out(static_cast<Eigen::Index>(s)) = state[layout.at(0, s)];
  }
  return StateVector(std::move(target), std::move(out));
}

}  // namespace qrs
