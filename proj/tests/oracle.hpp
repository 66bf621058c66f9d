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

// Test-only reference computations. Nothing here calls into the library's
// linear algebra; every value is computed from explicit component formulas
// on plain arrays so it can serve as an independent check.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace qrs::oracle {

using C = std::complex<double>;
using Table2 = std::array<std::array<double, 2>, 2>;

// <xi_j(theta)| s> for spin digit s (0 up, 1 down), real half-angle axis.
inline double xi_component(double theta, std::size_t j, std::size_t s) {
  const double c = std::cos(theta / 2.0);
  const double sn = std::sin(theta / 2.0);
  if (j == 0) return s == 0 ? c : sn;
  return s == 0 ? -sn : c;
}

// Two-spin amplitudes psi[s1][s2] = a|up,down> - b|down,up>.
inline std::array<std::array<C, 2>, 2> pair_amplitudes(C a, C b) {
  std::array<std::array<C, 2>, 2> psi{};
  psi[0][1] = a;
  psi[1][0] = -b;
  return psi;
}

// Born rule on the bare two-spin state: |<xi_j (x) xi_k|psi>|^2.
inline Table2 born_joint(C a, C b, double theta1, double theta2) {
  const auto psi = pair_amplitudes(a, b);
  Table2 p{};
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 2; ++k) {
      C amp = 0.0;
      for (std::size_t s1 = 0; s1 < 2; ++s1) {
        for (std::size_t s2 = 0; s2 < 2; ++s2) {
          amp += xi_component(theta1, j, s1) * xi_component(theta2, k, s2) * psi[s1][s2];
        }
      }
      p[j][k] = std::norm(amp);
    }
  }
  return p;
}

// Mixture of the two product branches with weights |a|^2 and |b|^2.
inline Table2 mixture_joint(C a, C b, double theta1, double theta2) {
  Table2 p{};
  // branch l=0: up (x) down, l=1: down (x) up
  const std::array<std::array<std::size_t, 2>, 2> digits{{{0, 1}, {1, 0}}};
  const std::array<double, 2> w{std::norm(a), std::norm(b)};
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        const double x1 = xi_component(theta1, j, digits[l][0]);
        const double x2 = xi_component(theta2, k, digits[l][1]);
        p[j][k] += w[l] * x1 * x1 * x2 * x2;
      }
    }
  }
  return p;
}

inline double correlator(const Table2& p) { return p[0][0] - p[0][1] - p[1][0] + p[1][1]; }

// Reduced density matrix by explicit index loops. `dims` lists factor
// dimensions (leftmost slowest); `keep` flags the retained factors.
inline std::vector<std::vector<C>> brute_partial_trace(const std::vector<C>& psi,
                                                       const std::vector<std::size_t>& dims,
                                                       const std::vector<bool>& keep) {
  const std::size_t n = dims.size();
  std::size_t total = 1;
  std::size_t kept = 1;
  for (std::size_t p = 0; p < n; ++p) {
    total *= dims[p];
    if (keep[p]) kept *= dims[p];
  }
  auto digits = [&](std::size_t i) {
    std::vector<std::size_t> d(n);
    for (std::size_t p = n; p-- > 0;) {
      d[p] = i % dims[p];
      i /= dims[p];
    }
    return d;
  };
  auto kept_index = [&](const std::vector<std::size_t>& d) {
    std::size_t k = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (keep[p]) k = k * dims[p] + d[p];
    }
    return k;
  };
  std::vector<std::vector<C>> rho(kept, std::vector<C>(kept, 0.0));
  for (std::size_t i = 0; i < total; ++i) {
    const auto di = digits(i);
    for (std::size_t j = 0; j < total; ++j) {
      const auto dj = digits(j);
      bool same_traced = true;
      for (std::size_t p = 0; p < n; ++p) {
        if (!keep[p] && di[p] != dj[p]) same_traced = false;
      }
      if (same_traced) {
        rho[kept_index(di)][kept_index(dj)] += psi[i] * std::conj(psi[j]);
      }
    }
  }
  return rho;
}

inline std::vector<C> random_amplitudes(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<C> v(dim);
  double norm = 0.0;
  for (auto& x : v) {
    x = C(g(rng), g(rng));
    norm += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(norm);
  return v;
}

// Random normalized (a, b) with independent phases.
inline std::pair<C, C> random_coefficients(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = std::acos(std::sqrt(u(rng)));
  const double pa = 2.0 * M_PI * u(rng);
  const double pb = 2.0 * M_PI * u(rng);
  return {std::polar(std::cos(t), pa), std::polar(std::sin(t), pb)};
}

}  // namespace qrs::oracle
