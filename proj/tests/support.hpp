/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The v2x-sps Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Test-only helpers: random instances and exhaustive reference searches that
// share no code with the library solvers.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "v2xsps/v2xsps.hpp"

namespace v2xsps::testing {

inline RateMatrix random_rates(std::size_t n, std::size_t cols, std::mt19937_64& rng, double lo = 0.0,
                               double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix<double> m(n, cols);
  for (auto& x : m.storage()) x = u(rng);
  return {0, std::move(m)};
}

// Best value of sum_i w(i, perm(i)) over all permutations (n <= 8).
inline double best_permutation_value(const Matrix<double>& w) {
  std::vector<std::size_t> perm(w.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += w(i, perm[i]);
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Optimum of the full problem max c^T x s.t. A x = 1 by enumerating every
// feasible x: vehicle i takes subframe perm(i) and any of its K slots there.
// Works directly on the vehicle-major cost vector of length K*L^2.
inline double full_problem_brute_force(const std::vector<double>& c, std::size_t k, std::size_t l) {
  std::vector<std::size_t> perm(l);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> slot(l, 0);
  do {
    std::fill(slot.begin(), slot.end(), 0);
    for (;;) {
      double s = 0.0;
      for (std::size_t i = 0; i < l; ++i) s += c[i * k * l + perm[i] * k + slot[i]];
      best = std::max(best, s);
      std::size_t pos = 0;
      while (pos < l && ++slot[pos] == k) slot[pos++] = 0;
      if (pos == l) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double decision_sum(const Assignment& a, const RateMatrix& m) {
  double s = 0.0;
  for (std::size_t v = 0; v < a.vehicles(); ++v) s += m.values(v, a.subchannel[v]);
  return s;
}

}  // namespace v2xsps::testing
