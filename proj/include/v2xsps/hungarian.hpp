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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "v2xsps/errors.hpp"
#include "v2xsps/matrix.hpp"

namespace v2xsps {

template <typename T>
struct AssignmentResult {
  std::vector<std::size_t> column_of_row;
  T value{};
};

/// Kuhn-Munkres minimum-cost perfect matching on a square matrix, O(n^3).
///
/// Rows are inserted one at a time and an augmenting path is grown through
/// the equality subgraph of the dual potentials (row_pot, col_pot). Column 0
/// of the internal 1-based arrays is a virtual root. Among equal reduced
/// costs the lowest column is taken, so results are deterministic.
template <typename T>
AssignmentResult<T> min_cost_assignment(const Matrix<T>& cost) {
  const std::size_t n = cost.rows();
  if (cost.cols() != n) throw ShapeError("assignment: cost matrix must be square");
  for (const T& c : cost.flat()) {
    if constexpr (std::numeric_limits<T>::has_infinity) {
      if (!std::isfinite(static_cast<double>(c))) throw InputError("assignment: non-finite cost");
    }
  }
  AssignmentResult<T> result;
  if (n == 0) return result;

  constexpr T kInf = std::numeric_limits<T>::has_infinity ? std::numeric_limits<T>::infinity()
                                                          : std::numeric_limits<T>::max();
  std::vector<T> row_pot(n + 1, T{}), col_pot(n + 1, T{});
  std::vector<std::size_t> row_at(n + 1, 0);  // row matched to column j (1-based, 0 = free)
  std::vector<std::size_t> prev(n + 1, 0);
  std::vector<T> slack(n + 1);
  std::vector<char> visited(n + 1);

  for (std::size_t r = 1; r <= n; ++r) {
    row_at[0] = r;
    std::size_t j0 = 0;
    std::fill(slack.begin(), slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[j0] = 1;
      const std::size_t i0 = row_at[j0];
      T delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        const T reduced = cost(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (reduced < slack[j]) {
          slack[j] = reduced;
          prev[j] = j0;
        }
        if (slack[j] < delta) {
          delta = slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (visited[j]) {
          row_pot[row_at[j]] += delta;
          col_pot[j] -= delta;
        } else {
          slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_at[j0] != 0);
    // Flip the augmenting path back to the root.
    do {
      const std::size_t j1 = prev[j0];
      row_at[j0] = row_at[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.column_of_row[row_at[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) result.value += cost(i, result.column_of_row[i]);
  return result;
}

/// Maximum-weight perfect matching, reduced to the minimisation kernel on
/// (max(w) - w). The offset shifts every perfect matching by the same n*max
/// and so leaves the argmax unchanged.
template <typename T>
AssignmentResult<T> max_weight_assignment(const Matrix<T>& weight) {
  if (weight.rows() != weight.cols()) throw ShapeError("assignment: weight matrix must be square");
  if (weight.empty()) return {};
  T top = weight.flat().front();
  for (const T& w : weight.flat()) {
    if constexpr (std::numeric_limits<T>::has_infinity) {
      if (!std::isfinite(static_cast<double>(w))) throw InputError("assignment: non-finite weight");
    }
    if (w > top) top = w;
  }
  Matrix<T> cost(weight.rows(), weight.cols());
  auto& dst = cost.storage();
  const auto src = weight.flat();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = top - src[i];

  auto res = min_cost_assignment(cost);
  res.value = T{};
  for (std::size_t i = 0; i < weight.rows(); ++i) res.value += weight(i, res.column_of_row[i]);
  return res;
}

}  // namespace v2xsps
