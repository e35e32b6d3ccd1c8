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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "v2xsps/assignment.hpp"
#include "v2xsps/errors.hpp"
#include "v2xsps/grid.hpp"
#include "v2xsps/matrix.hpp"

// Constrained matching for one cluster, in two forms.
//
// Full form: L vehicles (real plus dummies) against K*L subchannels. The
// binary decision vector x has M = K*L^2 entries, vehicle-major, and must
// satisfy A x = 1 where the first L rows of A give each vehicle exactly one
// subchannel and the last L rows give each subframe exactly one vehicle.
//
// Reduced form: the K subchannels of a subframe collapse into one
// macro-vertex whose weight for vehicle i is the best of its K entries. The
// result is an ordinary L x L assignment problem with the same optimum.

namespace v2xsps {

inline constexpr std::size_t kDefaultConstraintCapL = 64;

using BinaryMatrix = Matrix<std::uint8_t>;

/// Explicit A = ([I_L (x) 1_{1xL} ; 1_{1xL} (x) I_L] (x) 1_{1xK}), 2L x K*L^2.
inline BinaryMatrix build_constraint_matrix(std::size_t k, std::size_t l,
                                            std::size_t cap_l = kDefaultConstraintCapL) {
  if (k < 1 || l < 1) throw InputError("constraint matrix: K and L must be >= 1");
  if (l > cap_l) {
    throw CapacityError("constraint matrix: L = " + std::to_string(l) + " above cap " +
                        std::to_string(cap_l));
  }
  const std::size_t kl = k * l;
  BinaryMatrix a(2 * l, kl * l, 0);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t sc = 0; sc < kl; ++sc) {
      const std::size_t col = i * kl + sc;
      a(i, col) = 1;
      a(l + sc / k, col) = 1;
    }
  }
  return a;
}

/// Reduced constraints [I_L (x) 1_{1xL} ; 1_{1xL} (x) I_L], 2L x L^2.
inline BinaryMatrix build_reduced_constraint_matrix(std::size_t l) {
  if (l < 1) throw InputError("constraint matrix: L must be >= 1");
  BinaryMatrix a(2 * l, l * l, 0);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t sf = 0; sf < l; ++sf) {
      a(i, i * l + sf) = 1;
      a(l + sf, i * l + sf) = 1;
    }
  }
  return a;
}

template <typename T>
std::vector<T> multiply(const BinaryMatrix& a, std::span<const T> x) {
  if (x.size() != a.cols()) throw ShapeError("multiply: vector length mismatch");
  std::vector<T> out(a.rows(), T{});
  for (std::size_t r = 0; r < a.rows(); ++r) {
    T acc{};
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a(r, c)) acc += x[c];
    }
    out[r] = acc;
  }
  return out;
}

/// Cost vector c_j (length K*L^2, vehicle-major) together with its grid dims.
struct FullProblem {
  std::size_t k = 1;
  std::size_t l = 1;
  std::vector<double> cost;

  FullProblem(std::size_t k_, std::size_t l_, std::vector<double> c) : k(k_), l(l_), cost(std::move(c)) {
    if (cost.size() != k * l * l) throw ShapeError("full problem: cost length must be K*L^2");
  }

  std::size_t size() const noexcept { return cost.size(); }
  BinaryMatrix constraints(std::size_t cap_l = kDefaultConstraintCapL) const {
    return build_constraint_matrix(k, l, cap_l);
  }
};

/// L x L macro-vertex weights plus, for each (vehicle, subframe), the slot
/// inside the subframe that attains the weight.
struct ReducedProblem {
  std::size_t k = 1;
  Matrix<double> weight;
  Matrix<std::size_t> best_slot;

  std::size_t subframes() const noexcept { return weight.rows(); }
};

/// Collapses each K-block of the cost vector into a macro-vertex weight.
///
/// Without `beta` the weight is the exact block maximum. With a finite
/// beta > 0 it is the softened (1/beta) log sum_k exp(beta c), which exceeds
/// the maximum by at most ln(K)/beta and tends to it as beta grows. The
/// softened path is evaluated around the block maximum so it does not
/// overflow. Ties for the best slot go to the lowest slot.
inline ReducedProblem compress(std::span<const double> cost, std::size_t k, std::size_t l,
                               std::optional<double> beta = std::nullopt) {
  if (k < 1 || l < 1) throw InputError("compress: K and L must be >= 1");
  if (cost.size() != k * l * l) {
    throw ShapeError("compress: cost length " + std::to_string(cost.size()) + " != K*L^2 = " +
                     std::to_string(k * l * l));
  }
  if (beta && !(*beta > 0.0 && std::isfinite(*beta))) {
    throw InputError("compress: beta must be a positive finite number");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw InputError("compress: non-finite cost entry");
  }

  ReducedProblem out{k, Matrix<double>(l, l), Matrix<std::size_t>(l, l)};
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t sf = 0; sf < l; ++sf) {
      const double* block = cost.data() + i * k * l + sf * k;
      std::size_t arg = 0;
      for (std::size_t s = 1; s < k; ++s) {
        if (block[s] > block[arg]) arg = s;
      }
      double w = block[arg];
      if (beta) {
        double acc = 0.0;
        for (std::size_t s = 0; s < k; ++s) acc += std::exp(*beta * (block[s] - w));
        w += std::log(acc) / *beta;
      }
      out.weight(i, sf) = w;
      out.best_slot(i, sf) = arg;
    }
  }
  return out;
}

inline ReducedProblem compress(const FullProblem& p, std::optional<double> beta = std::nullopt) {
  return compress(p.cost, p.k, p.l, beta);
}

/// Maps a vehicle -> subframe bijection back onto global subchannels, each
/// vehicle taking its best slot inside its subframe.
inline Assignment expand_solution(std::span<const std::size_t> subframe_of_vehicle,
                                  const ReducedProblem& reduced, std::size_t cluster_id = 0,
                                  Method method = Method::proposed) {
  const std::size_t l = reduced.subframes();
  if (subframe_of_vehicle.size() != l) {
    throw ConstraintViolation("expand: reduced assignment must cover all " + std::to_string(l) +
                              " vehicles");
  }
  std::vector<bool> taken(l, false);
  Assignment out{cluster_id, method, std::vector<std::size_t>(l)};
  for (std::size_t i = 0; i < l; ++i) {
    const std::size_t sf = subframe_of_vehicle[i];
    if (sf >= l) throw ConstraintViolation("expand: subframe index out of range");
    if (taken[sf]) {
      throw ConstraintViolation("expand: subframe " + std::to_string(sf) + " assigned twice");
    }
    taken[sf] = true;
    out.subchannel[i] = sf * reduced.k + reduced.best_slot(i, sf);
  }
  return out;
}

/// Binary decision vector x (length K*L^2) of an assignment that covers all
/// L rows of the square problem.
inline std::vector<std::uint8_t> solution_vector(const Assignment& a, const ResourceGrid& grid) {
  const std::size_t kl = grid.total_subchannels();
  if (a.vehicles() != grid.subframes()) {
    throw ShapeError("solution vector: assignment must cover L vehicles");
  }
  std::vector<std::uint8_t> x(kl * grid.subframes(), 0);
  for (std::size_t i = 0; i < a.vehicles(); ++i) {
    if (a.subchannel[i] >= kl) throw RangeError("solution vector: subchannel out of range");
    x[i * kl + a.subchannel[i]] = 1;
  }
  return x;
}

/// Extends an assignment of N <= L real vehicles to all L rows by giving the
/// dummy rows the free subframes in ascending order (slot 0).
inline Assignment complete_with_dummies(const Assignment& a, const ResourceGrid& grid) {
  require_feasible(a, grid);
  if (a.vehicles() > grid.subframes()) throw InfeasibleError("complete: more vehicles than subframes");
  std::vector<bool> used(grid.subframes(), false);
  for (auto sc : a.subchannel) used[grid.subframe_of(sc)] = true;
  Assignment out = a;
  for (std::size_t sf = 0; sf < grid.subframes() && out.vehicles() < grid.subframes(); ++sf) {
    if (!used[sf]) out.subchannel.push_back(grid.subchannel_at(sf, 0));
  }
  return out;
}

// x^T diag(c) x.
inline double diagonal_form(std::span<const double> c, std::span<const std::uint8_t> x) {
  if (c.size() != x.size()) throw ShapeError("form: length mismatch");
  double s = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) s += c[p] * x[p] * x[p];
  return s;
}

// x^T (I (x) [1 - I]_{KxK}) diag(c) x: cross terms between distinct slots of
// the same (vehicle, subframe) block. Zero for any feasible x.
inline double cross_slot_form(std::span<const double> c, std::span<const std::uint8_t> x,
                              std::size_t k) {
  if (c.size() != x.size() || c.size() % k != 0) throw ShapeError("form: length mismatch");
  double s = 0.0;
  for (std::size_t b = 0; b < c.size(); b += k) {
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = 0; q < k; ++q) {
        if (p != q) s += x[b + p] * c[b + q] * x[b + q];
      }
    }
  }
  return s;
}

// x^T (I (x) 1_{KxK}) diag(c) x, factored as y^T d with y the block sums of x
// and d the block sums of c o x.
inline double block_form(std::span<const double> c, std::span<const std::uint8_t> x, std::size_t k) {
  if (c.size() != x.size() || c.size() % k != 0) throw ShapeError("form: length mismatch");
  double s = 0.0;
  for (std::size_t b = 0; b < c.size(); b += k) {
    double y = 0.0;
    double d = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      y += x[b + p];
      d += c[b + p] * x[b + p];
    }
    s += y * d;
  }
  return s;
}

/// (I (x) 1^+) y with the pseudo-inverse convention 1_{1xK}^+ = (1/K) 1_{Kx1}:
/// spreads each reduced entry evenly over its K slots.
inline std::vector<double> spread_reduced_solution(std::span<const double> y, std::size_t k) {
  std::vector<double> x(y.size() * k);
  for (std::size_t b = 0; b < y.size(); ++b) {
    for (std::size_t p = 0; p < k; ++p) x[b * k + p] = y[b] / static_cast<double>(k);
  }
  return x;
}

}  // namespace v2xsps
