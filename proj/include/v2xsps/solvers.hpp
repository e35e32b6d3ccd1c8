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
#include <chrono>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "v2xsps/assignment.hpp"
#include "v2xsps/assignment_core.hpp"
#include "v2xsps/errors.hpp"
#include "v2xsps/grid.hpp"
#include "v2xsps/hungarian.hpp"
#include "v2xsps/sideinfo.hpp"

namespace v2xsps {

namespace detail {

inline void require_width(const RateMatrix& m, const ResourceGrid& grid) {
  if (m.subchannels() != grid.total_subchannels()) {
    throw ShapeError("rate matrix width " + std::to_string(m.subchannels()) + " != K*L = " +
                     std::to_string(grid.total_subchannels()));
  }
}

inline void require_fits(std::size_t n, const ResourceGrid& grid, std::size_t cluster_id) {
  if (n > grid.subframes()) {
    throw InfeasibleError("cluster " + std::to_string(cluster_id) + ": " + std::to_string(n) +
                          " vehicles exceed " + std::to_string(grid.subframes()) + " subframes");
  }
}

}  // namespace detail

struct ReducedSolution {
  std::vector<std::size_t> subframe_of_vehicle;
  double value = 0.0;
};

/// Maximum-weight perfect matching of vehicles to macro-vertices.
inline ReducedSolution solve_proposed(const ReducedProblem& reduced) {
  auto res = max_weight_assignment(reduced.weight);
  return {std::move(res.column_of_row), res.value};
}

/// Full proposed pipeline on a square decision matrix (L rows, dummies
/// included): compress, match, expand.
inline Assignment schedule_proposed(const RateMatrix& decision, const ResourceGrid& grid) {
  detail::require_width(decision, grid);
  if (decision.vehicles() != grid.subframes()) {
    throw ShapeError("proposed: decision matrix must be padded to L rows");
  }
  const ReducedProblem reduced =
      compress(decision.values.flat(), grid.subchannels_per_subframe(), grid.subframes());
  const ReducedSolution sol = solve_proposed(reduced);
  return expand_solution(sol.subframe_of_vehicle, reduced, decision.cluster_id, Method::proposed);
}

/// First-come first-served: vehicles in index order each take their best
/// subchannel among subframes nobody in the cluster holds yet.
inline Assignment solve_greedy(const RateMatrix& decision, const ResourceGrid& grid) {
  detail::require_width(decision, grid);
  const std::size_t n = decision.vehicles();
  detail::require_fits(n, grid, decision.cluster_id);

  const std::size_t k = grid.subchannels_per_subframe();
  std::vector<bool> claimed(grid.subframes(), false);
  Assignment out{decision.cluster_id, Method::greedy, std::vector<std::size_t>(n)};
  for (std::size_t v = 0; v < n; ++v) {
    const auto row = decision.values.row(v);
    std::size_t best = grid.total_subchannels();
    for (std::size_t sc = 0; sc < row.size(); ++sc) {
      if (claimed[sc / k]) {
        sc += k - 1 - sc % k;
        continue;
      }
      if (best == grid.total_subchannels() || row[sc] > row[best]) best = sc;
    }
    out.subchannel[v] = best;
    claimed[best / k] = true;
  }
  return out;
}

/// Feasible pseudo-random baseline: a uniform injection of vehicles into
/// subframes, then a uniform slot inside each chosen subframe.
template <typename Rng>
Assignment solve_random(const ResourceGrid& grid, std::size_t n_vehicles, Rng& rng,
                        std::size_t cluster_id = 0) {
  detail::require_fits(n_vehicles, grid, cluster_id);
  std::vector<std::size_t> subframes(grid.subframes());
  std::iota(subframes.begin(), subframes.end(), std::size_t{0});
  std::shuffle(subframes.begin(), subframes.end(), rng);
  std::uniform_int_distribution<std::size_t> slot(0, grid.subchannels_per_subframe() - 1);
  Assignment out{cluster_id, Method::random, std::vector<std::size_t>(n_vehicles)};
  for (std::size_t v = 0; v < n_vehicles; ++v) {
    out.subchannel[v] = grid.subchannel_at(subframes[v], slot(rng));
  }
  return out;
}

struct OracleCaps {
  std::size_t max_subframes = 8;
  std::size_t max_slots = 4;
};

/// Exhaustive search over subframe injections x slot choices. Verification
/// only: cost grows as L!/(L-N)! * K^N.
inline Assignment solve_oracle(const RateMatrix& decision, const ResourceGrid& grid,
                               OracleCaps caps = {}) {
  detail::require_width(decision, grid);
  const std::size_t n = decision.vehicles();
  const std::size_t l = grid.subframes();
  const std::size_t k = grid.subchannels_per_subframe();
  if (l > caps.max_subframes || k > caps.max_slots) {
    throw CapacityError("oracle: instance K=" + std::to_string(k) + ", L=" + std::to_string(l) +
                        " exceeds caps K<=" + std::to_string(caps.max_slots) +
                        ", L<=" + std::to_string(caps.max_subframes));
  }
  detail::require_fits(n, grid, decision.cluster_id);

  std::vector<std::size_t> current(n), best(n);
  std::vector<bool> used(l, false);
  double best_sum = -std::numeric_limits<double>::infinity();

  // Partial sums accumulate in vehicle order, matching evaluate().
  auto search = [&](auto& self, std::size_t v, double partial) -> void {
    if (v == n) {
      if (partial > best_sum) {
        best_sum = partial;
        best = current;
      }
      return;
    }
    const auto row = decision.values.row(v);
    for (std::size_t sf = 0; sf < l; ++sf) {
      if (used[sf]) continue;
      used[sf] = true;
      for (std::size_t s = 0; s < k; ++s) {
        current[v] = sf * k + s;
        self(self, v + 1, partial + row[sf * k + s]);
      }
      used[sf] = false;
    }
  };
  search(search, 0, 0.0);
  return {decision.cluster_id, Method::oracle, std::move(best)};
}

struct SolveStats {
  double sum_rate_decision = 0.0;
  double sum_rate_truth = 0.0;
  std::chrono::nanoseconds runtime{0};
};

struct Evaluation {
  SolveStats stats;
  std::vector<double> truth_rates;  // one per real vehicle
};

/// Scores the first `real_vehicles` rows of an assignment; rows beyond that
/// are dummies and are ignored.
inline Evaluation evaluate(const Assignment& a, const RatePair& rates, std::size_t real_vehicles) {
  if (real_vehicles > a.vehicles()) throw ShapeError("evaluate: fewer assignment rows than vehicles");
  if (rates.truth.vehicles() < real_vehicles || rates.decision.vehicles() < real_vehicles) {
    throw ShapeError("evaluate: rate matrices have too few rows");
  }
  Evaluation e;
  e.truth_rates.reserve(real_vehicles);
  for (std::size_t v = 0; v < real_vehicles; ++v) {
    const std::size_t sc = a.subchannel[v];
    if (sc >= rates.truth.subchannels()) throw RangeError("evaluate: subchannel out of range");
    e.stats.sum_rate_decision += rates.decision.values(v, sc);
    e.stats.sum_rate_truth += rates.truth.values(v, sc);
    e.truth_rates.push_back(rates.truth.values(v, sc));
  }
  return e;
}

inline Evaluation evaluate(const Assignment& a, const RatePair& rates) {
  return evaluate(a, rates, a.vehicles());
}

// Keeps the first `real_vehicles` rows.
inline Assignment drop_dummies(Assignment a, std::size_t real_vehicles) {
  if (real_vehicles < a.subchannel.size()) a.subchannel.resize(real_vehicles);
  return a;
}

}  // namespace v2xsps
