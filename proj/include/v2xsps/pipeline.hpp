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
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "v2xsps/assignment.hpp"
#include "v2xsps/grid.hpp"
#include "v2xsps/rng.hpp"
#include "v2xsps/scenario.hpp"
#include "v2xsps/sideinfo.hpp"
#include "v2xsps/solvers.hpp"

// scenario -> pad -> quantize -> schedule -> evaluate, for one cluster draw.

namespace v2xsps {

// Stream tags for derive_seed.
inline constexpr std::uint64_t kStreamScenario = 0x5343;
inline constexpr std::uint64_t kStreamRandomSolver = 0x5241;
inline constexpr std::uint64_t kStreamSweep = 0x5357;

struct MethodOutcome {
  Method method;
  unsigned bits;
  Assignment assignment;  // real vehicles only
  Evaluation evaluation;
};

/// Runs one method on rates built from a padded SINR matrix. The random
/// solver draws from `rng`; the others ignore it.
inline Assignment schedule(Method method, const RatePair& padded, const ResourceGrid& grid,
                           std::size_t real_vehicles, Rng& rng, const OracleCaps& caps = {}) {
  switch (method) {
    case Method::proposed:
      return drop_dummies(schedule_proposed(padded.decision, grid), real_vehicles);
    case Method::greedy: {
      // Dummies come last, so they never change the choices of real vehicles.
      return drop_dummies(solve_greedy(padded.decision, grid), real_vehicles);
    }
    case Method::random:
      return solve_random(grid, real_vehicles, rng, padded.decision.cluster_id);
    case Method::oracle: {
      const RateMatrix real = first_rows(padded.decision, real_vehicles);
      return solve_oracle(real, grid, caps);
    }
  }
  throw InputError("unknown method");
}

struct CellSpec {
  ResourceGrid grid;
  ScenarioModel scenario;  // seed already set for this cell
  Cluster cluster;
  std::span<const unsigned> bits;
  std::span<const Method> methods;
  double quant_lo_db = -15.0;
  double quant_hi_db = 35.0;
  std::uint64_t random_seed = 0;
  OracleCaps caps{};
};

/// Outcomes ordered bits-major then method, matching the spans in `spec`.
inline std::vector<MethodOutcome> run_cell(const CellSpec& spec) {
  const SinrMatrix sinr = generate_sinr(spec.scenario, spec.cluster, spec.grid);
  const PaddedSinr padded = pad_to_square(sinr, spec.grid, spec.scenario.floor_db);
  const std::size_t n = padded.real_vehicles;

  std::vector<MethodOutcome> out;
  out.reserve(spec.bits.size() * spec.methods.size());
  for (unsigned b : spec.bits) {
    const RatePair rates = build_rate_matrices(
        padded.matrix, quantizer_for_bits(b, spec.quant_lo_db, spec.quant_hi_db),
        spec.grid.bandwidth_hz());
    for (Method m : spec.methods) {
      // Same stream for every bits value: the random baseline ignores side information.
      Rng rng(spec.random_seed);
      const auto t0 = std::chrono::steady_clock::now();
      Assignment a = schedule(m, rates, spec.grid, n, rng, spec.caps);
      const auto t1 = std::chrono::steady_clock::now();
      require_feasible(a, spec.grid);
      Evaluation e = evaluate(a, rates, n);
      e.stats.runtime = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0);
      out.push_back({m, b, std::move(a), std::move(e)});
    }
  }
  return out;
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Callers write
/// results into slot i, so the outcome does not depend on completion order.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(count);
            return;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace v2xsps
