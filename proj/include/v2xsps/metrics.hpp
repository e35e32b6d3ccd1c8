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
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "v2xsps/assignment.hpp"
#include "v2xsps/config.hpp"
#include "v2xsps/errors.hpp"
#include "v2xsps/pipeline.hpp"

namespace v2xsps {

struct CdfPoint {
  double rate_x;
  double probability;  // Pr(Rate < rate_x); the last point is Pr(Rate <= rate_x)
};

/// Rate statistics of one (method, bits) series. Rates in bits/s.
struct EvalReport {
  Method method = Method::proposed;
  unsigned bits = 0;  // 0 = ideal side information
  std::vector<double> samples;
  double highest = 0.0;
  double average = 0.0;
  double worst = 0.0;
  double std_dev = 0.0;  // population
  std::vector<CdfPoint> cdf;
};

/// `points` evenly spaced values from lo to hi. When lo == hi the grid is
/// {lo, next representable value above lo} so it stays strictly increasing.
inline std::vector<double> even_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw InputError("cdf grid needs at least 2 points");
  if (!(lo <= hi)) throw InputError("cdf grid: lo > hi");
  if (lo == hi) return {lo, std::nextafter(lo, std::numeric_limits<double>::infinity())};
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

// Empirical CDF with strict inequality, except that the right end is closed
// so the curve always finishes at exactly 1.
inline std::vector<CdfPoint> empirical_cdf(std::span<const double> samples, std::span<const double> grid) {
  if (samples.empty()) throw InputError("cdf: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool last = i + 1 == grid.size();
    const auto it = last ? std::upper_bound(sorted.begin(), sorted.end(), grid[i])
                         : std::lower_bound(sorted.begin(), sorted.end(), grid[i]);
    out.push_back({grid[i], static_cast<double>(it - sorted.begin()) / n});
  }
  return out;
}

inline EvalReport build_report(std::vector<double> samples, std::span<const double> grid,
                               Method method = Method::proposed, unsigned bits = 0) {
  if (samples.empty()) throw InputError("report: no samples");
  for (double s : samples) {
    if (!std::isfinite(s)) throw InputError("report: non-finite sample");
  }
  EvalReport r;
  r.method = method;
  r.bits = bits;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  r.worst = *lo;
  r.highest = *hi;
  const double n = static_cast<double>(samples.size());
  r.average = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - r.average) * (s - r.average);
  r.std_dev = std::sqrt(ss / n);
  // Rounding in the mean can push it a hair outside [worst, highest].
  r.average = std::clamp(r.average, r.worst, r.highest);
  r.cdf = empirical_cdf(samples, grid);
  r.samples = std::move(samples);
  return r;
}

/// Report whose CDF grid spans the sample range with `grid_points` points.
inline EvalReport build_report(std::vector<double> samples, std::size_t grid_points,
                               Method method = Method::proposed, unsigned bits = 0) {
  if (samples.empty()) throw InputError("report: no samples");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const auto grid = even_grid(*lo, *hi, grid_points);
  return build_report(std::move(samples), grid, method, bits);
}

struct SweepRow {
  Method method;
  unsigned bits;
  std::size_t n_vehicles;
  double worst_rate_mean;  // bits/s, mean over repetitions of the per-run minimum
};

inline CellSpec sweep_cell(const ExperimentConfig& cfg, std::size_t n, std::size_t rep,
                           std::span<const unsigned> bits) {
  ScenarioModel model = cfg.scenario;
  model.seed = derive_seed(cfg.scenario_root_seed(), {kStreamSweep, n, rep});
  return CellSpec{cfg.grid(),
                  model,
                  Cluster::with_size(0, n),
                  bits,
                  cfg.methods,
                  cfg.quant_lo_db,
                  cfg.quant_hi_db,
                  derive_seed(cfg.master_seed, {kStreamSweep, kStreamRandomSolver, n, rep}),
                  cfg.oracle_caps};
}

/// Worst-vehicle rate versus cluster size. Rows ordered by method, then
/// bits, then N, following the order of the inputs.
inline std::vector<SweepRow> sweep_density(const ExperimentConfig& cfg,
                                           std::span<const std::size_t> n_vehicles,
                                           std::span<const unsigned> bits, std::size_t repetitions) {
  if (repetitions < 1) throw InputError("sweep: repetitions must be >= 1");
  for (auto n : n_vehicles) {
    if (n > cfg.l_subframes) {
      throw InfeasibleError("sweep: N = " + std::to_string(n) + " exceeds L = " +
                            std::to_string(cfg.l_subframes));
    }
  }
  const std::size_t cells = n_vehicles.size() * repetitions;
  // worst[cell][bits-major, method]
  std::vector<std::vector<double>> worst(cells);
  parallel_for(cells, cfg.threads, [&](std::size_t c) {
    const std::size_t ni = c / repetitions;
    const std::size_t rep = c % repetitions;
    const auto outcomes = run_cell(sweep_cell(cfg, n_vehicles[ni], rep, bits));
    auto& w = worst[c];
    w.reserve(outcomes.size());
    for (const auto& o : outcomes) {
      const auto& rates = o.evaluation.truth_rates;
      w.push_back(*std::min_element(rates.begin(), rates.end()));
    }
  });

  std::vector<SweepRow> rows;
  const std::size_t nm = cfg.methods.size();
  for (std::size_t mi = 0; mi < nm; ++mi) {
    for (std::size_t bi = 0; bi < bits.size(); ++bi) {
      for (std::size_t ni = 0; ni < n_vehicles.size(); ++ni) {
        double sum = 0.0;
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
          sum += worst[ni * repetitions + rep][bi * nm + mi];
        }
        rows.push_back({cfg.methods[mi], bits[bi], n_vehicles[ni],
                        sum / static_cast<double>(repetitions)});
      }
    }
  }
  return rows;
}

}  // namespace v2xsps
