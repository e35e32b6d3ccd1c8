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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>

#include "support.hpp"
#include "v2xsps/solvers.hpp"

using namespace v2xsps;
using Catch::Approx;

namespace {

RateMatrix rates(std::size_t rows, std::size_t cols, std::vector<double> v) {
  return {0, Matrix<double>(rows, cols, std::move(v))};
}

}  // namespace

TEST_CASE("greedy examples") {
  // K=2, L=2: vehicle 0 takes 5 (sc 3, subframe 1), vehicle 1 the best of subframe 0.
  const ResourceGrid grid(2, 2, 1.0, 1e6);
  const auto m = rates(2, 4, {1, 3, 2, 5, 4, 1, 2, 2});
  const auto g = solve_greedy(m, grid);
  CHECK(g.subchannel == std::vector<std::size_t>{3, 0});
  CHECK(testing::decision_sum(g, m) == 9.0);

  // K=1: greedy is myopic, the oracle is not.
  const ResourceGrid k1(1, 2, 1.0, 1e6);
  const auto trap = rates(2, 2, {5, 4, 5, 1});
  const auto gt = solve_greedy(trap, k1);
  CHECK(gt.subchannel == std::vector<std::size_t>{0, 1});
  CHECK(testing::decision_sum(gt, trap) == 6.0);
  CHECK(testing::decision_sum(solve_oracle(trap, k1), trap) == 9.0);

  // Ties go to the lowest index.
  const auto flat = solve_greedy(rates(2, 4, std::vector<double>(8, 1.0)), grid);
  CHECK(flat.subchannel == std::vector<std::size_t>{0, 2});

  CHECK_THROWS_AS(solve_greedy(rates(3, 4, std::vector<double>(12, 0.0)), grid), InfeasibleError);
  CHECK_THROWS_AS(solve_greedy(rates(2, 3, std::vector<double>(6, 0.0)), grid), ShapeError);
}

TEST_CASE("random solver is feasible and seed-deterministic") {
  const ResourceGrid grid(7, 100, 1.0, 1e6);
  Rng a(5), b(5), c(6);
  const auto ra = solve_random(grid, 100, a);
  CHECK(ra.subchannel == solve_random(grid, 100, b).subchannel);
  CHECK_FALSE(ra.subchannel == solve_random(grid, 100, c).subchannel);
  CHECK(is_feasible(ra, grid));
  CHECK_THROWS_AS(solve_random(grid, 101, a), InfeasibleError);
}

TEST_CASE("random solver draws subframe permutations uniformly") {
  const ResourceGrid grid(1, 3, 1.0, 1e6);
  Rng rng(17);
  std::map<std::vector<std::size_t>, int> hits;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hits[solve_random(grid, 3, rng).subchannel];
  REQUIRE(hits.size() == 6);
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(draws * p * (1 - p));
  // 4 sigma per cell keeps the six-cell false alarm rate near 4e-4.
  for (const auto& [perm, n] : hits) CHECK(std::abs(n - draws * p) < 4 * sigma);
}

TEST_CASE("oracle examples and caps") {
  const ResourceGrid grid(2, 2, 1.0, 1e6);
  const auto m = rates(2, 4, {1, 3, 2, 5, 4, 1, 2, 2});
  const auto o = solve_oracle(m, grid);
  CHECK(o.method == Method::oracle);
  CHECK(testing::decision_sum(o, m) == 9.0);

  const ResourceGrid big(7, 100, 1.0, 1e6);
  CHECK_THROWS_AS(solve_oracle(rates(1, 700, std::vector<double>(700, 0.0)), big), CapacityError);
  const ResourceGrid wide(5, 2, 1.0, 1e6);
  CHECK_THROWS_AS(solve_oracle(rates(1, 10, std::vector<double>(10, 0.0)), wide), CapacityError);
  CHECK_NOTHROW(solve_oracle(rates(1, 10, std::vector<double>(10, 0.0)), wide, OracleCaps{8, 5}));
}

TEST_CASE("evaluate scores truth rates at the chosen subchannels") {
  const RatePair p{rates(2, 4, {1, 3, 2, 5, 4, 1, 2, 2}), rates(2, 4, {0, 1, 0, 2, 7, 0, 0, 0})};
  const Assignment a{0, Method::proposed, {3, 0}};
  const auto e = evaluate(a, p);
  CHECK(e.stats.sum_rate_decision == 9.0);
  CHECK(e.stats.sum_rate_truth == 9.0);
  CHECK(e.truth_rates == std::vector<double>{2, 7});
  CHECK(evaluate(a, p, 1).truth_rates == std::vector<double>{2});
  CHECK_THROWS_AS(evaluate(a, p, 3), ShapeError);
}

TEST_CASE("proposed equals the exhaustive oracle") {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t l = 1 + rng() % 6;
    const ResourceGrid grid(k, l, 1.0, 1e6);
    const auto m = testing::random_rates(l, k * l, rng);
    const double pa = testing::decision_sum(schedule_proposed(m, grid), m);
    const double oracle = testing::decision_sum(solve_oracle(m, grid), m);
    REQUIRE(pa == Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("proposed dominates greedy and greedy beats random on average") {
  std::mt19937_64 rng(1002);
  double greedy_total = 0.0, random_total = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    const std::size_t k = 1 + rng() % 4;
    const std::size_t l = 2 + rng() % 20;
    const ResourceGrid grid(k, l, 1.0, 1e6);
    const auto m = testing::random_rates(l, k * l, rng);
    const double pa = testing::decision_sum(schedule_proposed(m, grid), m);
    const double ga = testing::decision_sum(solve_greedy(m, grid), m);
    Rng r(static_cast<std::uint64_t>(seed));
    const double ra = testing::decision_sum(solve_random(grid, l, r), m);
    REQUIRE(pa >= ga * (1 - 1e-12));
    greedy_total += ga;
    random_total += ra;
  }
  CHECK(greedy_total >= random_total);
}

TEST_CASE("every solver output is feasible") {
  std::mt19937_64 rng(1003);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng() % 4;
    const std::size_t l = 1 + rng() % 8;
    const std::size_t n = 1 + rng() % l;
    const ResourceGrid grid(k, l, 1.0, 1e6);
    const auto full = testing::random_rates(l, k * l, rng);
    const auto real = first_rows(full, n);
    Rng r(rng());
    REQUIRE(is_feasible(schedule_proposed(full, grid), grid));
    REQUIRE(is_feasible(solve_greedy(real, grid), grid));
    REQUIRE(is_feasible(solve_random(grid, n, r), grid));
    if (l <= 6) REQUIRE(is_feasible(solve_oracle(real, grid), grid));
  }
}

TEST_CASE("require_feasible reports both vehicles") {
  const ResourceGrid grid(7, 2, 1.0, 1e6);
  const Assignment bad{0, Method::greedy, {3, 5}};
  const auto v = find_violations(bad, grid);
  REQUIRE(v.size() == 1);
  CHECK(v[0].first == 0);
  CHECK(v[0].second == 1);
  CHECK_THROWS_AS(require_feasible(bad, grid), ConstraintViolation);
}
