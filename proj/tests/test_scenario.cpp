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
#include <numeric>
#include <sstream>

#include "support.hpp"
#include "v2xsps/scenario.hpp"
#include "v2xsps/solvers.hpp"

using namespace v2xsps;
using Catch::Approx;

namespace {

// E[clamp(X, lo, hi)] for X ~ N(mu, sigma), by trapezoidal quadrature of the
// density over [lo, hi] plus the clamped tail masses.
double clamped_normal_mean(double mu, double sigma, double lo, double hi) {
  const auto pdf = [&](double x) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
  };
  const auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0))); };
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  double inner = 0.5 * (lo * pdf(lo) + hi * pdf(hi));
  for (int i = 1; i < steps; ++i) {
    const double x = lo + i * h;
    inner += x * pdf(x);
  }
  inner *= h;
  return inner + lo * cdf(lo) + hi * (1.0 - cdf(hi));
}

}  // namespace

TEST_CASE("generate_sinr is deterministic under a fixed seed") {
  const ResourceGrid grid(7, 100, 1.0, 1.26e6);
  ScenarioModel model;
  model.seed = 99;
  const Cluster cluster = Cluster::with_size(3, 40);
  const SinrMatrix a = generate_sinr(model, cluster, grid);
  const SinrMatrix b = generate_sinr(model, cluster, grid);
  CHECK(a.values == b.values);
  CHECK(a.vehicles() == 40);
  CHECK(a.subchannels() == 700);
  for (double x : a.values.flat()) {
    REQUIRE(x >= -15.0);
    REQUIRE(x <= 35.0);
  }
  model.seed = 100;
  CHECK_FALSE(generate_sinr(model, cluster, grid).values == a.values);
}

TEST_CASE("collapsed uniform support stays within epsilon of the floor") {
  const ResourceGrid grid(4, 5, 1.0, 1e6);
  ScenarioModel model;
  model.floor_db = 10.0;
  model.ceil_db = 10.0 + 1e-6;
  const auto m = generate_sinr(model, Cluster::with_size(0, 5), grid);
  for (double x : m.values.flat()) REQUIRE(std::abs(x - 10.0) <= 1e-6);
}

TEST_CASE("gaussian model matches the clamped-normal mean") {
  const double oracle = clamped_normal_mean(10.0, 8.0, -15.0, 35.0);
  // Clamp bounds are symmetric about the mean.
  CHECK(oracle == Approx(10.0).margin(1e-6));

  const ResourceGrid grid(10, 1000, 1.0, 1e6);  // 10^4 columns
  ScenarioModel model;
  model.kind = ScenarioKind::gaussian;
  model.mean_db = 10.0;
  model.std_db = 8.0;
  model.seed = 5;
  const auto m = generate_sinr(model, Cluster::with_size(0, 100), grid);  // 10^6 samples
  const auto flat = m.values.flat();
  const double mean = std::accumulate(flat.begin(), flat.end(), 0.0) / static_cast<double>(flat.size());
  CHECK(std::abs(mean - oracle) < 0.1);
}

TEST_CASE("transmit power shifts the gaussian model") {
  const ResourceGrid grid(10, 100, 1.0, 1e6);
  ScenarioModel model;
  model.kind = ScenarioKind::gaussian;
  model.mean_db = 0.0;
  model.std_db = 1.0;
  model.p_t_dbm = 26.0;
  const auto m = generate_sinr(model, Cluster::with_size(0, 100), grid);
  const auto flat = m.values.flat();
  const double mean = std::accumulate(flat.begin(), flat.end(), 0.0) / static_cast<double>(flat.size());
  CHECK(mean == Approx(3.0).margin(0.05));
}

TEST_CASE("two-state model mixes the two levels") {
  const ResourceGrid grid(10, 100, 1.0, 1e6);
  ScenarioModel model;
  model.kind = ScenarioKind::two_state;
  model.mean_db = 20.0;
  model.bad_mean_db = 0.0;
  model.std_db = 0.5;
  model.p_good = 0.25;
  const auto m = generate_sinr(model, Cluster::with_size(0, 100), grid);
  std::size_t good = 0;
  for (double x : m.values.flat()) good += x > 10.0;
  CHECK(static_cast<double>(good) / 1e5 == Approx(0.25).margin(0.01));
}

TEST_CASE("scenario model validation") {
  ScenarioModel model;
  model.floor_db = 5.0;
  model.ceil_db = 5.0;
  CHECK_THROWS_AS(model.validate(), InputError);
  model.ceil_db = 6.0;
  model.p_good = 1.5;
  CHECK_THROWS_AS(model.validate(), InputError);
  CHECK(parse_scenario_kind("two-state") == ScenarioKind::two_state);
  CHECK_THROWS_AS(parse_scenario_kind("rayleigh"), InputError);
}

TEST_CASE("clusters must be disjoint") {
  std::vector<Cluster> ok{Cluster::with_size(0, 3), Cluster::with_size(1, 2)};
  CHECK_NOTHROW(check_clusters(ok));
  std::vector<Cluster> clash{Cluster{0, {"a", "b"}}, Cluster{1, {"c", "a"}}};
  CHECK_THROWS_AS(check_clusters(clash), InputError);
  std::vector<Cluster> empty{Cluster{0, {}}};
  CHECK_THROWS_AS(check_clusters(empty), InputError);
  CHECK_THROWS_AS(Cluster::with_size(0, 0), InputError);
}

TEST_CASE("ingest_sinr reads the CSV format") {
  const ResourceGrid grid(2, 2, 1.0, 1e6);
  const Cluster cluster{0, {"a", "b"}};

  SECTION("2x4 round trip") {
    std::istringstream in("vehicle,0,1,2,3\na,1.5,-2,3e1,0\nb,4,5,6,-15.25\n");
    const auto m = ingest_sinr(in, cluster, grid);
    CHECK(m.values == Matrix<double>(2, 4, {1.5, -2, 30, 0, 4, 5, 6, -15.25}));

    std::ostringstream out;
    write_sinr_csv(out, m, cluster.vehicle_ids);
    std::istringstream back(out.str());
    CHECK(ingest_sinr(back, cluster, grid).values == m.values);
  }
  SECTION("column count must match K*L") {
    std::istringstream in("vehicle,0,1,2\na,1,2,3\nb,4,5,6\n");
    CHECK_THROWS_AS(ingest_sinr(in, cluster, grid), ShapeError);
  }
  SECTION("row count must match the cluster") {
    std::istringstream in("vehicle,0,1,2,3\na,1,2,3,4\n");
    CHECK_THROWS_AS(ingest_sinr(in, cluster, grid), ShapeError);
  }
  SECTION("NaN is rejected with its location") {
    std::istringstream in("vehicle,0,1,2,3\na,1,2,3,4\nb,4,NaN,6,7\n");
    try {
      ingest_sinr(in, cluster, grid);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 3);
      CHECK(std::string(e.what()).find("NaN") != std::string::npos);
    }
  }
  SECTION("garbage cells are rejected") {
    std::istringstream in("vehicle,0,1,2,3\na,1,2,x3,4\nb,4,5,6,7\n");
    CHECK_THROWS_AS(ingest_sinr(in, cluster, grid), ParseError);
  }
  SECTION("empty input") {
    std::istringstream in("");
    CHECK_THROWS_AS(ingest_sinr(in, cluster, grid), ParseError);
  }
}

TEST_CASE("pad_to_square appends sentinel dummy rows") {
  const ResourceGrid grid(2, 5, 1.0, 1e6);
  const Matrix<double> base(3, 10, 7.0);

  SECTION("N = L is the identity") {
    const ResourceGrid square(2, 3, 1.0, 1e6);
    const auto p = pad_to_square(SinrMatrix(0, Matrix<double>(3, 6, 1.0)), square);
    CHECK(p.dummy_rows.empty());
    CHECK(p.matrix.vehicles() == 3);
  }
  SECTION("N = 3, L = 5 adds rows 3 and 4") {
    const auto p = pad_to_square(SinrMatrix(0, base), grid, -15.0);
    CHECK(p.dummy_rows == std::vector<std::size_t>{3, 4});
    CHECK(p.matrix.vehicles() == 5);
    CHECK(p.real_vehicles == 3);
    CHECK(p.is_dummy(4));
    CHECK_FALSE(p.is_dummy(2));
    for (double x : p.matrix.values.row(3)) CHECK(x == -15.0);
  }
  SECTION("N = L + 1 is infeasible") {
    CHECK_THROWS_AS(pad_to_square(SinrMatrix(0, Matrix<double>(6, 10, 0.0)), grid), InfeasibleError);
  }
}

TEST_CASE("padding leaves the original rows bit-identical") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const ResourceGrid grid(1 + trial % 4, 2 + trial % 9, 1.0, 1e6);
    const std::size_t n = 1 + rng() % grid.subframes();
    ScenarioModel model;
    model.seed = rng();
    const auto sinr = generate_sinr(model, Cluster::with_size(0, n), grid);
    const auto p = pad_to_square(sinr, grid);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = sinr.values.row(i);
      const auto b = p.matrix.values.row(i);
      REQUIRE(std::equal(a.begin(), a.end(), b.begin()));
    }
  }
}

TEST_CASE("dummy rows never displace a real vehicle's optimum") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t l = 1 + rng() % 6;
    const std::size_t n = 1 + rng() % l;
    const ResourceGrid grid(k, l, 1.0, 1e6);
    ScenarioModel model;
    model.seed = rng();
    const auto sinr = generate_sinr(model, Cluster::with_size(0, n), grid);

    // Without padding: exhaustive search over the real vehicles only.
    const auto rates = build_rate_matrices(sinr, std::nullopt, grid.bandwidth_hz());
    const double unpadded = testing::decision_sum(solve_oracle(rates.decision, grid), rates.decision);

    // With padding: the proposed pipeline on the square matrix.
    const auto padded = build_rate_matrices(pad_to_square(sinr, grid).matrix, std::nullopt, grid.bandwidth_hz());
    const auto a = drop_dummies(schedule_proposed(padded.decision, grid), n);
    REQUIRE(testing::decision_sum(a, rates.decision) == Approx(unpadded).epsilon(1e-12));
  }
}
