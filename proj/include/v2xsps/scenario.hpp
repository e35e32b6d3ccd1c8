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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "v2xsps/errors.hpp"
#include "v2xsps/grid.hpp"
#include "v2xsps/matrix.hpp"
#include "v2xsps/rng.hpp"

namespace v2xsps {

/// A communication cluster. Clusters are disjoint: a vehicle belongs to
/// exactly one of them, and each cluster is scheduled independently.
struct Cluster {
  std::size_t id = 0;
  std::vector<std::string> vehicle_ids;

  std::size_t n_vehicles() const noexcept { return vehicle_ids.size(); }

  // Cluster with generated ids "c<id>v<i>".
  static Cluster with_size(std::size_t id, std::size_t n) {
    if (n < 1) throw InputError("cluster: needs at least one vehicle");
    Cluster c{id, {}};
    c.vehicle_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.vehicle_ids.push_back("c" + std::to_string(id) + "v" + std::to_string(i));
    }
    return c;
  }
};

// Throws InputError unless every cluster is non-empty and no vehicle id
// repeats within or across clusters.
inline void check_clusters(std::span<const Cluster> clusters) {
  std::unordered_set<std::string> seen;
  for (const auto& c : clusters) {
    if (c.vehicle_ids.empty()) {
      throw InputError("cluster " + std::to_string(c.id) + " has no vehicles");
    }
    for (const auto& v : c.vehicle_ids) {
      if (!seen.insert(v).second) throw InputError("vehicle id '" + v + "' appears twice");
    }
  }
}

/// Per-cluster side information: SINR in dB for every (vehicle, subchannel).
struct SinrMatrix {
  std::size_t cluster_id = 0;
  Matrix<double> values;

  SinrMatrix() = default;
  SinrMatrix(std::size_t cluster, Matrix<double> v) : cluster_id(cluster), values(std::move(v)) {
    for (double x : values.flat()) {
      if (!std::isfinite(x)) throw InputError("sinr: non-finite entry");
    }
  }

  std::size_t vehicles() const noexcept { return values.rows(); }
  std::size_t subchannels() const noexcept { return values.cols(); }
};

enum class ScenarioKind { uniform, gaussian, two_state };

inline std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::uniform: return "uniform";
    case ScenarioKind::gaussian: return "gaussian";
    case ScenarioKind::two_state: return "two-state";
  }
  return "?";
}

inline ScenarioKind parse_scenario_kind(std::string_view s) {
  if (s == "uniform") return ScenarioKind::uniform;
  if (s == "gaussian") return ScenarioKind::gaussian;
  if (s == "two-state" || s == "two_state") return ScenarioKind::two_state;
  throw InputError("unknown scenario kind '" + std::string(s) + "'");
}

/// Statistical stand-in for trace-derived SINR.
///
///  - uniform:   U[floor_db, ceil_db]
///  - gaussian:  N(mean_db, std_db)
///  - two-state: each entry is "good" with probability p_good and drawn from
///               N(mean_db, std_db), otherwise from N(bad_mean_db, std_db)
///
/// All draws are shifted by (p_t_dbm - 23) dB, i.e. the means describe a
/// 23 dBm transmitter, then clamped to [floor_db, ceil_db].
struct ScenarioModel {
  static constexpr double kReferencePowerDbm = 23.0;

  ScenarioKind kind = ScenarioKind::uniform;
  double mean_db = 10.0;
  double std_db = 8.0;
  double bad_mean_db = -5.0;
  double p_good = 0.7;
  double floor_db = -15.0;
  double ceil_db = 35.0;
  double p_t_dbm = kReferencePowerDbm;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(floor_db < ceil_db)) throw InputError("scenario: floor_db must be < ceil_db");
    if (!std::isfinite(floor_db) || !std::isfinite(ceil_db) || !std::isfinite(mean_db) ||
        !std::isfinite(bad_mean_db) || !std::isfinite(p_t_dbm)) {
      throw InputError("scenario: parameters must be finite");
    }
    if (!(std_db >= 0.0) || !std::isfinite(std_db)) throw InputError("scenario: std_db must be >= 0");
    if (!(p_good >= 0.0 && p_good <= 1.0)) throw InputError("scenario: p_good must be in [0, 1]");
  }
};

/// Draws an N_j x KL SINR matrix. Pure in (model, cluster.id, n_vehicles, grid).
inline SinrMatrix generate_sinr(const ScenarioModel& model, const Cluster& cluster,
                                const ResourceGrid& grid) {
  model.validate();
  const std::size_t n = cluster.n_vehicles();
  const std::size_t cols = grid.total_subchannels();
  const double shift = model.p_t_dbm - ScenarioModel::kReferencePowerDbm;
  Rng rng = make_rng(model.seed, {static_cast<std::uint64_t>(cluster.id)});

  Matrix<double> m(n, cols);
  auto& out = m.storage();
  auto clamp = [&](double x) { return std::clamp(x, model.floor_db, model.ceil_db); };

  switch (model.kind) {
    case ScenarioKind::uniform: {
      std::uniform_real_distribution<double> u(model.floor_db, model.ceil_db);
      for (auto& x : out) x = clamp(u(rng) + shift);
      break;
    }
    case ScenarioKind::gaussian: {
      std::normal_distribution<double> g(model.mean_db + shift, model.std_db);
      for (auto& x : out) x = clamp(g(rng));
      break;
    }
    case ScenarioKind::two_state: {
      std::bernoulli_distribution good(model.p_good);
      std::normal_distribution<double> hi(model.mean_db + shift, model.std_db);
      std::normal_distribution<double> lo(model.bad_mean_db + shift, model.std_db);
      for (auto& x : out) x = clamp(good(rng) ? hi(rng) : lo(rng));
      break;
    }
  }
  return SinrMatrix(cluster.id, std::move(m));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

inline double parse_double_cell(std::string_view cell, std::size_t line, std::size_t column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError("not a number: '" + std::string(cell) + "'", line, column);
  }
  if (!std::isfinite(v)) {
    throw ParseError("non-finite value: '" + std::string(cell) + "'", line, column);
  }
  return v;
}

}  // namespace detail

/// Parsed SINR CSV before any grid check.
struct SinrTable {
  std::vector<std::string> vehicle_labels;
  Matrix<double> values;
};

// Format: header `vehicle,<k0>,<k1>,...`, then one row per vehicle whose
// first cell is the vehicle label and the rest are SINR values in dB.
inline SinrTable read_sinr_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  SinrTable table;
  std::vector<double> values;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    auto cells = detail::split_csv_line(view);
    if (!have_header) {
      if (cells.front() != "vehicle") {
        throw ParseError("expected header starting with 'vehicle'", lineno, 1);
      }
      if (cells.size() < 2) throw ShapeError("sinr csv: header has no subchannel columns");
      width = cells.size() - 1;
      have_header = true;
      continue;
    }
    if (cells.size() != width + 1) {
      throw ShapeError("sinr csv: line " + std::to_string(lineno) + " has " +
                       std::to_string(cells.size() - 1) + " values, header declares " +
                       std::to_string(width));
    }
    table.vehicle_labels.emplace_back(cells.front());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      values.push_back(detail::parse_double_cell(cells[c], lineno, c + 1));
    }
  }
  if (!have_header) throw ParseError("sinr csv: empty input");
  table.values = Matrix<double>(table.vehicle_labels.size(), width, std::move(values));
  return table;
}

inline SinrMatrix ingest_sinr(std::istream& in, const Cluster& cluster, const ResourceGrid& grid) {
  SinrTable t = read_sinr_csv(in);
  if (t.values.cols() != grid.total_subchannels()) {
    throw ShapeError("sinr csv: " + std::to_string(t.values.cols()) +
                     " subchannel columns, grid has K*L = " +
                     std::to_string(grid.total_subchannels()));
  }
  if (t.values.rows() != cluster.n_vehicles()) {
    throw ShapeError("sinr csv: " + std::to_string(t.values.rows()) + " vehicle rows, cluster " +
                     std::to_string(cluster.id) + " has " + std::to_string(cluster.n_vehicles()));
  }
  return SinrMatrix(cluster.id, std::move(t.values));
}

inline SinrMatrix ingest_sinr(const std::filesystem::path& path, const Cluster& cluster,
                              const ResourceGrid& grid) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return ingest_sinr(in, cluster, grid);
}

inline void write_sinr_csv(std::ostream& out, const SinrMatrix& m,
                           std::span<const std::string> labels = {}) {
  out << "vehicle";
  for (std::size_t k = 0; k < m.subchannels(); ++k) out << ',' << k;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.vehicles(); ++i) {
    if (i < labels.size()) {
      out << labels[i];
    } else {
      out << i;
    }
    for (double v : m.values.row(i)) out << ',' << v;
    out << '\n';
  }
}

/// SINR matrix completed to L rows with dummy vehicles.
struct PaddedSinr {
  SinrMatrix matrix;
  std::size_t real_vehicles = 0;
  std::vector<std::size_t> dummy_rows;

  bool is_dummy(std::size_t row) const noexcept { return row >= real_vehicles; }
};

/// Appends L - N_j dummy rows filled with `sentinel_db` so that the matching
/// problem becomes square. Original rows are copied untouched.
inline PaddedSinr pad_to_square(const SinrMatrix& m, const ResourceGrid& grid,
                                double sentinel_db = -15.0) {
  if (m.subchannels() != grid.total_subchannels()) {
    throw ShapeError("pad: matrix width does not match K*L");
  }
  const std::size_t n = m.vehicles();
  const std::size_t l = grid.subframes();
  if (n > l) {
    throw InfeasibleError("cluster " + std::to_string(m.cluster_id) + ": " + std::to_string(n) +
                          " vehicles exceed " + std::to_string(l) + " subframes");
  }
  PaddedSinr out{m, n, {}};
  const std::vector<double> dummy(grid.total_subchannels(), sentinel_db);
  for (std::size_t r = n; r < l; ++r) {
    out.matrix.values.append_row(dummy);
    out.dummy_rows.push_back(r);
  }
  return out;
}

}  // namespace v2xsps
