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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "v2xsps/assignment.hpp"
#include "v2xsps/config.hpp"
#include "v2xsps/errors.hpp"
#include "v2xsps/metrics.hpp"
#include "v2xsps/pipeline.hpp"
#include "v2xsps/scenario.hpp"

namespace v2xsps {

inline constexpr std::uint64_t kStreamSps = 0x5350;

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline double mbps(double bps) { return bps / 1e6; }

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace detail

struct RunRecord {
  std::size_t cluster;
  std::size_t repetition;
  Method method;
  unsigned bits;
  SolveStats stats;
};

struct ExperimentResult {
  std::vector<EvalReport> reports;  // bits-major, then method (config order)
  std::vector<RunRecord> runs;
  std::vector<std::filesystem::path> files;
};

/// Runs every (cluster, repetition) cell for all configured methods and bit
/// depths, pools per-vehicle truth rates per (method, bits), and writes
/// cdf.csv, criteria.csv, summary.json, manifest.json and one assignment CSV
/// per (method, bits) for repetition 0 into cfg.output_dir.
///
/// The CDFs of all series share one rate grid spanning the pooled range, so
/// the curves can be overlaid directly.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const std::string& seed_source = "config") {
  namespace fs = std::filesystem;
  const ResourceGrid grid = cfg.grid();
  const std::size_t n_clusters = cfg.clusters.size();
  const std::size_t reps = cfg.repetitions;

  std::vector<Cluster> clusters;
  for (std::size_t c = 0; c < n_clusters; ++c) clusters.push_back(Cluster::with_size(c, cfg.clusters[c]));
  check_clusters(clusters);

  std::vector<std::vector<MethodOutcome>> cells(n_clusters * reps);
  parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
    const std::size_t c = idx / reps;
    const std::size_t rep = idx % reps;
    ScenarioModel model = cfg.scenario;
    model.seed = derive_seed(cfg.scenario_root_seed(), {kStreamScenario, c, rep});
    CellSpec spec{grid,
                  model,
                  clusters[c],
                  cfg.bits,
                  cfg.methods,
                  cfg.quant_lo_db,
                  cfg.quant_hi_db,
                  derive_seed(cfg.master_seed, {kStreamRandomSolver, c, rep}),
                  cfg.oracle_caps};
    try {
      cells[idx] = run_cell(spec);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("cluster " + std::to_string(c) + ", repetition " + std::to_string(rep) +
                            ": " + e.what());
    } catch (const CapacityError& e) {
      throw CapacityError("cluster " + std::to_string(c) + ": " + e.what());
    }
  });

  ExperimentResult result;
  const std::size_t nm = cfg.methods.size();
  const std::size_t series = cfg.bits.size() * nm;
  std::vector<std::vector<double>> pooled(series);
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    for (std::size_t s = 0; s < series; ++s) {
      const auto& o = cells[idx][s];
      pooled[s].insert(pooled[s].end(), o.evaluation.truth_rates.begin(), o.evaluation.truth_rates.end());
      result.runs.push_back({idx / reps, idx % reps, o.method, o.bits, o.evaluation.stats});
    }
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& p : pooled) {
    const auto [a, b] = std::minmax_element(p.begin(), p.end());
    lo = std::min(lo, *a);
    hi = std::max(hi, *b);
  }
  const auto rate_grid = even_grid(lo, hi, cfg.cdf_points);
  for (std::size_t s = 0; s < series; ++s) {
    result.reports.push_back(build_report(std::move(pooled[s]), rate_grid, cfg.methods[s % nm],
                                          cfg.bits[s / nm]));
  }

  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);

  std::ostringstream cdf;
  cdf << "method,bits,rate_x_mbps,prob\n";
  std::ostringstream criteria;
  criteria << "method,bits,highest,average,worst,std_dev\n";
  Json summary = Json::object();
  summary["config_hash"] = config_hash(cfg);
  summary["master_seed"] = cfg.master_seed;
  summary["series"] = Json::array();
  for (const auto& r : result.reports) {
    const std::string m(to_string(r.method));
    Json js{{"method", m},
            {"bits", r.bits},
            {"samples", r.samples.size()},
            {"highest_mbps", detail::mbps(r.highest)},
            {"average_mbps", detail::mbps(r.average)},
            {"worst_mbps", detail::mbps(r.worst)},
            {"std_dev_mbps", detail::mbps(r.std_dev)},
            {"cdf", Json::array()}};
    for (const auto& p : r.cdf) {
      cdf << m << ',' << r.bits << ',' << detail::fixed(detail::mbps(p.rate_x)) << ','
          << detail::fixed(p.probability) << '\n';
      js["cdf"].push_back({{"rate_x_mbps", detail::mbps(p.rate_x)}, {"prob", p.probability}});
    }
    criteria << m << ',' << r.bits << ',' << detail::fixed(detail::mbps(r.highest)) << ','
             << detail::fixed(detail::mbps(r.average)) << ',' << detail::fixed(detail::mbps(r.worst))
             << ',' << detail::fixed(detail::mbps(r.std_dev)) << '\n';
    summary["series"].push_back(std::move(js));
  }
  detail::write_file(out_dir / "cdf.csv", cdf.str());
  detail::write_file(out_dir / "criteria.csv", criteria.str());
  detail::write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  result.files = {out_dir / "cdf.csv", out_dir / "criteria.csv", out_dir / "summary.json"};

  // Repetition 0 assignments, one file per (method, bits).
  for (std::size_t s = 0; s < series; ++s) {
    std::ostringstream csv;
    csv << "cluster,vehicle,subchannel,subframe\n";
    for (std::size_t c = 0; c < n_clusters; ++c) {
      const auto& a = cells[c * reps][s].assignment;
      for (std::size_t v = 0; v < a.vehicles(); ++v) {
        csv << c << ',' << v << ',' << a.subchannel[v] << ',' << grid.subframe_of(a.subchannel[v]) << '\n';
      }
    }
    const auto name = "assignments_" + std::string(to_string(cfg.methods[s % nm])) + "_b" +
                      std::to_string(cfg.bits[s / nm]) + ".csv";
    detail::write_file(out_dir / name, csv.str());
    result.files.push_back(out_dir / name);
  }

  Json manifest = Json::object();
  manifest["config"] = to_json(cfg);
  manifest["config_hash"] = config_hash(cfg);
  manifest["master_seed"] = cfg.master_seed;
  manifest["seed_source"] = seed_source;
  // Reservation lengths for the repetition-0 assignments.
  Json sps = Json::array();
  for (std::size_t c = 0; c < n_clusters; ++c) {
    Rng rng = make_rng(cfg.master_seed, {kStreamSps, c});
    Json vehicles = Json::array();
    for (std::size_t v = 0; v < cfg.clusters[c]; ++v) {
      const double t = draw_reservation_s(cfg.sps_pool_s, rng);
      vehicles.push_back({{"t_sps_s", t},
                          {"windows", SpsTimer(t, grid.window_ms()).remaining_windows()}});
    }
    sps.push_back({{"cluster", c}, {"vehicles", std::move(vehicles)}});
  }
  manifest["reservations"] = std::move(sps);
  Json runs = Json::array();
  for (const auto& r : result.runs) {
    runs.push_back({{"cluster", r.cluster},
                    {"repetition", r.repetition},
                    {"method", std::string(to_string(r.method))},
                    {"bits", r.bits},
                    {"sum_rate_decision_bps", r.stats.sum_rate_decision},
                    {"sum_rate_truth_bps", r.stats.sum_rate_truth},
                    {"runtime_ns", r.stats.runtime.count()}});
  }
  manifest["runs"] = std::move(runs);
  Json files = Json::array();
  for (const auto& f : result.files) files.push_back(f.filename().string());
  manifest["files"] = std::move(files);
  detail::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  result.files.push_back(out_dir / "manifest.json");
  return result;
}

/// Runs sweep_density over cfg.sweep_vehicles x cfg.sweep_bits and writes
/// sweep.csv (rates in Mbps) plus sweep.json.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  auto rows = sweep_density(cfg, cfg.sweep_vehicles, cfg.sweep_bits, cfg.repetitions);
  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  std::ostringstream csv;
  csv << "method,bits,n_vehicles,worst_rate_mbps\n";
  Json j = Json::object();
  j["config_hash"] = config_hash(cfg);
  j["master_seed"] = cfg.master_seed;
  j["rows"] = Json::array();
  for (const auto& r : rows) {
    const std::string m(to_string(r.method));
    csv << m << ',' << r.bits << ',' << r.n_vehicles << ',' << detail::fixed(detail::mbps(r.worst_rate_mean))
        << '\n';
    j["rows"].push_back({{"method", m},
                         {"bits", r.bits},
                         {"n_vehicles", r.n_vehicles},
                         {"worst_rate_mbps", detail::mbps(r.worst_rate_mean)}});
  }
  detail::write_file(out_dir / "sweep.csv", csv.str());
  detail::write_file(out_dir / "sweep.json", j.dump(2) + "\n");
  return rows;
}

struct AssignmentRow {
  std::size_t cluster;
  std::size_t vehicle;
  std::size_t subchannel;
  std::size_t subframe;
  std::size_t line;
};

struct ValidationReport {
  std::size_t rows = 0;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

inline std::vector<AssignmentRow> read_assignment_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<AssignmentRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    const auto cells = detail::split_csv_line(view);
    if (!have_header) {
      if (cells.size() != 4 || cells[0] != "cluster" || cells[1] != "vehicle" ||
          cells[2] != "subchannel" || cells[3] != "subframe") {
        throw ParseError("expected header 'cluster,vehicle,subchannel,subframe'", lineno, 1);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != 4) {
      throw ParseError("expected 4 fields, found " + std::to_string(cells.size()), lineno,
                       std::min<std::size_t>(cells.size(), 4) + 1);
    }
    std::size_t vals[4];
    for (std::size_t c = 0; c < 4; ++c) {
      const auto cell = cells[c];
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), vals[c]);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("not a non-negative integer: '" + std::string(cell) + "'", lineno, c + 1);
      }
    }
    rows.push_back({vals[0], vals[1], vals[2], vals[3], lineno});
  }
  if (!have_header) throw ParseError("assignment csv: empty input");
  return rows;
}

/// Checks an assignment CSV for duplicate vehicles and for vehicles of one
/// cluster sharing a subframe. With `k` set, the subframe is derived from the
/// subchannel and the redundant subframe column is cross-checked.
inline ValidationReport validate_assignments(std::istream& in, std::optional<std::size_t> k = std::nullopt) {
  if (k && *k == 0) throw InputError("validate: K must be >= 1");
  const auto rows = read_assignment_csv(in);
  ValidationReport rep;
  rep.rows = rows.size();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen_vehicle;  // -> line
  std::map<std::pair<std::size_t, std::size_t>, const AssignmentRow*> owner;  // (cluster, subframe)
  for (const auto& r : rows) {
    if (!seen_vehicle.emplace(std::pair{r.cluster, r.vehicle}, r.line).second) {
      rep.violations.push_back("cluster " + std::to_string(r.cluster) + ": vehicle " +
                               std::to_string(r.vehicle) + " listed more than once (line " +
                               std::to_string(r.line) + ")");
      continue;
    }
    std::size_t sf = r.subframe;
    if (k) {
      sf = r.subchannel / *k;
      if (sf != r.subframe) {
        rep.violations.push_back("cluster " + std::to_string(r.cluster) + ": vehicle " +
                                 std::to_string(r.vehicle) + " subframe column " +
                                 std::to_string(r.subframe) + " but subchannel " +
                                 std::to_string(r.subchannel) + " lies in subframe " + std::to_string(sf));
      }
    }
    auto [it, fresh] = owner.emplace(std::pair{r.cluster, sf}, &r);
    if (!fresh) {
      rep.violations.push_back("cluster " + std::to_string(r.cluster) + ": vehicles " +
                               std::to_string(it->second->vehicle) + " and " + std::to_string(r.vehicle) +
                               " share subframe " + std::to_string(sf) + " (subchannels " +
                               std::to_string(it->second->subchannel) + ", " +
                               std::to_string(r.subchannel) + ")");
    }
  }
  return rep;
}

inline ValidationReport validate_assignment_file(const std::filesystem::path& path,
                                                 std::optional<std::size_t> k = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return validate_assignments(in, k);
}

}  // namespace v2xsps
