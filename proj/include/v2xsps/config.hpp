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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2xsps/assignment.hpp"
#include "v2xsps/errors.hpp"
#include "v2xsps/grid.hpp"
#include "v2xsps/scenario.hpp"
#include "v2xsps/solvers.hpp"

namespace v2xsps {

using Json = nlohmann::ordered_json;

/// Everything an experiment run depends on. Two runs with equal configs
/// produce identical CSV artifacts.
struct ExperimentConfig {
  std::size_t k_subchannels = 7;
  std::size_t l_subframes = 100;
  double t_ms = 1.0;
  double b_hz = 1.26e6;

  ScenarioModel scenario{};
  bool scenario_seed_set = false;  // otherwise derived from master_seed

  std::vector<std::size_t> clusters{100};
  std::vector<unsigned> bits{0, 2, 3, 4};
  double quant_lo_db = -15.0;
  double quant_hi_db = 35.0;
  std::vector<Method> methods{Method::proposed, Method::greedy, Method::random};

  std::size_t repetitions = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  std::size_t cdf_points = 30;
  std::size_t threads = 1;

  std::vector<double> sps_pool_s = default_sps_pool_s();
  OracleCaps oracle_caps{};

  std::vector<std::size_t> sweep_vehicles{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<unsigned> sweep_bits{2, 3, 4};

  ResourceGrid grid() const { return ResourceGrid(k_subchannels, l_subframes, t_ms, b_hz); }

  // Seed of the SINR stream; the scenario's own seed when given.
  std::uint64_t scenario_root_seed() const { return scenario_seed_set ? scenario.seed : master_seed; }
};

namespace detail {

// Walks a dotted key ("scenario.mean_db") into a JSON object, creating
// intermediate objects as needed.
inline Json& json_at_path(Json& root, const std::string& dotted) {
  Json* node = &root;
  std::size_t start = 0;
  for (;;) {
    const auto pos = dotted.find('.', start);
    const std::string part = dotted.substr(start, pos == std::string::npos ? pos : pos - start);
    if (part.empty()) throw ValidationError("invalid config key '" + dotted + "'");
    if (!node->is_object()) *node = Json::object();
    node = &(*node)[part];
    if (pos == std::string::npos) return *node;
    start = pos + 1;
  }
}

}  // namespace detail

/// Applies a `key=value` override. The value is read as JSON when it parses
/// (numbers, arrays, booleans), otherwise as a plain string.
inline void apply_override(Json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  detail::json_at_path(root, key) = std::move(value);
}

inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  std::vector<std::string> bad;

  auto get = [&](const Json& obj, const char* key, const std::string& path, auto& dst) {
    if (!obj.is_object() || !obj.contains(key)) return false;
    try {
      obj.at(key).get_to(dst);
      return true;
    } catch (const nlohmann::json::exception&) {
      bad.push_back(path + " (wrong type)");
      return false;
    }
  };
  auto section = [&](const char* key) -> const Json& {
    static const Json empty = Json::object();
    if (!j.contains(key)) return empty;
    if (!j.at(key).is_object()) {
      bad.push_back(std::string(key) + " (must be an object)");
      return empty;
    }
    return j.at(key);
  };

  if (!j.is_object()) throw ValidationError("config root must be a JSON object");

  const Json& grid = section("grid");
  get(grid, "k_subchannels", "grid.k_subchannels", cfg.k_subchannels);
  get(grid, "l_subframes", "grid.l_subframes", cfg.l_subframes);
  get(grid, "t_ms", "grid.t_ms", cfg.t_ms);
  get(grid, "b_hz", "grid.b_hz", cfg.b_hz);

  const Json& sc = section("scenario");
  std::string kind = std::string(to_string(cfg.scenario.kind));
  if (get(sc, "kind", "scenario.kind", kind)) {
    try {
      cfg.scenario.kind = parse_scenario_kind(kind);
    } catch (const InputError&) {
      bad.push_back("scenario.kind (unknown '" + kind + "')");
    }
  }
  get(sc, "mean_db", "scenario.mean_db", cfg.scenario.mean_db);
  get(sc, "std_db", "scenario.std_db", cfg.scenario.std_db);
  get(sc, "bad_mean_db", "scenario.bad_mean_db", cfg.scenario.bad_mean_db);
  get(sc, "p_good", "scenario.p_good", cfg.scenario.p_good);
  get(sc, "floor_db", "scenario.floor_db", cfg.scenario.floor_db);
  get(sc, "ceil_db", "scenario.ceil_db", cfg.scenario.ceil_db);
  get(sc, "p_t_dbm", "scenario.p_t_dbm", cfg.scenario.p_t_dbm);
  cfg.scenario_seed_set = get(sc, "seed", "scenario.seed", cfg.scenario.seed);

  get(j, "clusters", "clusters", cfg.clusters);

  const Json& q = section("quant");
  get(q, "bits", "quant.bits", cfg.bits);
  get(q, "lo_db", "quant.lo_db", cfg.quant_lo_db);
  get(q, "hi_db", "quant.hi_db", cfg.quant_hi_db);

  std::vector<std::string> methods;
  if (get(j, "methods", "methods", methods)) {
    cfg.methods.clear();
    for (const auto& m : methods) {
      try {
        cfg.methods.push_back(parse_method(m));
      } catch (const InputError&) {
        bad.push_back("methods (unknown '" + m + "')");
      }
    }
  }

  get(j, "repetitions", "repetitions", cfg.repetitions);
  get(j, "master_seed", "master_seed", cfg.master_seed);
  get(j, "output_dir", "output_dir", cfg.output_dir);
  get(j, "cdf_points", "cdf_points", cfg.cdf_points);
  get(j, "threads", "threads", cfg.threads);

  const Json& sps = section("sps");
  get(sps, "pool_s", "sps.pool_s", cfg.sps_pool_s);

  const Json& oracle = section("oracle");
  get(oracle, "max_subframes", "oracle.max_subframes", cfg.oracle_caps.max_subframes);
  get(oracle, "max_slots", "oracle.max_slots", cfg.oracle_caps.max_slots);

  const Json& sweep = section("sweep");
  get(sweep, "n_vehicles", "sweep.n_vehicles", cfg.sweep_vehicles);
  get(sweep, "bits", "sweep.bits", cfg.sweep_bits);

  // Semantic checks.
  if (cfg.k_subchannels < 1) bad.push_back("grid.k_subchannels (must be >= 1)");
  if (cfg.l_subframes < 1) bad.push_back("grid.l_subframes (must be >= 1)");
  if (!(cfg.t_ms > 0.0)) bad.push_back("grid.t_ms (must be > 0)");
  if (!(cfg.b_hz > 0.0)) bad.push_back("grid.b_hz (must be > 0)");
  try {
    cfg.scenario.validate();
  } catch (const InputError& e) {
    bad.push_back(std::string("scenario (") + e.what() + ")");
  }
  if (cfg.clusters.empty()) bad.push_back("clusters (empty)");
  for (auto n : cfg.clusters) {
    if (n < 1 || n > cfg.l_subframes) {
      bad.push_back("clusters (size " + std::to_string(n) + " outside [1, L])");
    }
  }
  if (cfg.bits.empty()) bad.push_back("quant.bits (empty)");
  for (auto b : cfg.bits) {
    if (b > QuantizerSpec::kMaxBits) bad.push_back("quant.bits (" + std::to_string(b) + " > 8)");
  }
  for (auto b : cfg.sweep_bits) {
    if (b > QuantizerSpec::kMaxBits) bad.push_back("sweep.bits (" + std::to_string(b) + " > 8)");
  }
  for (auto n : cfg.sweep_vehicles) {
    if (n < 1 || n > cfg.l_subframes) {
      bad.push_back("sweep.n_vehicles (size " + std::to_string(n) + " outside [1, L])");
    }
  }
  if (!(cfg.quant_lo_db < cfg.quant_hi_db)) bad.push_back("quant.lo_db/hi_db (need lo < hi)");
  if (cfg.methods.empty()) bad.push_back("methods (empty)");
  if (cfg.repetitions < 1) bad.push_back("repetitions (must be >= 1)");
  if (cfg.cdf_points < 2) bad.push_back("cdf_points (must be >= 2)");
  if (cfg.threads < 1) bad.push_back("threads (must be >= 1)");
  if (cfg.sps_pool_s.empty()) bad.push_back("sps.pool_s (empty)");

  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw ValidationError(msg);
  }
  return cfg;
}

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["grid"] = {{"k_subchannels", c.k_subchannels},
               {"l_subframes", c.l_subframes},
               {"t_ms", c.t_ms},
               {"b_hz", c.b_hz}};
  j["scenario"] = {{"kind", std::string(to_string(c.scenario.kind))},
                   {"mean_db", c.scenario.mean_db},
                   {"std_db", c.scenario.std_db},
                   {"bad_mean_db", c.scenario.bad_mean_db},
                   {"p_good", c.scenario.p_good},
                   {"floor_db", c.scenario.floor_db},
                   {"ceil_db", c.scenario.ceil_db},
                   {"p_t_dbm", c.scenario.p_t_dbm}};
  if (c.scenario_seed_set) j["scenario"]["seed"] = c.scenario.seed;
  j["clusters"] = c.clusters;
  j["quant"] = {{"bits", c.bits}, {"lo_db", c.quant_lo_db}, {"hi_db", c.quant_hi_db}};
  Json methods = Json::array();
  for (auto m : c.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = methods;
  j["repetitions"] = c.repetitions;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["cdf_points"] = c.cdf_points;
  j["threads"] = c.threads;
  j["sps"] = {{"pool_s", c.sps_pool_s}};
  j["oracle"] = {{"max_subframes", c.oracle_caps.max_subframes},
                 {"max_slots", c.oracle_caps.max_slots}};
  j["sweep"] = {{"n_vehicles", c.sweep_vehicles}, {"bits", c.sweep_bits}};
  return j;
}

inline Json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  try {
    return Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

// FNV-1a over the canonical JSON dump. The worker count does not change any
// result and is left out.
inline std::string config_hash(const ExperimentConfig& c) {
  Json j = to_json(c);
  j.erase("threads");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace v2xsps
