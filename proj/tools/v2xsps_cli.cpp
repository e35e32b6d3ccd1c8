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

// Command-line front end: run | sweep | validate.
//
// Log verbosity comes from V2XSPS_LOG (trace, debug, info, warn, error, off).

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "v2xsps/v2xsps.hpp"

namespace {

struct Loaded {
  v2xsps::ExperimentConfig config;
  std::string seed_source;
};

Loaded load(const std::string& path, const std::vector<std::string>& overrides,
            std::optional<std::uint64_t> seed, const std::optional<std::string>& out) {
  v2xsps::Json j = v2xsps::load_config_json(path);
  for (const auto& o : overrides) v2xsps::apply_override(j, o);

  std::string source = "config";
  if (seed) {
    j["master_seed"] = *seed;
    source = "flag";
  } else if (!j.contains("master_seed")) {
    std::random_device rd;
    j["master_seed"] = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    source = "generated";
  }
  if (out) j["output_dir"] = *out;
  return {v2xsps::config_from_json(j), source};
}

void configure_logging() {
  spdlog::set_pattern("[%l] %v");
  spdlog::set_default_logger(spdlog::stderr_color_mt("v2xsps"));
  if (const char* level = std::getenv("V2XSPS_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  } else {
    spdlog::set_level(spdlog::level::info);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Semi-persistent sidelink subchannel scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  auto* run = app.add_subcommand("run", "Run the scheduling experiment and write CDF/criteria artifacts");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--set", overrides, "Config override key=value, e.g. quant.bits=[0,3]");

  auto* sweep = app.add_subcommand("sweep", "Worst-vehicle rate versus cluster size");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--seed", seed, "Master seed (overrides the config)");
  sweep->add_option("--out", out_dir, "Output directory (overrides the config)");
  sweep->add_option("--set", overrides, "Config override key=value");

  std::string assignment_path;
  std::optional<std::size_t> k;
  auto* validate = app.add_subcommand("validate", "Check an assignment CSV for conflicts");
  validate->add_option("file", assignment_path, "Assignment CSV")->required();
  validate->add_option("--k", k, "Subchannels per subframe; derive subframes from subchannel indices");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto [cfg, source] = load(config_path, overrides, seed, out_dir);
      spdlog::info("run: K={} L={} clusters={} repetitions={} seed={} ({})", cfg.k_subchannels,
                   cfg.l_subframes, cfg.clusters.size(), cfg.repetitions, cfg.master_seed, source);
      const auto result = v2xsps::run_experiment(cfg, source);
      for (const auto& r : result.reports) {
        spdlog::info("{:>8} bits={} worst={:.3f} avg={:.3f} best={:.3f} std={:.3f} Mbps",
                     v2xsps::to_string(r.method), r.bits, r.worst / 1e6, r.average / 1e6,
                     r.highest / 1e6, r.std_dev / 1e6);
      }
      for (const auto& f : result.files) spdlog::debug("wrote {}", f.string());
      spdlog::info("artifacts in {}", cfg.output_dir);
      return 0;
    }
    if (*sweep) {
      const auto [cfg, source] = load(config_path, overrides, seed, out_dir);
      spdlog::info("sweep: N in {} sizes, bits in {} values, repetitions={} seed={} ({})",
                   cfg.sweep_vehicles.size(), cfg.sweep_bits.size(), cfg.repetitions, cfg.master_seed,
                   source);
      const auto rows = v2xsps::run_sweep(cfg);
      for (const auto& r : rows) {
        spdlog::debug("{} bits={} N={} worst={:.3f} Mbps", v2xsps::to_string(r.method), r.bits,
                      r.n_vehicles, r.worst_rate_mean / 1e6);
      }
      spdlog::info("wrote {}/sweep.csv", cfg.output_dir);
      return 0;
    }
    if (*validate) {
      const auto report = v2xsps::validate_assignment_file(assignment_path, k);
      if (report.ok()) {
        std::cout << "ok, " << report.rows << " rows, 0 violations\n";
        return 0;
      }
      std::cout << report.violations.size() << " violation(s) in " << report.rows << " rows\n";
      for (const auto& v : report.violations) std::cout << "  " << v << '\n';
      return 1;
    }
  } catch (const v2xsps::Error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("unexpected: {}", e.what());
    return 2;
  }
  return 0;
}
