// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
//
// bouncewalk <experiment> --config FILE [--seed N] [--threads N|auto] [--out DIR]
// bouncewalk validate --config FILE
//
// Exit codes: 0 success, 2 invalid command line or config, 3 numerical or
// I/O failure during the run.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bouncewalk/bouncewalk.hpp"

namespace bw = bouncewalk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw bw::ConfigError({"--config: cannot read " + path});
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void print_config_error(const bw::ConfigError& e) {
  std::cerr << "invalid config:\n";
  for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven oscillator and Ornstein-Uhlenbeck walker experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string threads;
  std::string out;

  const auto add_common = [&](CLI::App* sub, bool run_options) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    if (run_options) {
      sub->add_option("--seed", seed, "override root_seed");
      sub->add_option("--threads", threads, "worker threads: N or auto");
      sub->add_option("--out", out, "output directory (overrides BOUNCEWALK_OUT and output_dir)");
    }
  };
  for (const auto kind : {bw::ExperimentKind::Bouncer, bw::ExperimentKind::Walker,
                          bw::ExperimentKind::Balance, bw::ExperimentKind::Spectrum,
                          bw::ExperimentKind::Spinfield}) {
    add_common(app.add_subcommand(bw::to_string(kind), std::string("run the ") +
                                                           bw::to_string(kind) + " experiment"),
               true);
  }
  add_common(app.add_subcommand("validate", "check a config and print it with defaults filled"),
             false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  bw::ExperimentConfig cfg;
  try {
    cfg = bw::parse_config(read_file(config_path));
    if (command == "validate") {
      std::cout << bw::config_echo(cfg).dump(2) << '\n';
      return kExitOk;
    }
    if (command != bw::to_string(cfg.experiment)) {
      throw bw::ConfigError({std::string("experiment: config is for '") +
                             bw::to_string(cfg.experiment) + "' but the command is '" + command +
                             "'"});
    }
    if (seed) cfg.root_seed = *seed;
    if (threads == "auto") {
      cfg.threads = 0;
    } else if (!threads.empty()) {
      unsigned n = 0;
      const auto [end, ec] = std::from_chars(threads.data(), threads.data() + threads.size(), n);
      if (ec != std::errc() || end != threads.data() + threads.size() || n < 1 || n > 4096) {
        throw bw::ConfigError({"--threads: must be \"auto\" or an integer in [1, 4096]"});
      }
      cfg.threads = n;
    }
    if (!out.empty()) {
      cfg.output_dir = out;
    } else if (const char* env = std::getenv("BOUNCEWALK_OUT"); env != nullptr && *env != '\0') {
      cfg.output_dir = env;
    }
  } catch (const bw::ConfigError& e) {
    print_config_error(e);
    return kExitConfig;
  }

  try {
    const bw::RunResult r = bw::run_experiment(cfg, cfg.output_dir);
    std::cout << "wrote " << r.artifacts.size() << " files to " << cfg.output_dir << '\n';
    return kExitOk;
  } catch (const bw::Error& e) {
    std::cerr << "run failed: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
  }
  return kExitRun;
}
