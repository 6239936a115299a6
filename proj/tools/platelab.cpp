// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// platelab <command> --config run.toml --out results/ [--plot-data] [--seed N]

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "platelab/platelab.h"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the structurally damped hinged plate"};
  app.set_version_flag("--version", platelab_version());
  app.require_subcommand(1, 1);

  std::string config;
  std::string out_dir = ".";
  bool plot = false;
  std::uint64_t seed = 0;

  const char* commands[][2] = {
      {"simulate", "evolve smooth data and fit the energy trace"},
      {"spectrum", "generator spectrum with branch tags"},
      {"sweep", "resolvent norms along the imaginary axis"},
      {"resolvent-case", "transmission diagnostics of resolvent solves"},
      {"carleman", "certify a Carleman weight pair"},
      {"verify", "run the property suite"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--plot-data", plot, "also write whitespace-separated .dat files");
    sub->add_option("--seed", seed, "override every seed in the config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : PLATELAB_CONFIG_ERROR;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const bool has_seed = sub->get_option("--seed")->count() > 0;
  char summary[1024] = {0};
  const platelab_status status =
      platelab_run(command.c_str(), config.empty() ? nullptr : config.c_str(),
                   out_dir.c_str(), plot ? 1 : 0, has_seed ? 1 : 0, seed, summary,
                   sizeof summary);
  if (status == PLATELAB_OK || status == PLATELAB_VERIFY_FAILED)
    std::printf("%s\n", summary);
  else
    std::fprintf(stderr, "platelab %s: %s\n", command.c_str(), platelab_last_error());
  return static_cast<int>(status);
}
