// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Command orchestration: runs one experiment and writes its CSV tables and
// text reports to an output directory.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "platelab/config.hpp"

namespace platelab {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitVerifyFailed = 3,
};

struct RunOptions {
  std::string out_dir = ".";
  bool plot_data = false;
  std::optional<std::uint64_t> seed;  ///< overrides every seed in the config
};

struct RunResult {
  int exit_code = kExitOk;
  std::string summary;  ///< one line
  std::vector<std::string> files;  ///< written files (removed on failure)
};

/// Runs `command` with an already validated configuration. Errors are mapped
/// to exit codes; files written before a failure are removed.
RunResult run_command(const std::string& command, const RunConfig& config,
                      const RunOptions& options);

/// Parses the config file (optional for `carleman` and `verify`) and runs.
RunResult run_command_file(const std::string& command, const std::string& config_path,
                           const RunOptions& options);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace platelab
