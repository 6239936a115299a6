// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Run configuration. Files use a TOML subset: [table] headers, key = value
// lines with numbers, booleans, double-quoted strings or single-line arrays,
// and # comments. Key names are listed in the README.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "platelab/carleman.hpp"
#include "platelab/evolution.hpp"
#include "platelab/model.hpp"

namespace platelab {

struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlValue {
  std::variant<double, bool, std::string, TomlArray> data;
  int line = 0;
  bool integral = false;  ///< number written without '.', 'e' or 'E'
};

/// table name ("" for top level) -> key -> value.
using TomlDocument = std::map<std::string, std::map<std::string, TomlValue>>;

/// Syntax errors are collected and thrown together as one ConfigError.
TomlDocument parse_toml(std::string_view text);

struct SimulateConfig {
  Integrator method = Integrator::Exact;
  double dt = 1e-3;
  double t_final = 100.0;
  int k = 2;
  std::uint64_t seed = 1;
  std::size_t samples = 400;  ///< stored times after t = 0
  double window_min = 1.0;
  double window_max = 100.0;
};

struct SweepConfig {
  double mu_min = 0.0;
  double mu_max = 200.0;
  std::size_t n_points = 201;
};

struct ResolventCaseConfig {
  std::vector<double> mu{1.0, 10.0, 100.0};
  std::uint64_t seed = 1;
  std::size_t n_cases = 1;
  std::vector<int> ladder;  ///< optional truncations for a resolution ladder
};

struct RunConfig {
  /// Present when the physical blocks were given.
  bool has_plate = false;
  Geometry geometry;
  DampingRegion region;
  int n_modes = 0;
  std::size_t grid_points = 64;
  std::size_t interface_points = 64;

  SimulateConfig simulate;
  SweepConfig sweep;
  ResolventCaseConfig resolvent_case;
  bool has_carleman = false;  ///< a [carleman] table was given
  CarlemanSetup carleman = default_carleman_setup(2);

  PlateModel make_model() const;
};

/// Commands accepted by run_command.
inline constexpr std::string_view kCommands[] = {
    "simulate", "spectrum", "sweep", "resolvent-case", "carleman", "verify"};

bool is_known_command(std::string_view command);

/// True for commands that need [geometry], [damping] and [discretization].
bool needs_plate(std::string_view command);

/// Validates every block that is present, and requires the physical blocks
/// (d, ell, n_modes, geometry) when `require_plate` is set. All problems are
/// reported together.
RunConfig config_from_toml(const TomlDocument& doc, bool require_plate);
RunConfig parse_config_text(std::string_view text, bool require_plate = true);
RunConfig parse_config(const std::string& path, bool require_plate = true);

}  // namespace platelab
