// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Property suite run by the `verify` command: the module invariants at a
// fixed desk scale with fixed seeds, so two runs give identical reports.

#pragma once

#include <string>
#include <vector>

namespace platelab {

struct PropertyResult {
  std::string module;
  std::string name;
  double value = 0.0;      ///< measured quantity
  std::string criterion;   ///< e.g. "< 1e-8"
  bool pass = false;
};

std::vector<PropertyResult> run_property_suite();

}  // namespace platelab
