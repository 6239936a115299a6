// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace platelab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: geometry, damping region, truncation, grids, config
/// files. Carries every issue found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::string message)
      : Error(message), issues_{std::move(message)} {}
  explicit ConfigError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

/// A computation could not be carried out to the required accuracy
/// (ill-conditioned eigenbasis, singular resolvent, non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Input that is well formed but degenerate for the requested operation,
/// e.g. sampling a characteristic set where the weight gradient vanishes.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace platelab
