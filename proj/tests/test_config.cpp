// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <string>

#include "platelab/config.hpp"
#include "platelab/error.hpp"

using namespace platelab;

namespace {

const char* kMinimal = R"(
[geometry]
dim = 1
lengths = [1.0]

[damping]
d = 1.0
ell = 0.3

[discretization]
n_modes = 32
)";

std::vector<std::string> issues_of(const std::string& text, bool require_plate = true) {
  try {
    parse_config_text(text, require_plate);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& s : issues)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("minimal config parses with defaults filled") {
  const RunConfig c = parse_config_text(kMinimal);
  CHECK(c.has_plate);
  CHECK(c.geometry.dim == 1);
  CHECK(c.geometry.lx == 1.0);
  CHECK(c.region.d == 1.0);
  CHECK(c.region.extent == 0.3);
  CHECK(c.n_modes == 32);
  CHECK(c.grid_points == 64);
  CHECK(c.simulate.method == Integrator::Exact);
  CHECK(c.simulate.k == 2);
  CHECK(c.sweep.n_points == 201);
  CHECK(c.resolvent_case.mu == std::vector<double>{1.0, 10.0, 100.0});
  CHECK_FALSE(c.has_carleman);
  CHECK(c.make_model().n_modes() == 32);
}

TEST_CASE("damping region outside the domain names the field") {
  const auto issues = issues_of(replace(kMinimal, "ell = 0.3", "ell = 1.5"));
  REQUIRE(issues.size() == 1);
  CHECK(mentions(issues, "damping.ell"));
}

TEST_CASE("all problems are reported together") {
  std::string text = replace(kMinimal, "ell = 0.3", "ell = 1.5");
  text = replace(text, "n_modes = 32", "n_modes = 0");
  const auto issues = issues_of(text);
  CHECK(issues.size() == 2);
  CHECK(mentions(issues, "damping.ell"));
  CHECK(mentions(issues, "discretization.n_modes"));
}

TEST_CASE("physical parameters have no silent defaults") {
  const auto issues = issues_of("[geometry]\ndim = 1\nlengths = [1.0]\n");
  CHECK(mentions(issues, "damping.d is required"));
  CHECK(mentions(issues, "damping.ell is required"));
  CHECK(mentions(issues, "discretization.n_modes is required"));
  CHECK(issues_of("", false).empty());
  CHECK_FALSE(issues_of("", true).empty());
}

TEST_CASE("unknown keys and tables are errors") {
  CHECK(mentions(issues_of(std::string(kMinimal) + "[sweep]\nmu_mx = 3\n"), "mu_mx"));
  CHECK(mentions(issues_of(std::string(kMinimal) + "[plot]\nx = 1\n"), "[plot]"));
}

TEST_CASE("type and range errors") {
  CHECK(mentions(issues_of(replace(kMinimal, "n_modes = 32", "n_modes = 3.5")), "integer"));
  CHECK(mentions(issues_of(replace(kMinimal, "d = 1.0", "d = \"one\"")), "damping.d"));
  CHECK(mentions(issues_of(replace(kMinimal, "d = 1.0", "d = -1.0")), "damping.d"));
  CHECK(mentions(issues_of(replace(kMinimal, "dim = 1", "dim = 3")), "geometry.dim"));
  CHECK(mentions(issues_of(std::string(kMinimal) + "[simulate]\nmethod = \"rk4\"\n"),
                 "simulate.method"));
  CHECK(mentions(issues_of(std::string(kMinimal) + "[sweep]\nmu_min = 5.0\nmu_max = 1.0\n"),
                 "sweep.mu_max"));
}

TEST_CASE("syntax errors carry line numbers") {
  const auto issues = issues_of("[geometry\ndim = 1\nlengths = [1.0\n");
  CHECK(issues.size() >= 2);
  CHECK(mentions(issues, "line 1"));
  CHECK(mentions(issues, "line 3"));
}

TEST_CASE("toml subset values") {
  const auto doc = parse_toml(
      "a = 1\nb = 2.5e-1 # comment\nc = true\nd = \"x # y\"\ne = [1, 2.0, -3]\n[t]\nf = false\n");
  CHECK(std::get<double>(doc.at("").at("a").data) == 1.0);
  CHECK(doc.at("").at("a").integral);
  CHECK(std::get<double>(doc.at("").at("b").data) == 0.25);
  CHECK_FALSE(doc.at("").at("b").integral);
  CHECK(std::get<bool>(doc.at("").at("c").data));
  CHECK(std::get<std::string>(doc.at("").at("d").data) == "x # y");
  CHECK(std::get<TomlArray>(doc.at("").at("e").data).size() == 3);
  CHECK_FALSE(std::get<bool>(doc.at("t").at("f").data));
  CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), ConfigError);
}

TEST_CASE("carleman block") {
  const RunConfig c = parse_config_text(R"(
[carleman]
dim = 2
a = 0.0
ell = 0.5
b = 1.0
ly = 1.0
psi1_constant = 0.5
psi1_linear = [-1.0, 0.0]
psi1_hessian = [0.0, 0.0, 0.0]
psi2_constant = 0.25
psi2_linear = [-0.5, 0.0]
beta = [8.0]
)",
                                        false);
  CHECK(c.has_carleman);
  CHECK_FALSE(c.has_plate);
  CHECK(c.carleman.betas == std::vector<double>{8.0});
  CHECK(c.carleman.psi2.linear(0) == -0.5);
  CHECK(mentions(issues_of("[carleman]\ndim = 2\na = 0.0\nell = 2.0\nb = 1.0\n", false),
                 "carleman.ell"));
}

TEST_CASE("commands") {
  CHECK(is_known_command("verify"));
  CHECK_FALSE(is_known_command("plot"));
  CHECK(needs_plate("simulate"));
  CHECK_FALSE(needs_plate("carleman"));
  CHECK_THROWS_AS(parse_config("/nonexistent/config.toml"), ConfigError);
}
