// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = PLATELAB_CONFIG_DIR;

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("platelab_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& file, const std::string& text) const {
    std::ofstream(dir / file) << text;
    return dir / file;
  }
};

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + PLATELAB_CLI + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

const char* kUndamped = R"(
[geometry]
dim = 1
lengths = [1.0]
[damping]
d = 0.0
ell = 0.3
[discretization]
n_modes = 8
[resolvent_case]
mu = [9.869604401089358]
)";

}  // namespace

TEST_CASE("spectrum on full damping writes 128 rows") {
  Scratch s("spectrum");
  REQUIRE(run("spectrum --config " + q(kConfigs / "full_damping_1d.toml") + " --out " +
              q(s.dir)) == 0);
  CHECK(line_count(s.dir / "spectrum.csv") == 129);
  const std::string csv = slurp(s.dir / "spectrum.csv");
  CHECK(csv.rfind("index,re,im,branch\n", 0) == 0);
  CHECK(slurp(s.dir / "spectrum_report.txt").find("-4.934802200544") != std::string::npos);
}

TEST_CASE("simulate without damping keeps the energy constant") {
  Scratch s("simulate");
  REQUIRE(run("simulate --config " + q(kConfigs / "conservative_1d.toml") + " --out " +
              q(s.dir) + " --plot-data") == 0);
  std::ifstream in(s.dir / "trace.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,energy,dissipation_cum");
  double e0 = -1.0, worst = 0.0;
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1);
    const double e = std::stod(line.substr(a + 1, b - a - 1));
    if (e0 < 0) e0 = e;
    worst = std::max(worst, std::abs(e / e0 - 1));
  }
  CHECK(worst <= 1e-10);
  CHECK(fs::exists(s.dir / "trace.dat"));
}

TEST_CASE("exit codes") {
  Scratch s("exit");
  SUBCASE("bad config is 1") {
    const auto cfg = s.write("bad.toml", "[geometry]\ndim = 1\nlengths = [1.0]\n[damping]\n"
                                         "d = 1.0\nell = 1.5\n[discretization]\nn_modes = 8\n");
    CHECK(run("spectrum --config " + q(cfg) + " --out " + q(s.dir / "o")) == 1);
    CHECK(run("spectrum --config " + q(s.dir / "missing.toml")) == 1);
    CHECK(run("nosuchcommand") == 1);
  }
  SUBCASE("solve on the spectrum is 2 and leaves no partial outputs") {
    const auto cfg = s.write("undamped.toml", kUndamped);
    const fs::path out = s.dir / "o";
    CHECK(run("resolvent-case --config " + q(cfg) + " --out " + q(out)) == 2);
    CHECK((!fs::exists(out) || fs::is_empty(out)));
  }
  SUBCASE("failing verify property is 3") {
    const auto cfg = s.write("equal.toml", R"(
[carleman]
dim = 2
a = 0.0
ell = 0.5
b = 1.0
psi1_constant = 0.5
psi1_linear = [-1.0, 0.0]
psi2_constant = 0.5
psi2_linear = [-1.0, 0.0]
beta = [1.0]
)");
    CHECK(run("verify --config " + q(cfg) + " --out " + q(s.dir / "v")) == 3);
    CHECK(slurp(s.dir / "v" / "verify_report.txt").find("FAIL") != std::string::npos);
  }
  SUBCASE("carleman defaults and verify defaults are 0") {
    CHECK(run("carleman --out " + q(s.dir / "c")) == 0);
    CHECK(run("verify --out " + q(s.dir / "v")) == 0);
  }
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  Scratch s("determinism");
  for (const char* cmd : {"simulate", "sweep", "resolvent-case", "spectrum"}) {
    const std::string base = std::string(cmd) + " --config " +
                             q(kConfigs / "localized_1d.toml") + " --seed 5 --out ";
    REQUIRE(run(base + q(s.dir / "a"), "PLATELAB_THREADS=1") == 0);
    REQUIRE(run(base + q(s.dir / "b"), "PLATELAB_THREADS=3") == 0);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(s.dir / "a")) {
    const auto other = s.dir / "b" / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
    ++compared;
  }
  CHECK(compared >= 8);
}
