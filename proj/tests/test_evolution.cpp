// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "platelab/error.hpp"
#include "platelab/evolution.hpp"
#include "platelab/model.hpp"
#include "platelab/random.hpp"

using namespace platelab;
using cd = std::complex<double>;
using oracle::pi;

namespace {

PlateModel interval_model(int n, double ell = 0.3, double d = 1.0) {
  return PlateModel(Geometry::interval(1.0), DampingRegion{ell, d}, n);
}

double energy_distance(const State& a, const State& b, const ModalBasis& basis) {
  const State diff{a.u - b.u, a.v - b.v};
  return std::sqrt(2.0 * energy(diff, basis));
}

State random_state(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return State{rng.complex_normal_vector(n) * 0.01, rng.complex_normal_vector(n)};
}

}  // namespace

TEST_CASE("exact propagator matches the closed-form 2x2 exponential") {
  const PlateModel m = interval_model(1, 1.0, 1.0);
  const double a = pi * pi;
  const Eigen::Matrix2d A = m.generator();
  // e^{tA} = e^{αt}(cos ωt I + sin ωt/ω (A − αI)), α = −a/2, ω = a√3/2.
  const double alpha = -a / 2, omega = a * std::sqrt(3.0) / 2;
  const ExactPropagator prop(m.generator());
  const Eigen::VectorXcd z0 = Eigen::Vector2cd(cd(0.3, -1.0), cd(2.0, 0.5));
  for (double t : {0.0, 0.01, 0.1, 0.5}) {
    const Eigen::Matrix2d E =
        std::exp(alpha * t) * (std::cos(omega * t) * Eigen::Matrix2d::Identity() +
                               std::sin(omega * t) / omega * (A - alpha * Eigen::Matrix2d::Identity()));
    const Eigen::VectorXcd ref = E.cast<cd>() * z0;
    CHECK((prop.apply(z0, t) - ref).norm() <= 1e-12 * z0.norm());
  }
}

TEST_CASE("single fully damped mode loses energy at twice the real part") {
  const PlateModel m = interval_model(1, 1.0, 1.0);
  State s0 = State::zero(1);
  s0.u(0) = 1.0;
  const std::vector<double> times{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const auto tr = energy_trace(evolve_exact(m, s0, times), m);
  // envelope e^{2 Re λ t}, Re λ = −π²/2
  const double envelope_ratio = tr.back().energy / tr.front().energy;
  CHECK(envelope_ratio < std::exp(-pi * pi * 1.0) * 4.0);
  CHECK(envelope_ratio > std::exp(-pi * pi * 1.0) / 4.0);
}

TEST_CASE("t = 0 returns the initial state exactly") {
  const PlateModel m = interval_model(16);
  const State s0 = random_state(16, 4);
  const std::vector<double> times{0.0};
  const auto tr = evolve_exact(m, s0, times);
  CHECK(tr.states[0].u == s0.u);
  CHECK(tr.states[0].v == s0.v);
}

TEST_CASE("undamped single mode is a rotation at frequency λ₁") {
  const PlateModel m = interval_model(1, 0.3, 0.0);
  State s0 = State::zero(1);
  s0.u(0) = 1.0 / (pi * pi);  // ξ₁ = 1
  const double t = 0.37;
  const std::vector<double> times{0.0, t};
  const auto tr = evolve_exact(m, s0, times);
  const Eigen::VectorXcd z = tr.states[1].energy_coordinates(m.lambda());
  CHECK(std::abs(z(0) - std::cos(pi * pi * t)) < 1e-12);
  CHECK(std::abs(z(1) + std::sin(pi * pi * t)) < 1e-12);
  CHECK(energy(tr.states[1], m.basis()) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("midpoint with a zero generator keeps the state constant") {
  const PlateModel m = interval_model(1, 0.3, 0.0);
  State s0 = State::zero(1);
  const auto tr = evolve_midpoint(m, s0, 1e-2, 1.0, 10);
  for (const auto& s : tr.states) CHECK(s.u.norm() + s.v.norm() == 0.0);
  const auto e = energy_trace(tr, m);
  for (const auto& x : e) CHECK(x.energy == 0.0);
}

TEST_CASE("midpoint energy is non-increasing per step") {
  const PlateModel m = interval_model(32);
  const State s0 = random_state(32, 8);
  const auto tr = energy_trace(evolve_midpoint(m, s0, 1e-3, 1.0, 1), m);
  REQUIRE(tr.size() == 1001);
  for (std::size_t i = 1; i < tr.size(); ++i)
    REQUIRE(tr[i].energy <= tr[i - 1].energy * (1 + 1e-12));
}

TEST_CASE("midpoint discrete energy balance") {
  const PlateModel m = interval_model(32);
  const State s0 = random_state(32, 9);
  const auto tr = energy_trace(evolve_midpoint(m, s0, 1e-3, 1.0, 100), m);
  const double drop = tr.front().energy - tr.back().energy;
  CHECK(std::abs(drop - tr.back().dissipation) <= 1e-6 * drop);
  // Independent check: trapezoid over a resolved exact trajectory.
  std::vector<double> times;
  for (int i = 0; i <= 4000; ++i) times.push_back(i / 4000.0);
  const State smooth = smooth_data(m.basis(), 1, 9);
  const auto ex = energy_trace(evolve_exact(m, smooth, times), m);
  CHECK(ex.back().dissipation ==
        doctest::Approx(ex.front().energy - ex.back().energy).epsilon(1e-4));
}

TEST_CASE("midpoint converges at second order") {
  const PlateModel m = interval_model(32);
  const State s0 = smooth_data(m.basis(), 2, 3);
  const std::vector<double> times{0.0, 1.0};
  const State ref = evolve_exact(m, s0, times).states.back();
  const auto err = [&](double dt) {
    return energy_distance(evolve_midpoint(m, s0, dt, 1.0, 1000000).states.back(), ref,
                           m.basis());
  };
  const double ratio = err(2e-3) / err(1e-3);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("exact propagator is a contraction and conservative without damping") {
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(0.2 * i);
  {
    const PlateModel m = interval_model(32);
    const auto tr = energy_trace(evolve_exact(m, random_state(32, 1), times), m);
    for (const auto& e : tr) CHECK(e.energy <= tr[0].energy * (1 + 1e-10));
  }
  {
    const PlateModel m = interval_model(32, 0.3, 0.0);
    const auto tr = energy_trace(evolve_exact(m, random_state(32, 2), times), m);
    for (const auto& e : tr) CHECK(std::abs(e.energy / tr[0].energy - 1) <= 1e-10);
  }
}

TEST_CASE("zero initial state gives an all-zero trace") {
  const PlateModel m = interval_model(8);
  const std::vector<double> times{0.0, 1.0, 2.0};
  for (const auto& e : energy_trace(evolve_exact(m, State::zero(8), times), m))
    CHECK(e.energy == 0.0);
}

TEST_CASE("smooth data concentrates energy in low modes") {
  const auto basis = laplacian_eigenpairs(Geometry::interval(1.0), 64);
  const auto fractions = [&](int k, std::uint64_t seed) {
    const State s = smooth_data(basis, k, seed);
    const Eigen::VectorXcd z = s.energy_coordinates(basis.eigenvalues());
    Eigen::VectorXd e(64);
    for (int m = 0; m < 64; ++m) e(m) = std::norm(z(m)) + std::norm(z(64 + m));
    return Eigen::VectorXd(e / e.sum());
  };
  CHECK(fractions(8, 11).head(4).sum() >= 0.99);
  const auto f1 = fractions(1, 11);
  const auto f2 = fractions(2, 11);
  CHECK(f2.tail(60).sum() < f1.tail(60).sum());
  const State a = smooth_data(basis, 2, 5), b = smooth_data(basis, 2, 5);
  CHECK(a.u == b.u);
  CHECK(a.v == b.v);
  CHECK(smooth_data(basis, 2, 6).u != a.u);
  CHECK_THROWS_AS(smooth_data(basis, 0, 5), ConfigError);
}

TEST_CASE("decay fit examples") {
  std::vector<EnergySample> flat, envelope;
  for (int i = 0; i <= 90; ++i) {
    const double t = 1.0 + 0.1 * i;
    flat.push_back({t, 1.0, 0.0});
    envelope.push_back({t, 1.0 / std::pow(std::log(2 + t), 2), 0.0});
  }
  const auto r1 = decay_fit(flat, 1, 1.0, 10.0);
  CHECK(r1.c_k == doctest::Approx(std::pow(std::log(12.0), 2)).epsilon(1e-14));
  CHECK(r1.exp_rate == doctest::Approx(0.0));
  const auto r2 = decay_fit(envelope, 1, 1.0, 10.0);
  CHECK(r2.c_k == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r2.envelope_residual < 1e-14);
  CHECK(r2.exp_rate < 0.0);

  std::vector<EnergySample> bad = flat;
  bad[40].energy = 0.0;
  CHECK_THROWS_AS(decay_fit(bad, 1, 1.0, 10.0), NumericalError);
  const std::vector<EnergySample> few(flat.begin(), flat.begin() + 5);
  CHECK_THROWS(decay_fit(few, 1, 1.0, 10.0));
}

TEST_CASE("2D strip: fitted decay rate weakens as the truncation grows") {
  const Geometry g = Geometry::rectangle(1.0, 1.0);
  const auto rate = [&](int n) {
    const PlateModel m(g, DampingRegion{0.3, 1.0}, n);
    std::vector<double> times;
    for (int i = 0; i <= 400; ++i) times.push_back(0.25 * i);
    const auto tr = energy_trace(evolve_exact(m, smooth_data(m.basis(), 2, 7), times), m);
    return decay_fit(tr, 2, 1.0, 100.0).exp_rate;
  };
  const double r32 = rate(32), r256 = rate(256);
  CHECK(r32 < 0.0);
  CHECK(r256 < 0.0);
  CHECK(std::abs(r256) < std::abs(r32));
}

TEST_CASE("invalid time arguments are rejected") {
  const PlateModel m = interval_model(4);
  const State s0 = State::zero(4);
  CHECK_THROWS_AS(evolve_midpoint(m, s0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(evolve_midpoint(m, s0, 0.5, 0.1), ConfigError);
  const std::vector<double> backwards{1.0, 0.5};
  CHECK_THROWS_AS(evolve_exact(m, s0, backwards), ConfigError);
  CHECK_THROWS_AS(evolve_exact(m, State::zero(3), std::vector<double>{0.0}), ConfigError);
}
