// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "platelab/carleman.hpp"
#include "platelab/error.hpp"
#include "platelab/random.hpp"

using namespace platelab;

namespace {

QuadraticProfile linear_x(double constant, double slope) {
  return QuadraticProfile::affine(2, constant, Eigen::Vector2d(slope, 0.0));
}

QuadraticProfile random_quadratic(Rng& rng) {
  QuadraticProfile q;
  q.dim = 2;
  q.constant = rng.uniform(-0.5, 0.5);
  q.linear = Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1);
  q.quadratic << a, b, b, c;
  return q;
}

/// {Re p, Im p} by central differences of the symbol in x and ξ.
double fd_bracket(const Weight& w, const SymbolPoint& p, double hx, double hxi) {
  double sum = 0.0;
  for (int j = 0; j < 2; ++j) {
    SymbolPoint xp = p, xm = p, sp = p, sm = p;
    xp.x[j] += hx;
    xm.x[j] -= hx;
    sp.xi(j) += hxi;
    sm.xi(j) -= hxi;
    const auto dx = (principal_symbol(w, xp) - principal_symbol(w, xm)) / (2 * hx);
    const auto dxi = (principal_symbol(w, sp) - principal_symbol(w, sm)) / (2 * hxi);
    sum += dxi.real() * dx.imag() - dx.real() * dxi.imag();
  }
  return sum;
}

std::vector<Point> unit_square_grid(int n) {
  std::vector<Point> pts;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) pts.push_back({double(i) / n, double(j) / n});
  return pts;
}

}  // namespace

TEST_CASE("weight evaluators at a point") {
  const Weight w = weight_from_profile(QuadraticProfile::affine(1, 0.0, Eigen::Vector2d(1, 0)), 1.0);
  const Point o{0.0, 0.0};
  CHECK(w.value(o) == 1.0);
  CHECK(w.gradient(o)(0) == 1.0);
  CHECK(w.hessian(o)(0, 0) == 1.0);
  CHECK_THROWS_AS(weight_from_profile(linear_x(0, 1), 0.0), ConfigError);
  CHECK_THROWS_AS(weight_from_profile(linear_x(0, 1), -2.0), ConfigError);
}

TEST_CASE("linear profile Hessian is β²e^{βψ}∇ψ⊗∇ψ") {
  const Eigen::Vector2d g(0.6, -0.8);
  const double beta = 3.0;
  const Weight w(QuadraticProfile::affine(2, 0.1, g), beta);
  const Point x{0.3, 0.7};
  const double psi = 0.1 + g.dot(Eigen::Vector2d(x[0], x[1]));
  const Eigen::Matrix2d ref = beta * beta * std::exp(beta * psi) * g * g.transpose();
  CHECK((w.hessian(x) - ref).norm() <= 1e-13 * ref.norm());
}

TEST_CASE("weight evaluators agree with finite differences") {
  Rng rng(31);
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const Weight w(random_quadratic(rng), rng.uniform(0.5, 4.0));
    const Point x{rng.uniform(0, 1), rng.uniform(0, 1)};
    CHECK(w.value(x) > 0.0);
    Eigen::Vector2d g;
    Eigen::Matrix2d H;
    for (int j = 0; j < 2; ++j) {
      Point p = x, m = x;
      p[j] += h;
      m[j] -= h;
      g(j) = (w.value(p) - w.value(m)) / (2 * h);
      H.col(j) = (w.gradient(p) - w.gradient(m)) / (2 * h);
    }
    CHECK((g - w.gradient(x)).norm() <= 1e-6 * w.gradient(x).norm() + 1e-9);
    CHECK((H - w.hessian(x)).norm() <= 1e-6 * w.hessian(x).norm() + 1e-9);
  }
}

TEST_CASE("closed-form bracket matches a finite-difference Poisson bracket") {
  Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    const Weight w(random_quadratic(rng), rng.uniform(0.5, 3.0));
    SymbolPoint p;
    p.x = {rng.uniform(0, 1), rng.uniform(0, 1)};
    p.xi = Eigen::Vector2d(rng.uniform(-5, 5), rng.uniform(-5, 5));
    p.tau = rng.uniform(0.5, 5.0);
    const double closed = poisson_bracket(w, p);
    const double fd = fd_bracket(w, p, 1e-5, 1e-4);
    const double scale = 4 * p.tau *
                         (std::abs(p.xi.dot(w.hessian(p.x) * p.xi)) +
                          p.tau * p.tau * std::abs(w.gradient(p.x).dot(w.hessian(p.x) * w.gradient(p.x))));
    REQUIRE(std::abs(closed - fd) <= 1e-6 * std::max(std::abs(closed), scale));
  }
}

TEST_CASE("bracket on the characteristic set of a linear weight") {
  const double beta = 2.5;
  const Eigen::Vector2d g(0.8, 0.6);
  const Weight w(QuadraticProfile::affine(2, -0.2, g), beta);
  const Point x{0.4, 0.9};
  const double psi = w.profile().value(x);
  for (double tau : {1.0, 10.0}) {
    for (const auto& p : characteristic_samples(w, x, tau, 4)) {
      CHECK(poisson_bracket(w, p) ==
            doctest::Approx(4 * std::pow(tau, 3) * std::pow(beta, 4) * std::exp(3 * beta * psi))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("constant profile has a vanishing Hessian and bracket") {
  const Weight w(QuadraticProfile::affine(2, 0.3, Eigen::Vector2d::Zero()), 1.0);
  SymbolPoint p;
  p.x = {0.5, 0.5};
  p.xi = Eigen::Vector2d(1.0, 2.0);
  p.tau = 3.0;
  CHECK(w.hessian(p.x).norm() == 0.0);
  CHECK(poisson_bracket(w, p) == 0.0);
}

TEST_CASE("characteristic samples") {
  const Weight w(QuadraticProfile::affine(2, 0.0, Eigen::Vector2d(1, 0)), 1.0);
  const Point o{0.0, 0.0};
  SUBCASE("coordinate direction") {
    const auto s = characteristic_samples(w, o, 1.0, 2);
    REQUIRE(s.size() == 2);
    CHECK(std::abs(std::abs(s[0].xi(1)) - 1.0) < 1e-15);
    CHECK(s[0].xi(0) == doctest::Approx(0.0));
    CHECK((s[0].xi + s[1].xi).norm() == 0.0);
  }
  SUBCASE("membership and equal angular gaps") {
    Rng rng(33);
    const Weight q(random_quadratic(rng), 2.0);
    const Point x{0.3, 0.2};
    const auto s = characteristic_samples(q, x, 10.0, 16);
    REQUIRE(s.size() == 16);
    for (const auto& p : s) {
      const auto sym = principal_symbol(q, p);
      CHECK(std::abs(sym.real()) <= 1e-10 * p.xi.squaredNorm());
      CHECK(std::abs(sym.imag()) <= 1e-10 * p.xi.squaredNorm());
    }
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double gap = std::acos(std::clamp(s[i].xi.normalized().dot(s[i + 1].xi.normalized()), -1.0, 1.0));
      CHECK(gap == doctest::Approx(std::numbers::pi));
    }
  }
  SUBCASE("degenerate inputs") {
    const Weight flat(QuadraticProfile::affine(2, 0.0, Eigen::Vector2d::Zero()), 1.0);
    CHECK_THROWS_AS(characteristic_samples(flat, o, 1.0, 4), DegenerateInputError);
    const Weight one(QuadraticProfile::affine(1, 0.0, Eigen::Vector2d(1, 0)), 1.0);
    CHECK_THROWS_AS(characteristic_samples(one, o, 1.0, 4), DegenerateInputError);
  }
}

TEST_CASE("normalized bracket is homogeneous of degree three") {
  Rng rng(34);
  for (int i = 0; i < 50; ++i) {
    const Weight w(random_quadratic(rng), rng.uniform(1.0, 4.0));
    const Point x{rng.uniform(0, 1), rng.uniform(0, 1)};
    const auto base = characteristic_samples(w, x, 10.0, 1)[0];
    const double r0 = poisson_bracket(w, base) / japanese_cube(base);
    for (double tau : {100.0, 1000.0}) {
      const auto p = characteristic_samples(w, x, tau, 1)[0];
      CHECK(std::abs(poisson_bracket(w, p) / japanese_cube(p) - r0) <= 1e-8 * std::abs(r0) + 1e-300);
    }
  }
}

TEST_CASE("linear family margin matches the closed form and grows with beta") {
  const auto pts = unit_square_grid(8);
  const std::vector<double> taus{10.0, 100.0};
  const auto closed = [&](double beta) {
    double m = INFINITY;
    for (const auto& x : pts) {
      const double e = std::exp(beta * x[0]);
      m = std::min(m, 4 * std::pow(beta, 4) * e * e * e / std::pow(1 + beta * beta * e * e, 1.5));
    }
    return m;
  };
  double previous = -INFINITY;
  for (double beta : {1.0, 2.0, 4.0, 8.0}) {
    const auto rep = subellipticity_margin(Weight(linear_x(0.0, 1.0), beta), pts, taus);
    CHECK(rep.margin == doctest::Approx(closed(beta)).epsilon(1e-10));
    CHECK(rep.margin > previous);
    previous = rep.margin;
  }
  CHECK(previous > 0.0);
}

TEST_CASE("critical point yields a non-positive margin") {
  QuadraticProfile bowl;
  bowl.dim = 2;
  bowl.quadratic = Eigen::Matrix2d::Identity();
  const Weight w(bowl, 1.0);
  const auto pts = unit_square_grid(4);
  const std::vector<double> taus{10.0};
  const auto rep = subellipticity_margin(w, pts, taus);
  CHECK(rep.critical_points == 1);
  CHECK(rep.margin <= 0.0);
  CHECK_THROWS_AS(subellipticity_margin(w, std::vector<Point>{}, taus), ConfigError);
  CHECK_THROWS_AS(subellipticity_margin(w, pts, std::vector<double>{}), ConfigError);
}

TEST_CASE("pointwise conditions on the 2D linear pair") {
  const auto setup = default_carleman_setup(2);
  const auto samples = make_carleman_samples(setup.geometry, 16, 16);
  for (const auto& p : samples.interface) CHECK(p[0] == setup.geometry.ell);
  for (const auto& p : samples.outer) CHECK(p[0] == setup.geometry.b);
  const auto at = [&](double beta) {
    return pointwise_conditions(Weight(setup.psi1, beta), Weight(setup.psi2, beta), samples);
  };
  const auto r8 = at(8.0);
  CHECK(r8.pass());
  CHECK(r8.gradient1 > 0.0);
  CHECK(r8.gradient2 > 0.0);
  CHECK(r8.outer_sign > 0.0);
  CHECK(r8.interface_sign1 > 0.0);
  CHECK(r8.interface_sign2 > 0.0);
  CHECK(r8.interface_inequality > 0.0);
  CHECK(r8.continuity < kContinuityTolerance);
  // At β = 1 the interface inequality reads 1 − 1/4 − 1 < 0.
  CHECK(at(1.0).interface_inequality == doctest::Approx(-0.25));
  CHECK_FALSE(at(1.0).pass());
}

TEST_CASE("equal weights fail the interface inequality by exactly one") {
  const auto setup = default_carleman_setup(2);
  const auto samples = make_carleman_samples(setup.geometry, 16, 16);
  const Weight w(setup.psi1, 4.0);
  const auto r = pointwise_conditions(w, w, samples);
  CHECK(r.interface_inequality == -1.0);
  CHECK_FALSE(r.pass());
}

TEST_CASE("1D analog pair") {
  CarlemanSetup s;
  s.geometry = {1, 0.5, 0.7, 1.0, 1.0};
  s.psi1 = QuadraticProfile::affine(1, 0.7, Eigen::Vector2d(-1.0, 0.0));
  s.psi2 = QuadraticProfile::affine(1, 0.35, Eigen::Vector2d(-0.5, 0.0));
  const auto certs = certify(s);
  REQUIRE(certs.size() == 4);
  const auto& c8 = certs.back();
  CHECK(c8.beta == 8.0);
  CHECK(c8.conditions.pass());
  CHECK(c8.conditions.interface_inequality > 0.0);
  // Linear 1D weights have empty near-characteristic shells at large β.
  CHECK(c8.margin1.empty_shells > 0);
  CHECK(c8.pass());
}

TEST_CASE("certificates of the 2D default setup") {
  const auto certs = certify(default_carleman_setup(2));
  REQUIRE(certs.size() == 4);
  CHECK_FALSE(certs.front().pass());
  CHECK(certs.back().pass());
  CHECK(certs.back().margin1.margin > 0.0);
  CHECK(certs.back().margin2.margin > 0.0);
  for (std::size_t i = 1; i < certs.size(); ++i)
    CHECK(certs[i].margin1.margin > certs[i - 1].margin1.margin);
}

TEST_CASE("invalid carleman geometry") {
  CarlemanGeometry g{2, 0.0, 1.2, 1.0, 1.0};
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CarlemanSetup s = default_carleman_setup(2);
  s.betas.clear();
  CHECK_THROWS_AS(certify(s), ConfigError);
}
