// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "platelab/error.hpp"
#include "platelab/parallel.hpp"

namespace platelab {

namespace {

Eigen::Vector2d as_vector(const Point& x, int dim) {
  return {x[0], dim == 2 ? x[1] : 0.0};
}

Eigen::Vector2d mask(Eigen::Vector2d v, int dim) {
  if (dim == 1) v(1) = 0.0;
  return v;
}

std::vector<double> axis(double lo, double hi, std::size_t per_unit) {
  const auto n = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(static_cast<double>(per_unit) * (hi - lo))) + 1);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

}  // namespace

QuadraticProfile QuadraticProfile::affine(int dim, double constant,
                                          Eigen::Vector2d slope) {
  QuadraticProfile p;
  p.dim = dim;
  p.constant = constant;
  p.linear = slope;
  return p;
}

double QuadraticProfile::value(const Point& x) const {
  const Eigen::Vector2d v = as_vector(x, dim);
  return constant + mask(linear, dim).dot(v) + 0.5 * v.dot(hessian() * v);
}

Eigen::Vector2d QuadraticProfile::gradient(const Point& x) const {
  return mask(linear + hessian() * as_vector(x, dim), dim);
}

Eigen::Matrix2d QuadraticProfile::hessian() const {
  Eigen::Matrix2d h = 0.5 * (quadratic + quadratic.transpose());
  if (dim == 1) {
    h(0, 1) = h(1, 0) = h(1, 1) = 0.0;
  }
  return h;
}

Weight::Weight(QuadraticProfile psi, double beta) : psi_(std::move(psi)), beta_(beta) {}

double Weight::value(const Point& x) const { return std::exp(beta_ * psi_.value(x)); }

Eigen::Vector2d Weight::gradient(const Point& x) const {
  return beta_ * value(x) * psi_.gradient(x);
}

Eigen::Matrix2d Weight::hessian(const Point& x) const {
  const Eigen::Vector2d g = psi_.gradient(x);
  return beta_ * value(x) * (psi_.hessian() + beta_ * g * g.transpose());
}

Weight weight_from_profile(const QuadraticProfile& psi, double beta) {
  std::vector<std::string> issues;
  if (!(beta > 0.0) || !std::isfinite(beta)) issues.push_back("beta must be positive");
  if (psi.dim != 1 && psi.dim != 2) issues.push_back("profile dimension must be 1 or 2");
  if (!std::isfinite(psi.constant) || !psi.linear.allFinite() || !psi.quadratic.allFinite())
    issues.push_back("profile coefficients must be finite");
  if (!issues.empty()) throw ConfigError(issues);
  return Weight(psi, beta);
}

std::complex<double> principal_symbol(const Weight& weight, const SymbolPoint& p) {
  const Eigen::Vector2d g = weight.gradient(p.x);
  const Eigen::Vector2d xi = mask(p.xi, weight.dim());
  return {xi.squaredNorm() - p.tau * p.tau * g.squaredNorm(), 2.0 * p.tau * xi.dot(g)};
}

double poisson_bracket(const Weight& weight, const SymbolPoint& p) {
  const Eigen::Vector2d g = weight.gradient(p.x);
  const Eigen::Matrix2d h = weight.hessian(p.x);
  const Eigen::Vector2d xi = mask(p.xi, weight.dim());
  return 4.0 * p.tau * (xi.dot(h * xi) + p.tau * p.tau * g.dot(h * g));
}

double japanese_cube(const SymbolPoint& p) {
  const double s = p.xi.squaredNorm() + p.tau * p.tau;
  return s * std::sqrt(s);
}

std::vector<SymbolPoint> characteristic_samples(const Weight& weight, const Point& x,
                                                double tau, std::size_t count) {
  if (weight.dim() != 2)
    throw DegenerateInputError("the 1D characteristic set is empty; use shells");
  const Eigen::Vector2d g = weight.gradient(x);
  const double norm = g.norm();
  if (!(norm > 0.0))
    throw DegenerateInputError("weight gradient vanishes at the sample point");
  const Eigen::Vector2d t(-g(1) / norm, g(0) / norm);
  std::vector<SymbolPoint> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    out[i] = {x, sign * tau * norm * t, tau};
  }
  return out;
}

std::vector<SymbolPoint> near_characteristic_samples(const Weight& weight,
                                                     const Point& x, double tau,
                                                     std::size_t count, double eps) {
  const double slope = std::abs(weight.gradient(x)(0));
  const double span = 2.0 * tau * (slope + 1.0);
  const std::size_t n = std::max<std::size_t>(count, 2);
  std::vector<SymbolPoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(n - 1);
    SymbolPoint p{x, Eigen::Vector2d(xi, 0.0), tau};
    const auto sym = principal_symbol(weight, p);
    if (std::abs(sym.real()) + std::abs(sym.imag()) <= eps * (xi * xi + tau * tau))
      out.push_back(p);
  }
  return out;
}

MarginReport subellipticity_margin(const Weight& weight, std::span<const Point> points,
                                   std::span<const double> taus, std::size_t directions,
                                   double shell_eps) {
  if (points.empty() || taus.empty())
    throw ConfigError("sub-ellipticity check needs sample points and tau values");
  for (double tau : taus)
    if (!(tau > 0.0)) throw ConfigError("tau values must be positive");

  const auto partial = parallel_map<MarginReport>(points.size(), [&](std::size_t i) {
    MarginReport r;
    r.margin = std::numeric_limits<double>::infinity();
    const Point& x = points[i];
    const bool critical = !(weight.gradient(x).norm() > 0.0);
    if (critical) ++r.critical_points;
    for (double tau : taus) {
      std::vector<SymbolPoint> pts;
      if (critical)
        pts.push_back({x, Eigen::Vector2d::Zero(), tau});
      else if (weight.dim() == 2)
        pts = characteristic_samples(weight, x, tau, directions);
      else
        pts = near_characteristic_samples(weight, x, tau, 8 * directions + 1, shell_eps);
      if (pts.empty()) ++r.empty_shells;
      for (const auto& p : pts) {
        const double m = poisson_bracket(weight, p) / japanese_cube(p);
        ++r.samples;
        if (m < r.margin) {
          r.margin = m;
          r.worst = p;
        }
      }
    }
    return r;
  });

  MarginReport total;
  total.margin = std::numeric_limits<double>::infinity();
  for (const auto& r : partial) {
    total.samples += r.samples;
    total.empty_shells += r.empty_shells;
    total.critical_points += r.critical_points;
    if (r.samples > 0 && r.margin < total.margin) {
      total.margin = r.margin;
      total.worst = r.worst;
    }
  }
  return total;
}

void CarlemanGeometry::validate() const {
  std::vector<std::string> issues;
  if (dim != 1 && dim != 2) issues.push_back("carleman.dim must be 1 or 2");
  if (!(a < ell && ell < b)) issues.push_back("carleman regions need a < ell < b");
  if (dim == 2 && !(ly > 0.0)) issues.push_back("carleman.ly must be positive");
  if (!issues.empty()) throw ConfigError(issues);
}

CarlemanSamples make_carleman_samples(const CarlemanGeometry& geometry,
                                      std::size_t region_points,
                                      std::size_t boundary_points) {
  geometry.validate();
  CarlemanSamples s;
  const std::vector<double> ys =
      geometry.dim == 2 ? axis(0.0, geometry.ly, region_points) : std::vector<double>{0.0};
  const std::vector<double> yb =
      geometry.dim == 2 ? axis(0.0, geometry.ly,
                               static_cast<std::size_t>(std::ceil(
                                   static_cast<double>(boundary_points) / geometry.ly)))
                        : std::vector<double>{0.0};
  for (double x : axis(geometry.a, geometry.ell, region_points))
    for (double y : ys) s.region1.push_back({x, y});
  for (double x : axis(geometry.ell, geometry.b, region_points))
    for (double y : ys) s.region2.push_back({x, y});
  for (double y : yb) {
    s.interface.push_back({geometry.ell, y});
    s.outer.push_back({geometry.b, y});
  }
  return s;
}

bool ConditionReport::pass() const {
  return gradient1 > 0.0 && gradient2 > 0.0 && outer_sign > 0.0 &&
         interface_sign1 > 0.0 && interface_sign2 > 0.0 && interface_inequality > 0.0 &&
         continuity < kContinuityTolerance;
}

ConditionReport pointwise_conditions(const Weight& phi1, const Weight& phi2,
                                     const CarlemanSamples& samples) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Eigen::Vector2d interface_normal(-1.0, 0.0);
  const Eigen::Vector2d outer_normal(1.0, 0.0);
  ConditionReport r{inf, inf, inf, inf, inf, inf, 0.0};
  for (const auto& x : samples.region1) r.gradient1 = std::min(r.gradient1, phi1.gradient(x).norm());
  for (const auto& x : samples.region2) r.gradient2 = std::min(r.gradient2, phi2.gradient(x).norm());
  for (const auto& x : samples.outer)
    r.outer_sign = std::min(r.outer_sign, -phi2.gradient(x).dot(outer_normal));
  for (const auto& x : samples.interface) {
    const double n1 = phi1.gradient(x).dot(interface_normal);
    const double n2 = phi2.gradient(x).dot(interface_normal);
    r.interface_sign1 = std::min(r.interface_sign1, n1);
    r.interface_sign2 = std::min(r.interface_sign2, n2);
    r.interface_inequality = std::min(r.interface_inequality, n1 * n1 - n2 * n2 - 1.0);
    r.continuity = std::max(r.continuity, std::abs(phi1.value(x) - phi2.value(x)));
  }
  return r;
}

CarlemanSetup default_carleman_setup(int dim) {
  CarlemanSetup s;
  s.geometry = {dim, 0.0, 0.5, 1.0, 1.0};
  s.psi1 = QuadraticProfile::affine(dim, 0.5, {-1.0, 0.0});
  s.psi2 = QuadraticProfile::affine(dim, 0.25, {-0.5, 0.0});
  return s;
}

bool Certificate::subelliptic() const {
  auto ok = [&](const MarginReport& m) { return m.vacuous() || m.margin >= threshold; };
  return ok(margin1) && ok(margin2);
}

std::vector<Certificate> certify(const CarlemanSetup& setup) {
  if (setup.betas.empty()) throw ConfigError("carleman.beta must list at least one value");
  if (setup.psi1.dim != setup.geometry.dim || setup.psi2.dim != setup.geometry.dim)
    throw ConfigError("weight profiles and carleman geometry differ in dimension");
  const CarlemanSamples samples =
      make_carleman_samples(setup.geometry, setup.region_points, setup.boundary_points);
  std::vector<Certificate> out;
  for (double beta : setup.betas) {
    const Weight phi1 = weight_from_profile(setup.psi1, beta);
    const Weight phi2 = weight_from_profile(setup.psi2, beta);
    Certificate c;
    c.beta = beta;
    c.threshold = setup.threshold;
    c.conditions = pointwise_conditions(phi1, phi2, samples);
    c.margin1 = subellipticity_margin(phi1, samples.region1, setup.taus, setup.directions);
    c.margin2 = subellipticity_margin(phi2, samples.region2, setup.taus, setup.directions);
    out.push_back(c);
  }
  return out;
}

}  // namespace platelab
