// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "platelab/error.hpp"

namespace platelab {

namespace {

using cd = std::complex<double>;
constexpr cd kI(0.0, 1.0);

std::size_t cells(std::size_t total, double part, double whole) {
  if (part <= 0.0) return 0;
  const auto n = static_cast<std::size_t>(
      std::llround(static_cast<double>(total) * part / whole));
  return std::max<std::size_t>(1, n);
}

Eigen::VectorXcd column(const Eigen::MatrixXcd& m, Eigen::Index c, double sign = 1.0) {
  return sign * m.col(c);
}

// Values of w_j, Φ_j and the residual −Δw_j + |μ|w_j − Φ_j at the points,
// using the region-1 (damped) or region-2 formulas.
struct WSample {
  Eigen::VectorXcd w, phi, residual;
};

WSample sample_w(const ResolventCase& c, const PlateModel& model,
                 std::span<const Point> pts, bool damped) {
  WSample out;
  const auto& basis = model.basis();
  const Eigen::VectorXd& lambda = model.lambda();
  const double mu = c.mu;
  const double amu = std::abs(mu);
  const double d = model.region().d;

  const cd shift = damped ? cd(amu, -d * mu) : cd(amu, 0.0);
  Eigen::VectorXcd wc(lambda.size());
  for (Eigen::Index m = 0; m < lambda.size(); ++m)
    wc(m) = (-lambda(m) + shift) * c.u(m);

  if (pts.empty()) {
    out.w.resize(0);
    out.phi.resize(0);
    out.residual.resize(0);
    return out;
  }
  out.w = column(evaluate_field(wc, basis, pts, FieldKind::Value), 0);
  const Eigen::VectorXcd lap_w =
      column(evaluate_field(wc, basis, pts, FieldKind::Laplacian), 0);
  const Eigen::VectorXcd gv = column(evaluate_field(c.g, basis, pts, FieldKind::Value), 0);
  const Eigen::VectorXcd fv = column(evaluate_field(c.f, basis, pts, FieldKind::Value), 0);

  out.phi = gv + kI * mu * fv;
  if (damped) {
    const Eigen::VectorXcd lap_f =
        column(evaluate_field(c.f, basis, pts, FieldKind::Laplacian), 0);
    const Eigen::VectorXcd uv =
        column(evaluate_field(c.u, basis, pts, FieldKind::Value), 0);
    // Φ₁ = g₁ + iμf₁ − dΔf₁ − i·d·|μ|·μ·u₁
    out.phi += -d * lap_f - kI * (d * amu * mu) * uv;
  }
  out.residual = -lap_w + amu * out.w - out.phi;
  return out;
}

double max_abs(const Eigen::VectorXcd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

CaseGrid make_case_grid(const Geometry& geometry, const DampingRegion& region,
                        std::size_t points_per_length,
                        std::size_t interface_points) {
  geometry.validate();
  region.validate(geometry);
  if (points_per_length == 0) throw ConfigError("grid density must be positive");
  const double lx = geometry.lx;
  const double ell = std::clamp(region.extent, 0.0, lx);
  const std::size_t nd = cells(points_per_length, ell, lx);
  const std::size_t nu = cells(points_per_length, lx - ell, lx);
  const std::size_t ny =
      geometry.dim == 2 ? cells(points_per_length, geometry.ly, lx) : 1;

  auto fill = [&](std::vector<Point>& out, double x0, double width, std::size_t nx) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = x0 + (static_cast<double>(i) + 0.5) * width / static_cast<double>(nx);
      if (geometry.dim == 1) {
        out.push_back({x, 0.0});
        continue;
      }
      for (std::size_t j = 0; j < ny; ++j)
        out.push_back({x, (static_cast<double>(j) + 0.5) * geometry.ly /
                              static_cast<double>(ny)});
    }
  };

  CaseGrid grid;
  fill(grid.damped, 0.0, ell, nd);
  fill(grid.undamped, ell, lx - ell, nu);
  if (ell > 0.0 && ell < lx) {
    if (geometry.dim == 1) {
      grid.interface.push_back({ell, 0.0});
    } else {
      const std::size_t ni = std::max<std::size_t>(1, interface_points);
      for (std::size_t j = 0; j < ni; ++j)
        grid.interface.push_back(
            {ell, (static_cast<double>(j) + 0.5) * geometry.ly / static_cast<double>(ni)});
    }
  }
  return grid;
}

ResolventCase solve_resolvent(const PlateModel& model, const Eigen::VectorXcd& f,
                              const Eigen::VectorXcd& g, double mu, CaseGrid grid) {
  const Eigen::VectorXd& lambda = model.lambda();
  const auto n = lambda.size();
  if (f.size() != n || g.size() != n)
    throw ConfigError("resolvent data does not match the basis");
  if (!std::isfinite(mu) || !f.allFinite() || !g.allFinite())
    throw ConfigError("resolvent data must be finite");

  Eigen::VectorXcd data(2 * n);
  data.head(n) = lambda.cast<cd>().cwiseProduct(f);
  data.tail(n) = g;

  Eigen::MatrixXcd M = model.generator().cast<cd>();
  M.diagonal().array() -= kI * mu;

  ResolventCase c;
  c.mu = mu;
  c.f = f;
  c.g = g;
  c.grid = std::move(grid);

  const double scale = data.norm();
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(2 * n);
  if (scale > 0.0) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    z = lu.solve(data);
    z += lu.solve(data - M * z);
    c.solve_residual = (data - M * z).norm() / scale;
    if (!(c.solve_residual <= 1e-6))
      throw NumericalError("resolvent solve at mu = " + std::to_string(mu) +
                           " is near-singular (relative residual " +
                           std::to_string(c.solve_residual) + ")");
  }
  c.u = z.head(n).cwiseQuotient(lambda.cast<cd>());
  c.v = z.tail(n);
  return c;
}

double first_line_residual(const ResolventCase& c, const PlateModel& model) {
  const Eigen::VectorXd& lambda = model.lambda();
  const double data = std::sqrt(lambda.cast<cd>().cwiseProduct(c.f).squaredNorm() +
                                c.g.squaredNorm());
  const double r = (c.v - c.f - kI * c.mu * c.u).norm();
  return data > 0.0 ? r / data : r;
}

ResolventData random_data(const ModalBasis& basis, Rng& rng) {
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  const auto n = lambda.size();
  ResolventData out;
  out.f = rng.complex_normal_vector(n).cwiseQuotient(lambda.cast<cd>());
  out.g = rng.complex_normal_vector(n);
  return out;
}

ResolventData fixed_smooth_data(const ModalBasis& basis, std::uint64_t seed,
                                std::size_t active_modes) {
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  const auto n = lambda.size();
  const auto k = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(active_modes));
  Rng rng(seed);
  const Eigen::VectorXcd xi = rng.complex_normal_vector(k);
  const Eigen::VectorXcd gk = rng.complex_normal_vector(k);
  ResolventData out{Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
  out.f.head(k) = xi.cwiseQuotient(lambda.head(k).cast<cd>());
  out.g.head(k) = gk;
  return out;
}

ImaginaryPartReport imaginary_part_identity(const ResolventCase& c,
                                            const PlateModel& model) {
  const Eigen::MatrixXcd D = model.damping().cast<cd>();
  const Eigen::VectorXd& lambda = model.lambda();
  const double mu = c.mu;
  const double d = model.region().d;

  const Eigen::VectorXcd gf = c.g + kI * mu * c.f;
  const double uDu = c.u.dot(D * c.u).real();
  const double fDf = std::max(0.0, c.f.dot(D * c.f).real());
  const double t1 = c.u.dot(gf).imag();       // Im uᴴ(g + iμf)
  const double t2 = c.u.dot(D * c.f).imag();  // Im uᴴDf

  ImaginaryPartReport r;
  r.identity_residual = mu * uDu + t1 + t2;
  const double scale = std::abs(mu * uDu) + std::abs(t1) + std::abs(t2);
  r.relative_residual = scale > 0.0 ? std::abs(r.identity_residual) / scale : 0.0;

  r.lhs = std::abs(mu) * uDu;
  r.rhs = gf.norm() * c.u.norm() + std::sqrt(fDf) * std::sqrt(std::max(0.0, uDu));

  const Eigen::VectorXcd lam_c = lambda.cast<cd>();
  const double lap_f2 = lam_c.cwiseProduct(c.f).squaredNorm();
  const double grad_u = std::sqrt(
      (c.u.cwiseAbs2().array() * lambda.array()).sum());
  r.rhs_coarse = std::sqrt(mu * mu * lap_f2 + c.g.squaredNorm()) *
                 (c.u.norm() + grad_u) * std::max(1.0, d);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

WSubstitution w_substitution(const ResolventCase& c, const PlateModel& model) {
  const Eigen::VectorXd& lambda = model.lambda();
  const double amu = std::abs(c.mu);
  const double d = model.region().d;

  WSubstitution out;
  out.w1_coefficients.resize(lambda.size());
  out.w2_coefficients.resize(lambda.size());
  for (Eigen::Index m = 0; m < lambda.size(); ++m) {
    out.w1_coefficients(m) = (-lambda(m) + cd(amu, -d * c.mu)) * c.u(m);
    out.w2_coefficients(m) = (-lambda(m) + amu) * c.u(m);
  }
  WSample s1 = sample_w(c, model, c.grid.damped, true);
  WSample s2 = sample_w(c, model, c.grid.undamped, false);
  out.w1 = std::move(s1.w);
  out.phi1 = std::move(s1.phi);
  out.residual1 = std::move(s1.residual);
  out.w2 = std::move(s2.w);
  out.phi2 = std::move(s2.phi);
  out.residual2 = std::move(s2.residual);
  out.max_residual_damped = max_abs(out.residual1);
  out.max_residual_undamped = max_abs(out.residual2);
  out.phi_scale = std::max(max_abs(out.phi1), max_abs(out.phi2));
  return out;
}

double projected_w_residual(const ResolventCase& c, const PlateModel& model) {
  const auto& basis = model.basis();
  const auto& g = basis.geometry();
  int max_m = 1;
  int max_n = 1;
  for (const auto& mode : basis.modes()) {
    max_m = std::max(max_m, mode.m);
    max_n = std::max(max_n, mode.n);
  }
  // Midpoint rule with Q cells integrates sin·sin products exactly while the
  // summed index stays below 2Q.
  const std::size_t qx = static_cast<std::size_t>(4 * max_m);
  const std::size_t qy = g.dim == 2 ? static_cast<std::size_t>(4 * max_n) : 1;
  const double ell = model.region().extent;

  std::vector<Point> in_damped;
  std::vector<Point> in_undamped;
  for (std::size_t i = 0; i < qx; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * g.lx / static_cast<double>(qx);
    for (std::size_t j = 0; j < qy; ++j) {
      const double y =
          g.dim == 2 ? (static_cast<double>(j) + 0.5) * g.ly / static_cast<double>(qy) : 0.0;
      (x < ell ? in_damped : in_undamped).push_back({x, y});
    }
  }
  const double weight = g.lx / static_cast<double>(qx) *
                        (g.dim == 2 ? g.ly / static_cast<double>(qy) : 1.0);

  Eigen::VectorXcd proj_res = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  Eigen::VectorXcd proj_phi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  auto accumulate = [&](const std::vector<Point>& pts, bool damped) {
    if (pts.empty()) return;
    const WSample s = sample_w(c, model, pts, damped);
    const Eigen::MatrixXd B = basis_values(basis, pts);
    proj_res += weight * (B.transpose().cast<cd>() * s.residual);
    proj_phi += weight * (B.transpose().cast<cd>() * s.phi);
  };
  accumulate(in_damped, true);
  accumulate(in_undamped, false);
  const double denom = proj_phi.norm();
  return denom > 0.0 ? proj_res.norm() / denom : proj_res.norm();
}

InterfaceReport interface_residuals(const ResolventCase& c, const PlateModel& model) {
  const auto& basis = model.basis();
  const auto& pts = c.grid.interface;
  const double mu = c.mu;
  const double d = model.region().d;
  InterfaceReport r;
  if (pts.empty()) {
    r.jump_u.resize(0);
    r.jump_normal.resize(0);
    r.jump_laplacian.resize(0);
    r.flux.resize(0);
    return r;
  }

  // u₁ and u₂ are restrictions of one global expansion; each side is
  // evaluated on its own so the jumps test the evaluators, not an identity.
  auto side = [&](FieldKind kind, const Eigen::VectorXcd& coeffs, double sign) {
    return column(evaluate_field(coeffs, basis, pts, kind), 0, sign);
  };
  const Eigen::VectorXcd u1 = side(FieldKind::Value, c.u, 1.0);
  const Eigen::VectorXcd u2 = side(FieldKind::Value, c.u, 1.0);
  const Eigen::VectorXcd dn_u1 = side(FieldKind::Gradient, c.u, -1.0);
  const Eigen::VectorXcd dn_u2 = side(FieldKind::Gradient, c.u, -1.0);
  const Eigen::VectorXcd lap_u1 = side(FieldKind::Laplacian, c.u, 1.0);
  const Eigen::VectorXcd lap_u2 = side(FieldKind::Laplacian, c.u, 1.0);
  const Eigen::VectorXcd dn_lap_u1 = side(FieldKind::GradLaplacian, c.u, -1.0);
  const Eigen::VectorXcd dn_lap_u2 = side(FieldKind::GradLaplacian, c.u, -1.0);
  const Eigen::VectorXcd dn_f1 = side(FieldKind::Gradient, c.f, -1.0);

  r.jump_u = u1 - u2;
  r.jump_normal = dn_u1 - dn_u2;
  r.jump_laplacian = lap_u1 - lap_u2;
  const Eigen::VectorXcd lhs = dn_lap_u1 - kI * (d * mu) * dn_u1 - d * dn_f1;
  r.flux = dn_lap_u2 - lhs;
  r.max_continuity = std::max({max_abs(r.jump_u), max_abs(r.jump_normal),
                               max_abs(r.jump_laplacian)});
  r.flux_norm = std::sqrt(r.flux.squaredNorm() / static_cast<double>(r.flux.size()));
  return r;
}

std::vector<LadderRung> resolution_ladder(const Geometry& geometry,
                                          const DampingRegion& region, double mu,
                                          const std::vector<int>& n_modes,
                                          std::uint64_t seed,
                                          std::size_t points_per_length,
                                          std::size_t interface_points) {
  const CaseGrid grid =
      make_case_grid(geometry, region, points_per_length, interface_points);
  std::vector<LadderRung> out;
  for (int n : n_modes) {
    const PlateModel model(geometry, region, n);
    const auto data = fixed_smooth_data(model.basis(), seed);
    const ResolventCase c = solve_resolvent(model, data.f, data.g, mu, grid);
    const WSubstitution w = w_substitution(c, model);
    const InterfaceReport ir = interface_residuals(c, model);
    out.push_back({n, ir.flux_norm,
                   std::max(w.max_residual_damped, w.max_residual_undamped)});
  }
  return out;
}

}  // namespace platelab
