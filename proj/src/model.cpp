// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "platelab/error.hpp"

namespace platelab {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(πx), exact zero at integers so that full-domain integrals of sine
// products vanish identically off the diagonal.
double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  return std::sin(kPi * r);
}

// ∫_0^ℓ cos(ax)cos(bx) dx and ∫_0^ℓ sin(ax)sin(bx) dx for a = mπ/L, b = pπ/L,
// written in terms of t = ℓ/L.
struct ProductIntegrals {
  double cc;
  double ss;
};

ProductIntegrals product_integrals(int m, int p, double length, double t) {
  const double ell = t * length;
  const double a = m * kPi / length;
  if (m == p) {
    const double osc = sin_pi(2.0 * m * t) / (2.0 * a);
    return {0.5 * (ell + osc), 0.5 * (ell - osc)};
  }
  const double b = p * kPi / length;
  const double diff = sin_pi((m - p) * t) / (a - b);
  const double sum = sin_pi((m + p) * t) / (a + b);
  return {0.5 * (diff + sum), 0.5 * (diff - sum)};
}

// π²((m/lx)² + (n/ly)²): integer ties on commensurate sides stay exact.
double mode_eigenvalue(const Geometry& g, int m, int n) {
  const double qx = m / g.lx;
  const double qy = g.dim == 2 ? n / g.ly : 0.0;
  return kPi * kPi * (qx * qx + qy * qy);
}

}  // namespace

Geometry Geometry::interval(double length) { return {1, length, 1.0}; }

Geometry Geometry::rectangle(double lx, double ly) { return {2, lx, ly}; }

void Geometry::validate() const {
  std::vector<std::string> issues;
  if (dim != 1 && dim != 2)
    issues.push_back("geometry.dim must be 1 or 2, got " + std::to_string(dim));
  if (!(lx > 0.0) || !std::isfinite(lx))
    issues.push_back("geometry length lx must be positive and finite");
  if (dim == 2 && (!(ly > 0.0) || !std::isfinite(ly)))
    issues.push_back("geometry length ly must be positive and finite");
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

bool Geometry::contains(const Point& p) const {
  const double sx = 1e-12 * lx;
  if (p[0] < -sx || p[0] > lx + sx) return false;
  if (dim == 2) {
    const double sy = 1e-12 * ly;
    if (p[1] < -sy || p[1] > ly + sy) return false;
  }
  return true;
}

void DampingRegion::validate(const Geometry& geometry) const {
  std::vector<std::string> issues;
  if (!(d >= 0.0) || !std::isfinite(d))
    issues.push_back("damping.d must be non-negative and finite");
  if (!(extent >= 0.0) || extent > geometry.lx)
    issues.push_back("damping.ell must lie in [0, lx]");
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ModalBasis::ModalBasis(Geometry geometry, std::vector<ModeIndex> modes)
    : geometry_(geometry), modes_(std::move(modes)) {
  eigenvalues_.resize(static_cast<Eigen::Index>(modes_.size()));
  for (std::size_t k = 0; k < modes_.size(); ++k)
    eigenvalues_(static_cast<Eigen::Index>(k)) =
        mode_eigenvalue(geometry_, modes_[k].m, modes_[k].n);
}

double ModalBasis::x_wavenumber(std::size_t k) const {
  return modes_[k].m * kPi / geometry_.lx;
}

double ModalBasis::y_wavenumber(std::size_t k) const {
  if (geometry_.dim == 1) return 0.0;
  return modes_[k].n * kPi / geometry_.ly;
}

ModalBasis laplacian_eigenpairs(const Geometry& geometry, int n_modes) {
  geometry.validate();
  if (n_modes < 1) throw ConfigError("discretization.n_modes must be >= 1");

  std::vector<ModeIndex> modes;
  if (geometry.dim == 1) {
    for (int m = 1; m <= n_modes; ++m) modes.push_back({m, 0});
    return ModalBasis(geometry, std::move(modes));
  }

  struct Candidate {
    double lambda;
    ModeIndex index;
  };
  auto eig = [&](int m, int n) { return mode_eigenvalue(geometry, m, n); };

  // Grow the candidate box until every mode outside it is provably larger
  // than the n_modes-th smallest candidate.
  std::vector<Candidate> cand;
  for (int side = static_cast<int>(std::ceil(std::sqrt(n_modes))) + 1;;
       side *= 2) {
    cand.clear();
    for (int m = 1; m <= side; ++m)
      for (int n = 1; n <= side; ++n) cand.push_back({eig(m, n), {m, n}});
    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
      return a.lambda < b.lambda;
    });
    const double outside =
        std::min(eig(side + 1, 1), eig(1, side + 1));
    if (cand[static_cast<std::size_t>(n_modes) - 1].lambda < outside) break;
  }

  // Ties (up to rounding) are ordered lexicographically by (m, n).
  for (std::size_t i = 0; i < cand.size();) {
    std::size_t j = i + 1;
    while (j < cand.size() &&
           cand[j].lambda - cand[i].lambda <= 1e-12 * cand[i].lambda)
      ++j;
    std::sort(cand.begin() + static_cast<std::ptrdiff_t>(i),
              cand.begin() + static_cast<std::ptrdiff_t>(j),
              [](const Candidate& a, const Candidate& b) {
                return a.index.m != b.index.m ? a.index.m < b.index.m
                                              : a.index.n < b.index.n;
              });
    i = j;
  }
  for (int k = 0; k < n_modes; ++k)
    modes.push_back(cand[static_cast<std::size_t>(k)].index);
  return ModalBasis(geometry, std::move(modes));
}

Eigen::MatrixXd assemble_damping(const ModalBasis& basis,
                                 const DampingRegion& region) {
  const auto& g = basis.geometry();
  region.validate(g);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  if (region.is_empty()) return D;

  const double t = std::min(region.extent / g.lx, 1.0);
  const auto& modes = basis.modes();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Eigen::Index j = i; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (g.dim == 2 && modes[ui].n != modes[uj].n) continue;
      const auto in = product_integrals(modes[ui].m, modes[uj].m, g.lx, t);
      const double a = basis.x_wavenumber(ui);
      const double b = basis.x_wavenumber(uj);
      double value = a * b * in.cc;
      if (g.dim == 2) {
        const double ky = basis.y_wavenumber(ui);
        value += ky * ky * in.ss;
      }
      value *= region.d * 2.0 / g.lx;
      D(i, j) = value;
      D(j, i) = value;
    }
  }
  return D;
}

Eigen::MatrixXd assemble_generator(const Eigen::VectorXd& lambda,
                                   const Eigen::MatrixXd& damping) {
  const auto n = lambda.size();
  if (damping.rows() != n || damping.cols() != n)
    throw ConfigError("generator assembly: Λ is " + std::to_string(n) +
                      " modes but D is " + std::to_string(damping.rows()) +
                      "x" + std::to_string(damping.cols()));
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  A.topRightCorner(n, n) = lambda.asDiagonal();
  A.bottomLeftCorner(n, n) = -lambda.asDiagonal().toDenseMatrix();
  A.bottomRightCorner(n, n) = -damping;
  return A;
}

State State::zero(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return {Eigen::VectorXcd::Zero(k), Eigen::VectorXcd::Zero(k)};
}

State State::from_energy_coordinates(const Eigen::VectorXcd& z,
                                     const Eigen::VectorXd& lambda) {
  const auto n = lambda.size();
  if (z.size() != 2 * n)
    throw ConfigError("energy-coordinate vector has wrong length");
  State s;
  s.u = z.head(n).cwiseQuotient(lambda.cast<std::complex<double>>());
  s.v = z.tail(n);
  return s;
}

Eigen::VectorXcd State::energy_coordinates(const Eigen::VectorXd& lambda) const {
  const auto n = lambda.size();
  if (u.size() != n || v.size() != n)
    throw ConfigError("state dimension does not match the basis");
  Eigen::VectorXcd z(2 * n);
  z.head(n) = lambda.cast<std::complex<double>>().cwiseProduct(u);
  z.tail(n) = v;
  return z;
}

bool State::is_real() const {
  return u.imag().isZero(0.0) && v.imag().isZero(0.0);
}

double energy(const State& state, const ModalBasis& basis) {
  const auto& lambda = basis.eigenvalues();
  if (state.u.size() != lambda.size() || state.v.size() != lambda.size())
    throw ConfigError("state dimension does not match the basis");
  const double kinetic = state.v.squaredNorm();
  const double elastic =
      lambda.cast<std::complex<double>>().cwiseProduct(state.u).squaredNorm();
  return 0.5 * (kinetic + elastic);
}

Eigen::MatrixXcd evaluate_field(const Eigen::VectorXcd& coefficients,
                                const ModalBasis& basis,
                                std::span<const Point> grid, FieldKind kind) {
  const auto& g = basis.geometry();
  const std::size_t n = basis.size();
  if (static_cast<std::size_t>(coefficients.size()) != n)
    throw ConfigError("coefficient vector does not match the basis");
  for (const auto& p : grid)
    if (!g.contains(p))
      throw ConfigError("evaluation point (" + std::to_string(p[0]) + ", " +
                        std::to_string(p[1]) + ") lies outside the domain");

  const bool gradient =
      kind == FieldKind::Gradient || kind == FieldKind::GradLaplacian;
  const bool laplacian =
      kind == FieldKind::Laplacian || kind == FieldKind::GradLaplacian;
  const Eigen::Index cols = gradient ? g.dim : 1;
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid.size()), cols);

  const double cx = std::sqrt(2.0 / g.lx);
  const double cy = g.dim == 2 ? std::sqrt(2.0 / g.ly) : 1.0;
  const auto& lambda = basis.eigenvalues();

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      const std::complex<double> c =
          laplacian ? -lambda(kk) * coefficients(kk) : coefficients(kk);
      const double a = basis.x_wavenumber(k);
      const double sx = cx * std::sin(a * p[0]);
      double sy = 1.0;
      double b = 0.0;
      if (g.dim == 2) {
        b = basis.y_wavenumber(k);
        sy = cy * std::sin(b * p[1]);
      }
      if (!gradient) {
        out(row, 0) += c * (sx * sy);
        continue;
      }
      out(row, 0) += c * (cx * a * std::cos(a * p[0]) * sy);
      if (g.dim == 2) out(row, 1) += c * (sx * cy * b * std::cos(b * p[1]));
    }
  }
  return out;
}

Eigen::MatrixXd basis_values(const ModalBasis& basis,
                             std::span<const Point> grid) {
  const auto& g = basis.geometry();
  const double cx = std::sqrt(2.0 / g.lx);
  const double cy = g.dim == 2 ? std::sqrt(2.0 / g.ly) : 1.0;
  Eigen::MatrixXd B(static_cast<Eigen::Index>(grid.size()),
                    static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!g.contains(grid[i]))
      throw ConfigError("basis evaluation point lies outside the domain");
    for (std::size_t k = 0; k < basis.size(); ++k) {
      double value = cx * std::sin(basis.x_wavenumber(k) * grid[i][0]);
      if (g.dim == 2) value *= cy * std::sin(basis.y_wavenumber(k) * grid[i][1]);
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = value;
    }
  }
  return B;
}

PlateModel::PlateModel(Geometry geometry, DampingRegion region, int n_modes)
    : region_(region), basis_(laplacian_eigenpairs(geometry, n_modes)) {
  region_.validate(basis_.geometry());
  operators_.lambda = basis_.eigenvalues();
  operators_.damping = assemble_damping(basis_, region_);
  operators_.generator =
      assemble_generator(operators_.lambda, operators_.damping);
}

}  // namespace platelab
