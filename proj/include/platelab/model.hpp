// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Hinged plate on an interval or rectangle, its Dirichlet sine basis and the
// modal operators of the structurally damped plate
//
//   u_tt + Δ²u − div(a ∇u_t) = 0,   u = Δu = 0 on ∂Ω,   a = d·1_ω.
//
// With hinged conditions Δ² is the square of the Dirichlet Laplacian, so the
// sine basis diagonalizes the elastic part exactly and only the damping term
// couples modes. Everything downstream works in energy coordinates
// z = (Λu, v), where the plate energy is ½|z|².

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace platelab {

/// (x, y); y is ignored in 1D.
using Point = std::array<double, 2>;

struct Geometry {
  int dim = 1;
  double lx = 1.0;
  double ly = 1.0;

  static Geometry interval(double length);
  static Geometry rectangle(double lx, double ly);

  /// Throws ConfigError on a non-positive length or unsupported dimension.
  void validate() const;

  /// Closed-domain membership with a small relative slack.
  bool contains(const Point& p) const;
};

/// ω = (0, extent) in 1D, the strip (0, extent) × (0, ly) in 2D; a = d on ω.
/// extent == lx is full damping, extent == 0 or d == 0 is no damping.
struct DampingRegion {
  double extent = 0.0;
  double d = 0.0;

  void validate(const Geometry& geometry) const;
  bool is_full(const Geometry& geometry) const { return extent >= geometry.lx; }
  bool is_empty() const { return extent <= 0.0 || d == 0.0; }
};

/// Sine-product mode (m, n); n == 0 in 1D.
struct ModeIndex {
  int m = 1;
  int n = 0;
};

class ModalBasis {
 public:
  ModalBasis(Geometry geometry, std::vector<ModeIndex> modes);

  const Geometry& geometry() const { return geometry_; }
  std::size_t size() const { return modes_.size(); }
  const std::vector<ModeIndex>& modes() const { return modes_; }

  /// Dirichlet eigenvalues of −Δ, non-decreasing.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  double x_wavenumber(std::size_t k) const;
  double y_wavenumber(std::size_t k) const;

 private:
  Geometry geometry_;
  std::vector<ModeIndex> modes_;
  Eigen::VectorXd eigenvalues_;
};

/// The n_modes smallest Dirichlet eigenpairs. 2D ties are ordered by (m, n).
ModalBasis laplacian_eigenpairs(const Geometry& geometry, int n_modes);

/// D_mn = d ∫_ω ∇φ_m·∇φ_n, in closed form. Exactly symmetric.
Eigen::MatrixXd assemble_damping(const ModalBasis& basis,
                                 const DampingRegion& region);

/// [[0, Λ], [−Λ, −D]]: the generator in energy coordinates.
Eigen::MatrixXd assemble_generator(const Eigen::VectorXd& lambda,
                                   const Eigen::MatrixXd& damping);

struct ModalOperators {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd damping;
  Eigen::MatrixXd generator;
};

/// Displacement/velocity modal coefficients; u(x) = Σ u_m φ_m(x), v = ∂_t u.
struct State {
  Eigen::VectorXcd u;
  Eigen::VectorXcd v;

  static State zero(std::size_t n);
  static State from_energy_coordinates(const Eigen::VectorXcd& z,
                                       const Eigen::VectorXd& lambda);

  std::size_t size() const { return static_cast<std::size_t>(u.size()); }
  Eigen::VectorXcd energy_coordinates(const Eigen::VectorXd& lambda) const;
  bool is_real() const;
};

/// E = ½(‖v‖² + ‖Δu‖²) = ½(Σ|v_m|² + Σ λ_m²|u_m|²).
double energy(const State& state, const ModalBasis& basis);

enum class FieldKind { Value, Gradient, Laplacian, GradLaplacian };

/// Samples Σ c_m ∂^α φ_m at the grid points with analytic derivatives.
/// Rows are points; scalar kinds have one column, gradient kinds have `dim`.
/// Throws ConfigError for points outside the closed domain.
Eigen::MatrixXcd evaluate_field(const Eigen::VectorXcd& coefficients,
                                const ModalBasis& basis,
                                std::span<const Point> grid, FieldKind kind);

/// φ_m at each point: rows are points, columns are modes.
Eigen::MatrixXd basis_values(const ModalBasis& basis, std::span<const Point> grid);

/// Geometry, damping region, basis and assembled operators. Immutable after
/// construction, so one instance may be shared read-only across threads.
class PlateModel {
 public:
  PlateModel(Geometry geometry, DampingRegion region, int n_modes);

  const Geometry& geometry() const { return basis_.geometry(); }
  const DampingRegion& region() const { return region_; }
  const ModalBasis& basis() const { return basis_; }
  const ModalOperators& operators() const { return operators_; }
  std::size_t n_modes() const { return basis_.size(); }
  const Eigen::VectorXd& lambda() const { return operators_.lambda; }
  const Eigen::MatrixXd& damping() const { return operators_.damping; }
  const Eigen::MatrixXd& generator() const { return operators_.generator; }

 private:
  DampingRegion region_;
  ModalBasis basis_;
  ModalOperators operators_;
};

}  // namespace platelab
