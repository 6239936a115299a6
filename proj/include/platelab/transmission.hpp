// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Resolvent problem (Â − iμ)(u, v) = (f, g) and its rewriting as a
// transmission problem between the damped part ω and the undamped part
// Ω∖ω̄. With v = f + iμu the displacement splits into u₁ on ω and u₂ on
// Ω∖ω̄, and the substitutions
//
//   w₁ = Δu₁ + (|μ| − idμ)u₁,   w₂ = Δu₂ + |μ|u₂
//
// turn the fourth-order equations into −Δw_j + |μ|w_j = Φ_j with
//
//   Φ₁ = g₁ + iμf₁ − dΔf₁ − i·d·|μ|·μ·u₁,   Φ₂ = g₂ + iμf₂.
//
// The modal solution is a single smooth global expansion, so u, ∂_νu and Δu
// are continuous across the interface I by construction. For the flux
// condition ∂_ν(Δu₁ − idμu₁ − df₁) = ∂_νΔu₂ the global expansion gives the
// same ∂_νΔu on both sides, so its residual is r = idμ∂_νu₁ + d∂_νf₁ = d∂_νv
// on I. r is reported per sample and across resolution ladders; it tends to
// d∂_νv of the limit solution, not to zero. ν is the outer normal of Ω∖ω̄
// on I, i.e. −e_x.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "platelab/model.hpp"
#include "platelab/random.hpp"

namespace platelab {

/// Evaluation points of one case. Interior grids are cell-centred, hence at
/// least half a step away from every region boundary.
struct CaseGrid {
  std::vector<Point> damped;     ///< inside ω
  std::vector<Point> undamped;   ///< inside Ω∖ω̄
  std::vector<Point> interface;  ///< on I
};

/// `points_per_length` cells across lx (split between the two regions in
/// proportion to their widths); `interface_points` samples along I in 2D,
/// a single point in 1D. An empty or full damping region has no interface.
CaseGrid make_case_grid(const Geometry& geometry, const DampingRegion& region,
                        std::size_t points_per_length = 64,
                        std::size_t interface_points = 64);

struct ResolventCase {
  double mu = 0.0;
  Eigen::VectorXcd f;
  Eigen::VectorXcd g;
  Eigen::VectorXcd u;
  Eigen::VectorXcd v;
  CaseGrid grid;
  double solve_residual = 0.0;  ///< ‖(Â − iμ)z − data‖ / ‖data‖
};

/// Complex solve in energy coordinates with one step of iterative
/// refinement. Residual above 1e-6 raises NumericalError.
ResolventCase solve_resolvent(const PlateModel& model, const Eigen::VectorXcd& f,
                              const Eigen::VectorXcd& g, double mu,
                              CaseGrid grid = {});

/// ‖v − f − iμu‖ / ‖(f, g)‖_H.
double first_line_residual(const ResolventCase& c, const PlateModel& model);

/// Random data whose energy coordinates (Λf, g) are complex standard normals.
struct ResolventData {
  Eigen::VectorXcd f;
  Eigen::VectorXcd g;
};
ResolventData random_data(const ModalBasis& basis, Rng& rng);

/// Data living in the first `active_modes` modes only, identical for every
/// truncation N ≥ active_modes; used for resolution ladders.
ResolventData fixed_smooth_data(const ModalBasis& basis, std::uint64_t seed,
                                std::size_t active_modes = 8);

struct ImaginaryPartReport {
  /// μ·uᴴDu + Im uᴴ(g + iμf) + Im uᴴDf, exactly zero for the discrete solve.
  double identity_residual = 0.0;
  double relative_residual = 0.0;
  double lhs = 0.0;  ///< |μ|∫_ω a|∇u|² = |μ| uᴴDu
  /// ‖g + iμf‖‖u‖ + (fᵀDf)^{1/2}(uᴴDu)^{1/2}
  double rhs = 0.0;
  /// (μ²‖Δf‖² + ‖g‖²)^{1/2}(‖u‖ + ‖∇u‖)·max(1, d), the coarser form.
  double rhs_coarse = 0.0;
  double ratio = 0.0;  ///< lhs / rhs
};

ImaginaryPartReport imaginary_part_identity(const ResolventCase& c,
                                            const PlateModel& model);

struct WSubstitution {
  Eigen::VectorXcd w1_coefficients;
  Eigen::VectorXcd w2_coefficients;
  Eigen::VectorXcd w1, phi1, residual1;  ///< on grid.damped
  Eigen::VectorXcd w2, phi2, residual2;  ///< on grid.undamped
  double max_residual_damped = 0.0;
  double max_residual_undamped = 0.0;
  double phi_scale = 0.0;  ///< max |Φ| over both grids
};

WSubstitution w_substitution(const ResolventCase& c, const PlateModel& model);

/// Projection of the piecewise residual −Δw_j + |μ|w_j − Φ_j onto the
/// retained modes by an alias-free midpoint rule, relative to the projection
/// of Φ. Zero up to roundoff when ω = Ω.
double projected_w_residual(const ResolventCase& c, const PlateModel& model);

struct InterfaceReport {
  Eigen::VectorXcd jump_u;          ///< u₁ − u₂
  Eigen::VectorXcd jump_normal;     ///< ∂_νu₁ − ∂_νu₂
  Eigen::VectorXcd jump_laplacian;  ///< Δu₁ − Δu₂
  Eigen::VectorXcd flux;            ///< r = idμ∂_νu₁ + d∂_νf₁
  double max_continuity = 0.0;
  double flux_norm = 0.0;  ///< RMS of |r| over the interface samples
};

InterfaceReport interface_residuals(const ResolventCase& c,
                                    const PlateModel& model);

struct LadderRung {
  int n_modes = 0;
  double flux_norm = 0.0;
  double max_w_residual = 0.0;  ///< max over both interior grids
};

/// Same smooth data, same grid, increasing truncation.
std::vector<LadderRung> resolution_ladder(const Geometry& geometry,
                                          const DampingRegion& region,
                                          double mu, const std::vector<int>& n_modes,
                                          std::uint64_t seed,
                                          std::size_t points_per_length = 64,
                                          std::size_t interface_points = 64);

}  // namespace platelab
