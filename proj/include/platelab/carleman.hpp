// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Certification of Carleman weight pairs for the transmission problem.
// Weights are φ = e^{βψ} with ψ a quadratic polynomial on each side of a flat
// interface γ₀ = {x = ℓ}; U₁ = (a, ℓ) is the damped side and U₂ = (ℓ, b) the
// undamped side, with γ = {x = b} its outer boundary. The conjugated
// operator has principal symbol
//
//   p(x, ξ, τ) = |ξ|² + 2iτ ξ·∇φ − τ²|∇φ|²
//
// whose Poisson bracket {Re p, Im p} = 4τ(ξᵀHφ ξ + τ² ∇φᵀHφ ∇φ).
// Margins are plain floating point; nothing here is interval-certified.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "platelab/model.hpp"

namespace platelab {

/// ψ(x) = c + g·x + ½ xᵀHx. In 1D only the first components are used.
struct QuadraticProfile {
  int dim = 2;
  double constant = 0.0;
  Eigen::Vector2d linear = Eigen::Vector2d::Zero();
  Eigen::Matrix2d quadratic = Eigen::Matrix2d::Zero();  ///< symmetrized on use

  static QuadraticProfile affine(int dim, double constant, Eigen::Vector2d slope);

  double value(const Point& x) const;
  Eigen::Vector2d gradient(const Point& x) const;
  Eigen::Matrix2d hessian() const;
};

class Weight {
 public:
  Weight(QuadraticProfile psi, double beta);

  const QuadraticProfile& profile() const { return psi_; }
  double beta() const { return beta_; }
  int dim() const { return psi_.dim; }

  double value(const Point& x) const;
  Eigen::Vector2d gradient(const Point& x) const;
  Eigen::Matrix2d hessian(const Point& x) const;

 private:
  QuadraticProfile psi_;
  double beta_;
};

/// β must be positive and finite; the profile dimension must be 1 or 2.
Weight weight_from_profile(const QuadraticProfile& psi, double beta);

struct SymbolPoint {
  Point x{};
  Eigen::Vector2d xi = Eigen::Vector2d::Zero();
  double tau = 1.0;
};

std::complex<double> principal_symbol(const Weight& weight, const SymbolPoint& p);
double poisson_bracket(const Weight& weight, const SymbolPoint& p);

/// ⟨ξ, τ⟩³ = (|ξ|² + τ²)^{3/2}.
double japanese_cube(const SymbolPoint& p);

/// `count` points on the circle |ξ| = τ|∇φ(x)| orthogonal to ∇φ(x). In 2D
/// that circle is the pair ±τ|∇φ| t̂ (t̂ ⟂ ∇φ), so samples alternate between
/// the two, which are π apart. DegenerateInputError when ∇φ(x) = 0 or the
/// weight is 1D (the 1D characteristic set is empty).
std::vector<SymbolPoint> characteristic_samples(const Weight& weight, const Point& x,
                                                double tau, std::size_t count);

/// 1D: ξ on a uniform grid of `count` values across ±2τ(|φ'(x)| + 1), kept
/// when |Re p| + |Im p| ≤ eps·⟨ξ,τ⟩². May be empty.
std::vector<SymbolPoint> near_characteristic_samples(const Weight& weight,
                                                     const Point& x, double tau,
                                                     std::size_t count, double eps);

inline constexpr double kShellWidth = 1e-2;
inline constexpr double kDefaultMarginThreshold = 1e-6;

struct MarginReport {
  /// min bracket/⟨ξ,τ⟩³ over all samples; +∞ when every 1D shell is empty.
  double margin = 0.0;
  SymbolPoint worst;
  std::size_t samples = 0;
  std::size_t empty_shells = 0;  ///< (x, τ) pairs with no 1D shell point
  std::size_t critical_points = 0;  ///< points where ∇φ = 0 (ξ = 0 used)
  bool vacuous() const { return samples == 0; }
};

/// At a critical point of φ the degenerate sample ξ = 0 is used, whose
/// normalized bracket is 0. ConfigError when `points` or `taus` is empty.
MarginReport subellipticity_margin(const Weight& weight, std::span<const Point> points,
                                   std::span<const double> taus,
                                   std::size_t directions = 16,
                                   double shell_eps = kShellWidth);

/// U₁ = (a, ℓ), U₂ = (ℓ, b), times (0, ly) in 2D.
struct CarlemanGeometry {
  int dim = 2;
  double a = 0.0;
  double ell = 0.5;
  double b = 1.0;
  double ly = 1.0;

  void validate() const;
};

struct CarlemanSamples {
  std::vector<Point> region1;    ///< closure of U₁
  std::vector<Point> region2;    ///< closure of U₂
  std::vector<Point> interface;  ///< γ₀, normal (−1, 0)
  std::vector<Point> outer;      ///< γ, normal (+1, 0)
};

/// `region_points` per unit length along each axis (at least 2 per axis,
/// endpoints included); `boundary_points` along γ₀ and γ in 2D.
CarlemanSamples make_carleman_samples(const CarlemanGeometry& geometry,
                                      std::size_t region_points,
                                      std::size_t boundary_points);

struct ConditionReport {
  double gradient1 = 0.0;  ///< min |∇φ₁| over Ū₁
  double gradient2 = 0.0;  ///< min |∇φ₂| over Ū₂
  double outer_sign = 0.0;  ///< min −∂_νφ₂ over γ
  double interface_sign1 = 0.0;  ///< min ∂_νφ₁ over γ₀
  double interface_sign2 = 0.0;  ///< min ∂_νφ₂ over γ₀
  double interface_inequality = 0.0;  ///< min (∂_νφ₁)² − (∂_νφ₂)² − 1 over γ₀
  double continuity = 0.0;  ///< max |φ₁ − φ₂| over γ₀
  bool pass() const;
};

inline constexpr double kContinuityTolerance = 1e-10;

ConditionReport pointwise_conditions(const Weight& phi1, const Weight& phi2,
                                     const CarlemanSamples& samples);

struct CarlemanSetup {
  CarlemanGeometry geometry;
  QuadraticProfile psi1;
  QuadraticProfile psi2;
  std::vector<double> betas{1.0, 2.0, 4.0, 8.0};
  std::vector<double> taus{10.0, 100.0, 1000.0};
  std::size_t region_points = 16;
  std::size_t boundary_points = 16;
  std::size_t directions = 16;
  double threshold = kDefaultMarginThreshold;
};

/// Linear pair on U₁ = (0, ½), U₂ = (½, 1): ψ₁ = ½ − x, ψ₂ = (½ − x)/2.
CarlemanSetup default_carleman_setup(int dim);

struct Certificate {
  double beta = 0.0;
  ConditionReport conditions;
  MarginReport margin1;
  MarginReport margin2;
  double threshold = 0.0;
  bool subelliptic() const;
  bool pass() const { return conditions.pass() && subelliptic(); }
};

/// One certificate per β.
std::vector<Certificate> certify(const CarlemanSetup& setup);

}  // namespace platelab
