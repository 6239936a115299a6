// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Spectrum of the damped plate pencil λ²I + λD + Λ² (through its
// linearization Â) and resolvent norms ‖(Â − iμ)⁻¹‖ along the imaginary
// axis. Because Â is written in energy coordinates, spectral norms here are
// energy-space operator norms.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "platelab/model.hpp"

namespace platelab {

/// |Re λ| < kWeakDampingRatio·|Im λ| is reported as weakly damped.
inline constexpr double kWeakDampingRatio = 0.1;
inline constexpr std::size_t kDenseSolverCap = 512;

enum class Branch { WeaklyDamped, StronglyDamped };

const char* to_string(Branch branch);
Branch classify(std::complex<double> eigenvalue);

struct SpectrumReport {
  /// Sorted by |Im|, then Im, then Re.
  std::vector<std::complex<double>> eigenvalues;
  std::vector<Branch> branches;
  double spectral_abscissa = 0.0;
  bool conjugate_paired = false;
  double pairing_error = 0.0;  ///< worst relative distance to the matched conjugate
};

/// Builds a report (sorting, branch tags, pairing, abscissa) from a list.
SpectrumReport make_spectrum_report(std::vector<std::complex<double>> eigenvalues);

/// All 2N eigenvalues of Â by a dense nonsymmetric eigensolver. N above
/// dense_cap is a ConfigError; non-convergence is a NumericalError.
SpectrumReport pencil_spectrum(const PlateModel& model,
                               std::size_t dense_cap = kDenseSolverCap);

double spectral_abscissa(const SpectrumReport& report);

/// dist(iμ, σ(Â)).
double spectral_distance(const SpectrumReport& report, double mu);

/// 1/σ_min(Â − iμI). NumericalError when iμ is on the spectrum to working
/// precision.
double resolvent_norm(const Eigen::MatrixXd& generator, double mu);
double resolvent_norm(const PlateModel& model, double mu);

struct ResolventSweep {
  std::vector<double> mu;
  std::vector<double> norms;
  std::vector<double> lower_bounds;  ///< 1/dist(iμ, σ(Â))
  double fit_intercept = 0.0;        ///< a in log‖R(iμ)‖ ≈ a + b|μ|
  double fit_slope = 0.0;            ///< b
};

/// Uniform grid of n_points on [mu_min, mu_max]; points evaluated in parallel.
ResolventSweep resolvent_sweep(const PlateModel& model,
                               const SpectrumReport& spectrum, double mu_min,
                               double mu_max, std::size_t n_points);
ResolventSweep resolvent_sweep(const PlateModel& model, double mu_min,
                               double mu_max, std::size_t n_points);

struct AxisDiagnostics {
  bool lower_bound_holds = true;  ///< norm ≥ (1 − 1e-8)/dist at every point
  std::size_t violations = 0;
  double min_ratio = 0.0;  ///< min over the grid of norm·dist (≥ 1)
  double max_ratio = 0.0;
  /// Slope of the least-squares fit log|Re λ| ≈ c + s|Im λ| over the weakly
  /// damped branch; NaN with fewer than two weakly damped eigenvalues.
  double trend = 0.0;
  std::size_t weak_count = 0;
  double peak_mu = 0.0;           ///< argmax of the sweep
  double least_damped_im = 0.0;   ///< |Im| of the eigenvalue with max Re
  double grid_step = 0.0;
};

AxisDiagnostics axis_distance_check(const SpectrumReport& report,
                                    const ResolventSweep& sweep);

}  // namespace platelab
