// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

// Time evolution of the damped plate semigroup e^{tÂ} and fitting of energy
// traces against the logarithmic envelope C/(ln(2+t))^{2k}.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "platelab/model.hpp"

namespace platelab {

enum class Integrator { Exact, Midpoint };

const char* to_string(Integrator method);

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  Integrator method = Integrator::Exact;
  /// Midpoint only: Σ h·v̄ᴴDv̄ up to each stored sample, where v̄ is the step
  /// average of the velocity. Empty for the exact propagator.
  std::vector<double> dissipation;
};

/// e^{tÂ} through the eigendecomposition Â = V diag(w) V⁻¹. Built once,
/// applied to any number of (state, t) pairs.
class ExactPropagator {
 public:
  /// Throws NumericalError when cond(V) exceeds max_condition.
  explicit ExactPropagator(const Eigen::MatrixXd& generator,
                           double max_condition = 1e8);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& z0, double t) const;

  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  double condition_number() const { return condition_; }

 private:
  Eigen::VectorXcd eigenvalues_;
  Eigen::MatrixXcd vectors_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double condition_ = 1.0;
};

/// Exact semigroup at the requested times (increasing, t ≥ 0).
Trajectory evolve_exact(const PlateModel& model, const State& state0,
                        std::span<const double> times);

/// Implicit midpoint z_{n+1} = (I − h/2 Â)⁻¹(I + h/2 Â) z_n up to t_final,
/// storing every `store_every`-th step plus the final one. When t_final is
/// not a multiple of dt the last step is shortened.
Trajectory evolve_midpoint(const PlateModel& model, const State& state0,
                           double dt, double t_final,
                           std::size_t store_every = 1);

struct EnergySample {
  double t = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;  ///< cumulative ∫ vᴴDv dt up to t
};

/// Per-sample energies and cumulative dissipation. Midpoint trajectories
/// use the integrator's own step sums, which satisfy the discrete balance
/// E(0) − E(t_n) = Σ h v̄ᴴDv̄ to roundoff; exact trajectories use the
/// trapezoidal rule over the stored samples.
std::vector<EnergySample> energy_trace(const Trajectory& trajectory,
                                       const PlateModel& model);

/// Smooth initial data standing in for D(A^k): energy-coordinate entries are
/// (λ₁/λ_m)^{2k} times seeded standard normals.
State smooth_data(const ModalBasis& basis, int k, std::uint64_t seed);

struct DecayFitReport {
  int k = 1;
  double c_k = 0.0;             ///< max over window of E(t)(ln(2+t))^{2k}
  double exp_rate = 0.0;        ///< slope of least squares log E ≈ a + r t
  double exp_intercept = 0.0;
  double envelope_residual = 0.0;  ///< RMS of log envelope − log E (≥ 0)
  double exp_residual = 0.0;       ///< RMS of the exponential fit in log E
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t samples = 0;
};

/// Fits the samples with t_min ≤ t ≤ t_max (and t > 0). Requires at least
/// ten samples in the window; non-positive energies raise NumericalError.
DecayFitReport decay_fit(std::span<const EnergySample> series, int k,
                         double t_min = 1.0, double t_max = 100.0);

}  // namespace platelab
