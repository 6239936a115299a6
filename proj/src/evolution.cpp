// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "platelab/error.hpp"
#include "singular_values.hpp"
#include "platelab/random.hpp"

namespace platelab {

namespace {

using cd = std::complex<double>;

State to_state(const Eigen::VectorXcd& z, const Eigen::VectorXd& lambda,
               bool real) {
  State s = State::from_energy_coordinates(z, lambda);
  if (real) {
    s.u = s.u.real().cast<cd>();
    s.v = s.v.real().cast<cd>();
  }
  return s;
}

double dissipation_rate(const Eigen::VectorXcd& v, const Eigen::MatrixXd& D) {
  return (v.adjoint() * (D.cast<cd>() * v)).value().real();
}

}  // namespace

const char* to_string(Integrator method) {
  return method == Integrator::Exact ? "exact" : "midpoint";
}

ExactPropagator::ExactPropagator(const Eigen::MatrixXd& generator,
                                 double max_condition) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(generator, true);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigendecomposition of the generator did not converge");
  eigenvalues_ = es.eigenvalues();
  vectors_ = es.eigenvectors();

  const Eigen::VectorXd sv = detail::singular_values(vectors_);
  const double smin = sv(sv.size() - 1);
  condition_ = smin > 0.0 ? sv(0) / smin : INFINITY;
  if (!(condition_ <= max_condition))
    throw NumericalError(
        "generator eigenbasis condition number " + std::to_string(condition_) +
        " exceeds " + std::to_string(max_condition) +
        "; use the midpoint integrator");
  lu_.compute(vectors_);
}

Eigen::VectorXcd ExactPropagator::apply(const Eigen::VectorXcd& z0,
                                        double t) const {
  if (t == 0.0) return z0;
  Eigen::VectorXcd c = lu_.solve(z0);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c(i) *= std::exp(eigenvalues_(i) * t);
  return vectors_ * c;
}

namespace {

void check_state_size(const PlateModel& model, const State& state) {
  if (state.size() != model.n_modes() || state.v.size() != state.u.size())
    throw ConfigError("initial state has " + std::to_string(state.size()) +
                      " modes, model has " + std::to_string(model.n_modes()));
}

}  // namespace

Trajectory evolve_exact(const PlateModel& model, const State& state0,
                        std::span<const double> times) {
  check_state_size(model, state0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1])))
      throw ConfigError("evolution times must be non-negative and increasing");
  }
  const auto& lambda = model.lambda();
  const Eigen::VectorXcd z0 = state0.energy_coordinates(lambda);
  const bool real = state0.is_real();
  ExactPropagator propagator(model.generator());

  Trajectory traj;
  traj.method = Integrator::Exact;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());
  for (double t : times) {
    if (t == 0.0)
      traj.states.push_back(state0);
    else
      traj.states.push_back(to_state(propagator.apply(z0, t), lambda, real));
  }
  return traj;
}

Trajectory evolve_midpoint(const PlateModel& model, const State& state0,
                           double dt, double t_final, std::size_t store_every) {
  if (!(dt > 0.0)) throw ConfigError("midpoint step dt must be positive");
  if (!(t_final >= dt)) throw ConfigError("midpoint requires t_final >= dt");
  if (store_every == 0) store_every = 1;
  check_state_size(model, state0);

  const auto& lambda = model.lambda();
  const Eigen::MatrixXd& A = model.generator();
  const Eigen::MatrixXd& D = model.damping();
  const auto n = A.rows();
  const bool real = state0.is_real();

  auto cayley = [&](double h) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I - 0.5 * h * A);
    const double rc = lu.rcond();
    if (!(rc > 1e-14))
      throw NumericalError("midpoint step matrix is singular (rcond " +
                           std::to_string(rc) + ")");
    Eigen::MatrixXd C = lu.solve(I + 0.5 * h * A);
    if (!C.allFinite()) throw NumericalError("midpoint step produced non-finite values");
    return Eigen::MatrixXcd(C.cast<cd>());
  };

  const auto steps =
      static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double last = t_final - static_cast<double>(steps - 1) * dt;
  const Eigen::MatrixXcd step = cayley(dt);
  const bool short_last = std::abs(last - dt) > 1e-12 * dt;
  const Eigen::MatrixXcd step_last = short_last ? cayley(last) : step;

  Trajectory traj;
  traj.method = Integrator::Midpoint;
  traj.times.push_back(0.0);
  traj.states.push_back(state0);
  traj.dissipation.push_back(0.0);

  Eigen::VectorXcd z = state0.energy_coordinates(lambda);
  double dissipated = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) {
    const bool final_step = s == steps;
    const double h = final_step ? last : dt;
    Eigen::VectorXcd next = (final_step ? step_last : step) * z;
    const Eigen::VectorXcd vbar = 0.5 * (z.tail(n / 2) + next.tail(n / 2));
    dissipated += h * dissipation_rate(vbar, D);
    z = std::move(next);
    if (s % store_every == 0 || final_step) {
      traj.times.push_back(final_step ? t_final : static_cast<double>(s) * dt);
      traj.states.push_back(to_state(z, lambda, real));
      traj.dissipation.push_back(dissipated);
    }
  }
  return traj;
}

std::vector<EnergySample> energy_trace(const Trajectory& trajectory,
                                       const PlateModel& model) {
  const auto& times = trajectory.times;
  if (times.size() != trajectory.states.size())
    throw ConfigError("trajectory times and states differ in length");
  std::vector<EnergySample> out(times.size());
  double cum = 0.0;
  double prev_rate = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i].t = times[i];
    out[i].energy = energy(trajectory.states[i], model.basis());
    if (trajectory.method == Integrator::Midpoint &&
        trajectory.dissipation.size() == times.size()) {
      out[i].dissipation = trajectory.dissipation[i];
      continue;
    }
    const double rate = dissipation_rate(trajectory.states[i].v, model.damping());
    if (i > 0) cum += 0.5 * (times[i] - times[i - 1]) * (rate + prev_rate);
    prev_rate = rate;
    out[i].dissipation = cum;
  }
  return out;
}

State smooth_data(const ModalBasis& basis, int k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("smoothness index k must be >= 1");
  const auto& lambda = basis.eigenvalues();
  const auto n = lambda.size();
  Rng rng(seed);
  Eigen::VectorXcd z(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = std::pow(lambda(0) / lambda(i), 2.0 * k);
    z(i) = scale * rng.normal();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = std::pow(lambda(0) / lambda(i), 2.0 * k);
    z(n + i) = scale * rng.normal();
  }
  return State::from_energy_coordinates(z, lambda);
}

DecayFitReport decay_fit(std::span<const EnergySample> series, int k,
                         double t_min, double t_max) {
  if (k < 1) throw ConfigError("decay fit: k must be >= 1");
  if (!(t_min < t_max)) throw ConfigError("decay fit: empty window");

  std::vector<double> ts;
  std::vector<double> logs;
  for (const auto& s : series) {
    if (s.t <= 0.0 || s.t < t_min || s.t > t_max) continue;
    if (!(s.energy > 0.0) || !std::isfinite(s.energy))
      throw NumericalError("decay fit: non-positive energy at t = " +
                           std::to_string(s.t));
    ts.push_back(s.t);
    logs.push_back(std::log(s.energy));
  }
  if (ts.size() < 10)
    throw ConfigError("decay fit: need at least 10 samples in the window, got " +
                      std::to_string(ts.size()));

  DecayFitReport r;
  r.k = k;
  r.t_min = t_min;
  r.t_max = t_max;
  r.samples = ts.size();

  const double twok = 2.0 * k;
  double log_c = -INFINITY;
  for (std::size_t i = 0; i < ts.size(); ++i)
    log_c = std::max(log_c, logs[i] + twok * std::log(std::log(2.0 + ts[i])));
  r.c_k = std::exp(log_c);

  double env = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double gap = log_c - twok * std::log(std::log(2.0 + ts[i])) - logs[i];
    env += gap * gap;
  }
  r.envelope_residual = std::sqrt(env / static_cast<double>(ts.size()));

  const double m = static_cast<double>(ts.size());
  double tbar = 0.0;
  double ybar = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tbar += ts[i];
    ybar += logs[i];
  }
  tbar /= m;
  ybar /= m;
  double sty = 0.0;
  double stt = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sty += (ts[i] - tbar) * (logs[i] - ybar);
    stt += (ts[i] - tbar) * (ts[i] - tbar);
  }
  r.exp_rate = sty / stt;
  r.exp_intercept = ybar - r.exp_rate * tbar;
  double res = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double e = logs[i] - (r.exp_intercept + r.exp_rate * ts[i]);
    res += e * e;
  }
  r.exp_residual = std::sqrt(res / m);
  return r;
}

}  // namespace platelab
