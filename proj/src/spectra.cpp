// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "platelab/error.hpp"
#include "platelab/parallel.hpp"
#include "singular_values.hpp"

namespace platelab {

namespace {

using cd = std::complex<double>;

struct LineFit {
  double intercept;
  double slope;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double xbar = 0.0;
  double ybar = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= m;
  ybar /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - xbar) * (y[i] - ybar);
    sxx += (x[i] - xbar) * (x[i] - xbar);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  return {ybar - slope * xbar, slope};
}

}  // namespace

const char* to_string(Branch branch) {
  return branch == Branch::WeaklyDamped ? "weak" : "strong";
}

Branch classify(cd eigenvalue) {
  return std::abs(eigenvalue.real()) < kWeakDampingRatio * std::abs(eigenvalue.imag())
             ? Branch::WeaklyDamped
             : Branch::StronglyDamped;
}

SpectrumReport make_spectrum_report(std::vector<cd> eigenvalues) {
  if (eigenvalues.empty()) throw ConfigError("spectrum report: no eigenvalues");
  std::sort(eigenvalues.begin(), eigenvalues.end(), [](cd a, cd b) {
    const double ai = std::abs(a.imag());
    const double bi = std::abs(b.imag());
    if (ai != bi) return ai < bi;
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });

  SpectrumReport r;
  r.spectral_abscissa = -INFINITY;
  for (const cd& z : eigenvalues) {
    r.branches.push_back(classify(z));
    r.spectral_abscissa = std::max(r.spectral_abscissa, z.real());
  }

  // Greedy conjugate matching; real eigenvalues pair with themselves.
  std::vector<bool> used(eigenvalues.size(), false);
  double worst = 0.0;
  bool paired = true;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (used[i]) continue;
    const cd target = std::conj(eigenvalues[i]);
    const double scale = std::max(1.0, std::abs(eigenvalues[i]));
    if (std::abs(eigenvalues[i].imag()) <= 1e-8 * scale) {
      used[i] = true;
      worst = std::max(worst, std::abs(eigenvalues[i].imag()) / scale);
      continue;
    }
    std::size_t best = eigenvalues.size();
    double best_dist = INFINITY;
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
      if (j == i || used[j]) continue;
      const double dist = std::abs(eigenvalues[j] - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    used[i] = true;
    if (best == eigenvalues.size()) {
      paired = false;
      continue;
    }
    used[best] = true;
    worst = std::max(worst, best_dist / scale);
  }
  r.pairing_error = worst;
  r.conjugate_paired = paired && worst <= 1e-8;
  r.eigenvalues = std::move(eigenvalues);
  return r;
}

SpectrumReport pencil_spectrum(const PlateModel& model, std::size_t dense_cap) {
  if (model.n_modes() > dense_cap)
    throw ConfigError("pencil spectrum: n_modes " + std::to_string(model.n_modes()) +
                      " exceeds the dense solver cap " + std::to_string(dense_cap));
  Eigen::EigenSolver<Eigen::MatrixXd> es(model.generator(), false);
  if (es.info() != Eigen::Success)
    throw NumericalError("pencil spectrum: eigensolver did not converge (dim " +
                         std::to_string(model.geometry().dim) + ", n_modes " +
                         std::to_string(model.n_modes()) + ", ell " +
                         std::to_string(model.region().extent) + ", d " +
                         std::to_string(model.region().d) + ")");
  const auto& ev = es.eigenvalues();
  return make_spectrum_report(std::vector<cd>(ev.data(), ev.data() + ev.size()));
}

double spectral_abscissa(const SpectrumReport& report) {
  if (report.eigenvalues.empty()) throw ConfigError("spectral abscissa: empty report");
  double best = -INFINITY;
  for (const cd& z : report.eigenvalues) best = std::max(best, z.real());
  return best;
}

double spectral_distance(const SpectrumReport& report, double mu) {
  double best = INFINITY;
  const cd point(0.0, mu);
  for (const cd& z : report.eigenvalues) best = std::min(best, std::abs(z - point));
  return best;
}

double resolvent_norm(const Eigen::MatrixXd& generator, double mu) {
  if (!std::isfinite(mu)) throw ConfigError("resolvent norm: mu must be finite");
  const auto n = generator.rows();
  Eigen::MatrixXcd shifted = generator.cast<cd>();
  shifted.diagonal().array() -= cd(0.0, mu);
  const Eigen::VectorXd sv = detail::singular_values(shifted);
  const double smax = sv(0);
  const double smin = sv(n - 1);
  if (!(smin > 64.0 * std::numeric_limits<double>::epsilon() * smax))
    throw NumericalError("resolvent norm: i*mu = i*" + std::to_string(mu) +
                         " lies on the spectrum to working precision (sigma_min " +
                         std::to_string(smin) + ")");
  return 1.0 / smin;
}

double resolvent_norm(const PlateModel& model, double mu) {
  return resolvent_norm(model.generator(), mu);
}

ResolventSweep resolvent_sweep(const PlateModel& model,
                               const SpectrumReport& spectrum, double mu_min,
                               double mu_max, std::size_t n_points) {
  if (!(mu_min >= 0.0) || !(mu_max > mu_min))
    throw ConfigError("resolvent sweep: need 0 <= mu_min < mu_max");
  if (n_points < 2) throw ConfigError("resolvent sweep: n_points must be >= 2");

  ResolventSweep s;
  s.mu.resize(n_points);
  const double step = (mu_max - mu_min) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i)
    s.mu[i] = i + 1 == n_points ? mu_max : mu_min + static_cast<double>(i) * step;

  s.norms = parallel_map<double>(
      n_points, [&](std::size_t i) { return resolvent_norm(model, s.mu[i]); });
  s.lower_bounds.resize(n_points);
  std::vector<double> logs(n_points);
  std::vector<double> absmu(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    s.lower_bounds[i] = 1.0 / spectral_distance(spectrum, s.mu[i]);
    logs[i] = std::log(s.norms[i]);
    absmu[i] = std::abs(s.mu[i]);
  }
  const auto fit = least_squares(absmu, logs);
  s.fit_intercept = fit.intercept;
  s.fit_slope = fit.slope;
  return s;
}

ResolventSweep resolvent_sweep(const PlateModel& model, double mu_min,
                               double mu_max, std::size_t n_points) {
  return resolvent_sweep(model, pencil_spectrum(model), mu_min, mu_max, n_points);
}

AxisDiagnostics axis_distance_check(const SpectrumReport& report,
                                    const ResolventSweep& sweep) {
  AxisDiagnostics d;
  d.min_ratio = INFINITY;
  d.max_ratio = 0.0;
  double peak = -INFINITY;
  for (std::size_t i = 0; i < sweep.mu.size(); ++i) {
    const double ratio = sweep.norms[i] / sweep.lower_bounds[i];
    d.min_ratio = std::min(d.min_ratio, ratio);
    d.max_ratio = std::max(d.max_ratio, ratio);
    if (ratio < 1.0 - 1e-8) ++d.violations;
    if (sweep.norms[i] > peak) {
      peak = sweep.norms[i];
      d.peak_mu = sweep.mu[i];
    }
  }
  d.lower_bound_holds = d.violations == 0;
  if (sweep.mu.size() > 1) d.grid_step = sweep.mu[1] - sweep.mu[0];

  std::vector<double> im;
  std::vector<double> logre;
  double best_re = -INFINITY;
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    const cd z = report.eigenvalues[i];
    if (z.real() > best_re) {
      best_re = z.real();
      d.least_damped_im = std::abs(z.imag());
    }
    if (report.branches[i] != Branch::WeaklyDamped || z.real() == 0.0) continue;
    im.push_back(std::abs(z.imag()));
    logre.push_back(std::log(std::abs(z.real())));
  }
  d.weak_count = im.size();
  d.trend = im.size() >= 2 ? least_squares(im, logre).slope
                           : std::numeric_limits<double>::quiet_NaN();
  return d;
}

}  // namespace platelab
