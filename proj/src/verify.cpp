// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

#include "platelab/carleman.hpp"
#include "platelab/error.hpp"
#include "platelab/evolution.hpp"
#include "platelab/model.hpp"
#include "platelab/random.hpp"
#include "platelab/spectra.hpp"
#include "platelab/transmission.hpp"

namespace platelab {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct Suite {
  std::vector<PropertyResult> results;

  void below(const std::string& module, const std::string& name,
             const std::function<double()>& measure, double limit,
             const std::string& criterion) {
    run(module, name, criterion, [&] {
      const double v = measure();
      return std::pair{v, v < limit};
    });
  }

  void run(const std::string& module, const std::string& name,
           const std::string& criterion,
           const std::function<std::pair<double, bool>()>& check) {
    PropertyResult r{module, name, std::numeric_limits<double>::quiet_NaN(), criterion, false};
    try {
      const auto [value, pass] = check();
      r.value = value;
      r.pass = pass;
    } catch (const Error&) {
      r.pass = false;
    }
    results.push_back(std::move(r));
  }
};

PlateModel localized_1d(int n, double d = 1.0) {
  return PlateModel(Geometry::interval(1.0), DampingRegion{0.3, d}, n);
}

PlateModel full_1d(int n) { return PlateModel(Geometry::interval(1.0), DampingRegion{1.0, 1.0}, n); }

PlateModel strip_2d(int n) {
  return PlateModel(Geometry::rectangle(1.0, 1.0), DampingRegion{0.3, 1.0}, n);
}

// Midpoint rule with 4·max index cells per axis: exact for the sine
// products of the basis.
double orthonormality_error(const PlateModel& model) {
  const auto& basis = model.basis();
  const auto& g = basis.geometry();
  int mm = 1;
  int mn = 1;
  for (const auto& m : basis.modes()) {
    mm = std::max(mm, m.m);
    mn = std::max(mn, m.n);
  }
  const int qx = 4 * mm;
  const int qy = g.dim == 2 ? 4 * mn : 1;
  std::vector<Point> pts;
  for (int i = 0; i < qx; ++i)
    for (int j = 0; j < qy; ++j)
      pts.push_back({(i + 0.5) * g.lx / qx, g.dim == 2 ? (j + 0.5) * g.ly / qy : 0.0});
  const Eigen::MatrixXd B = basis_values(basis, pts);
  const double w = g.lx / qx * (g.dim == 2 ? g.ly / qy : 1.0);
  const Eigen::MatrixXd G = w * B.transpose() * B;
  return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

double endpoint_error(const PlateModel& model, const State& s0, double dt) {
  const std::vector<double> times{1.0};
  const Trajectory exact = evolve_exact(model, s0, times);
  const Trajectory mid = evolve_midpoint(model, s0, dt, 1.0, 1000000);
  const auto& lambda = model.lambda();
  return (exact.states.back().energy_coordinates(lambda) -
          mid.states.back().energy_coordinates(lambda))
      .norm();
}

double fd_bracket_error(const Weight& w, const SymbolPoint& p) {
  const double hx = 1e-5;
  const double hxi = 1e-3 * (1.0 + p.xi.norm());
  double fd = 0.0;
  double scale = 0.0;
  for (int j = 0; j < w.dim(); ++j) {
    SymbolPoint xp = p, xm = p, kp = p, km = p;
    xp.x[j] += hx;
    xm.x[j] -= hx;
    kp.xi(j) += hxi;
    km.xi(j) -= hxi;
    const cd dx = (principal_symbol(w, xp) - principal_symbol(w, xm)) / (2.0 * hx);
    const cd dk = (principal_symbol(w, kp) - principal_symbol(w, km)) / (2.0 * hxi);
    fd += dk.real() * dx.imag() - dx.real() * dk.imag();
    scale += std::abs(dk.real() * dx.imag()) + std::abs(dx.real() * dk.imag());
  }
  const double cf = poisson_bracket(w, p);
  return std::abs(fd - cf) / std::max(scale, std::abs(cf));
}

QuadraticProfile random_profile(Rng& rng) {
  QuadraticProfile p;
  p.dim = 2;
  p.constant = rng.uniform(-0.5, 0.5);
  p.linear = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  const double hxy = rng.uniform(-1.0, 1.0);
  p.quadratic << rng.uniform(-1.0, 1.0), hxy, hxy, rng.uniform(-1.0, 1.0);
  return p;
}

void model_properties(Suite& s) {
  s.below("model", "orthonormality_1d", [] { return orthonormality_error(localized_1d(64)); },
          1e-8, "< 1e-8");
  s.below("model", "orthonormality_2d", [] { return orthonormality_error(strip_2d(64)); },
          1e-8, "< 1e-8");
  s.run("model", "damping_symmetric_psd", "asymmetry = 0, min eig >= -1e-10", [] {
    double worst = 0.0;
    bool ok = true;
    for (const auto& m : {localized_1d(64), strip_2d(64)}) {
      const auto& D = m.damping();
      ok = ok && (D - D.transpose()).cwiseAbs().maxCoeff() == 0.0;
      const double emin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(D).eigenvalues()(0);
      worst = std::min(worst, emin);
    }
    return std::pair{worst, ok && worst >= -1e-10};
  });
  s.below("model", "full_damping_collapse", [] {
    double worst = 0.0;
    for (const auto& m : {full_1d(64), PlateModel(Geometry::rectangle(1.0, 1.0),
                                                  DampingRegion{1.0, 1.0}, 64)}) {
      const Eigen::MatrixXd diff = m.damping() - Eigen::MatrixXd(m.lambda().asDiagonal());
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    return worst;
  }, 1e-10, "< 1e-10");
  s.run("model", "dissipativity", "relative error < 1e-12 and Re <= 0", [] {
    const PlateModel m = localized_1d(64);
    const Eigen::MatrixXcd A = m.generator().cast<cd>();
    const Eigen::MatrixXcd D = m.damping().cast<cd>();
    const auto n = m.lambda().size();
    Rng rng(11);
    double worst = 0.0;
    bool nonpositive = true;
    for (int i = 0; i < 1000; ++i) {
      const Eigen::VectorXcd z = rng.complex_normal_vector(2 * n);
      const double lhs = z.dot(A * z).real();
      const Eigen::VectorXcd v = z.tail(n);
      const double rhs = -v.dot(D * v).real();
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
      nonpositive = nonpositive && lhs <= 1e-12 * std::abs(rhs);
    }
    return std::pair{worst, nonpositive && worst < 1e-12};
  });
  s.run("model", "eigenvalue_ordering", "non-decreasing, ties lexicographic", [] {
    const PlateModel m = strip_2d(64);
    const auto& lam = m.lambda();
    const auto& modes = m.basis().modes();
    bool ok = true;
    for (Eigen::Index i = 1; i < lam.size(); ++i) {
      if (lam(i) < lam(i - 1)) ok = false;
      if (lam(i) == lam(i - 1) &&
          std::pair(modes[i - 1].m, modes[i - 1].n) >= std::pair(modes[i].m, modes[i].n))
        ok = false;
    }
    return std::pair{lam(0), ok && lam(0) > 0.0};
  });
  s.below("model", "hinged_boundary", [] {
    const PlateModel m = strip_2d(32);
    std::vector<Point> edge;
    for (int i = 0; i <= 8; ++i) {
      const double t = i / 8.0;
      edge.push_back({0.0, t});
      edge.push_back({1.0, t});
      edge.push_back({t, 0.0});
      edge.push_back({t, 1.0});
    }
    Rng rng(12);
    const Eigen::VectorXcd c = rng.complex_normal_vector(32);
    const double val = evaluate_field(c, m.basis(), edge, FieldKind::Value).cwiseAbs().maxCoeff();
    const double lap =
        evaluate_field(c, m.basis(), edge, FieldKind::Laplacian).cwiseAbs().maxCoeff() /
        m.lambda().maxCoeff();
    return std::max(val, lap);
  }, 1e-12, "< 1e-12");
}

void evolution_properties(Suite& s) {
  const PlateModel m = localized_1d(32);
  const State s0 = smooth_data(m.basis(), 2, 21);
  s.run("evolution", "exact_contraction", "E(t) <= E(0)(1 + 1e-10)", [&] {
    std::vector<double> times;
    for (int i = 0; i <= 100; ++i) times.push_back(0.1 * i);
    const auto trace = energy_trace(evolve_exact(m, s0, times), m);
    double worst = 0.0;
    for (const auto& e : trace) worst = std::max(worst, e.energy / trace[0].energy - 1.0);
    return std::pair{worst, worst <= 1e-10};
  });
  const Trajectory mid = evolve_midpoint(m, s0, 1e-3, 1.0);
  const auto trace = energy_trace(mid, m);
  s.run("evolution", "midpoint_monotone", "E(t_n+1) <= E(t_n)(1 + 1e-8)", [&] {
    double worst = 0.0;
    for (std::size_t i = 1; i < trace.size(); ++i)
      worst = std::max(worst, trace[i].energy / trace[i - 1].energy - 1.0);
    return std::pair{worst, worst <= 1e-8};
  });
  s.below("evolution", "dissipation_balance", [&] {
    const double drop = trace.front().energy - trace.back().energy;
    return std::abs(drop - trace.back().dissipation) / drop;
  }, 1e-6, "< 1e-6");
  s.below("evolution", "conservative_limit", [] {
    const PlateModel m0 = localized_1d(32, 0.0);
    const State z0 = smooth_data(m0.basis(), 1, 22);
    std::vector<double> times{0.0, 1.0, 10.0, 100.0};
    const auto tr = energy_trace(evolve_exact(m0, z0, times), m0);
    double worst = 0.0;
    for (const auto& e : tr) worst = std::max(worst, std::abs(e.energy / tr[0].energy - 1.0));
    return worst;
  }, 1e-10, "< 1e-10");
  s.run("evolution", "second_order_agreement", "error ratio in [3.5, 4.5]", [&] {
    const double r = endpoint_error(m, s0, 2e-3) / endpoint_error(m, s0, 1e-3);
    return std::pair{r, r >= 3.5 && r <= 4.5};
  });
  s.run("evolution", "positivity", "E(100) > 0", [&] {
    const std::vector<double> times{100.0};
    const double e = energy(evolve_exact(m, s0, times).states.back(), m.basis());
    return std::pair{e, e > 0.0};
  });
}

void spectra_properties(Suite& s) {
  s.below("spectra", "full_damping_roots", [] {
    const PlateModel m = full_1d(64);
    const auto rep = pencil_spectrum(m);
    std::vector<cd> expected;
    for (Eigen::Index i = 0; i < m.lambda().size(); ++i) {
      const double l = m.lambda()(i);
      expected.push_back(l * cd(-0.5, std::sqrt(3.0) / 2.0));
      expected.push_back(l * cd(-0.5, -std::sqrt(3.0) / 2.0));
    }
    double worst = 0.0;
    for (const cd& e : expected) {
      double best = INFINITY;
      for (const cd& z : rep.eigenvalues) best = std::min(best, std::abs(z - e) / std::abs(e));
      worst = std::max(worst, best);
    }
    return std::max(worst, std::abs(rep.spectral_abscissa + kPi * kPi / 2.0) / (kPi * kPi / 2.0));
  }, 1e-8, "< 1e-8");
  const PlateModel m = localized_1d(64);
  const SpectrumReport rep = pencil_spectrum(m);
  s.run("spectra", "conjugate_pairing", "pairing error <= 1e-8", [&] {
    return std::pair{rep.pairing_error, rep.conjugate_paired};
  });
  s.run("spectra", "axis_free_spectrum", "abscissa < 0, min |Re| > 1e-10", [&] {
    double closest = INFINITY;
    for (const cd& z : rep.eigenvalues) closest = std::min(closest, std::abs(z.real()));
    return std::pair{rep.spectral_abscissa, rep.spectral_abscissa < 0.0 && closest > 1e-10};
  });
  s.run("spectra", "distance_lower_bound", "norm >= 1/dist at every point", [&] {
    const PlateModel small = localized_1d(32);
    const auto srep = pencil_spectrum(small);
    const auto sweep = resolvent_sweep(small, srep, 0.0, 100.0, 51);
    const auto diag = axis_distance_check(srep, sweep);
    return std::pair{diag.min_ratio, diag.lower_bound_holds};
  });
}

void transmission_properties(Suite& s) {
  const PlateModel m = localized_1d(32);
  const PlateModel full = full_1d(32);
  const CaseGrid grid = make_case_grid(m.geometry(), m.region(), 32, 1);
  const CaseGrid full_grid = make_case_grid(full.geometry(), full.region(), 32, 1);
  double first = 0.0, ident = 0.0, cont = 0.0, proj = 0.0, ratio = 0.0;
  bool failed = false;
  try {
    Rng rng(31);
    for (double mu : {1.0, 10.0, 100.0}) {
      for (int i = 0; i < 5; ++i) {
        const auto data = random_data(m.basis(), rng);
        const auto c = solve_resolvent(m, data.f, data.g, mu, grid);
        first = std::max(first, first_line_residual(c, m));
        const auto ip = imaginary_part_identity(c, m);
        ident = std::max(ident, ip.relative_residual);
        ratio = std::max(ratio, ip.ratio);
        cont = std::max(cont, interface_residuals(c, m).max_continuity);
        const auto cf = solve_resolvent(full, data.f, data.g, mu, full_grid);
        proj = std::max(proj, projected_w_residual(cf, full));
      }
    }
  } catch (const Error&) {
    failed = true;
  }
  auto add = [&](const std::string& name, double v, bool pass, const std::string& crit) {
    s.results.push_back({"transmission", name, v, crit, pass && !failed});
  };
  add("first_line", first, first < 1e-10, "< 1e-10");
  add("imaginary_part_identity", ident, ident < 1e-9, "< 1e-9");
  add("inequality_direction", ratio, ratio <= 1.0 + 1e-12, "lhs/rhs <= 1");
  add("interface_continuity", cont, cont == 0.0, "= 0");
  add("full_damping_w_system", proj, proj < 1e-8, "< 1e-8");
}

void carleman_properties(Suite& s) {
  s.below("carleman", "evaluator_consistency", [] {
    Rng rng(41);
    double worst = 0.0;
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
      const Weight w = weight_from_profile(random_profile(rng), rng.uniform(0.5, 3.0));
      const Point x{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
      const Eigen::Vector2d g = w.gradient(x);
      const Eigen::Matrix2d H = w.hessian(x);
      for (int j = 0; j < 2; ++j) {
        Point xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double dg = (w.value(xp) - w.value(xm)) / (2 * h);
        worst = std::max(worst, std::abs(dg - g(j)) / std::max(g.norm(), w.value(x)));
        const Eigen::Vector2d dh = (w.gradient(xp) - w.gradient(xm)) / (2 * h);
        worst = std::max(worst, (dh - H.col(j)).norm() / std::max(H.norm(), g.norm()));
      }
    }
    return worst;
  }, 1e-6, "< 1e-6");
  s.below("carleman", "bracket_closed_form", [] {
    Rng rng(42);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Weight w = weight_from_profile(random_profile(rng), rng.uniform(0.5, 3.0));
      SymbolPoint p{{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)},
                    {rng.normal(), rng.normal()},
                    rng.uniform(0.5, 5.0)};
      worst = std::max(worst, fd_bracket_error(w, p));
    }
    return worst;
  }, 1e-6, "< 1e-6");
  const CarlemanSetup setup = default_carleman_setup(2);
  const auto certs = certify(setup);
  s.run("carleman", "linear_family_beta8", "all conditions pass", [&] {
    const auto& c = certs.back();
    return std::pair{std::min(c.margin1.margin, c.margin2.margin), c.beta == 8.0 && c.pass()};
  });
  s.run("carleman", "margin_monotone_in_beta", "strictly increasing", [&] {
    bool ok = true;
    for (std::size_t i = 1; i < certs.size(); ++i)
      ok = ok && certs[i].margin1.margin > certs[i - 1].margin1.margin &&
           certs[i].margin2.margin > certs[i - 1].margin2.margin;
    return std::pair{certs.back().margin1.margin - certs.front().margin1.margin, ok};
  });
  s.run("carleman", "equal_weights_rejected", "interface inequality margin < 0", [&] {
    const Weight w = weight_from_profile(setup.psi1, 8.0);
    const auto samples = make_carleman_samples(setup.geometry, 8, 8);
    const auto rep = pointwise_conditions(w, w, samples);
    return std::pair{rep.interface_inequality, rep.interface_inequality < 0.0 && !rep.pass()};
  });
  s.below("carleman", "characteristic_membership", [] {
    Rng rng(43);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Weight w = weight_from_profile(random_profile(rng), rng.uniform(0.5, 3.0));
      const Point x{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
      if (!(w.gradient(x).norm() > 0.0)) continue;
      for (const auto& p : characteristic_samples(w, x, rng.uniform(1.0, 100.0), 4)) {
        const cd sym = principal_symbol(w, p);
        const double scale = p.tau * p.tau * w.gradient(x).squaredNorm();
        worst = std::max(worst, std::abs(sym) / scale);
      }
    }
    return worst;
  }, 1e-10, "< 1e-10");
  s.below("carleman", "degree3_homogeneity", [] {
    Rng rng(44);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Weight w = weight_from_profile(random_profile(rng), rng.uniform(0.5, 3.0));
      const Point x{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
      const auto base = characteristic_samples(w, x, 10.0, 1).front();
      const double ref = poisson_bracket(w, base) / japanese_cube(base);
      for (double tau : {100.0, 1000.0}) {
        SymbolPoint p = base;
        p.tau = tau;
        p.xi = base.xi * (tau / 10.0);
        const double v = poisson_bracket(w, p) / japanese_cube(p);
        worst = std::max(worst, std::abs(v - ref) / std::abs(ref));
      }
    }
    return worst;
  }, 1e-8, "< 1e-8");
  s.run("carleman", "critical_point_detected", "margin <= 0", [] {
    QuadraticProfile p;
    p.dim = 2;
    p.quadratic = Eigen::Matrix2d::Identity();
    const Weight w = weight_from_profile(p, 1.0);
    const std::vector<Point> pts{{0.0, 0.0}, {0.2, 0.1}};
    const std::vector<double> taus{10.0};
    const auto rep = subellipticity_margin(w, pts, taus);
    return std::pair{rep.margin, rep.margin <= 0.0 && rep.critical_points == 1};
  });
}

}  // namespace

std::vector<PropertyResult> run_property_suite() {
  Suite s;
  model_properties(s);
  evolution_properties(s);
  spectra_properties(s);
  transmission_properties(s);
  carleman_properties(s);
  return s.results;
}

}  // namespace platelab
