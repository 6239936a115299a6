// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "platelab/carleman.hpp"
#include "platelab/error.hpp"
#include "platelab/evolution.hpp"
#include "platelab/parallel.hpp"
#include "platelab/random.hpp"
#include "platelab/spectra.hpp"
#include "platelab/transmission.hpp"
#include "platelab/verify.hpp"

namespace platelab {

namespace fs = std::filesystem;

namespace {

using cd = std::complex<double>;

std::string fixed_sci(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 3);
  return std::string(buf, r.ptr);
}

std::string label(const Geometry& g) {
  return g.dim == 1 ? "1D analog" : "2D";
}

// Files are written through this so that a failing command can remove what
// it already produced.
class Output {
 public:
  Output(std::string dir, bool plot) : dir_(std::move(dir)), plot_(plot) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw ConfigError("cannot create output directory '" + dir_ + "'");
  }

  bool plot() const { return plot_; }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir_) / name;
    files_.push_back(path.string());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  }

  void remove_all() {
    for (const auto& f : files_) {
      std::error_code ec;
      fs::remove(f, ec);
    }
    files_.clear();
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_;
  bool plot_;
  std::vector<std::string> files_;
};

// Rows of doubles written as CSV and, when asked, as a whitespace .dat file.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  std::string csv() const { return join(","); }
  std::string dat() const { return "# " + join(" "); }

 private:
  std::string join(const std::string& sep) const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += sep;
        out += cells[i].empty() && sep == " " ? "nan" : cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

void emit(Output& out, const std::string& stem, const Table& t) {
  out.write(stem + ".csv", t.csv());
  if (out.plot()) out.write(stem + ".dat", t.dat());
}

std::string d2s(double x) { return format_double(x); }

std::string run_simulate(const RunConfig& cfg, Output& out) {
  const PlateModel model = cfg.make_model();
  const auto& sc = cfg.simulate;
  const State s0 = smooth_data(model.basis(), sc.k, sc.seed);

  Trajectory traj;
  if (sc.method == Integrator::Exact) {
    std::vector<double> times(sc.samples + 1);
    for (std::size_t i = 0; i <= sc.samples; ++i)
      times[i] = sc.t_final * static_cast<double>(i) / static_cast<double>(sc.samples);
    traj = evolve_exact(model, s0, times);
  } else {
    const auto steps = static_cast<std::size_t>(std::ceil(sc.t_final / sc.dt - 1e-9));
    const std::size_t every = std::max<std::size_t>(1, steps / sc.samples);
    traj = evolve_midpoint(model, s0, sc.dt, sc.t_final, every);
  }
  const auto trace = energy_trace(traj, model);

  Table t{{"t", "energy", "dissipation_cum"}, {}};
  for (const auto& e : trace) t.add({d2s(e.t), d2s(e.energy), d2s(e.dissipation)});
  emit(out, "trace", t);

  const double t_hi = std::min(sc.window_max, sc.t_final);
  std::size_t in_window = 0;
  for (const auto& e : trace)
    if (e.t > 0.0 && e.t >= sc.window_min && e.t <= t_hi) ++in_window;

  std::ostringstream rep;
  rep << "command simulate\n"
      << "geometry " << label(model.geometry()) << "\n"
      << "method " << to_string(sc.method) << "\n"
      << "n_modes " << model.n_modes() << "\n"
      << "k " << sc.k << "\n"
      << "seed " << sc.seed << "\n"
      << "energy_initial " << d2s(trace.front().energy) << "\n"
      << "energy_final " << d2s(trace.back().energy) << "\n"
      << "dissipation_total " << d2s(trace.back().dissipation) << "\n";
  std::string fit_summary = "fit skipped";
  if (in_window >= 10 && t_hi > sc.window_min) {
    const DecayFitReport fit = decay_fit(trace, sc.k, sc.window_min, t_hi);
    rep << "window " << d2s(fit.t_min) << " " << d2s(fit.t_max) << "\n"
        << "window_samples " << fit.samples << "\n"
        << "c_k " << d2s(fit.c_k) << "\n"
        << "envelope_residual " << d2s(fit.envelope_residual) << "\n"
        << "exp_rate " << d2s(fit.exp_rate) << "\n"
        << "exp_intercept " << d2s(fit.exp_intercept) << "\n"
        << "exp_residual " << d2s(fit.exp_residual) << "\n";
    fit_summary = "exp_rate=" + fixed_sci(fit.exp_rate) + " C_k=" + fixed_sci(fit.c_k);
  } else {
    rep << "fit skipped: fewer than 10 samples in the window\n";
  }
  out.write("fit_report.txt", rep.str());
  return "simulate (" + label(model.geometry()) + ", N=" + std::to_string(model.n_modes()) +
         ", " + to_string(sc.method) + "): E(0)=" + fixed_sci(trace.front().energy) +
         " E(T)=" + fixed_sci(trace.back().energy) + " " + fit_summary;
}

std::string run_spectrum(const RunConfig& cfg, Output& out) {
  const PlateModel model = cfg.make_model();
  const SpectrumReport rep = pencil_spectrum(model);
  Table t{{"index", "re", "im", "branch"}, {}};
  std::size_t weak = 0;
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    const auto z = rep.eigenvalues[i];
    if (rep.branches[i] == Branch::WeaklyDamped) ++weak;
    t.add({std::to_string(i), d2s(z.real()), d2s(z.imag()), to_string(rep.branches[i])});
  }
  out.write("spectrum.csv", t.csv());
  if (out.plot()) {
    Table p{{"re", "im"}, {}};
    for (const auto& z : rep.eigenvalues) p.add({d2s(z.real()), d2s(z.imag())});
    out.write("spectrum.dat", p.dat());
  }
  std::ostringstream r;
  r << "command spectrum\n"
    << "geometry " << label(model.geometry()) << "\n"
    << "n_modes " << model.n_modes() << "\n"
    << "eigenvalues " << rep.eigenvalues.size() << "\n"
    << "spectral_abscissa " << d2s(rep.spectral_abscissa) << "\n"
    << "weakly_damped " << weak << "\n"
    << "conjugate_paired " << (rep.conjugate_paired ? "yes" : "no") << "\n"
    << "pairing_error " << d2s(rep.pairing_error) << "\n";
  out.write("spectrum_report.txt", r.str());
  return "spectrum (" + label(model.geometry()) + ", N=" + std::to_string(model.n_modes()) +
         "): " + std::to_string(rep.eigenvalues.size()) +
         " eigenvalues, abscissa=" + d2s(rep.spectral_abscissa);
}

std::string run_sweep(const RunConfig& cfg, Output& out) {
  const PlateModel model = cfg.make_model();
  const SpectrumReport spec = pencil_spectrum(model);
  const auto& sc = cfg.sweep;
  const ResolventSweep sw = resolvent_sweep(model, spec, sc.mu_min, sc.mu_max, sc.n_points);
  const AxisDiagnostics diag = axis_distance_check(spec, sw);
  Table t{{"mu", "norm", "lower_bound"}, {}};
  for (std::size_t i = 0; i < sw.mu.size(); ++i)
    t.add({d2s(sw.mu[i]), d2s(sw.norms[i]), d2s(sw.lower_bounds[i])});
  emit(out, "sweep", t);
  std::ostringstream r;
  r << "command sweep\n"
    << "geometry " << label(model.geometry()) << "\n"
    << "n_modes " << model.n_modes() << "\n"
    << "mu_range " << d2s(sc.mu_min) << " " << d2s(sc.mu_max) << "\n"
    << "n_points " << sc.n_points << "\n"
    << "fit_intercept " << d2s(sw.fit_intercept) << "\n"
    << "fit_slope " << d2s(sw.fit_slope) << "\n"
    << "lower_bound_holds " << (diag.lower_bound_holds ? "yes" : "no") << "\n"
    << "lower_bound_violations " << diag.violations << "\n"
    << "min_norm_times_distance " << d2s(diag.min_ratio) << "\n"
    << "max_norm_times_distance " << d2s(diag.max_ratio) << "\n"
    << "peak_mu " << d2s(diag.peak_mu) << "\n"
    << "least_damped_abs_im " << d2s(diag.least_damped_im) << "\n"
    << "spectral_abscissa " << d2s(spec.spectral_abscissa) << "\n";
  out.write("sweep_report.txt", r.str());
  return "sweep (" + label(model.geometry()) + ", N=" + std::to_string(model.n_modes()) +
         "): " + std::to_string(sc.n_points) + " points, slope b=" + fixed_sci(sw.fit_slope) +
         ", lower bound " + (diag.lower_bound_holds ? "holds" : "VIOLATED");
}

std::string run_resolvent_case(const RunConfig& cfg, Output& out) {
  const PlateModel model = cfg.make_model();
  const auto& rc = cfg.resolvent_case;
  const bool full = model.region().is_full(model.geometry());
  const CaseGrid grid = make_case_grid(model.geometry(), model.region(), cfg.grid_points,
                                       cfg.interface_points);
  const bool two_d = model.geometry().dim == 2;

  std::ostringstream r;
  r << "command resolvent-case\n"
    << "geometry " << label(model.geometry()) << "\n"
    << "n_modes " << model.n_modes() << "\n"
    << "cases_per_mu " << rc.n_cases << "\n"
    << "seed " << rc.seed << "\n";

  double worst_first = 0.0, worst_ident = 0.0, worst_cont = 0.0, worst_ratio = 0.0;
  for (std::size_t im = 0; im < rc.mu.size(); ++im) {
    const double mu = rc.mu[im];
    Rng rng(rc.seed + 1000003ULL * im);
    std::vector<ResolventData> data;
    for (std::size_t c = 0; c < rc.n_cases; ++c) data.push_back(random_data(model.basis(), rng));

    struct CaseStats {
      double first, ident, ratio, lhs, rhs, rhs_coarse, cont, flux, wmax, phi, proj;
    };
    const auto stats = parallel_map<CaseStats>(rc.n_cases, [&](std::size_t c) {
      const auto rcase = solve_resolvent(model, data[c].f, data[c].g, mu, grid);
      const auto ip = imaginary_part_identity(rcase, model);
      const auto ir = interface_residuals(rcase, model);
      const auto ws = w_substitution(rcase, model);
      return CaseStats{first_line_residual(rcase, model),
                       ip.relative_residual,
                       ip.ratio,
                       ip.lhs,
                       ip.rhs,
                       ip.rhs_coarse,
                       ir.max_continuity,
                       ir.flux_norm,
                       std::max(ws.max_residual_damped, ws.max_residual_undamped),
                       ws.phi_scale,
                       full ? projected_w_residual(rcase, model) : NAN};
    });

    // Pointwise table for the first case.
    const auto first_case = solve_resolvent(model, data[0].f, data[0].g, mu, grid);
    const auto ws = w_substitution(first_case, model);
    const auto ir = interface_residuals(first_case, model);
    Table t;
    t.header = {"region", "x"};
    if (two_d) t.header.push_back("y");
    for (const char* h : {"w_residual", "phi", "jump_u", "jump_normal", "jump_laplacian", "flux"})
      t.header.push_back(h);
    auto row = [&](const char* region, const Point& p, std::vector<std::string> rest) {
      std::vector<std::string> cells{region, d2s(p[0])};
      if (two_d) cells.push_back(d2s(p[1]));
      cells.insert(cells.end(), rest.begin(), rest.end());
      t.add(std::move(cells));
    };
    for (std::size_t i = 0; i < grid.damped.size(); ++i)
      row("damped", grid.damped[i],
          {d2s(std::abs(ws.residual1(i))), d2s(std::abs(ws.phi1(i))), "", "", "", ""});
    for (std::size_t i = 0; i < grid.undamped.size(); ++i)
      row("undamped", grid.undamped[i],
          {d2s(std::abs(ws.residual2(i))), d2s(std::abs(ws.phi2(i))), "", "", "", ""});
    for (std::size_t i = 0; i < grid.interface.size(); ++i)
      row("interface", grid.interface[i],
          {"", "", d2s(std::abs(ir.jump_u(i))), d2s(std::abs(ir.jump_normal(i))),
           d2s(std::abs(ir.jump_laplacian(i))), d2s(std::abs(ir.flux(i)))});
    emit(out, "case_" + format_double(mu), t);

    CaseStats agg{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    for (const auto& s : stats) {
      agg.first = std::max(agg.first, s.first);
      agg.ident = std::max(agg.ident, s.ident);
      agg.ratio = std::max(agg.ratio, s.ratio);
      agg.cont = std::max(agg.cont, s.cont);
      agg.flux = std::max(agg.flux, s.flux);
      agg.wmax = std::max(agg.wmax, s.wmax);
      agg.phi = std::max(agg.phi, s.phi);
      agg.proj = full ? std::max(agg.proj, s.proj) : NAN;
    }
    worst_first = std::max(worst_first, agg.first);
    worst_ident = std::max(worst_ident, agg.ident);
    worst_cont = std::max(worst_cont, agg.cont);
    worst_ratio = std::max(worst_ratio, agg.ratio);
    r << "\n[mu " << d2s(mu) << "]\n"
      << "max_first_line_residual " << d2s(agg.first) << "\n"
      << "max_imaginary_identity_residual " << d2s(agg.ident) << "\n"
      << "max_inequality_ratio " << d2s(agg.ratio) << "\n"
      << "first_case_lhs " << d2s(stats[0].lhs) << "\n"
      << "first_case_rhs " << d2s(stats[0].rhs) << "\n"
      << "first_case_rhs_coarse " << d2s(stats[0].rhs_coarse) << "\n"
      << "max_interface_continuity " << d2s(agg.cont) << "\n"
      << "max_flux_rms " << d2s(agg.flux) << "\n"
      << "max_w_residual " << d2s(agg.wmax) << "\n"
      << "max_phi " << d2s(agg.phi) << "\n";
    if (full) r << "max_projected_w_residual " << d2s(agg.proj) << "\n";
  }

  if (!rc.ladder.empty()) {
    Table lt{{"mu", "n_modes", "flux_rms", "max_w_residual"}, {}};
    for (double mu : rc.mu) {
      const auto ladder = resolution_ladder(model.geometry(), model.region(), mu, rc.ladder,
                                            rc.seed, cfg.grid_points, cfg.interface_points);
      for (const auto& rung : ladder)
        lt.add({d2s(mu), std::to_string(rung.n_modes), d2s(rung.flux_norm),
                d2s(rung.max_w_residual)});
    }
    emit(out, "ladder", lt);
  }
  out.write("case_report.txt", r.str());
  return "resolvent-case (" + label(model.geometry()) + ", N=" +
         std::to_string(model.n_modes()) + "): " + std::to_string(rc.mu.size()) +
         " mu values, first-line " + fixed_sci(worst_first) + ", identity " +
         fixed_sci(worst_ident) + ", continuity " + fixed_sci(worst_cont) +
         ", lhs/rhs " + fixed_sci(worst_ratio);
}

std::string profile_text(const QuadraticProfile& p) {
  const Eigen::Matrix2d h = p.hessian();
  std::string s = "constant " + d2s(p.constant) + " linear " + d2s(p.linear(0));
  if (p.dim == 2) s += " " + d2s(p.linear(1));
  s += " hessian " + d2s(h(0, 0));
  if (p.dim == 2) s += " " + d2s(h(0, 1)) + " " + d2s(h(1, 1));
  return s;
}

std::string margin_text(const MarginReport& m) {
  if (m.vacuous()) return "vacuous (every near-characteristic shell empty)";
  return d2s(m.margin) + " samples " + std::to_string(m.samples) + " empty_shells " +
         std::to_string(m.empty_shells) + " critical_points " +
         std::to_string(m.critical_points);
}

std::string run_carleman(const RunConfig& cfg, Output& out) {
  const auto& setup = cfg.carleman;
  const auto certs = certify(setup);
  const auto& g = setup.geometry;
  std::ostringstream r;
  r << "command carleman\n"
    << "dimension " << (g.dim == 1 ? "1 (analog, near-characteristic shells)" : "2") << "\n"
    << "region1 x in [" << d2s(g.a) << ", " << d2s(g.ell) << "]\n"
    << "region2 x in [" << d2s(g.ell) << ", " << d2s(g.b) << "]\n";
  if (g.dim == 2) r << "y in [0, " << d2s(g.ly) << "]\n";
  r << "interface x = " << d2s(g.ell) << " normal (-1, 0)\n"
    << "outer_boundary x = " << d2s(g.b) << " normal (+1, 0)\n"
    << "psi1 " << profile_text(setup.psi1) << "\n"
    << "psi2 " << profile_text(setup.psi2) << "\n"
    << "threshold " << d2s(setup.threshold) << "\n"
    << "margins are floating point, not interval-certified\n";
  Table t{{"beta", "gradient1", "gradient2", "outer_sign", "interface_sign1",
           "interface_sign2", "interface_inequality", "continuity", "margin1", "margin2",
           "pass"},
          {}};
  std::size_t passed = 0;
  for (const auto& c : certs) {
    const auto& k = c.conditions;
    r << "\n[beta " << d2s(c.beta) << "]\n"
      << "min_gradient_norm_1 " << d2s(k.gradient1) << "\n"
      << "min_gradient_norm_2 " << d2s(k.gradient2) << "\n"
      << "outer_sign_margin " << d2s(k.outer_sign) << "\n"
      << "interface_sign_margin_1 " << d2s(k.interface_sign1) << "\n"
      << "interface_sign_margin_2 " << d2s(k.interface_sign2) << "\n"
      << "interface_inequality_margin " << d2s(k.interface_inequality) << "\n"
      << "continuity_residual " << d2s(k.continuity) << "\n"
      << "subellipticity_margin_1 " << margin_text(c.margin1) << "\n"
      << "subellipticity_margin_2 " << margin_text(c.margin2) << "\n"
      << "pointwise_conditions " << (k.pass() ? "PASS" : "FAIL") << "\n"
      << "subellipticity " << (c.subelliptic() ? "PASS" : "FAIL") << "\n"
      << "certificate " << (c.pass() ? "PASS" : "FAIL") << "\n";
    if (c.pass()) ++passed;
    t.add({d2s(c.beta), d2s(k.gradient1), d2s(k.gradient2), d2s(k.outer_sign),
           d2s(k.interface_sign1), d2s(k.interface_sign2), d2s(k.interface_inequality),
           d2s(k.continuity), d2s(c.margin1.margin), d2s(c.margin2.margin),
           c.pass() ? "1" : "0"});
  }
  out.write("certificate.txt", r.str());
  emit(out, "carleman_margins", t);
  return "carleman (" + std::to_string(g.dim) + "D): " + std::to_string(passed) + " of " +
         std::to_string(certs.size()) + " beta values certified";
}

std::string run_verify(const RunConfig& cfg, Output& out, bool& failed) {
  auto results = run_property_suite();
  if (cfg.has_carleman) {
    const auto certs = certify(cfg.carleman);
    const auto& last = certs.back();
    const bool pass = last.pass();
    results.push_back({"config", "carleman_certificate",
                       std::min(last.conditions.interface_inequality,
                                std::min(last.margin1.margin, last.margin2.margin)),
                       "certificate passes at the last beta", pass});
  }
  std::ostringstream r;
  std::size_t passed = 0;
  for (const auto& p : results) {
    r << (p.pass ? "PASS " : "FAIL ") << p.module << "." << p.name << " value "
      << fixed_sci(p.value) << " criterion " << p.criterion << "\n";
    if (p.pass) ++passed;
  }
  r << "passed " << passed << " of " << results.size() << "\n";
  out.write("verify_report.txt", r.str());
  failed = passed != results.size();
  return "verify: " + std::to_string(passed) + " of " + std::to_string(results.size()) +
         " properties pass";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

RunResult run_command(const std::string& command, const RunConfig& config,
                      const RunOptions& options) {
  RunResult result;
  if (!is_known_command(command)) {
    result.exit_code = kExitConfig;
    result.summary = "unknown command '" + command + "'";
    return result;
  }
  RunConfig cfg = config;
  if (options.seed) {
    cfg.simulate.seed = *options.seed;
    cfg.resolvent_case.seed = *options.seed;
  }
  std::unique_ptr<Output> out;
  try {
    if (needs_plate(command) && !cfg.has_plate)
      throw ConfigError("command '" + command +
                        "' needs [geometry], [damping] and [discretization]");
    out = std::make_unique<Output>(options.out_dir, options.plot_data);
    bool verify_failed = false;
    if (command == "simulate") result.summary = run_simulate(cfg, *out);
    else if (command == "spectrum") result.summary = run_spectrum(cfg, *out);
    else if (command == "sweep") result.summary = run_sweep(cfg, *out);
    else if (command == "resolvent-case") result.summary = run_resolvent_case(cfg, *out);
    else if (command == "carleman") result.summary = run_carleman(cfg, *out);
    else result.summary = run_verify(cfg, *out, verify_failed);
    result.files = out->files();
    if (verify_failed) result.exit_code = kExitVerifyFailed;
    return result;
  } catch (const ConfigError& e) {
    result.exit_code = kExitConfig;
    result.summary = std::string("configuration error: ") + e.what();
  } catch (const DegenerateInputError& e) {
    result.exit_code = kExitConfig;
    result.summary = std::string("degenerate input: ") + e.what();
  } catch (const NumericalError& e) {
    result.exit_code = kExitNumerical;
    result.summary = std::string("numerical failure: ") + e.what();
  } catch (const std::bad_alloc&) {
    result.exit_code = kExitNumerical;
    result.summary = "numerical failure: out of memory";
  }
  if (out) out->remove_all();
  return result;
}

RunResult run_command_file(const std::string& command, const std::string& config_path,
                           const RunOptions& options) {
  RunConfig cfg;
  try {
    if (!is_known_command(command))
      throw ConfigError("unknown command '" + command + "'");
    if (config_path.empty()) {
      if (needs_plate(command))
        throw ConfigError("command '" + command + "' requires --config");
    } else {
      cfg = parse_config(config_path, needs_plate(command));
    }
  } catch (const ConfigError& e) {
    RunResult r;
    r.exit_code = kExitConfig;
    r.summary = std::string("configuration error: ") + e.what();
    return r;
  }
  return run_command(command, cfg, options);
}

}  // namespace platelab
