// Copyright 2026 The platelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "platelab/platelab.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "platelab/error.hpp"
#include "platelab/model.hpp"
#include "platelab/runner.hpp"
#include "platelab/spectra.hpp"

struct platelab_model {
  platelab::PlateModel model;
};

namespace {

thread_local std::string last_error;

platelab_status fail(platelab_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class Fn>
platelab_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const platelab::ConfigError& e) {
    return fail(PLATELAB_CONFIG_ERROR, e.what());
  } catch (const platelab::DegenerateInputError& e) {
    return fail(PLATELAB_CONFIG_ERROR, e.what());
  } catch (const platelab::NumericalError& e) {
    return fail(PLATELAB_NUMERICAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PLATELAB_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(PLATELAB_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(PLATELAB_INTERNAL_ERROR, "unknown error");
  }
}

platelab_status create(platelab::Geometry g, double ell, double d, int n_modes,
                       platelab_model** out) {
  if (!out) return fail(PLATELAB_INVALID_ARGUMENT, "output handle pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new platelab_model{platelab::PlateModel(g, platelab::DampingRegion{ell, d}, n_modes)};
    return PLATELAB_OK;
  });
}

}  // namespace

extern "C" {

const char* platelab_version(void) { return "1.0.0"; }

const char* platelab_last_error(void) { return last_error.c_str(); }

platelab_status platelab_model_create_1d(double length, double ell, double d, int n_modes,
                                         platelab_model** out) {
  return create(platelab::Geometry::interval(length), ell, d, n_modes, out);
}

platelab_status platelab_model_create_2d(double lx, double ly, double ell, double d,
                                         int n_modes, platelab_model** out) {
  return create(platelab::Geometry::rectangle(lx, ly), ell, d, n_modes, out);
}

void platelab_model_destroy(platelab_model* model) { delete model; }

size_t platelab_model_n_modes(const platelab_model* model) {
  return model ? model->model.n_modes() : 0;
}

platelab_status platelab_model_eigenvalues(const platelab_model* model, double* out,
                                           size_t len) {
  if (!model || !out) return fail(PLATELAB_INVALID_ARGUMENT, "NULL argument");
  const auto& lambda = model->model.lambda();
  if (len < static_cast<size_t>(lambda.size()))
    return fail(PLATELAB_INVALID_ARGUMENT, "output buffer too small");
  std::memcpy(out, lambda.data(), sizeof(double) * static_cast<size_t>(lambda.size()));
  last_error.clear();
  return PLATELAB_OK;
}

platelab_status platelab_model_spectrum(const platelab_model* model, double* re, double* im,
                                        size_t len, double* abscissa) {
  if (!model || !re || !im) return fail(PLATELAB_INVALID_ARGUMENT, "NULL argument");
  if (len < 2 * model->model.n_modes())
    return fail(PLATELAB_INVALID_ARGUMENT, "output buffer too small");
  return guarded([&] {
    const auto rep = platelab::pencil_spectrum(model->model);
    for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
      re[i] = rep.eigenvalues[i].real();
      im[i] = rep.eigenvalues[i].imag();
    }
    if (abscissa) *abscissa = rep.spectral_abscissa;
    return PLATELAB_OK;
  });
}

platelab_status platelab_model_resolvent_norm(const platelab_model* model, double mu,
                                              double* out) {
  if (!model || !out) return fail(PLATELAB_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    *out = platelab::resolvent_norm(model->model, mu);
    return PLATELAB_OK;
  });
}

platelab_status platelab_model_energy(const platelab_model* model, const double* u,
                                      const double* v, size_t n, double* out) {
  if (!model || !u || !v || !out) return fail(PLATELAB_INVALID_ARGUMENT, "NULL argument");
  if (n != model->model.n_modes())
    return fail(PLATELAB_INVALID_ARGUMENT, "coefficient length differs from n_modes");
  return guarded([&] {
    platelab::State s = platelab::State::zero(n);
    for (size_t i = 0; i < n; ++i) {
      s.u(static_cast<Eigen::Index>(i)) = u[i];
      s.v(static_cast<Eigen::Index>(i)) = v[i];
    }
    *out = platelab::energy(s, model->model.basis());
    return PLATELAB_OK;
  });
}

platelab_status platelab_run(const char* command, const char* config_path,
                             const char* out_dir, int plot_data, int has_seed,
                             uint64_t seed, char* summary, size_t summary_len) {
  if (!command || !out_dir) return fail(PLATELAB_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    platelab::RunOptions opts;
    opts.out_dir = out_dir;
    opts.plot_data = plot_data != 0;
    if (has_seed) opts.seed = seed;
    const auto r =
        platelab::run_command_file(command, config_path ? config_path : "", opts);
    if (summary && summary_len > 0) {
      const size_t n = std::min(summary_len - 1, r.summary.size());
      std::memcpy(summary, r.summary.data(), n);
      summary[n] = '\0';
    }
    if (r.exit_code != 0) last_error = r.summary;
    return static_cast<platelab_status>(r.exit_code);
  });
}

}  // extern "C"
