// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlm.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "nlm/closed_form.hpp"
#include "nlm/invariants.hpp"
#include "nlm/io.hpp"
#include "nlm/lu_opt.hpp"
#include "nlm/scan.hpp"
#include "nlm/state.hpp"

struct nlm_spectrum {
  nlm::SchmidtSpectrum impl;
};

struct nlm_state {
  nlm::PureBipartiteState impl;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

template <typename Fn>
nlm_status guarded(Fn&& fn) {
  try {
    fn();
    return NLM_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return NLM_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    return NLM_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NLM_ERR_INTERNAL;
  }
}

nlm_status null_error(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return NLM_ERR_NULL;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::runtime_error("out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlm::SchmidtSpectrum build_spectrum(int dim, std::vector<double> lambdas,
                                    int normalize, double* deviation) {
  if (normalize) return nlm::make_normalized_spectrum(dim, std::move(lambdas), deviation);
  if (deviation) {
    double sumSq = 0.0;
    for (double l : lambdas) sumSq += l * l;
    *deviation = std::abs(sumSq - 1.0);
  }
  return nlm::SchmidtSpectrum(dim, std::move(lambdas));
}

json nlm_result_to_json(const nlm::NlmResult& result) {
  json j{{"value", result.value},
         {"f_of_lambda", result.fOfLambda},
         {"argmax_ordering", result.argmaxOrdering},
         {"method", nlm::method_name(result.method)}};
  if (!result.note.empty()) j["note"] = result.note;
  return j;
}

nlm::OptimizerConfig to_config(const nlm_optimizer_options& opts) {
  nlm::OptimizerConfig config;
  config.nStarts = opts.n_starts;
  config.maxIter = opts.max_iter;
  config.gradTolerance = opts.grad_tolerance;
  config.seed = opts.seed;
  config.initScale = opts.init_scale;
  if (opts.gradient_mode != NLM_GRADIENT_FINITE_DIFFERENCE &&
      opts.gradient_mode != NLM_GRADIENT_ANALYTIC) {
    throw std::invalid_argument("unknown gradient mode");
  }
  config.gradientMode = opts.gradient_mode == NLM_GRADIENT_ANALYTIC
                            ? nlm::GradientMode::analytic
                            : nlm::GradientMode::finiteDifference;
  return config;
}

nlm::NlmMethod to_method(int method) {
  if (method == NLM_METHOD_CLOSED_FORM) return nlm::NlmMethod::closedForm;
  if (method == NLM_METHOD_ORACLE) return nlm::NlmMethod::oracle;
  throw std::invalid_argument("unknown method");
}

std::string center_tag(double center) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", center);  // label, not data: keep short
  std::string tag = buf;
  for (char& ch : tag) {
    if (ch == '.') ch = 'p';  // keep one dot per filename (the .csv suffix)
    if (ch == '-') ch = 'm';
  }
  return tag;
}

}  // namespace

extern "C" {

const char* nlm_version(void) { return "0.1.0"; }

const char* nlm_last_error(void) { return g_last_error.c_str(); }

void nlm_string_free(char* s) { std::free(s); }

void nlm_optimizer_options_init(nlm_optimizer_options* opts) {
  if (!opts) return;
  opts->n_starts = 1;
  opts->max_iter = 300;
  opts->grad_tolerance = 1e-9;
  opts->seed = 0;
  opts->init_scale = 1.0;
  opts->gradient_mode = NLM_GRADIENT_FINITE_DIFFERENCE;
}

nlm_status nlm_spectrum_create(int dim, const double* lambdas, int normalize,
                               double* deviation, nlm_spectrum** out) {
  if (!lambdas) return null_error("lambdas");
  if (!out) return null_error("out");
  return guarded([&] {
    std::vector<double> values(lambdas, lambdas + (dim > 0 ? dim : 0));
    *out = new nlm_spectrum{build_spectrum(dim, std::move(values), normalize, deviation)};
  });
}

nlm_status nlm_spectrum_load_json(const char* path, int normalize,
                                  double* deviation, nlm_spectrum** out) {
  if (!path) return null_error("path");
  if (!out) return null_error("out");
  return guarded([&] {
    nlm::RawSpectrum raw = nlm::load_spectrum_json_raw(path);
    *out = new nlm_spectrum{
        build_spectrum(raw.dim, std::move(raw.lambdas), normalize, deviation)};
  });
}

nlm_status nlm_spectrum_save_json(const nlm_spectrum* spec, const char* path) {
  if (!spec) return null_error("spec");
  if (!path) return null_error("path");
  return guarded([&] { nlm::save_spectrum_json(spec->impl, path); });
}

int nlm_spectrum_dim(const nlm_spectrum* spec) {
  return spec ? spec->impl.dim() : 0;
}

nlm_status nlm_spectrum_lambdas(const nlm_spectrum* spec, double* out,
                                size_t capacity) {
  if (!spec) return null_error("spec");
  if (!out) return null_error("out");
  return guarded([&] {
    const std::vector<double>& l = spec->impl.lambdas();
    if (capacity < l.size()) throw std::invalid_argument("buffer too small");
    std::memcpy(out, l.data(), l.size() * sizeof(double));
  });
}

void nlm_spectrum_free(nlm_spectrum* spec) { delete spec; }

nlm_status nlm_state_create(int dim, const double* amplitudes, nlm_state** out) {
  if (!amplitudes) return null_error("amplitudes");
  if (!out) return null_error("out");
  return guarded([&] {
    if (dim < 2) throw std::invalid_argument("dim must be >= 2");
    nlm::MatrixC x(dim, dim);
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        const std::size_t base = 2 * (static_cast<std::size_t>(j) * dim + k);
        x(j, k) = nlm::Complex(amplitudes[base], amplitudes[base + 1]);
      }
    }
    *out = new nlm_state{nlm::PureBipartiteState(dim, std::move(x))};
  });
}

nlm_status nlm_state_load_json(const char* path, nlm_state** out) {
  if (!path) return null_error("path");
  if (!out) return null_error("out");
  return guarded([&] { *out = new nlm_state{nlm::load_state_json(path)}; });
}

nlm_status nlm_state_save_json(const nlm_state* state, const char* path) {
  if (!state) return null_error("state");
  if (!path) return null_error("path");
  return guarded([&] { nlm::save_state_json(state->impl, path); });
}

nlm_status nlm_state_from_spectrum(const nlm_spectrum* spec, nlm_state** out) {
  if (!spec) return null_error("spec");
  if (!out) return null_error("out");
  return guarded([&] {
    *out = new nlm_state{nlm::state_from_spectrum(spec->impl)};
  });
}

nlm_status nlm_state_scramble(const nlm_state* state, uint64_t seed,
                              nlm_state** out) {
  if (!state) return null_error("state");
  if (!out) return null_error("out");
  return guarded([&] {
    nlm::RandomStream stream(seed);
    const nlm::MatrixC ua = nlm::random_unitary(state->impl.dim(), stream);
    const nlm::MatrixC ub = nlm::random_unitary(state->impl.dim(), stream);
    *out = new nlm_state{nlm::apply_local_unitaries(state->impl, ua, ub)};
  });
}

nlm_status nlm_state_spectrum(const nlm_state* state, nlm_spectrum** out) {
  if (!state) return null_error("state");
  if (!out) return null_error("out");
  return guarded([&] {
    *out = new nlm_spectrum{nlm::schmidt_decompose(state->impl).spectrum};
  });
}

int nlm_state_dim(const nlm_state* state) {
  return state ? state->impl.dim() : 0;
}

nlm_status nlm_state_m2(const nlm_state* state, double* out) {
  if (!state) return null_error("state");
  if (!out) return null_error("out");
  return guarded([&] { *out = nlm::m2_pure(state->impl); });
}

void nlm_state_free(nlm_state* state) { delete state; }

nlm_status nlm_invariants_json(const nlm_spectrum* spec, char** out_json) {
  if (!spec) return null_error("spec");
  if (!out_json) return null_error("out_json");
  return guarded([&] {
    const nlm::SpectrumInvariants inv = nlm::compute_invariants(spec->impl);
    const json j{{"p2", inv.p.at(2.0)},     {"p3", inv.p.at(3.0)},
                 {"p4", inv.p.at(4.0)},     {"pHalf", inv.p.at(0.5)},
                 {"eN", inv.e_n},           {"antiFlatness", inv.anti_flatness}};
    *out_json = copy_string(j.dump(2));
  });
}

nlm_status nlm_schmidt_nlm_json(const nlm_spectrum* spec, int method,
                                char** out_json) {
  if (!spec) return null_error("spec");
  if (!out_json) return null_error("out_json");
  return guarded([&] {
    const nlm::NlmResult result = nlm::nlm_schmidt(spec->impl, to_method(method));
    *out_json = copy_string(nlm_result_to_json(result).dump(2));
  });
}

nlm_status nlm_optimize_json(const nlm_state* state,
                             const nlm_optimizer_options* opts,
                             char** out_json) {
  if (!state) return null_error("state");
  if (!opts) return null_error("opts");
  if (!out_json) return null_error("out_json");
  return guarded([&] {
    const nlm::OptResult result = nlm::minimize(state->impl, to_config(*opts));
    std::vector<bool> conv(result.converged.begin(), result.converged.end());
    const json j{{"min_value", result.minValue},
                 {"best_theta_a", result.bestParams.thetaA},
                 {"best_theta_b", result.bestParams.thetaB},
                 {"per_start_values", result.perStartValues},
                 {"converged", conv},
                 {"evaluations", result.evaluations}};
    *out_json = copy_string(j.dump(2));
  });
}

nlm_status nlm_scan_csv(int dim, int num_samples,
                        const nlm_optimizer_options* opts,
                        const char* out_path) {
  if (!opts) return null_error("opts");
  if (!out_path) return null_error("out_path");
  return guarded([&] {
    const nlm::OptimizerConfig oc = to_config(*opts);
    nlm::ScanConfig config;
    config.nStarts = oc.nStarts;
    config.maxIter = oc.maxIter;
    config.seed = oc.seed;
    config.gradTolerance = oc.gradTolerance;
    config.initScale = oc.initScale;
    config.gradientMode = oc.gradientMode;
    nlm::write_scan_csv(out_path, nlm::run_scan(dim, num_samples, config));
  });
}

nlm_status nlm_scan_stats_json(const char* scan_csv_path, double threshold,
                               char** out_json) {
  if (!scan_csv_path) return null_error("scan_csv_path");
  if (!out_json) return null_error("out_json");
  return guarded([&] {
    const std::vector<nlm::ScanRecord> records = nlm::read_scan_csv(scan_csv_path);
    const nlm::ResidualStats stats = nlm::residual_stats(records, threshold);
    const json j{{"count", stats.count},
                 {"mean_abs", stats.meanAbs},
                 {"std_abs", stats.stdAbs},
                 {"fraction_below", stats.fractionBelow},
                 {"threshold", threshold},
                 {"max_residual", stats.maxResidual},
                 {"negative_count", stats.negativeCount}};
    *out_json = copy_string(j.dump(2));
  });
}

nlm_status nlm_grid3_csv(int resolution, const char* out_path) {
  if (!out_path) return null_error("out_path");
  return guarded([&] {
    nlm::write_grid_csv(out_path, nlm::simplex_grid_qutrit(resolution));
  });
}

nlm_status nlm_grid5_slice_csv(int resolution, const char* out_path) {
  if (!out_path) return null_error("out_path");
  return guarded([&] {
    nlm::write_grid_csv(out_path, nlm::ququint_slice_grid(resolution));
  });
}

nlm_status nlm_slice4_csv(const char* scan_csv_path, const double* centers,
                          int num_centers, double halfwidth,
                          const char* out_prefix, char** report_json) {
  if (!scan_csv_path) return null_error("scan_csv_path");
  if (!centers) return null_error("centers");
  if (!out_prefix) return null_error("out_prefix");
  if (!report_json) return null_error("report_json");
  return guarded([&] {
    if (num_centers < 1) throw std::invalid_argument("need at least one center");
    const std::vector<nlm::ScanRecord> records = nlm::read_scan_csv(scan_csv_path);
    const std::vector<double> centerList(centers, centers + num_centers);
    const auto slices = nlm::n4_band_slices(records, centerList, halfwidth);
    json files = json::array();
    json counts = json::array();
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const std::string path =
          std::string(out_prefix) + "_" + center_tag(centerList[i]) + ".csv";
      nlm::write_band_slice_csv(path, slices[i]);
      files.push_back(path);
      counts.push_back(slices[i].size());
    }
    *report_json = copy_string(json{{"files", files}, {"counts", counts}}.dump(2));
  });
}

}  // extern "C"
