// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0
//
// nlm: non-local magic of bipartite pure qudit states.
//
// Built entirely on the C API of the shared library; structured results are
// printed as JSON on stdout, diagnostics go to stderr, and any library error
// exits non-zero.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlm.h"

namespace {

using nlohmann::json;

constexpr double kNormWarnTol = 1e-6;

[[noreturn]] void fail(const std::string& context) {
  std::fprintf(stderr, "error: %s: %s\n", context.c_str(), nlm_last_error());
  std::exit(1);
}

void check(nlm_status status, const std::string& context) {
  if (status != NLM_OK) fail(context);
}

struct SpectrumDeleter {
  void operator()(nlm_spectrum* s) const { nlm_spectrum_free(s); }
};
struct StateDeleter {
  void operator()(nlm_state* s) const { nlm_state_free(s); }
};
using SpectrumPtr = std::unique_ptr<nlm_spectrum, SpectrumDeleter>;
using StatePtr = std::unique_ptr<nlm_state, StateDeleter>;

std::string take_string(char* raw) {
  std::string s(raw);
  nlm_string_free(raw);
  return s;
}

void warn_if_unnormalized(double deviation) {
  if (deviation > kNormWarnTol) {
    std::fprintf(stderr,
                 "warning: input spectrum norm deviates from 1 by %.3g; "
                 "renormalised\n",
                 deviation);
  }
}

// Builds a spectrum from --spectrum FILE or --lambda values; exactly one
// source must be present. Inputs are renormalised, with a warning when the
// squared sum is off by more than 1e-6.
SpectrumPtr spectrum_from_flags(const std::string& file,
                                const std::vector<double>& lambdas) {
  if (file.empty() == lambdas.empty()) {
    std::fprintf(stderr, "error: give exactly one of --spectrum/--lambda\n");
    std::exit(2);
  }
  nlm_spectrum* spec = nullptr;
  double deviation = 0.0;
  if (!file.empty()) {
    check(nlm_spectrum_load_json(file.c_str(), 1, &deviation, &spec), file);
  } else {
    check(nlm_spectrum_create(static_cast<int>(lambdas.size()), lambdas.data(),
                              1, &deviation, &spec),
          "--lambda");
  }
  warn_if_unnormalized(deviation);
  return SpectrumPtr(spec);
}

int gradient_mode_from_flag(const std::string& grad) {
  if (grad == "fd") return NLM_GRADIENT_FINITE_DIFFERENCE;
  if (grad == "analytic") return NLM_GRADIENT_ANALYTIC;
  std::fprintf(stderr, "error: --grad must be 'fd' or 'analytic'\n");
  std::exit(2);
}

void print_json(const std::string& s) { std::printf("%s\n", s.c_str()); }

struct CommonSpectrumFlags {
  std::string file;
  std::vector<double> lambdas;

  void attach(CLI::App* cmd) {
    cmd->add_option("--spectrum", file, "Spectrum JSON file");
    cmd->add_option("--lambda", lambdas,
                    "Comma-separated Schmidt coefficients (renormalised)")
        ->delimiter(',');
  }
};

int default_samples(int dim) {
  switch (dim) {
    case 2: return 50;
    case 3: return 100;
    case 4: return 200;
    default: return 20;  // N = 5 desk scale
  }
}

int default_starts(int dim) {
  switch (dim) {
    case 2: return 50;
    case 3: return 50;
    case 4: return 200;
    default: return 100;  // N = 5 desk scale
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-local magic of bipartite pure qudit states"};
  app.require_subcommand(1);

  // --- invariants --------------------------------------------------------
  auto* cmdInv = app.add_subcommand(
      "invariants", "Power sums, determinant invariant and anti-flatness");
  CommonSpectrumFlags invFlags;
  invFlags.attach(cmdInv);

  // --- nlm-formula / nlm-oracle ------------------------------------------
  auto* cmdFormula = app.add_subcommand(
      "nlm-formula", "Closed-form NLM of a Schmidt spectrum (dims 2..5)");
  CommonSpectrumFlags formulaFlags;
  formulaFlags.attach(cmdFormula);

  auto* cmdOracle = app.add_subcommand(
      "nlm-oracle", "Quadruple-sum NLM of a Schmidt spectrum (any dim)");
  CommonSpectrumFlags oracleFlags;
  oracleFlags.attach(cmdOracle);

  // --- nlm-optimize -------------------------------------------------------
  auto* cmdOpt = app.add_subcommand(
      "nlm-optimize", "Direct minimisation over local unitaries");
  std::string optState;
  std::vector<double> optLambdas;
  int optStarts = 50;
  int optMaxIter = 300;
  std::uint64_t optSeed = 0;
  double optInitScale = 1.0;
  std::string optGrad = "fd";
  std::uint64_t scrambleSeed = 0;
  bool haveScramble = false;
  cmdOpt->add_option("--state", optState, "State JSON file");
  cmdOpt->add_option("--lambda", optLambdas,
                     "Comma-separated Schmidt coefficients (renormalised)")
      ->delimiter(',');
  cmdOpt->add_option("--starts", optStarts, "Number of optimiser starts");
  cmdOpt->add_option("--maxiter", optMaxIter, "Iteration cap per start");
  cmdOpt->add_option("--seed", optSeed, "Master seed");
  cmdOpt->add_option("--init-scale", optInitScale,
                     "Std-dev of the random initial angles");
  cmdOpt->add_option("--grad", optGrad, "Gradient mode: fd or analytic");
  cmdOpt->add_option("--scramble-seed", scrambleSeed,
                     "Pre-scramble by seeded random local unitaries")
      ->trigger_on_parse()
      ->each([&](const std::string&) { haveScramble = true; });

  // --- scan ----------------------------------------------------------------
  auto* cmdScan = app.add_subcommand(
      "scan", "Formula-vs-numerical residual scan over random spectra");
  int scanDim = 3;
  int scanSamples = -1;
  int scanStarts = -1;
  int scanMaxIter = 300;
  std::uint64_t scanSeed = 0;
  double scanInitScale = 1.0;
  std::string scanGrad = "analytic";
  std::string scanOut;
  cmdScan->add_option("--dim", scanDim, "Local dimension (2..5)")->required();
  cmdScan->add_option("--samples", scanSamples,
                      "Sample count (default: desk scale for --dim)");
  cmdScan->add_option("--starts", scanStarts,
                      "Starts per sample (default: desk scale for --dim)");
  cmdScan->add_option("--maxiter", scanMaxIter, "Iteration cap per start");
  cmdScan->add_option("--seed", scanSeed, "Master seed");
  cmdScan->add_option("--init-scale", scanInitScale,
                      "Std-dev of the random initial angles");
  cmdScan->add_option("--grad", scanGrad, "Gradient mode: fd or analytic");
  cmdScan->add_option("--out", scanOut, "Output CSV path")->required();

  // --- grids ---------------------------------------------------------------
  auto* cmdGrid3 = app.add_subcommand(
      "grid3", "Closed-form NLM over the qutrit probability simplex");
  int grid3Res = 60;
  std::string grid3Out;
  cmdGrid3->add_option("--resolution", grid3Res, "Lattice subdivisions");
  cmdGrid3->add_option("--out", grid3Out, "Output CSV path")->required();

  auto* cmdGrid5 = app.add_subcommand(
      "grid5-slice", "Closed-form NLM over the (p0,p1,p2,0,0) slice at N=5");
  int grid5Res = 40;
  std::string grid5Out;
  cmdGrid5->add_option("--resolution", grid5Res, "Lattice subdivisions");
  cmdGrid5->add_option("--out", grid5Out, "Output CSV path")->required();

  // --- slice4 ---------------------------------------------------------------
  auto* cmdSlice = app.add_subcommand(
      "slice4", "Band slices of an N=4 scan on lambda_3^2");
  std::string sliceIn, slicePrefix;
  std::vector<double> sliceCenters = {0.0, 0.2, 0.4, 0.6};
  double sliceHalfwidth = 0.02;
  cmdSlice->add_option("--in", sliceIn, "Scan CSV input")->required();
  cmdSlice->add_option("--centers", sliceCenters, "Band centers")->delimiter(',');
  cmdSlice->add_option("--halfwidth", sliceHalfwidth, "Band half-width");
  cmdSlice->add_option("--out-prefix", slicePrefix, "Output file prefix")
      ->required();

  // --- stats -----------------------------------------------------------------
  auto* cmdStats = app.add_subcommand("stats", "Residual summary of a scan CSV");
  std::string statsIn;
  double statsThreshold = 0.01;
  cmdStats->add_option("--in", statsIn, "Scan CSV input")->required();
  cmdStats->add_option("--threshold", statsThreshold,
                       "|residual| threshold for the below-fraction");

  CLI11_PARSE(app, argc, argv);

  if (cmdInv->parsed()) {
    SpectrumPtr spec = spectrum_from_flags(invFlags.file, invFlags.lambdas);
    char* out = nullptr;
    check(nlm_invariants_json(spec.get(), &out), "invariants");
    print_json(take_string(out));
    return 0;
  }

  if (cmdFormula->parsed() || cmdOracle->parsed()) {
    const bool closed = cmdFormula->parsed();
    CommonSpectrumFlags& flags = closed ? formulaFlags : oracleFlags;
    SpectrumPtr spec = spectrum_from_flags(flags.file, flags.lambdas);
    char* out = nullptr;
    check(nlm_schmidt_nlm_json(
              spec.get(), closed ? NLM_METHOD_CLOSED_FORM : NLM_METHOD_ORACLE,
              &out),
          closed ? "nlm-formula" : "nlm-oracle");
    print_json(take_string(out));
    return 0;
  }

  if (cmdOpt->parsed()) {
    if (optState.empty() == optLambdas.empty()) {
      std::fprintf(stderr, "error: give exactly one of --state/--lambda\n");
      return 2;
    }
    StatePtr state;
    if (!optState.empty()) {
      nlm_state* raw = nullptr;
      check(nlm_state_load_json(optState.c_str(), &raw), optState);
      state.reset(raw);
    } else {
      nlm_spectrum* spec = nullptr;
      double deviation = 0.0;
      check(nlm_spectrum_create(static_cast<int>(optLambdas.size()),
                                optLambdas.data(), 1, &deviation, &spec),
            "--lambda");
      SpectrumPtr specPtr(spec);
      warn_if_unnormalized(deviation);
      nlm_state* raw = nullptr;
      check(nlm_state_from_spectrum(specPtr.get(), &raw), "state");
      state.reset(raw);
    }
    if (haveScramble) {
      nlm_state* scrambled = nullptr;
      check(nlm_state_scramble(state.get(), scrambleSeed, &scrambled),
            "--scramble-seed");
      state.reset(scrambled);
    }

    nlm_optimizer_options opts;
    nlm_optimizer_options_init(&opts);
    opts.n_starts = optStarts;
    opts.max_iter = optMaxIter;
    opts.seed = optSeed;
    opts.init_scale = optInitScale;
    opts.gradient_mode = gradient_mode_from_flag(optGrad);

    char* optJson = nullptr;
    check(nlm_optimize_json(state.get(), &opts, &optJson), "nlm-optimize");
    json combined{{"optimize", json::parse(take_string(optJson))}};

    // The Schmidt spectrum is recoverable from any input, so the formula
    // value and the residual are always reported alongside.
    nlm_spectrum* spec = nullptr;
    check(nlm_state_spectrum(state.get(), &spec), "schmidt spectrum");
    SpectrumPtr specPtr(spec);
    char* formulaJson = nullptr;
    const nlm_status formulaStatus =
        nlm_schmidt_nlm_json(specPtr.get(), NLM_METHOD_CLOSED_FORM, &formulaJson);
    if (formulaStatus == NLM_OK) {
      const json formula = json::parse(take_string(formulaJson));
      combined["m_formula"] = formula.at("value");
      combined["residual"] = formula.at("value").get<double>() -
                             combined["optimize"].at("min_value").get<double>();
    }
    print_json(combined.dump(2));
    return 0;
  }

  if (cmdScan->parsed()) {
    if (scanSamples < 0) scanSamples = default_samples(scanDim);
    if (scanStarts < 0) scanStarts = default_starts(scanDim);
    nlm_optimizer_options opts;
    nlm_optimizer_options_init(&opts);
    opts.n_starts = scanStarts;
    opts.max_iter = scanMaxIter;
    opts.seed = scanSeed;
    opts.init_scale = scanInitScale;
    opts.gradient_mode = gradient_mode_from_flag(scanGrad);
    check(nlm_scan_csv(scanDim, scanSamples, &opts, scanOut.c_str()), "scan");
    std::fprintf(stderr, "scan: wrote %s (%d samples, %d starts)\n",
                 scanOut.c_str(), scanSamples, scanStarts);
    return 0;
  }

  if (cmdGrid3->parsed()) {
    check(nlm_grid3_csv(grid3Res, grid3Out.c_str()), "grid3");
    std::fprintf(stderr, "grid3: wrote %s\n", grid3Out.c_str());
    return 0;
  }

  if (cmdGrid5->parsed()) {
    check(nlm_grid5_slice_csv(grid5Res, grid5Out.c_str()), "grid5-slice");
    std::fprintf(stderr, "grid5-slice: wrote %s\n", grid5Out.c_str());
    return 0;
  }

  if (cmdSlice->parsed()) {
    char* report = nullptr;
    check(nlm_slice4_csv(sliceIn.c_str(), sliceCenters.data(),
                         static_cast<int>(sliceCenters.size()), sliceHalfwidth,
                         slicePrefix.c_str(), &report),
          "slice4");
    const std::string reportText = take_string(report);
    const json j = json::parse(reportText);
    for (std::size_t i = 0; i < j.at("counts").size(); ++i) {
      if (j.at("counts").at(i).get<std::size_t>() == 0) {
        std::fprintf(stderr, "warning: band around %g is empty\n",
                     sliceCenters[i]);
      }
    }
    print_json(reportText);
    return 0;
  }

  if (cmdStats->parsed()) {
    char* out = nullptr;
    check(nlm_scan_stats_json(statsIn.c_str(), statsThreshold, &out), "stats");
    print_json(take_string(out));
    return 0;
  }

  return 2;  // unreachable: a subcommand is required
}
