// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "nlm/state.hpp"

// File formats:
//   state file (JSON):    { "dim": N, "amplitudes": [[[re, im], ...], ...] }
//                         row-major over j then k;
//   spectrum file (JSON): { "dim": N, "lambdas": [...] }
//                         Schmidt coefficients (not probabilities).

namespace nlm {

struct RawSpectrum {
  int dim = 0;
  std::vector<double> lambdas;  // as stored in the file, not validated
};

PureBipartiteState load_state_json(const std::string& path);
void save_state_json(const PureBipartiteState& state, const std::string& path);

// Loads and validates against the spectrum invariants.
SchmidtSpectrum load_spectrum_json(const std::string& path);
// Loads without validation, for callers that normalise themselves.
RawSpectrum load_spectrum_json_raw(const std::string& path);
void save_spectrum_json(const SchmidtSpectrum& spectrum, const std::string& path);

// Scales the entries to unit Euclidean norm and reports how far the input
// was from normalised (|sum lambda^2 - 1|) via deviation, when non-null.
// Rejects negative entries and all-zero input.
SchmidtSpectrum make_normalized_spectrum(int dim, std::vector<double> lambdas,
                                         double* deviation = nullptr);

// Fixed 17-significant-digit decimal formatting; identical doubles always
// produce identical bytes, and the value round-trips exactly.
std::string format_full(double value);

}  // namespace nlm
