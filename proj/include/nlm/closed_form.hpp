// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlm/state.hpp"

// F_N(lambda) for Schmidt-aligned states and the non-local magic obtained by
// maximising F_N over orderings of the Schmidt coefficients:
//
//   M_N = -ln( max_{orderings} F_N(lambda') ).
//
// Two evaluators are provided: a closed-form expression in spectrum
// invariants (N = 2..5 only) and a general quadruple-sum oracle.

namespace nlm {

enum class NlmMethod { closedForm, oracle };

const char* method_name(NlmMethod method);

struct NlmResult {
  double value = 0.0;        // nats, >= 0 up to rounding
  double fOfLambda = 1.0;    // maximised F_N, in (0, 1 + 1e-12]
  std::vector<int> argmaxOrdering;  // indices into the sorted spectrum
  NlmMethod method = NlmMethod::closedForm;
  std::string note;          // non-empty only when the formula carries a caveat
};

// Quadruple-sum evaluation of F_N at one fixed ordering (order-sensitive for
// N >= 4):
//   F_N = sum_a sum_{j,k,p} l_j l_{j+a} l_k l_{k+a} l_p l_{p+a}
//                           l_{j-k+p} l_{j-k+p+a},  indices mod N.
double f_oracle(std::span<const double> lambdas);
double f_oracle(const SchmidtSpectrum& spectrum);

// Closed-form evaluation of F_N at one fixed ordering. Supports N = 2..5
// only; other dimensions are rejected. The N = 4 expression is a reference
// expression, not a certified global minimum (see nlm_schmidt note field).
double f_closed(std::span<const double> lambdas);
double f_closed(const SchmidtSpectrum& spectrum);

// Non-local magic of the Schmidt spectrum: maximises F_N over one
// representative per cyclic class of orderings (first entry anchored,
// (N-1)! candidates) and returns -ln of the maximum. Among orderings tied
// within 1e-12 of the maximum, reports the lexicographically smallest one,
// so the output is reproducible and permutation-invariant in the input.
NlmResult nlm_schmidt(const SchmidtSpectrum& spectrum,
                      NlmMethod method = NlmMethod::closedForm);

// Linearised magic: M_lin = 1 - exp(-M). Accepts M >= -1e-9 (tiny negative
// values arise from rounding when F is numerically 1) and rejects below.
double nlm_linear(double value);

}  // namespace nlm
