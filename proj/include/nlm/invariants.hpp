// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <vector>

#include "nlm/state.hpp"

// Local-unitary invariants of a Schmidt spectrum. All exponents act on the
// Schmidt coefficients lambda_i themselves (not on the probabilities
// lambda_i^2), so e.g. p_n = sum_i lambda_i^{2n} and s_2 = p_1 = 1.

namespace nlm {

// Exponent vector for the symmetric / cyclic sums, right-padded with zeros to
// the spectrum length. Labels such as "242" for N = 5 mean (2,4,2,0,0).
class ExponentPattern {
 public:
  explicit ExponentPattern(std::vector<int> exponents);

  // Padded copy of length dim; rejects patterns longer than dim or with
  // negative entries.
  std::vector<int> padded(int dim) const;
  const std::vector<int>& exponents() const { return exponents_; }

 private:
  std::vector<int> exponents_;
};

struct SpectrumInvariants {
  std::map<double, double> p;  // n -> p_n, keys {0.5, 2, 3, 4}
  double e_n = 0.0;
  double anti_flatness = 0.0;
};

// p_n = sum_i lambda_i^{2n} = tr(rho_X^n). n may be fractional (n = 1/2 gives
// tr sqrt(rho_X) = sum lambda_i); requires n > 0.
double power_sum(const SchmidtSpectrum& spectrum, double n);
double power_sum(std::span<const double> lambdas, double n);

// e_N = det rho_X = prod_i lambda_i^2.
double det_invariant(const SchmidtSpectrum& spectrum);
double det_invariant(std::span<const double> lambdas);

// Monomial symmetric sum: sum over the distinct rearrangements of the padded
// exponent vector of prod_j lambda_j^{a_j}. With this reading s_{2n} = p_n.
double monomial_sym(const SchmidtSpectrum& spectrum, const ExponentPattern& pattern);
double monomial_sym(std::span<const double> lambdas, const ExponentPattern& pattern);

// Cyclic sum: all N shifts of the padded exponent vector, no deduplication,
// so c_{2...2} = N e_N. Order-sensitive for patterns without full symmetry.
double cyclic_sum(const SchmidtSpectrum& spectrum, const ExponentPattern& pattern);
double cyclic_sum(std::span<const double> lambdas, const ExponentPattern& pattern);

// Anti-flatness of the entanglement spectrum, p_3 - p_2^2. Zero exactly when
// the spectrum is flat on its support.
double anti_flatness(const SchmidtSpectrum& spectrum);

// Bundle used by the CLI `invariants` subcommand.
SpectrumInvariants compute_invariants(const SchmidtSpectrum& spectrum);

}  // namespace nlm
