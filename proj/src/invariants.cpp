// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlm/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlm {

namespace {

double product_for_exponents(std::span<const double> lambdas, const std::vector<int>& exp) {
  double prod = 1.0;
  for (std::size_t j = 0; j < exp.size(); ++j) {
    switch (exp[j]) {
      case 0: break;
      case 1: prod *= lambdas[j]; break;
      case 2: prod *= lambdas[j] * lambdas[j]; break;
      default: prod *= std::pow(lambdas[j], exp[j]); break;
    }
  }
  return prod;
}

}  // namespace

ExponentPattern::ExponentPattern(std::vector<int> exponents)
    : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("ExponentPattern: exponents must be non-negative");
  }
}

std::vector<int> ExponentPattern::padded(int dim) const {
  if (static_cast<int>(exponents_.size()) > dim) {
    throw std::invalid_argument("ExponentPattern: pattern longer than spectrum dimension");
  }
  std::vector<int> out(dim, 0);
  std::copy(exponents_.begin(), exponents_.end(), out.begin());
  return out;
}

double power_sum(std::span<const double> lambdas, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("power_sum: n must be positive");
  double s = 0.0;
  for (double l : lambdas) s += std::pow(l, 2.0 * n);
  return s;
}

double power_sum(const SchmidtSpectrum& spectrum, double n) {
  return power_sum(std::span<const double>(spectrum.lambdas()), n);
}

double det_invariant(std::span<const double> lambdas) {
  double prod = 1.0;
  for (double l : lambdas) prod *= l * l;
  return prod;
}

double det_invariant(const SchmidtSpectrum& spectrum) {
  return det_invariant(std::span<const double>(spectrum.lambdas()));
}

double monomial_sym(std::span<const double> lambdas, const ExponentPattern& pattern) {
  const int n = static_cast<int>(lambdas.size());
  std::vector<int> exp = pattern.padded(n);
  // std::next_permutation over the sorted exponent vector enumerates each
  // distinct rearrangement exactly once.
  std::sort(exp.begin(), exp.end());
  double total = 0.0;
  do {
    total += product_for_exponents(lambdas, exp);
  } while (std::next_permutation(exp.begin(), exp.end()));
  return total;
}

double monomial_sym(const SchmidtSpectrum& spectrum, const ExponentPattern& pattern) {
  return monomial_sym(std::span<const double>(spectrum.lambdas()), pattern);
}

double cyclic_sum(std::span<const double> lambdas, const ExponentPattern& pattern) {
  const int n = static_cast<int>(lambdas.size());
  const std::vector<int> exp = pattern.padded(n);
  double total = 0.0;
  for (int shift = 0; shift < n; ++shift) {
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      const int e = exp[j];
      if (e == 0) continue;
      const double l = lambdas[(j + shift) % n];
      prod *= (e == 1) ? l : (e == 2 ? l * l : std::pow(l, e));
    }
    total += prod;
  }
  return total;
}

double cyclic_sum(const SchmidtSpectrum& spectrum, const ExponentPattern& pattern) {
  return cyclic_sum(std::span<const double>(spectrum.lambdas()), pattern);
}

double anti_flatness(const SchmidtSpectrum& spectrum) {
  const double p2 = power_sum(spectrum, 2.0);
  return power_sum(spectrum, 3.0) - p2 * p2;
}

SpectrumInvariants compute_invariants(const SchmidtSpectrum& spectrum) {
  SpectrumInvariants inv;
  inv.p[0.5] = power_sum(spectrum, 0.5);
  inv.p[2.0] = power_sum(spectrum, 2.0);
  inv.p[3.0] = power_sum(spectrum, 3.0);
  inv.p[4.0] = power_sum(spectrum, 4.0);
  inv.e_n = det_invariant(spectrum);
  inv.anti_flatness = inv.p[3.0] - inv.p[2.0] * inv.p[2.0];
  return inv;
}

}  // namespace nlm
