// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlm/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nlm/invariants.hpp"

namespace nlm {

namespace {

constexpr double kTieTol = 1e-12;

// Caveat attached to the N = 4 closed form: it reproduces the aligned-state
// value but is not certified to be the global local-unitary minimum.
constexpr const char* kN4Note =
    "reference expression; not a certified global minimum";

double f_closed_n2(std::span<const double> l) {
  const double e2 = det_invariant(l);
  return 1.0 - 4.0 * e2 + 16.0 * e2 * e2;
}

double f_closed_n3(std::span<const double> l) {
  const double p2 = power_sum(l, 2.0);
  const double e3 = det_invariant(l);
  const double s1 = l[0] + l[1] + l[2];
  return 1.0 - 2.0 * p2 + 2.0 * p2 * p2 + 4.0 * e3 * s1 * s1;
}

double f_closed_n4(std::span<const double> l) {
  const double p2 = power_sum(l, 2.0);
  const double p4 = power_sum(l, 4.0);
  const double e4 = det_invariant(l);
  const double c404 = cyclic_sum(l, ExponentPattern({4, 0, 4}));
  const double c242 = cyclic_sum(l, ExponentPattern({2, 4, 2}));
  const double c1331 = cyclic_sum(l, ExponentPattern({1, 3, 3, 1}));
  return 3.0 * p2 * p2 - 2.0 * p4 + 120.0 * e4 + 4.0 * c404 + 12.0 * c242 +
         8.0 * c1331;
}

double f_closed_n5(std::span<const double> l) {
  const double p2 = power_sum(l, 2.0);
  const double p4 = power_sum(l, 4.0);
  // sqrt(e_5) as the plain product of the (non-negative) coefficients.
  const double e5h = l[0] * l[1] * l[2] * l[3] * l[4];
  const double s111 = monomial_sym(l, ExponentPattern({1, 1, 1}));
  const double c2222 = cyclic_sum(l, ExponentPattern({2, 2, 2, 2}));
  const double c242 = cyclic_sum(l, ExponentPattern({2, 4, 2}));
  const double c2204 = cyclic_sum(l, ExponentPattern({2, 2, 0, 4}));
  const double c1331 = cyclic_sum(l, ExponentPattern({1, 3, 3, 1}));
  const double c3113 = cyclic_sum(l, ExponentPattern({3, 1, 1, 3}));
  return 3.0 * p2 * p2 - 2.0 * p4 + 24.0 * e5h * s111 + 24.0 * c2222 +
         12.0 * c242 + 12.0 * c2204 + 8.0 * c1331 + 8.0 * c3113;
}

using Evaluator = double (*)(std::span<const double>);

Evaluator pick_evaluator(NlmMethod method, int n) {
  if (method == NlmMethod::oracle) return &f_oracle;
  switch (n) {
    case 2: return &f_closed_n2;
    case 3: return &f_closed_n3;
    case 4: return &f_closed_n4;
    case 5: return &f_closed_n5;
    default:
      throw std::invalid_argument(
          "f_closed: closed-form rows exist only for dimensions 2, 3, 4, 5");
  }
}

}  // namespace

const char* method_name(NlmMethod method) {
  return method == NlmMethod::closedForm ? "closedForm" : "oracle";
}

double f_oracle(std::span<const double> lambdas) {
  const int n = static_cast<int>(lambdas.size());
  if (n < 2) throw std::invalid_argument("f_oracle: need at least 2 coefficients");
  // With q_i = l_i l_{i+a}, the triple sum over (j, k, p) groups by
  // d = p - k into sum_d (sum_j q_j q_{j+d})^2.
  std::vector<double> q(n);
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) q[i] = lambdas[i] * lambdas[(i + a) % n];
    for (int d = 0; d < n; ++d) {
      double r = 0.0;
      for (int j = 0; j < n; ++j) r += q[j] * q[(j + d) % n];
      total += r * r;
    }
  }
  return total;
}

double f_oracle(const SchmidtSpectrum& spectrum) {
  return f_oracle(std::span<const double>(spectrum.lambdas()));
}

double f_closed(std::span<const double> lambdas) {
  const int n = static_cast<int>(lambdas.size());
  return pick_evaluator(NlmMethod::closedForm, n)(lambdas);
}

double f_closed(const SchmidtSpectrum& spectrum) {
  return f_closed(std::span<const double>(spectrum.lambdas()));
}

NlmResult nlm_schmidt(const SchmidtSpectrum& spectrum, NlmMethod method) {
  const int n = spectrum.dim();
  const std::vector<double>& sorted = spectrum.lambdas();
  const Evaluator eval = pick_evaluator(method, n);

  // One representative per cyclic class: anchor index 0 in the first slot and
  // permute the rest. next_permutation walks the candidates in lexicographic
  // order, so the first ordering within kTieTol of the maximum is the
  // lexicographically smallest tie.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> arranged(n);

  double best = -1.0;
  std::vector<int> bestPerm;
  auto visit = [&](bool collect) {
    do {
      for (int i = 0; i < n; ++i) arranged[i] = sorted[perm[i]];
      const double f = eval(arranged);
      if (!collect) {
        best = std::max(best, f);
      } else if (bestPerm.empty() && f >= best - kTieTol) {
        bestPerm = perm;
      }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
  };
  visit(false);
  std::iota(perm.begin(), perm.end(), 0);
  visit(true);

  NlmResult result;
  result.fOfLambda = best;
  result.value = -std::log(best) + 0.0;  // +0.0 folds -ln(1) = -0.0 into +0.0
  result.argmaxOrdering = std::move(bestPerm);
  result.method = method;
  if (method == NlmMethod::closedForm && n == 4) result.note = kN4Note;
  return result;
}

double nlm_linear(double value) {
  if (value < -1e-9) {
    throw std::invalid_argument("nlm_linear: value must be non-negative");
  }
  return 1.0 - std::exp(-value);
}

}  // namespace nlm
