// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nlm/closed_form.hpp"
#include "nlm/rng.hpp"
#include "nlm/scan.hpp"
#include "nlm/state.hpp"

namespace {

// Literal quadruple sum, the definitional form of F_N. Quadratic-in-nothing
// clever: four nested index loops, all arithmetic mod N.
double f_literal(const std::vector<double>& l) {
  const int n = static_cast<int>(l.size());
  auto at = [&](int i) { return l[((i % n) + n) % n]; };
  double total = 0.0;
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int p = 0; p < n; ++p)
          total += at(j) * at(j + a) * at(k) * at(k + a) * at(p) * at(p + a) *
                   at(j - k + p) * at(j - k + p + a);
  return total;
}

std::vector<double> random_lambdas(int dim, nlm::RandomStream& rs) {
  return nlm::sample_spectrum_raw(dim, rs);
}

}  // namespace

TEST_CASE("f_oracle equals the literal quadruple sum") {
  nlm::RandomStream rs(21);
  for (int dim = 2; dim <= 6; ++dim) {
    for (int trial = 0; trial < 50; ++trial) {
      auto l = random_lambdas(dim, rs);
      CHECK(nlm::f_oracle(l) == doctest::Approx(f_literal(l)).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed form equals the oracle on random spectra") {
  nlm::RandomStream rs(22);
  for (int dim = 2; dim <= 5; ++dim) {
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      auto l = random_lambdas(dim, rs);
      worst = std::max(worst, std::abs(nlm::f_closed(l) - nlm::f_oracle(l)));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("closed form rejects unsupported dimensions") {
  std::vector<double> six(6, 1.0 / std::sqrt(6.0));
  CHECK_THROWS_AS(nlm::f_closed(six), std::invalid_argument);
  CHECK_NOTHROW(nlm::f_oracle(six));
}

TEST_CASE("F is order-insensitive below four coefficients, sensitive above") {
  nlm::RandomStream rs(23);
  auto l3 = random_lambdas(3, rs);
  auto p3 = l3;
  std::swap(p3[0], p3[2]);
  CHECK(nlm::f_oracle(l3) == doctest::Approx(nlm::f_oracle(p3)).epsilon(1e-13));

  // at N = 4 cyclic shifts and reflections preserve F ...
  std::vector<double> l4 = {0.7, 0.5, std::sqrt(1.0 - 0.49 - 0.25 - 0.04), 0.2};
  auto refl = l4;
  std::swap(refl[1], refl[3]);  // reflection of the 4-cycle
  CHECK(nlm::f_oracle(l4) == doctest::Approx(nlm::f_oracle(refl)).epsilon(1e-13));
  // ... but a transposition outside the dihedral class changes F generically
  auto p4 = l4;
  std::swap(p4[0], p4[1]);
  CHECK(std::abs(nlm::f_oracle(l4) - nlm::f_oracle(p4)) > 1e-6);
}

TEST_CASE("known F values") {
  // product state: only the all-zero index term survives, F = 1
  CHECK(nlm::f_oracle(std::vector<double>{1.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nlm::f_oracle(std::vector<double>{1.0, 0.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // flat spectra: F = 1
  for (int dim : {2, 3, 4, 5}) {
    std::vector<double> flat(dim, 1.0 / std::sqrt(double(dim)));
    CHECK(nlm::f_closed(flat) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(nlm::f_oracle(flat) == doctest::Approx(1.0).epsilon(1e-13));
  }
  // (1/sqrt2, 1/sqrt2, 0): F = 1/2
  const double r = std::sqrt(0.5);
  CHECK(nlm::f_closed(std::vector<double>{r, r, 0.0}) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // probabilities (1/3,1/3,1/3,0,0): F = 11/27
  const double t = std::sqrt(1.0 / 3.0);
  CHECK(nlm::f_closed(std::vector<double>{t, t, t, 0.0, 0.0}) ==
        doctest::Approx(11.0 / 27.0).epsilon(1e-13));
}

TEST_CASE("nlm_schmidt anchor values") {
  const double r = std::sqrt(0.5);
  for (auto method : {nlm::NlmMethod::closedForm, nlm::NlmMethod::oracle}) {
    auto res = nlm::nlm_schmidt(nlm::SchmidtSpectrum(3, {r, r, 0.0}), method);
    CHECK(res.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(res.fOfLambda == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.method == method);
  }
  // qubit spectrum with e2 = 1/8: value ln(4/3)
  auto res2 = nlm::nlm_schmidt(
      nlm::SchmidtSpectrum(2, {std::cos(M_PI / 8.0), std::sin(M_PI / 8.0)}));
  CHECK(res2.value == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));
  // the N=5 slice centroid: value ln(27/11)
  const double t = std::sqrt(1.0 / 3.0);
  auto res5 =
      nlm::nlm_schmidt(nlm::SchmidtSpectrum(5, {t, t, t, 0.0, 0.0}));
  CHECK(res5.value == doctest::Approx(std::log(27.0 / 11.0)).epsilon(1e-12));
  // vertices and flat points sit at zero
  for (int dim : {2, 3, 4, 5}) {
    std::vector<double> vertex(dim, 0.0);
    vertex[0] = 1.0;
    CHECK(std::abs(nlm::nlm_schmidt(nlm::SchmidtSpectrum(dim, vertex)).value) <
          1e-12);
    std::vector<double> flat(dim, 1.0 / std::sqrt(double(dim)));
    CHECK(std::abs(nlm::nlm_schmidt(nlm::SchmidtSpectrum(dim, flat)).value) <
          1e-12);
  }
}

TEST_CASE("nlm_schmidt maximises over orderings and reports the argmax") {
  nlm::RandomStream rs(24);
  for (int dim : {4, 5}) {
    for (int trial = 0; trial < 20; ++trial) {
      auto spec = nlm::sample_spectrum(dim, rs);
      auto res = nlm::nlm_schmidt(spec, nlm::NlmMethod::oracle);

      // argmax is a permutation of 0..N-1 anchored at 0
      REQUIRE(static_cast<int>(res.argmaxOrdering.size()) == dim);
      CHECK(res.argmaxOrdering[0] == 0);
      auto sorted = res.argmaxOrdering;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < dim; ++i) CHECK(sorted[i] == i);

      // the reported ordering reproduces the reported maximum
      std::vector<double> arranged(dim);
      for (int i = 0; i < dim; ++i)
        arranged[i] = spec[res.argmaxOrdering[i]];
      CHECK(nlm::f_oracle(arranged) ==
            doctest::Approx(res.fOfLambda).epsilon(1e-12));
      CHECK(res.value ==
            doctest::Approx(-std::log(res.fOfLambda)).epsilon(1e-12));

      // no ordering beats it (exhaustive check over all permutations)
      std::vector<int> perm(dim);
      std::iota(perm.begin(), perm.end(), 0);
      double best = 0.0;
      do {
        std::vector<double> cand(dim);
        for (int i = 0; i < dim; ++i) cand[i] = spec[perm[i]];
        best = std::max(best, nlm::f_oracle(cand));
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(res.fOfLambda == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("nlm_schmidt is permutation invariant in its input") {
  nlm::RandomStream rs(25);
  auto raw = nlm::sample_spectrum_raw(4, rs);
  auto shuffled = raw;
  std::swap(shuffled[0], shuffled[3]);
  std::swap(shuffled[1], shuffled[2]);
  auto a = nlm::nlm_schmidt(nlm::SchmidtSpectrum(4, raw));
  auto b = nlm::nlm_schmidt(nlm::SchmidtSpectrum(4, shuffled));
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
  CHECK(a.argmaxOrdering == b.argmaxOrdering);
}

TEST_CASE("nlm_schmidt resolves ties lexicographically") {
  // flat spectrum: every ordering ties, so the identity must be reported
  std::vector<double> flat(4, 0.5);
  auto res = nlm::nlm_schmidt(nlm::SchmidtSpectrum(4, flat));
  CHECK(res.argmaxOrdering == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("N=4 results carry the reference-expression caveat") {
  nlm::RandomStream rs(26);
  auto res4 = nlm::nlm_schmidt(nlm::sample_spectrum(4, rs));
  CHECK(!res4.note.empty());
  auto res3 = nlm::nlm_schmidt(nlm::sample_spectrum(3, rs));
  CHECK(res3.note.empty());
}

TEST_CASE("nlm_linear") {
  CHECK(nlm::nlm_linear(0.0) == doctest::Approx(0.0));
  CHECK(nlm::nlm_linear(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(nlm::nlm_linear(-1e-12) >= -2e-12);  // rounding slack near zero
  CHECK_THROWS_AS(nlm::nlm_linear(-1e-6), std::invalid_argument);
}
