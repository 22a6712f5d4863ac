// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nlm/closed_form.hpp"
#include "nlm/rng.hpp"
#include "nlm/scan.hpp"
#include "nlm/state.hpp"

namespace {

namespace fs = std::filesystem;

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

nlm::ScanConfig tiny_config() {
  nlm::ScanConfig cfg;
  cfg.nStarts = 5;
  cfg.maxIter = 150;
  cfg.seed = 41;
  return cfg;
}

}  // namespace

TEST_CASE("sample_spectrum draws unit-norm nonnegative coefficients") {
  nlm::RandomStream rs(51);
  bool sawUnsorted = false;
  for (int trial = 0; trial < 100; ++trial) {
    auto raw = nlm::sample_spectrum_raw(4, rs);
    REQUIRE(raw.size() == 4);
    double sum = 0.0;
    for (double l : raw) {
      CHECK(l >= 0.0);
      sum += l * l;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    if (!std::is_sorted(raw.rbegin(), raw.rend())) sawUnsorted = true;
  }
  CHECK(sawUnsorted);  // the raw draw is reported in draw order, unsorted

  // the spectrum variant consumes the same stream values, sorted
  nlm::RandomStream a(52), b(52);
  auto raw = nlm::sample_spectrum_raw(3, a);
  auto spec = nlm::sample_spectrum(3, b);
  std::sort(raw.begin(), raw.end(), std::greater<>());
  for (int i = 0; i < 3; ++i)
    CHECK(spec[i] == doctest::Approx(raw[i]).epsilon(1e-15));
}

TEST_CASE("run_scan records are deterministic and self-consistent") {
  auto cfg = tiny_config();
  auto records = nlm::run_scan(3, 4, cfg);
  REQUIRE(records.size() == 4);

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    CHECK(r.dim == 3);
    REQUIRE(r.lambdas.size() == 3);
    double sum = 0.0;
    for (double l : r.lambdas) sum += l * l;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.nStarts == cfg.nStarts);
    CHECK(r.maxIter == cfg.maxIter);
    CHECK(r.convergedFraction >= 0.0);
    CHECK(r.convergedFraction <= 1.0);
    CHECK(r.seed == (cfg.seed ^ nlm::splitmix64(i)));
    CHECK(r.residual ==
          doctest::Approx(r.mFormula - r.mNumerical).epsilon(1e-15));
    // the stored formula value is reproducible from the stored lambdas
    auto again = nlm::nlm_schmidt(nlm::SchmidtSpectrum(3, r.lambdas));
    CHECK(r.mFormula == doctest::Approx(again.value).epsilon(1e-12));
  }

  // determinism and prefix stability: a longer scan starts with the same
  // records, so partial runs agree with full ones
  auto again = nlm::run_scan(3, 4, cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].mNumerical == records[i].mNumerical);
    CHECK(again[i].lambdas == records[i].lambdas);
  }
  auto longer = nlm::run_scan(3, 6, cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(longer[i].lambdas == records[i].lambdas);
    CHECK(longer[i].mNumerical == records[i].mNumerical);
  }
}

TEST_CASE("run_scan validates its arguments") {
  CHECK_THROWS_AS(nlm::run_scan(7, 2, tiny_config()), std::invalid_argument);
  CHECK_THROWS_AS(nlm::run_scan(3, 0, tiny_config()), std::invalid_argument);
}

TEST_CASE("residual_stats summarises hand-built records") {
  std::vector<nlm::ScanRecord> rec(4);
  rec[0].residual = 0.02;
  rec[1].residual = -0.005;
  rec[2].residual = 0.001;
  rec[3].residual = std::nan("");  // ignored
  auto st = nlm::residual_stats(rec, 0.01);
  CHECK(st.count == 3);
  const double mean = (0.02 + 0.005 + 0.001) / 3.0;
  CHECK(st.meanAbs == doctest::Approx(mean).epsilon(1e-15));
  const double var = ((0.02 - mean) * (0.02 - mean) +
                      (0.005 - mean) * (0.005 - mean) +
                      (0.001 - mean) * (0.001 - mean)) /
                     3.0;
  CHECK(st.stdAbs == doctest::Approx(std::sqrt(var)).epsilon(1e-13));
  CHECK(st.fractionBelow == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(st.maxResidual == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(st.negativeCount == 1);

  std::vector<nlm::ScanRecord> empty(1);
  empty[0].residual = std::nan("");
  CHECK_THROWS_AS(nlm::residual_stats(empty), std::invalid_argument);
}

TEST_CASE("qutrit grid: size, anchors, and permutation symmetry") {
  const int res = 12;
  auto grid = nlm::simplex_grid_qutrit(res);
  REQUIRE(grid.size() == std::size_t((res + 1) * (res + 2)) / 2);

  // lattice lookup keyed by integer coordinates
  std::map<std::pair<int, int>, double> byIndex;
  for (const auto& g : grid) {
    REQUIRE(g.probs.size() == 3);
    double sum = 0.0;
    for (double p : g.probs) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // the plotted coordinates are the standard simplex embedding
    CHECK(g.x == doctest::Approx(g.probs[1] + g.probs[2] / 2.0).epsilon(1e-12));
    CHECK(g.y ==
          doctest::Approx(std::sqrt(3.0) / 2.0 * g.probs[2]).epsilon(1e-12));
    const int i = int(std::lround(g.probs[0] * res));
    const int j = int(std::lround(g.probs[1] * res));
    byIndex[{i, j}] = g.m;
  }

  // anchors: vertices at zero, centroid at zero, edge midpoint at ln 2
  CHECK(std::abs(byIndex.at({res, 0})) < 1e-12);
  CHECK(std::abs(byIndex.at({0, res})) < 1e-12);
  CHECK(std::abs(byIndex.at({0, 0})) < 1e-12);
  CHECK(byIndex.at({res / 3, res / 3}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(byIndex.at({res / 2, res / 2}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // permutation symmetry via lattice lookup
  for (const auto& g : grid) {
    const int i = int(std::lround(g.probs[0] * res));
    const int j = int(std::lround(g.probs[1] * res));
    const int k = res - i - j;
    const double m = byIndex.at({i, j});
    for (auto [a, b] : {std::pair{j, i}, std::pair{j, k}, std::pair{k, i},
                        std::pair{k, j}, std::pair{i, k}}) {
      CHECK(std::abs(byIndex.at({a, b}) - m) < 1e-12);
    }
  }

  CHECK_THROWS_AS(nlm::simplex_grid_qutrit(1), std::invalid_argument);
}

TEST_CASE("ququint slice grid anchors") {
  const int res = 12;
  auto grid = nlm::ququint_slice_grid(res);
  REQUIRE(grid.size() == std::size_t((res + 1) * (res + 2)) / 2);
  for (const auto& g : grid) {
    REQUIRE(g.probs.size() == 5);
    CHECK(g.probs[3] == 0.0);
    CHECK(g.probs[4] == 0.0);
  }
  // centroid of the slice: ln(27/11); vertex: zero
  auto centroid = std::find_if(grid.begin(), grid.end(), [&](const auto& g) {
    return std::abs(g.probs[0] - 1.0 / 3.0) < 1e-9 &&
           std::abs(g.probs[1] - 1.0 / 3.0) < 1e-9;
  });
  REQUIRE(centroid != grid.end());
  CHECK(centroid->m == doctest::Approx(std::log(27.0 / 11.0)).epsilon(1e-12));
  auto vertex = std::find_if(grid.begin(), grid.end(), [&](const auto& g) {
    return std::abs(g.probs[0] - 1.0) < 1e-9;
  });
  REQUIRE(vertex != grid.end());
  CHECK(std::abs(vertex->m) < 1e-12);
}

TEST_CASE("band slices select, renormalise, and report empty bands") {
  auto make = [](double l3sq) {
    nlm::ScanRecord r;
    r.dim = 4;
    const double rest = 1.0 - l3sq;
    r.lambdas = {std::sqrt(rest * 0.5), std::sqrt(rest * 0.3),
                 std::sqrt(rest * 0.2), std::sqrt(l3sq)};
    r.residual = 0.001;
    return r;
  };
  std::vector<nlm::ScanRecord> recs = {make(0.21), make(0.25), make(0.02)};
  auto slices = nlm::n4_band_slices(recs, {0.2, 0.9}, 0.02);
  REQUIRE(slices.size() == 2);
  REQUIRE(slices[0].size() == 1);  // 0.21 in, 0.25 and 0.02 out
  CHECK(slices[1].empty());        // nothing near 0.9

  const auto& pt = slices[0][0];
  CHECK(pt.lambda3Sq == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(pt.q0 + pt.q1 + pt.q2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pt.q0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pt.residual == doctest::Approx(0.001));

  std::vector<nlm::ScanRecord> wrongDim(1);
  wrongDim[0].dim = 3;
  wrongDim[0].lambdas = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(nlm::n4_band_slices(wrongDim), std::invalid_argument);
}

TEST_CASE("scan CSV: schema, byte determinism, and round trip") {
  auto cfg = tiny_config();
  auto records = nlm::run_scan(2, 3, cfg);
  const std::string p1 = temp_path("nlm_test_scan_a.csv");
  const std::string p2 = temp_path("nlm_test_scan_b.csv");
  nlm::write_scan_csv(p1, records);
  nlm::write_scan_csv(p2, records);
  const std::string bytes = slurp(p1);
  CHECK(bytes == slurp(p2));
  CHECK(bytes.rfind("dim,lambda_0,lambda_1,m_formula,m_numerical,residual,"
                    "n_starts,max_iter,converged_fraction,seed\n",
                    0) == 0);

  auto back = nlm::read_scan_csv(p1);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].dim == records[i].dim);
    CHECK(back[i].lambdas == records[i].lambdas);  // %.17g round-trips exactly
    CHECK(back[i].mFormula == records[i].mFormula);
    CHECK(back[i].mNumerical == records[i].mNumerical);
    CHECK(back[i].residual == records[i].residual);
    CHECK(back[i].seed == records[i].seed);
  }
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("grid and band-slice CSV headers") {
  const std::string gp = temp_path("nlm_test_grid.csv");
  nlm::write_grid_csv(gp, nlm::simplex_grid_qutrit(4));
  CHECK(slurp(gp).rfind("x,y,p0,p1,p2,m\n", 0) == 0);
  nlm::write_grid_csv(gp, nlm::ququint_slice_grid(4));
  CHECK(slurp(gp).rfind("x,y,p0,p1,p2,p3,p4,m\n", 0) == 0);

  nlm::ScanRecord r;
  r.dim = 4;
  r.lambdas = {0.7, 0.5, std::sqrt(1.0 - 0.49 - 0.25 - 0.04), 0.2};
  r.residual = 0.0;
  auto slices = nlm::n4_band_slices({r}, {0.04}, 0.02);
  nlm::write_band_slice_csv(gp, slices[0]);
  CHECK(slurp(gp).rfind("x,y,q0,q1,q2,lambda3_sq,residual\n", 0) == 0);
  std::remove(gp.c_str());
}

TEST_CASE("max searches return the landscape maxima") {
  auto q3 = nlm::max_search_qutrit();
  CHECK(q3.m == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  auto q5 = nlm::max_search_ququint_slice();
  CHECK(q5.m == doctest::Approx(std::log(27.0 / 11.0)).epsilon(1e-4));
}
