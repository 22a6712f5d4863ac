// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlm/closed_form.hpp"
#include "nlm/lu_opt.hpp"
#include "nlm/rng.hpp"
#include "nlm/state.hpp"

// Validation scans and landscape grids: sample spectra, compare the
// closed-form NLM against the direct local-unitary minimisation, summarise
// residuals, and tabulate the simplex landscapes as CSV data.

namespace nlm {

struct ScanRecord {
  int dim = 0;
  std::vector<double> lambdas;     // as sampled, in draw order
  double mFormula = 0.0;           // nlm_schmidt, closed form
  double mNumerical = 0.0;         // multi-start minimisation
  double residual = 0.0;           // mFormula - mNumerical
  int nStarts = 0;
  int maxIter = 0;
  double convergedFraction = 0.0;  // fraction of starts below gradient tol
  std::uint64_t seed = 0;          // per-sample seed
};

struct GridPoint {
  double x = 0.0;                  // Cartesian simplex coordinates:
  double y = 0.0;                  // x = p1 + p2/2, y = (sqrt(3)/2) p2
  std::vector<double> probs;       // Schmidt probabilities lambda^2, sum 1
  double m = 0.0;
};

// Record of an N=4 scan sample projected onto the (q0, q1, q2) simplex of the
// first three Schmidt probabilities renormalised by 1 - lambda_3^2.
struct BandSlicePoint {
  double x = 0.0;
  double y = 0.0;
  double q0 = 0.0, q1 = 0.0, q2 = 0.0;
  double lambda3Sq = 0.0;
  double residual = 0.0;
};

struct ResidualStats {
  std::size_t count = 0;        // records with a finite residual
  double meanAbs = 0.0;         // mean of |residual|
  double stdAbs = 0.0;          // population std of |residual|
  double fractionBelow = 0.0;   // fraction with |residual| < threshold
  double maxResidual = 0.0;     // signed maximum
  std::size_t negativeCount = 0;
};

struct ScanConfig {
  int nStarts = 50;
  int maxIter = 300;
  std::uint64_t seed = 0;
  double gradTolerance = 1e-9;
  double initScale = 1.0;
  // Scans default to the analytic gradient; it matches finite differences to
  // the tested tolerance and cuts the per-start cost by roughly the
  // parameter count.
  GradientMode gradientMode = GradientMode::analytic;
};

struct MaxSearchResult {
  double m = 0.0;
  std::vector<double> probs;
};

// Uniform draw on the positive orthant of the unit sphere: absolute values
// of i.i.d. standard normals, normalised. Returned in draw order.
std::vector<double> sample_spectrum_raw(int dim, RandomStream& stream);
// Same draw as a (sorted) spectrum object; consumes the same stream values.
SchmidtSpectrum sample_spectrum(int dim, RandomStream& stream);

// Per sample: draw a spectrum from seed XOR splitmix64(index), evaluate the
// closed form and the numerical minimum on the Schmidt-aligned state, record
// the residual. Deterministic for a fixed master seed regardless of
// scheduling; a sample whose optimisation fails is recorded with NaN values
// and the scan continues.
std::vector<ScanRecord> run_scan(int dim, int numSamples, const ScanConfig& config);

// Summary over the records with finite residuals; rejects input without any.
ResidualStats residual_stats(const std::vector<ScanRecord>& records,
                             double threshold = 0.01);

// Triangular lattice with spacing 1/resolution over the qutrit probability
// simplex (resolution >= 2), closed-form NLM at each node.
std::vector<GridPoint> simplex_grid_qutrit(int resolution);

// Same lattice on the (p0, p1, p2, 0, 0) slice of the N=5 simplex.
std::vector<GridPoint> ququint_slice_grid(int resolution);

// For each center: keep records with |lambda_3^2 - center| <= halfwidth and
// project them onto the renormalised 3-probability simplex.
std::vector<std::vector<BandSlicePoint>> n4_band_slices(
    const std::vector<ScanRecord>& records,
    const std::vector<double>& centers = {0.0, 0.2, 0.4, 0.6},
    double halfwidth = 0.02);

// Deterministic maximisation of the closed-form NLM by coarse lattice search
// plus pattern-search refinement over the free simplex coordinates.
MaxSearchResult max_search_qutrit();
MaxSearchResult max_search_ququint_slice();

// CSV, 17-significant-digit formatting, header row, '\n' line endings.
// scan: dim,lambda_0..lambda_{N-1},m_formula,m_numerical,residual,
//       n_starts,max_iter,converged_fraction,seed
// grid: x,y,p0,p1,p2[,p3,p4],m
// band slice: x,y,q0,q1,q2,lambda3_sq,residual
void write_scan_csv(const std::string& path, const std::vector<ScanRecord>& records);
std::vector<ScanRecord> read_scan_csv(const std::string& path);
void write_grid_csv(const std::string& path, const std::vector<GridPoint>& points);
void write_band_slice_csv(const std::string& path,
                          const std::vector<BandSlicePoint>& points);

}  // namespace nlm
