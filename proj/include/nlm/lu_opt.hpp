// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nlm/rng.hpp"
#include "nlm/state.hpp"

// Direct numerical minimisation of the second stabiliser Renyi entropy over
// local unitaries U_A (x) U_B in SU(N) (x) SU(N), via multi-start limited-
// memory quasi-Newton descent in an exponential-map chart.

namespace nlm {

struct LocalUnitaryParams {
  std::vector<double> thetaA;  // length N^2 - 1
  std::vector<double> thetaB;  // length N^2 - 1
};

enum class GradientMode { analytic, finiteDifference };

struct OptimizerConfig {
  int nStarts = 1;
  int maxIter = 300;
  double gradTolerance = 1e-9;  // max-norm of the gradient
  std::uint64_t seed = 0;
  double initScale = 1.0;       // std-dev of the initial angles
  GradientMode gradientMode = GradientMode::finiteDifference;
};

struct OptResult {
  double minValue = 0.0;
  LocalUnitaryParams bestParams;
  std::vector<double> perStartValues;  // indexed by start
  std::vector<bool> converged;         // gradient dropped below tolerance
  // Objective evaluations across all starts, line searches and
  // finite-difference probes included.
  long long evaluations = 0;
};

// Ordered basis of N^2 - 1 traceless Hermitian generators (generalised
// Gell-Mann convention): symmetric pair generators first, then antisymmetric,
// then the diagonal ones, each block in lexicographic index order. All have
// tr(G_a G_b) = 2 delta_ab.
std::vector<MatrixC> gell_mann_basis(int n);

// U = exp(i sum_k theta_k G_k). The exponential uses scaling-and-squaring
// with a Pade approximant; the result is verified unitary with unit
// determinant rather than re-projected.
MatrixC su_from_params(std::span<const double> theta, int n);

// m2_pure of the state carried to (U_A (x) U_B) |psi>.
double objective(const PureBipartiteState& state, const LocalUnitaryParams& params);

// Gradient of the objective with respect to (thetaA, thetaB), concatenated in
// that order. Analytic mode differentiates through the matrix exponential via
// its Frechet derivative; finite-difference mode uses central differences.
std::vector<double> gradient(const PureBipartiteState& state,
                             const LocalUnitaryParams& params,
                             GradientMode mode = GradientMode::finiteDifference);

// Multi-start minimisation. Start 0 begins at theta = 0 (the identity, so the
// untransformed input is always a candidate); every other start draws its
// angles i.i.d. normal(0, initScale^2) from a per-start substream of the
// seeded generator. Deterministic for a fixed config, regardless of how
// starts are scheduled.
OptResult minimize(const PureBipartiteState& state, const OptimizerConfig& config);

// Haar-distributed unitary: QR of a complex Ginibre draw with the R-diagonal
// phase fix. Used to scramble states before optimisation.
MatrixC random_unitary(int n, RandomStream& stream);

}  // namespace nlm
