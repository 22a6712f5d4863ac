// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

// Two-qudit pure states and their generalized-Pauli expansion.
//
// Conventions used throughout:
//   - a state |psi> = sum_{jk} x_{jk} |jk> is stored as the complex N x N
//     matrix x, row index j on subsystem A, column index k on subsystem B;
//   - local unitaries act as x -> U_A x U_B^T;
//   - the shift/clock operators obey X|j> = |j+1 mod N>, Z|j> = w^j |j> with
//     w = exp(2 pi i / N), and P_{abcd} = (X^a Z^b) (x) (X^c Z^d) without the
//     customary phase factor (it cancels in |tr(rho P)|^4);
//   - all index arithmetic on j, k, a, b, c, d is modulo N.

namespace nlm {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;

constexpr double kNormTol = 1e-12;
constexpr double kUnitaryTol = 1e-8;

class SchmidtSpectrum {
 public:
  // Entries are sorted descending on construction. Rejects negative entries
  // and vectors with sum(lambda^2) != 1 beyond kNormTol.
  SchmidtSpectrum(int dim, std::vector<double> lambdas);

  int dim() const { return dim_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  double operator[](int i) const { return lambdas_[i]; }

 private:
  int dim_;
  std::vector<double> lambdas_;
};

class PureBipartiteState {
 public:
  // Rejects non-square matrices, dim < 2 and non-normalized amplitudes.
  PureBipartiteState(int dim, MatrixC amplitudes);

  int dim() const { return dim_; }
  const MatrixC& amplitudes() const { return x_; }

 private:
  int dim_;
  MatrixC x_;
};

struct PauliIndex {
  int a, b, c, d;

  // Reduces all four indices mod N (negative values wrap).
  static PauliIndex reduced(int a, int b, int c, int d, int dim);
};

class PauliCoefficientTensor {
 public:
  PauliCoefficientTensor(int dim, std::vector<Complex> entries);

  int dim() const { return dim_; }
  Complex at(int a, int b, int c, int d) const {
    return entries_[((static_cast<std::size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d];
  }
  const std::vector<Complex>& entries() const { return entries_; }

  // sum |t|^2; equals N^2 for pure states.
  double squared_sum() const;
  // sum |t|^4, the fourth-power correlator entering the magic monotone.
  double fourth_power_sum() const;

 private:
  int dim_;
  std::vector<Complex> entries_;
};

struct QubitRTensor {
  Eigen::Matrix4d entries;  // R_{mu nu} = tr(sigma_mu (x) sigma_nu rho)
};

enum class Subsystem { A, B };

struct SchmidtDecomposition {
  SchmidtSpectrum spectrum;
  MatrixC unitary_a;  // applying (unitary_a, unitary_b) aligns the state:
  MatrixC unitary_b;  // U_A x U_B^T = diag(lambda), real non-negative
};

// Schmidt-aligned state x_{jk} = lambda_j delta_{jk}.
PureBipartiteState state_from_spectrum(const SchmidtSpectrum& spectrum);

// Singular value decomposition of the amplitude matrix; singular values are
// returned descending.
SchmidtDecomposition schmidt_decompose(const PureBipartiteState& state);

// Partial trace: rho_A = x x^dag, rho_B = x^T conj(x).
MatrixC reduced_density(const PureBipartiteState& state, Subsystem subsystem);

// t_{abcd} = tr(rho P_{abcd}) = sum_{jk} x_{jk} conj(x_{j+a,k+c}) w^{bj+dk}.
Complex pauli_coefficient(const PureBipartiteState& state, const PauliIndex& idx);

// All N^4 coefficients, the naive evaluation.
PauliCoefficientTensor pauli_tensor(const PureBipartiteState& state);

// Second stabilizer Renyi entropy of a pure state in the current basis:
// -ln( (1/N^2) sum |t_{abcd}|^4 ). Basis dependent; minimizing it over local
// unitaries gives the non-local magic.
double m2_pure(const PureBipartiteState& state);

// Qubit-only Pauli coefficient matrix R_{mu nu} (identity, x, y, z basis).
QubitRTensor qubit_r_tensor(const PureBipartiteState& state);

// x -> U_A x U_B^T. Both matrices must be unitary within kUnitaryTol.
PureBipartiteState apply_local_unitaries(const PureBipartiteState& state,
                                         const MatrixC& unitary_a,
                                         const MatrixC& unitary_b);

namespace detail {

// sum_{abcd} |t_{abcd}|^4 evaluated with the DFT-over-(b,d) factorization.
// Agrees with the naive tensor route to ~1e-15 relative; the hot path for the
// optimizer. `scratch` must hold at least 2*N^2 complex entries.
double fourth_power_sum_fast(const MatrixC& amplitudes, std::vector<Complex>& scratch);
double fourth_power_sum_fast(const MatrixC& amplitudes);

}  // namespace detail

}  // namespace nlm
