// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlm/state.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlm {

namespace {

int mod(int v, int n) {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

std::vector<Complex> omega_powers(int n) {
  std::vector<Complex> w(n);
  for (int k = 0; k < n; ++k) {
    w[k] = std::polar(1.0, 2.0 * M_PI * k / n);
  }
  return w;
}

}  // namespace

SchmidtSpectrum::SchmidtSpectrum(int dim, std::vector<double> lambdas)
    : dim_(dim), lambdas_(std::move(lambdas)) {
  if (dim_ < 2) throw std::invalid_argument("SchmidtSpectrum: dim must be >= 2");
  if (static_cast<int>(lambdas_.size()) != dim_) {
    throw std::invalid_argument("SchmidtSpectrum: entry count does not match dim");
  }
  double norm2 = 0.0;
  for (double v : lambdas_) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("SchmidtSpectrum: coefficients must be non-negative");
    }
    norm2 += v * v;
  }
  if (std::abs(norm2 - 1.0) > kNormTol) {
    throw std::invalid_argument("SchmidtSpectrum: sum of squares deviates from 1 by " +
                                std::to_string(norm2 - 1.0));
  }
  std::sort(lambdas_.begin(), lambdas_.end(), std::greater<double>());
}

PureBipartiteState::PureBipartiteState(int dim, MatrixC amplitudes)
    : dim_(dim), x_(std::move(amplitudes)) {
  if (dim_ < 2) throw std::invalid_argument("PureBipartiteState: dim must be >= 2");
  if (x_.rows() != dim_ || x_.cols() != dim_) {
    throw std::invalid_argument("PureBipartiteState: amplitude matrix shape does not match dim");
  }
  const double norm2 = x_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTol) {
    throw std::invalid_argument("PureBipartiteState: state not normalized, sum |x|^2 = " +
                                std::to_string(norm2));
  }
}

PauliIndex PauliIndex::reduced(int a, int b, int c, int d, int dim) {
  return PauliIndex{mod(a, dim), mod(b, dim), mod(c, dim), mod(d, dim)};
}

PauliCoefficientTensor::PauliCoefficientTensor(int dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(dim) * dim * dim * dim) {
    throw std::invalid_argument("PauliCoefficientTensor: entry count must be dim^4");
  }
}

double PauliCoefficientTensor::squared_sum() const {
  double s = 0.0;
  for (const Complex& t : entries_) s += std::norm(t);
  return s;
}

double PauliCoefficientTensor::fourth_power_sum() const {
  double s = 0.0;
  for (const Complex& t : entries_) {
    const double m2 = std::norm(t);
    s += m2 * m2;
  }
  return s;
}

PureBipartiteState state_from_spectrum(const SchmidtSpectrum& spectrum) {
  const int n = spectrum.dim();
  MatrixC x = MatrixC::Zero(n, n);
  for (int i = 0; i < n; ++i) x(i, i) = spectrum[i];
  return PureBipartiteState(n, std::move(x));
}

SchmidtDecomposition schmidt_decompose(const PureBipartiteState& state) {
  const int n = state.dim();
  Eigen::JacobiSVD<MatrixC> svd(state.amplitudes(),
                                Eigen::ComputeFullU | Eigen::ComputeFullV);
  std::vector<double> lambdas(n);
  for (int i = 0; i < n; ++i) lambdas[i] = svd.singularValues()(i);
  // x = U S V^dag, so U^dag x (V^T)^T = S with S real non-negative descending.
  return SchmidtDecomposition{SchmidtSpectrum(n, std::move(lambdas)),
                              svd.matrixU().adjoint(), svd.matrixV().transpose()};
}

MatrixC reduced_density(const PureBipartiteState& state, Subsystem subsystem) {
  const MatrixC& x = state.amplitudes();
  if (subsystem == Subsystem::A) return x * x.adjoint();
  return x.transpose() * x.conjugate();
}

Complex pauli_coefficient(const PureBipartiteState& state, const PauliIndex& idx) {
  const int n = state.dim();
  const MatrixC& x = state.amplitudes();
  const auto w = omega_powers(n);
  Complex t = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      t += x(j, k) * std::conj(x(mod(j + idx.a, n), mod(k + idx.c, n))) *
           w[mod(idx.b * j + idx.d * k, n)];
    }
  }
  return t;
}

PauliCoefficientTensor pauli_tensor(const PureBipartiteState& state) {
  const int n = state.dim();
  const MatrixC& x = state.amplitudes();
  const auto w = omega_powers(n);
  std::vector<Complex> entries(static_cast<std::size_t>(n) * n * n * n);
  std::size_t pos = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d, ++pos) {
          Complex t = 0.0;
          for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
              t += x(j, k) * std::conj(x((j + a) % n, (k + c) % n)) *
                   w[(b * j + d * k) % n];
            }
          }
          entries[pos] = t;
        }
      }
    }
  }
  return PauliCoefficientTensor(n, std::move(entries));
}

double m2_pure(const PureBipartiteState& state) {
  const int n = state.dim();
  const double s4 = detail::fourth_power_sum_fast(state.amplitudes());
  return -std::log(s4 / (static_cast<double>(n) * n));
}

QubitRTensor qubit_r_tensor(const PureBipartiteState& state) {
  if (state.dim() != 2) {
    throw std::invalid_argument("qubit_r_tensor: only defined for dim 2");
  }
  const Complex i(0.0, 1.0);
  std::array<Eigen::Matrix2cd, 4> sigma;
  sigma[0] << 1, 0, 0, 1;
  sigma[1] << 0, 1, 1, 0;
  sigma[2] << 0, -i, i, 0;
  sigma[3] << 1, 0, 0, -1;

  const MatrixC& x = state.amplitudes();
  QubitRTensor r;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      // <psi| A (x) B |psi> = sum conj(x) .* (A x B^T)
      const MatrixC m = sigma[mu] * x * sigma[nu].transpose();
      r.entries(mu, nu) = (x.conjugate().cwiseProduct(m)).sum().real();
    }
  }
  return r;
}

PureBipartiteState apply_local_unitaries(const PureBipartiteState& state,
                                         const MatrixC& unitary_a,
                                         const MatrixC& unitary_b) {
  const int n = state.dim();
  for (const MatrixC* u : {&unitary_a, &unitary_b}) {
    if (u->rows() != n || u->cols() != n) {
      throw std::invalid_argument("apply_local_unitaries: unitary shape does not match dim");
    }
    const double defect =
        (u->adjoint() * (*u) - MatrixC::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > kUnitaryTol) {
      throw std::invalid_argument("apply_local_unitaries: matrix is not unitary, defect " +
                                  std::to_string(defect));
    }
  }
  return PureBipartiteState(n, unitary_a * state.amplitudes() * unitary_b.transpose());
}

namespace detail {

double fourth_power_sum_fast(const MatrixC& x, std::vector<Complex>& scratch) {
  const int n = static_cast<int>(x.rows());
  const auto w = omega_powers(n);
  scratch.resize(2 * static_cast<std::size_t>(n) * n);
  Complex* y = scratch.data();      // y_{jk} = x_{jk} conj(x_{j+a,k+c})
  Complex* z = y + n * n;           // z_{bk} = sum_j y_{jk} w^{bj}
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      for (int j = 0; j < n; ++j) {
        const int ja = (j + a) % n;
        for (int k = 0; k < n; ++k) {
          y[j * n + k] = x(j, k) * std::conj(x(ja, (k + c) % n));
        }
      }
      for (int b = 0; b < n; ++b) {
        for (int k = 0; k < n; ++k) {
          Complex s = 0.0;
          for (int j = 0; j < n; ++j) s += y[j * n + k] * w[(b * j) % n];
          z[b * n + k] = s;
        }
      }
      for (int b = 0; b < n; ++b) {
        for (int d = 0; d < n; ++d) {
          Complex t = 0.0;
          for (int k = 0; k < n; ++k) t += z[b * n + k] * w[(d * k) % n];
          const double m2 = std::norm(t);
          total += m2 * m2;
        }
      }
    }
  }
  return total;
}

double fourth_power_sum_fast(const MatrixC& x) {
  std::vector<Complex> scratch;
  return fourth_power_sum_fast(x, scratch);
}

}  // namespace detail

}  // namespace nlm
