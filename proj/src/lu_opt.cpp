// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlm/lu_opt.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "nlm/parallel.hpp"
#include "nlm/rng.hpp"

namespace nlm {

namespace {

constexpr double kExpUnitaryTol = 1e-10;
constexpr double kExpDetTol = 1e-10;
constexpr double kFdStep = 1e-5;
constexpr double kArmijoC1 = 1e-4;
constexpr double kCurvatureFloor = 1e-14;
constexpr int kLbfgsMemory = 20;
constexpr int kMaxBacktracks = 60;
constexpr int kMaxExpansions = 40;
// Stop once the per-step decrease sits at the double-precision noise floor of
// the objective for several consecutive steps. Guarded by a gradient check so
// that slow crawls through ill-conditioned valleys (tiny decrease, sizeable
// gradient) keep iterating; only genuine noise-floor stalls exit early.
constexpr double kFtolRel = 1e-14;
constexpr int kStallLimit = 3;
constexpr double kStallGradFactor = 100.0;

void check_theta(std::span<const double> theta, int n, const char* who) {
  const std::size_t expected = static_cast<std::size_t>(n) * n - 1;
  if (theta.size() != expected) {
    throw std::invalid_argument(std::string(who) +
                                ": parameter vector must have length N^2-1");
  }
  for (double v : theta) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) +
                                  ": parameter entries must be finite");
    }
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Divided difference of f(h) = exp(i h) between two eigenvalues:
// i exp(i (p + q) / 2) * sinc((p - q) / 2), smooth across p == q.
Complex exp_divided_difference(double p, double q) {
  const double mid = 0.5 * (p + q);
  const double half = 0.5 * (p - q);
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0
                                            : std::sin(half) / half;
  return Complex(0.0, 1.0) * std::polar(sinc, mid);
}

// Shared per-thread workspace: objective and gradient of
//   S(theta) = -ln( (1/N^2) sum_{abcd} |t_{abcd}(U_A x U_B^T)|^4 )
// in the exponential-map chart. Counts every objective evaluation.
class Evaluator {
 public:
  explicit Evaluator(const PureBipartiteState& state)
      : n_(state.dim()),
        x_(state.amplitudes()),
        basis_(gell_mann_basis(n_)),
        omega_(n_),
        scratch_(2 * static_cast<std::size_t>(n_) * n_),
        y_(n_, n_),
        w_(n_, n_),
        s_(n_, n_),
        G_(n_, n_),
        HA_(n_, n_),
        HB_(n_, n_) {
    for (int m = 0; m < n_; ++m) {
      omega_[m] = std::polar(1.0, 2.0 * M_PI * m / n_);
    }
  }

  int dim() const { return n_; }
  int param_count() const { return 2 * (n_ * n_ - 1); }
  long long evaluations() const { return evals_; }

  double value(std::span<const double> packed) {
    build_unitaries(packed);
    xp_ = UA_ * x_ * UB_.transpose();
    ++evals_;
    const double total = detail::fourth_power_sum_fast(xp_, scratch_);
    return -std::log(total / (static_cast<double>(n_) * n_));
  }

  double value_and_gradient(std::span<const double> packed, GradientMode mode,
                            std::vector<double>& grad) {
    grad.assign(param_count(), 0.0);
    if (mode == GradientMode::finiteDifference) {
      const double f0 = value(packed);
      std::vector<double> probe(packed.begin(), packed.end());
      for (int k = 0; k < param_count(); ++k) {
        const double saved = probe[k];
        probe[k] = saved + kFdStep;
        const double fp = value(probe);
        probe[k] = saved - kFdStep;
        const double fm = value(probe);
        probe[k] = saved;
        grad[k] = (fp - fm) / (2.0 * kFdStep);
      }
      return f0;
    }
    return analytic_value_and_gradient(packed, grad);
  }

 private:
  void build_unitaries(std::span<const double> packed) {
    const int g = n_ * n_ - 1;
    HA_.setZero();
    HB_.setZero();
    for (int k = 0; k < g; ++k) {
      if (packed[k] != 0.0) HA_ += packed[k] * basis_[k];
      if (packed[g + k] != 0.0) HB_ += packed[g + k] * basis_[k];
    }
    UA_ = (Complex(0.0, 1.0) * HA_).exp();
    UB_ = (Complex(0.0, 1.0) * HB_).exp();
  }

  double analytic_value_and_gradient(std::span<const double> packed,
                                     std::vector<double>& grad) {
    build_unitaries(packed);
    xp_ = UA_ * x_ * UB_.transpose();
    ++evals_;

    // Pass over (a, c): accumulate T = sum |t|^4 and the Wirtinger matrix
    //   G_{uv} = dT/dx'_{uv} = 4 sum_{abcd} |t|^2 conj(t) conj(x'_{u+a,v+c})
    //            w^{bu+dv}
    // using the same separable DFT structure as the objective.
    const int n = n_;
    double total = 0.0;
    G_.setZero();
    MatrixC z(n, n), B(n, n);
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        for (int j = 0; j < n; ++j) {
          const int ja = (j + a) % n;
          for (int k = 0; k < n; ++k) {
            y_(j, k) = xp_(j, k) * std::conj(xp_(ja, (k + c) % n));
          }
        }
        for (int b = 0; b < n; ++b) {
          for (int k = 0; k < n; ++k) {
            Complex acc = 0.0;
            for (int j = 0; j < n; ++j) acc += y_(j, k) * omega_[(b * j) % n];
            z(b, k) = acc;
          }
        }
        for (int b = 0; b < n; ++b) {
          for (int d = 0; d < n; ++d) {
            Complex t = 0.0;
            for (int k = 0; k < n; ++k) t += z(b, k) * omega_[(d * k) % n];
            const double t2 = std::norm(t);
            total += t2 * t2;
            w_(b, d) = t2 * std::conj(t);
          }
        }
        for (int u = 0; u < n; ++u) {
          for (int d = 0; d < n; ++d) {
            Complex acc = 0.0;
            for (int b = 0; b < n; ++b) acc += w_(b, d) * omega_[(b * u) % n];
            s_(u, d) = acc;
          }
        }
        for (int u = 0; u < n; ++u) {
          const int ua = (u + a) % n;
          for (int v = 0; v < n; ++v) {
            Complex acc = 0.0;
            for (int d = 0; d < n; ++d) acc += s_(u, d) * omega_[(d * v) % n];
            G_(u, v) += 4.0 * std::conj(xp_(ua, (v + c) % n)) * acc;
          }
        }
      }
    }

    // Chain rule through x' = U_A x U_B^T:
    //   dT = 2 Re tr(K_A dU_A) + 2 Re tr(K_B dU_B).
    const MatrixC KA = (x_ * UB_.transpose()) * G_.transpose();
    const MatrixC KB = (UA_ * x_).transpose() * G_;

    const double invTotal = 1.0 / total;
    const int g = n_ * n_ - 1;
    side_gradient(HA_, KA, invTotal, grad.data());
    side_gradient(HB_, KB, invTotal, grad.data() + g);
    return -std::log(total / (static_cast<double>(n_) * n_));
  }

  // Differentiates U = exp(iH) with the divided-difference form of the
  // Frechet derivative: with H = V diag(lam) V^dag and W = V^dag K V,
  //   dT/dtheta_m = 2 Re sum_{uv} (G_m)_{uv} Z_{uv},
  //   Z = conj(V) C V^T,  C_{qp} = D(lam_q, lam_p) W_{pq}.
  // The objective gradient then carries the -1/T factor from the log.
  void side_gradient(const MatrixC& H, const MatrixC& K, double invTotal,
                     double* out) {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(H);
    const MatrixC& V = es.eigenvectors();
    const Eigen::VectorXd& lam = es.eigenvalues();
    const MatrixC W = V.adjoint() * K * V;
    MatrixC C(n_, n_);
    for (int q = 0; q < n_; ++q) {
      for (int p = 0; p < n_; ++p) {
        C(q, p) = exp_divided_difference(lam(q), lam(p)) * W(p, q);
      }
    }
    const MatrixC Z = V.conjugate() * C * V.transpose();
    const int g = n_ * n_ - 1;
    for (int m = 0; m < g; ++m) {
      const Complex acc = basis_[m].cwiseProduct(Z).sum();
      out[m] = -invTotal * 2.0 * acc.real();
    }
  }

  int n_;
  MatrixC x_;
  std::vector<MatrixC> basis_;
  std::vector<Complex> omega_;
  std::vector<Complex> scratch_;
  MatrixC y_, w_, s_, G_, HA_, HB_, UA_, UB_, xp_;
  long long evals_ = 0;
};

struct LbfgsOutcome {
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Limited-memory BFGS with two-loop recursion and Armijo backtracking.
LbfgsOutcome lbfgs_minimize(Evaluator& ev, GradientMode mode, int maxIter,
                            double gradTol, std::vector<double>& x) {
  const std::size_t dim = x.size();
  std::vector<std::vector<double>> sHist, yHist;
  std::vector<double> rhoHist, alpha;

  std::vector<double> g(dim), gNew(dim), xNew(dim), q(dim), dir(dim);
  double f = ev.value_and_gradient(x, mode, g);
  if (!std::isfinite(f)) return {f, false};

  int stall = 0;
  for (int iter = 0; iter < maxIter; ++iter) {
    if (max_abs(g) < gradTol) return {f, true};

    // Two-loop recursion for the quasi-Newton direction.
    q = g;
    const std::size_t hist = sHist.size();
    alpha.assign(hist, 0.0);
    for (std::size_t i = hist; i-- > 0;) {
      alpha[i] = rhoHist[i] * dot(sHist[i], q);
      for (std::size_t k = 0; k < dim; ++k) q[k] -= alpha[i] * yHist[i][k];
    }
    if (hist > 0) {
      const double yy = dot(yHist.back(), yHist.back());
      const double gamma = yy > 0.0 ? dot(sHist.back(), yHist.back()) / yy : 1.0;
      for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < hist; ++i) {
      const double beta = rhoHist[i] * dot(yHist[i], q);
      for (std::size_t k = 0; k < dim; ++k) q[k] += (alpha[i] - beta) * sHist[i][k];
    }
    for (std::size_t k = 0; k < dim; ++k) dir[k] = -q[k];

    double dd = dot(g, dir);
    if (dd >= 0.0) {  // curvature gone bad: restart from steepest descent
      sHist.clear();
      yHist.clear();
      rhoHist.clear();
      for (std::size_t k = 0; k < dim; ++k) dir[k] = -g[k];
      dd = -dot(g, g);
      if (dd >= 0.0) break;
    }

    double step = 1.0;
    bool accepted = false;
    bool firstTrial = true;
    double fNew = f;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      for (std::size_t k = 0; k < dim; ++k) xNew[k] = x[k] + step * dir[k];
      fNew = ev.value(xNew);
      if (std::isfinite(fNew) && fNew <= f + kArmijoC1 * step * dd) {
        accepted = true;
        break;
      }
      firstTrial = false;
      step *= 0.5;
    }
    if (!accepted) break;

    if (firstTrial) {
      // The unit step was accepted outright, a sign the quasi-Newton model
      // underestimates the step in a flat valley; expand while the longer
      // step keeps both the sufficient-decrease bound and strict progress.
      std::vector<double>& xTry = q;  // two-loop scratch, free at this point
      double grown = step;
      for (int ex = 0; ex < kMaxExpansions; ++ex) {
        grown *= 2.0;
        for (std::size_t k = 0; k < dim; ++k) xTry[k] = x[k] + grown * dir[k];
        const double fTry = ev.value(xTry);
        if (!std::isfinite(fTry) || fTry > f + kArmijoC1 * grown * dd ||
            fTry >= fNew) {
          break;
        }
        fNew = fTry;
        step = grown;
        xNew.swap(xTry);
      }
    }

    const double fRefined = ev.value_and_gradient(xNew, mode, gNew);
    if (!std::isfinite(fRefined)) return {f, false};

    if (f - fRefined <= kFtolRel * std::max(1.0, std::abs(f))) {
      if (++stall >= kStallLimit &&
          max_abs(gNew) < kStallGradFactor * gradTol) {
        x = xNew;
        return {fRefined, max_abs(gNew) < gradTol};
      }
    } else {
      stall = 0;
    }

    std::vector<double> s(dim), yv(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      s[k] = xNew[k] - x[k];
      yv[k] = gNew[k] - g[k];
    }
    const double sy = dot(s, yv);
    if (sy > kCurvatureFloor) {
      sHist.push_back(std::move(s));
      yHist.push_back(std::move(yv));
      rhoHist.push_back(1.0 / sy);
      if (static_cast<int>(sHist.size()) > kLbfgsMemory) {
        sHist.erase(sHist.begin());
        yHist.erase(yHist.begin());
        rhoHist.erase(rhoHist.begin());
      }
    }
    x = xNew;
    f = fRefined;
    g = gNew;
  }
  return {f, max_abs(g) < gradTol};
}

}  // namespace

std::vector<MatrixC> gell_mann_basis(int n) {
  if (n < 2) throw std::invalid_argument("gell_mann_basis: need n >= 2");
  std::vector<MatrixC> basis;
  basis.reserve(static_cast<std::size_t>(n) * n - 1);
  for (int j = 0; j < n; ++j) {  // symmetric pair generators
    for (int k = j + 1; k < n; ++k) {
      MatrixC m = MatrixC::Zero(n, n);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      basis.push_back(std::move(m));
    }
  }
  for (int j = 0; j < n; ++j) {  // antisymmetric pair generators
    for (int k = j + 1; k < n; ++k) {
      MatrixC m = MatrixC::Zero(n, n);
      m(j, k) = Complex(0.0, -1.0);
      m(k, j) = Complex(0.0, 1.0);
      basis.push_back(std::move(m));
    }
  }
  for (int l = 1; l < n; ++l) {  // diagonal generators
    MatrixC m = MatrixC::Zero(n, n);
    const double coef = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int j = 0; j < l; ++j) m(j, j) = coef;
    m(l, l) = -static_cast<double>(l) * coef;
    basis.push_back(std::move(m));
  }
  return basis;
}

MatrixC su_from_params(std::span<const double> theta, int n) {
  if (n < 2) throw std::invalid_argument("su_from_params: need n >= 2");
  check_theta(theta, n, "su_from_params");
  const std::vector<MatrixC> basis = gell_mann_basis(n);
  MatrixC h = MatrixC::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) h += theta[k] * basis[k];
  MatrixC u = (Complex(0.0, 1.0) * h).exp();
  const double unitaryErr =
      (u.adjoint() * u - MatrixC::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unitaryErr > kExpUnitaryTol) {
    throw std::runtime_error("su_from_params: exponential lost unitarity");
  }
  if (std::abs(u.determinant() - Complex(1.0, 0.0)) > kExpDetTol) {
    throw std::runtime_error("su_from_params: determinant drifted from 1");
  }
  return u;
}

double objective(const PureBipartiteState& state, const LocalUnitaryParams& params) {
  const int n = state.dim();
  const MatrixC ua = su_from_params(params.thetaA, n);
  const MatrixC ub = su_from_params(params.thetaB, n);
  return m2_pure(apply_local_unitaries(state, ua, ub));
}

std::vector<double> gradient(const PureBipartiteState& state,
                             const LocalUnitaryParams& params, GradientMode mode) {
  const int n = state.dim();
  check_theta(params.thetaA, n, "gradient");
  check_theta(params.thetaB, n, "gradient");
  std::vector<double> packed(params.thetaA.begin(), params.thetaA.end());
  packed.insert(packed.end(), params.thetaB.begin(), params.thetaB.end());
  Evaluator ev(state);
  std::vector<double> grad;
  ev.value_and_gradient(packed, mode, grad);
  return grad;
}

MatrixC random_unitary(int n, RandomStream& stream) {
  if (n < 1) throw std::invalid_argument("random_unitary: need n >= 1");
  MatrixC a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a(r, c) = Complex(stream.normal(), stream.normal()) * M_SQRT1_2;
    }
  }
  Eigen::HouseholderQR<MatrixC> qr(a);
  MatrixC q = qr.householderQ();
  const MatrixC r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

OptResult minimize(const PureBipartiteState& state, const OptimizerConfig& config) {
  if (config.nStarts < 1) throw std::invalid_argument("minimize: nStarts must be >= 1");
  if (config.maxIter < 1) throw std::invalid_argument("minimize: maxIter must be >= 1");
  if (!(config.gradTolerance > 0.0)) {
    throw std::invalid_argument("minimize: gradTolerance must be positive");
  }
  if (!(config.initScale >= 0.0) || !std::isfinite(config.initScale)) {
    throw std::invalid_argument("minimize: initScale must be finite and >= 0");
  }

  const int n = state.dim();
  const int g = n * n - 1;
  const int pcount = 2 * g;
  const int starts = config.nStarts;

  std::vector<double> values(starts);
  std::vector<char> conv(starts, 0);
  std::vector<std::vector<double>> finals(starts);
  std::vector<long long> evals(starts, 0);

  parallel_for(static_cast<std::size_t>(starts), [&](std::size_t i) {
    Evaluator ev(state);
    std::vector<double> x(pcount, 0.0);
    if (i > 0) {  // start 0 keeps the untransformed input as a candidate
      RandomStream rs(derive_stream_seed(config.seed, i));
      for (double& v : x) v = config.initScale * rs.normal();
    }
    const LbfgsOutcome out = lbfgs_minimize(ev, config.gradientMode,
                                            config.maxIter,
                                            config.gradTolerance, x);
    values[i] = out.value;
    conv[i] = out.converged ? 1 : 0;
    finals[i] = std::move(x);
    evals[i] = ev.evaluations();
  });

  int bestIdx = 0;
  for (int i = 1; i < starts; ++i) {
    if (values[i] < values[bestIdx]) bestIdx = i;
  }

  OptResult result;
  result.minValue = values[bestIdx];
  result.bestParams.thetaA.assign(finals[bestIdx].begin(), finals[bestIdx].begin() + g);
  result.bestParams.thetaB.assign(finals[bestIdx].begin() + g, finals[bestIdx].end());
  result.perStartValues = std::move(values);
  result.converged.assign(conv.begin(), conv.end());
  for (long long e : evals) result.evaluations += e;
  return result;
}

}  // namespace nlm
