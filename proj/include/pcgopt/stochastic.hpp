#ifndef PCGOPT_STOCHASTIC_HPP
#define PCGOPT_STOCHASTIC_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pcgopt/dense.hpp"
#include "pcgopt/error.hpp"
#include "pcgopt/lanczos.hpp"
#include "pcgopt/parallel.hpp"
#include "pcgopt/pcg.hpp"
#include "pcgopt/precond.hpp"
#include "pcgopt/rng.hpp"

namespace pcgopt {

/// Distribution of the random initial errors x* - x_0.
struct TrialDistribution {
  enum class Kind { iid_normal, grf };
  Kind kind = Kind::iid_normal;
  double sigma2 = 0.0;        // grf only
  std::size_t grid_side = 0;  // grf only: dimension must be grid_side^2

  static TrialDistribution normal() { return {}; }
  static TrialDistribution grf(double sigma2, std::size_t grid_side) {
    return {Kind::grf, sigma2, grid_side};
  }
};

enum class ErrorNorm { two_norm, a_norm };
enum class FunctionalKind { Fs, Fc };

inline std::string to_string(FunctionalKind k) { return k == FunctionalKind::Fs ? "fs" : "fc"; }

struct FunctionalEval {
  double value = 0.0;
  FunctionalKind kind = FunctionalKind::Fs;
  std::size_t K = 0;
  std::size_t n = 0;        // Fs only
  std::uint64_t seed = 0;   // Fs only
  double param = 0.0;
  double std_err = 0.0;     // Fs: sample standard deviation / sqrt(n)
  double kappa = 0.0;       // Fc only
};

/// Lower Cholesky factor of the squared-exponential covariance
/// exp(-|p_i - p_j|^2 / sigma2) over the interior nodes of a grid_side x
/// grid_side mesh on the unit square. On breakdown a diagonal jitter of 1e-10
/// is added and raised tenfold up to 1e-6.
inline DenseMatrix grf_covariance_factor(double sigma2, std::size_t grid_side) {
  if (!(sigma2 > 0.0)) throw ParameterError("grf: sigma2 must be > 0");
  if (grid_side < 1) throw ParameterError("grf: grid_side must be >= 1");
  const std::size_t n = grid_side * grid_side;
  const double h = 1.0 / static_cast<double>(grid_side + 1);
  std::vector<double> px(n), py(n);
  for (std::size_t j = 0; j < grid_side; ++j) {
    for (std::size_t i = 0; i < grid_side; ++i) {
      px[j * grid_side + i] = static_cast<double>(i + 1) * h;
      py[j * grid_side + i] = static_cast<double>(j + 1) * h;
    }
  }
  DenseMatrix cov(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      const double dx = px[a] - px[b];
      const double dy = py[a] - py[b];
      cov(a, b) = std::exp(-(dx * dx + dy * dy) / sigma2);
    }
  }

  double jitter = 0.0;
  for (;;) {
    DenseMatrix l(n, n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      double* li = &l(i, 0);
      for (std::size_t j = 0; j <= i; ++j) {
        const double* lj = &l(j, 0);
        double s = cov(i, j) + (i == j ? jitter : 0.0);
        for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
        if (i == j) {
          if (!(s > 0.0)) {
            ok = false;
            break;
          }
          li[i] = std::sqrt(s);
        } else {
          li[j] = s / lj[j];
        }
      }
    }
    if (ok) return l;
    if (jitter == 0.0) {
      jitter = 1e-10;
    } else if (jitter < 1e-6 * 0.99) {
      jitter *= 10.0;
    } else {
      throw NumericalError("grf: covariance Cholesky failed even with jitter 1e-6");
    }
  }
}

/// n initial-error vectors; trial i depends only on (master_seed, i).
inline std::vector<Vector> sample_trials(std::size_t dim, std::size_t n,
                                         const TrialDistribution& dist,
                                         std::uint64_t master_seed) {
  if (n < 1) throw ParameterError("sample_trials: n must be >= 1");
  std::vector<Vector> trials(n);
  if (dist.kind == TrialDistribution::Kind::iid_normal) {
    parallel_for(n, [&](std::size_t i) {
      trials[i] = NormalStream(split_seed(master_seed, i)).vector(dim);
    });
    return trials;
  }
  if (dist.grid_side * dist.grid_side != dim) {
    throw ParameterError("sample_trials: grf grid " + std::to_string(dist.grid_side) + "^2 != " +
                         std::to_string(dim));
  }
  const DenseMatrix l = grf_covariance_factor(dist.sigma2, dist.grid_side);
  parallel_for(n, [&](std::size_t i) {
    const Vector z = NormalStream(split_seed(master_seed, i)).vector(dim);
    Vector x(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
      const double* lr = l.row(r).data();
      double s = 0.0;
      for (std::size_t c = 0; c <= r; ++c) s += lr[c] * z[c];
      x[r] = s;
    }
    trials[i] = std::move(x);
  });
  return trials;
}

/// Per-trial error norms ||x_K^(i)|| after exactly K PCG steps on A x = 0
/// started from each trial vector.
inline Vector stochastic_trial_norms(const CsrMatrix& a, const Preconditioner& m, std::size_t K,
                                     const std::vector<Vector>& trials,
                                     ErrorNorm norm = ErrorNorm::two_norm) {
  if (K < 1) throw ParameterError("eval_Fs: K must be >= 1");
  if (trials.empty()) throw ParameterError("eval_Fs: need at least one trial");
  const Vector zero(a.nrows, 0.0);
  Vector norms(trials.size());
  parallel_for(trials.size(), [&](std::size_t i) {
    const auto t = pcg(a, zero, trials[i], m, PcgOptions{K, 0.0});
    if (norm == ErrorNorm::two_norm) {
      norms[i] = norm2(t.final_x);
    } else {
      const Vector ax = spmv(a, t.final_x);
      norms[i] = std::sqrt(std::max(0.0, dot(t.final_x, ax)));
    }
  });
  return norms;
}

/// F_s = mean over trials of ||x* - x_K|| with x* = 0, b = 0.
inline FunctionalEval eval_Fs(const CsrMatrix& a, const Preconditioner& m, std::size_t K,
                              const std::vector<Vector>& trials,
                              ErrorNorm norm = ErrorNorm::two_norm) {
  const Vector norms = stochastic_trial_norms(a, m, K, trials, norm);
  const double n = static_cast<double>(norms.size());
  const double mean = pairwise_sum(norms) / n;
  double var = 0.0;
  for (double v : norms) var += (v - mean) * (v - mean);
  FunctionalEval out;
  out.value = mean;
  out.kind = FunctionalKind::Fs;
  out.K = K;
  out.n = norms.size();
  out.param = m.parameter();
  out.std_err = norms.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return out;
}

inline FunctionalEval eval_Fs(const CsrMatrix& a, const Preconditioner& m, std::size_t K,
                              std::size_t n, const TrialDistribution& dist,
                              std::uint64_t master_seed, ErrorNorm norm = ErrorNorm::two_norm) {
  if (K < 1) throw ParameterError("eval_Fs: K must be >= 1");
  auto out = eval_Fs(a, m, K, sample_trials(a.nrows, n, dist, master_seed), norm);
  out.seed = master_seed;
  return out;
}

/// F_c = ((sqrt(kappa) - 1) / (sqrt(kappa) + 1))^K.
inline double classical_functional(double kappa, std::size_t K) {
  const double r = std::sqrt(kappa);
  return std::pow((r - 1.0) / (r + 1.0), static_cast<double>(K));
}

inline FunctionalEval eval_Fc(const CsrMatrix& a, const Preconditioner& m, std::size_t K,
                              std::size_t lanczos_iters, std::uint64_t seed, bool oracle = false) {
  if (K < 1) throw ParameterError("eval_Fc: K must be >= 1");
  const auto spec = preconditioned_condition_number(a, m, lanczos_iters, seed, oracle);
  FunctionalEval out;
  out.kind = FunctionalKind::Fc;
  out.K = K;
  out.param = m.parameter();
  out.kappa = spec.kappa;
  out.value = classical_functional(spec.kappa, K);
  return out;
}

}  // namespace pcgopt

#endif  // PCGOPT_STOCHASTIC_HPP
