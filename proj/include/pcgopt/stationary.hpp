#ifndef PCGOPT_STATIONARY_HPP
#define PCGOPT_STATIONARY_HPP

// Mean convergence of a stationary iteration d_{k+1} = G d_k with random
// N(0, I) initial error: E||G^k d_0||^2 = ||G^k||_F^2, and ||G^k||_F^{1/k}
// tends to rho(G).

#include <cmath>
#include <cstdint>
#include <vector>

#include "pcgopt/dense.hpp"
#include "pcgopt/parallel.hpp"
#include "pcgopt/rng.hpp"
#include "pcgopt/spectrum.hpp"

namespace pcgopt {

struct StationaryScheme {
  DenseMatrix g;  // iteration matrix M^{-1} N

  std::size_t dim() const noexcept { return g.rows; }
};

struct MeanRateRecord {
  std::size_t k = 0;
  double empirical_ek = 0.0;  // sqrt(mean_i ||G^k d_0^(i)||^2)
  double std_err = 0.0;       // standard error of empirical_ek (delta method)
  double frob_norm = 0.0;     // ||G^k||_F
  double rho_pow = 0.0;       // rho(G)^k
};

/// Random G = Q T Q^T of size m with spectral radius `rho`: Q orthogonal, T
/// upper triangular with diagonal (rho, then values in [-0.9 rho, 0.9 rho])
/// and small random entries above the diagonal, so G is non-normal with a
/// known, simple dominant eigenvalue.
inline StationaryScheme random_contractive_scheme(std::size_t m, double rho, std::uint64_t seed) {
  if (m < 1) throw ParameterError("random_contractive_scheme: m must be >= 1");
  NormalStream normal(split_seed(seed, 1));
  Xoshiro256 uniform(split_seed(seed, 2));

  // Orthonormal columns by twice-applied modified Gram-Schmidt.
  DenseMatrix q(m, m);
  for (auto& v : q.data) v = normal.next();
  for (std::size_t j = 0; j < m; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        double c = 0.0;
        for (std::size_t r = 0; r < m; ++r) c += q(r, i) * q(r, j);
        for (std::size_t r = 0; r < m; ++r) q(r, j) -= c * q(r, i);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < m; ++r) nrm += q(r, j) * q(r, j);
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < m; ++r) q(r, j) /= nrm;
  }

  DenseMatrix t(m, m);
  const double coupling = 0.2 * rho / std::sqrt(static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    t(i, i) = i == 0 ? rho : rho * 0.9 * (2.0 * uniform.uniform() - 1.0);
    for (std::size_t j = i + 1; j < m; ++j) t(i, j) = coupling * normal.next();
  }
  return {multiply(multiply(q, t), transpose(q))};
}

inline std::vector<MeanRateRecord> verify_mean_rate(const StationaryScheme& scheme,
                                                    std::size_t k_max, std::size_t n_trials,
                                                    std::uint64_t seed,
                                                    std::size_t power_iters = 2000) {
  const std::size_t m = scheme.dim();
  if (scheme.g.cols != m) throw DimensionError("verify_mean_rate: G must be square");
  if (n_trials < 1) throw ParameterError("verify_mean_rate: n_trials must be >= 1");

  // sq[i][k] = ||G^k d_0^(i)||^2
  std::vector<std::vector<double>> sq(n_trials, std::vector<double>(k_max + 1));
  parallel_for(n_trials, [&](std::size_t i) {
    NormalStream rng(split_seed(seed, i));
    Vector d = rng.vector(m);
    for (std::size_t k = 0; k <= k_max; ++k) {
      sq[i][k] = dot(d, d);
      if (k < k_max) d = multiply(scheme.g, d);
    }
  });

  double rho = 0.0;
  try {
    rho = power_spectral_radius([&](const Vector& v) { return multiply(scheme.g, v); }, m,
                                power_iters, split_seed(seed, 0xC0FFEE));
  } catch (const NumericalError&) {
    rho = 0.0;  // every start vector annihilated: G is nilpotent
  }

  std::vector<MeanRateRecord> out(k_max + 1);
  DenseMatrix gk = DenseMatrix::identity(m);
  const double n = static_cast<double>(n_trials);
  for (std::size_t k = 0; k <= k_max; ++k) {
    Vector col(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i) col[i] = sq[i][k];
    const double mean = pairwise_sum(col) / n;
    double var = 0.0;
    for (std::size_t i = 0; i < n_trials; ++i) var += (sq[i][k] - mean) * (sq[i][k] - mean);
    var = n_trials > 1 ? var / (n - 1.0) : 0.0;
    auto& rec = out[k];
    rec.k = k;
    rec.empirical_ek = std::sqrt(mean);
    rec.std_err = mean > 0.0 ? std::sqrt(var / n) / (2.0 * rec.empirical_ek) : 0.0;
    rec.frob_norm = gk.frobenius_norm();
    rec.rho_pow = std::pow(rho, static_cast<double>(k));
    if (k < k_max) gk = multiply(scheme.g, gk);
  }
  return out;
}

}  // namespace pcgopt

#endif  // PCGOPT_STATIONARY_HPP
