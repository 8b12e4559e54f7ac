#ifndef PCGOPT_LANCZOS_HPP
#define PCGOPT_LANCZOS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcgopt/dense.hpp"
#include "pcgopt/error.hpp"
#include "pcgopt/pcg.hpp"
#include "pcgopt/precond.hpp"
#include "pcgopt/rng.hpp"
#include "pcgopt/spectrum.hpp"

namespace pcgopt {

/// Symmetric tridiagonal matrix; offdiag is one shorter than diag.
struct LanczosTridiag {
  Vector diag;
  Vector offdiag;

  std::size_t size() const noexcept { return diag.size(); }

  /// Leading j x j block.
  LanczosTridiag leading(std::size_t j) const {
    j = std::min(j, size());
    return {Vector(diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(j)),
            Vector(offdiag.begin(),
                   offdiag.begin() + static_cast<std::ptrdiff_t>(j > 0 ? j - 1 : 0))};
  }
};

/// Lanczos matrix of a CG run from its step lengths and direction updates:
/// T_jj = 1/alpha_j + beta_{j-1}/alpha_{j-1}, T_{j,j+1} = sqrt(beta_j)/alpha_j.
inline LanczosTridiag tridiag_from_trace(const PcgTrace& t) {
  const std::size_t k = t.cg_alpha.size();
  if (k == 0) throw ParameterError("tridiag_from_trace: trace has no iterations");
  if (t.cg_beta.size() + 1 < k) throw ParameterError("tridiag_from_trace: missing cg_beta");
  LanczosTridiag T;
  T.diag.resize(k);
  T.offdiag.resize(k - 1);
  for (std::size_t j = 0; j < k; ++j) {
    const double a = t.cg_alpha[j];
    if (!(a > 0.0)) throw NumericalError("tridiag_from_trace: nonpositive cg_alpha");
    T.diag[j] = 1.0 / a;
    if (j > 0) T.diag[j] += t.cg_beta[j - 1] / t.cg_alpha[j - 1];
    if (j + 1 < k) {
      const double b = t.cg_beta[j];
      if (b < 0.0) throw NumericalError("tridiag_from_trace: negative cg_beta");
      T.offdiag[j] = std::sqrt(b) / a;
    }
  }
  return T;
}

inline Vector ritz_values(const LanczosTridiag& T) {
  return tridiag_eig(T.diag, T.offdiag).values;
}

/// CG residual polynomial q(t) = prod (theta_i - t) / theta_i.
inline double residual_poly_value(std::span<const double> theta, double t) {
  double q = 1.0;
  for (double th : theta) {
    if (!(th > 0.0)) throw ParameterError("residual_poly_value: Ritz values must be positive");
    q *= (th - t) / th;
  }
  return q;
}

/// Dense C^{-1} A C^{-T} for the symmetric split M = C C^T of the
/// preconditioner (symmetrized to remove round-off asymmetry).
inline DenseMatrix split_preconditioned_dense(const CsrMatrix& a, const Preconditioner& m) {
  const std::size_t n = a.nrows;
  require_same_size(m.dim(), n, "split_preconditioned_dense");
  DenseMatrix s(n, n);
  Vector y(n), w(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(y.begin(), y.end(), 0.0);
    y[j] = 1.0;
    m.split_solve(y, true);
    spmv(a, y, w);
    m.split_solve(w, false);
    for (std::size_t i = 0; i < n; ++i) s(i, j) = w[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = s(j, i) = avg;
    }
  }
  return s;
}

/// Eigenvalues of the preconditioned matrix by dense formation.
inline Vector preconditioned_spectrum_dense(const CsrMatrix& a, const Preconditioner& m) {
  constexpr std::size_t kMaxDense = 3000;
  if (a.nrows > kMaxDense) {
    throw ParameterError("dense spectrum limited to m <= 3000, got " + std::to_string(a.nrows));
  }
  return dense_sym_eig(split_preconditioned_dense(a, m)).values;
}

struct LanczosResult {
  LanczosTridiag T;
  Vector ritz;
  bool invariant_subspace = false;  // exact breakdown: Ritz values are eigenvalues
  double residual_min = 0.0;        // residual bounds of the extreme Ritz pairs
  double residual_max = 0.0;
};

/// Lanczos on the generalized problem A z = lambda M z, run on A M^{-1} in the
/// M^{-1} inner product with full reorthogonalization. Stops early when the
/// extreme Ritz pairs have residuals below rel_tol times their Ritz values.
inline LanczosResult lanczos_extremes(const CsrMatrix& a, const Preconditioner& m,
                                      std::size_t max_iters, std::uint64_t seed,
                                      double rel_tol = 1e-9) {
  const std::size_t n = a.nrows;
  require_same_size(m.dim(), n, "lanczos");
  if (max_iters < 2) throw ParameterError("lanczos: need at least 2 iterations");
  max_iters = std::min(max_iters, n);

  NormalStream rng(split_seed(seed, 0x1A2C));
  std::vector<Vector> q, p;
  q.push_back(rng.vector(n));
  p.push_back(m.apply(q[0]));
  {
    const double nrm2 = dot(q[0], p[0]);
    if (!(nrm2 > 0.0)) throw NumericalError("lanczos: degenerate start vector");
    const double s = 1.0 / std::sqrt(nrm2);
    scale(s, q[0]);
    scale(s, p[0]);
  }

  LanczosResult res;
  Vector w(n);
  double op_scale = 0.0;

  // Ritz values of the current T and residual bounds |beta * y_k| of the
  // extreme Ritz pairs, beta being the coupling to the next Lanczos vector.
  auto analyse = [&](double beta) {
    const auto eig = tridiag_eig(res.T.diag, res.T.offdiag, true);
    res.ritz = eig.values;
    const std::size_t k = res.T.size();
    const auto& y = *eig.vectors;
    res.residual_min = std::abs(beta * y(k - 1, 0));
    res.residual_max = std::abs(beta * y(k - 1, k - 1));
    return res.residual_min <= rel_tol * std::abs(res.ritz.front()) &&
           res.residual_max <= rel_tol * std::abs(res.ritz.back());
  };

  for (std::size_t j = 0;; ++j) {
    spmv(a, p[j], w);
    const double alpha = dot(p[j], w);
    res.T.diag.push_back(alpha);
    op_scale = std::max(op_scale, std::abs(alpha));
    axpy(-alpha, q[j], w);
    if (j > 0) axpy(-res.T.offdiag.back(), q[j - 1], w);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= j; ++i) axpy(-dot(p[i], w), q[i], w);
    }
    Vector z = m.apply(w);
    const double b2 = dot(w, z);
    const double beta = b2 > 0.0 ? std::sqrt(b2) : 0.0;
    if (beta <= 1e-12 * op_scale) {
      res.invariant_subspace = true;
      analyse(0.0);
      return res;
    }
    const bool last = j + 1 == max_iters;
    if (((j + 1) % 10 == 0 || last) && analyse(beta)) return res;
    if (last) return res;
    res.T.offdiag.push_back(beta);
    scale(1.0 / beta, w);
    scale(1.0 / beta, z);
    q.push_back(w);
    p.push_back(std::move(z));
  }
}

/// Extreme eigenvalues and condition number of the preconditioned operator
/// M^{-1} A, by Lanczos or (oracle = true) dense formation.
inline SpectrumSummary preconditioned_condition_number(const CsrMatrix& a,
                                                       const Preconditioner& m,
                                                       std::size_t lanczos_iters,
                                                       std::uint64_t seed, bool oracle) {
  if (oracle) {
    const Vector ev = preconditioned_spectrum_dense(a, m);
    return SpectrumSummary::from_extremes(ev.front(), ev.back(), SpectrumMethod::dense);
  }
  const auto res = lanczos_extremes(a, m, lanczos_iters, seed);
  return SpectrumSummary::from_extremes(res.ritz.front(), res.ritz.back(),
                                        SpectrumMethod::lanczos);
}

}  // namespace pcgopt

#endif  // PCGOPT_LANCZOS_HPP
