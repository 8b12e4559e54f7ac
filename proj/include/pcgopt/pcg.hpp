#ifndef PCGOPT_PCG_HPP
#define PCGOPT_PCG_HPP

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/precond.hpp"
#include "pcgopt/sparse.hpp"

namespace pcgopt {

/// Per-iteration record of a preconditioned CG run. Index k of relres, err2
/// and errA refers to iterate x_k (k = 0 is the initial guess). cg_alpha[k]
/// and cg_beta[k] are the step length and direction update of step k + 1.
struct PcgTrace {
  Vector relres;
  Vector err2;  // empty unless x_star was supplied
  Vector errA;  // ditto
  Vector cg_alpha;
  Vector cg_beta;
  Vector final_x;
  std::size_t iters_done = 0;

  bool has_errors() const noexcept { return !errA.empty(); }
};

struct PcgOptions {
  std::size_t max_iters = 1000;
  double rel_tol = 1e-7;  // 0 disables the early stop
};

namespace detail {
inline double a_norm(const CsrMatrix& a, std::span<const double> v, Vector& scratch) {
  spmv(a, v, scratch);
  return std::sqrt(std::max(0.0, dot(v, scratch)));
}
}  // namespace detail

/// Preconditioned conjugate gradients. Stops when ||r_k|| / ||r_0|| <= rel_tol
/// or after max_iters steps, or when the residual vanishes exactly.
inline PcgTrace pcg(const CsrMatrix& a, std::span<const double> b, std::span<const double> x0,
                    const Preconditioner& m, const PcgOptions& opts,
                    std::optional<std::span<const double>> x_star = std::nullopt) {
  const std::size_t n = a.nrows;
  require_same_size(a.ncols, n, "pcg");
  require_same_size(b.size(), n, "pcg");
  require_same_size(x0.size(), n, "pcg");
  require_same_size(m.dim(), n, "pcg");
  if (x_star) require_same_size(x_star->size(), n, "pcg");
  if (!(opts.rel_tol >= 0.0)) throw ParameterError("pcg: rel_tol must be >= 0");

  PcgTrace t;
  Vector x(x0.begin(), x0.end());
  Vector r = spmv(a, x);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  Vector z(n), p(n), ap(n), err(n), scratch(n);

  auto record_error = [&] {
    if (!x_star) return;
    for (std::size_t i = 0; i < n; ++i) err[i] = (*x_star)[i] - x[i];
    t.err2.push_back(norm2(err));
    t.errA.push_back(detail::a_norm(a, err, scratch));
  };

  const double r0 = norm2(r);
  t.relres.push_back(1.0);
  record_error();
  if (r0 == 0.0) {
    t.final_x = std::move(x);
    return t;
  }

  m.apply(r, z);
  double rz = dot(r, z);
  if (!(rz > 0.0)) throw NumericalError("pcg: indefinite preconditioner, <M^-1 r, r> <= 0");
  p = z;

  for (std::size_t k = 0; k < opts.max_iters; ++k) {
    spmv(a, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw NumericalError("pcg: indefinite matrix, <Ap, p> <= 0");
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    t.cg_alpha.push_back(alpha);
    ++t.iters_done;

    const double rnorm = norm2(r);
    t.relres.push_back(rnorm / r0);
    record_error();
    if (rnorm == 0.0 || t.relres.back() <= opts.rel_tol || k + 1 == opts.max_iters) break;

    m.apply(r, z);
    const double rz_next = dot(r, z);
    if (!(rz_next > 0.0)) {
      throw NumericalError("pcg: indefinite preconditioner, <M^-1 r, r> <= 0");
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    t.cg_beta.push_back(beta);
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  t.final_x = std::move(x);
  return t;
}

}  // namespace pcgopt

#endif  // PCGOPT_PCG_HPP
