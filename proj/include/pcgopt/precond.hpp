#ifndef PCGOPT_PRECOND_HPP
#define PCGOPT_PRECOND_HPP

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/sparse.hpp"
#include "pcgopt/spectrum.hpp"

namespace pcgopt {

enum class PrecondKind { identity, ric0, ssor, jacobi };

inline std::string to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::identity: return "identity";
    case PrecondKind::ric0: return "ric0";
    case PrecondKind::ssor: return "ssor";
    case PrecondKind::jacobi: return "jacobi";
  }
  return "?";
}

struct IdentityPrecond {};

/// M = L L^T from the relaxed incomplete Cholesky factorization.
struct Ric0Precond {
  TriFactor factor;
  double alpha = 0.0;
};

/// M = (D/w + L) (D/w)^{-1} (D/w + L)^T / (2 - w); `lower` stores D/w + L.
struct SsorPrecond {
  TriFactor lower;
  Vector diag;
  double omega = 1.0;
};

struct JacobiPrecond {
  Vector diag;
};

/// Immutable SPD preconditioner; apply() computes z = M^{-1} r and is safe to
/// call concurrently.
class Preconditioner {
 public:
  using Variant = std::variant<IdentityPrecond, Ric0Precond, SsorPrecond, JacobiPrecond>;

  Preconditioner(std::size_t dim, Variant v) : dim_(dim), impl_(std::move(v)) {}

  static Preconditioner identity(std::size_t dim) { return {dim, IdentityPrecond{}}; }

  std::size_t dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return impl_; }

  PrecondKind kind() const noexcept { return static_cast<PrecondKind>(impl_.index()); }

  /// Relaxation parameter (alpha or omega), 0 for parameter-free variants.
  double parameter() const noexcept {
    if (const auto* r = std::get_if<Ric0Precond>(&impl_)) return r->alpha;
    if (const auto* s = std::get_if<SsorPrecond>(&impl_)) return s->omega;
    return 0.0;
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    require_same_size(r.size(), dim_, "precond_apply");
    require_same_size(z.size(), dim_, "precond_apply");
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, IdentityPrecond>) {
            std::copy(r.begin(), r.end(), z.begin());
          } else if constexpr (std::is_same_v<T, JacobiPrecond>) {
            for (std::size_t i = 0; i < dim_; ++i) z[i] = r[i] / p.diag[i];
          } else if constexpr (std::is_same_v<T, Ric0Precond>) {
            std::copy(r.begin(), r.end(), z.begin());
            tri_solve_inplace(p.factor, z, false);
            tri_solve_inplace(p.factor, z, true);
          } else {
            std::copy(r.begin(), r.end(), z.begin());
            tri_solve_inplace(p.lower, z, false);
            for (std::size_t i = 0; i < dim_; ++i) z[i] *= p.diag[i] / p.omega;
            tri_solve_inplace(p.lower, z, true);
            const double s = 2.0 - p.omega;
            for (auto& v : z) v *= s;
          }
        },
        impl_);
  }

  Vector apply(std::span<const double> r) const {
    Vector z(dim_);
    apply(r, z);
    return z;
  }

  /// Applies C^{-1} (or C^{-T}) in place, where M = C C^T is the symmetric
  /// split used to form C^{-1} A C^{-T}.
  void split_solve(std::span<double> x, bool transposed) const {
    require_same_size(x.size(), dim_, "split_solve");
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, IdentityPrecond>) {
          } else if constexpr (std::is_same_v<T, JacobiPrecond>) {
            for (std::size_t i = 0; i < dim_; ++i) x[i] /= std::sqrt(p.diag[i]);
          } else if constexpr (std::is_same_v<T, Ric0Precond>) {
            tri_solve_inplace(p.factor, x, transposed);
          } else {
            // C = (D/w + L) (D/w)^{-1/2} / sqrt(2 - w)
            const double s = std::sqrt(2.0 - p.omega);
            if (!transposed) {
              tri_solve_inplace(p.lower, x, false);
              for (std::size_t i = 0; i < dim_; ++i) x[i] *= s * std::sqrt(p.diag[i] / p.omega);
            } else {
              for (std::size_t i = 0; i < dim_; ++i) x[i] *= s * std::sqrt(p.diag[i] / p.omega);
              tri_solve_inplace(p.lower, x, true);
            }
          }
        },
        impl_);
  }

 private:
  std::size_t dim_;
  Variant impl_;
};

namespace detail {
inline void require_square_positive_diagonal(const CsrMatrix& a, const char* where) {
  if (a.nrows != a.ncols) throw DimensionError(std::string(where) + ": matrix not square");
  for (std::size_t i = 0; i < a.nrows; ++i) {
    if (!(a.at(i, i) > 0.0)) {
      throw NumericalError(std::string(where) + ": nonpositive diagonal in row " +
                           std::to_string(i));
    }
  }
}
}  // namespace detail

/// Relaxed incomplete Cholesky without fill, RIC_alpha(0).
///
/// Row-wise elimination restricted to the pattern of A. Every update that
/// would create fill at (i, j) is dropped and alpha times it is subtracted
/// from the pivot of row i instead; since the pattern is symmetric the mirror
/// fill (j, i) is compensated in row j. alpha = 0 is plain IC(0), alpha = 1
/// is modified IC, whose factor preserves the row sums of A.
inline Preconditioner ric0_factorize(const CsrMatrix& a, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("ric0_factorize: alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  detail::require_square_positive_diagonal(a, "ric0_factorize");
  const std::size_t n = a.nrows;

  // Upper factor U = D L_unit^T kept row-wise (columns > i) plus pivots.
  std::vector<std::size_t> u_ptr{0};
  std::vector<std::size_t> u_col;
  std::vector<double> u_val;
  Vector pivot(n);

  std::vector<std::size_t> l_ptr{0};
  std::vector<std::size_t> l_col;
  std::vector<double> l_val;
  l_col.reserve(a.nnz() / 2 + n);
  l_val.reserve(a.nnz() / 2 + n);

  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(n, kAbsent);
  Vector work(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = a.row_ptr[i];
    const std::size_t end = a.row_ptr[i + 1];
    for (std::size_t k = begin; k < end; ++k) {
      slot[a.col_idx[k]] = k;
      work[a.col_idx[k]] = a.values[k];
    }
    double diag = work[i];
    for (std::size_t p = begin; p < end && a.col_idx[p] < i; ++p) {
      const std::size_t k = a.col_idx[p];
      const double mult = work[k] / pivot[k];
      work[k] = mult;
      for (std::size_t q = u_ptr[k]; q < u_ptr[k + 1]; ++q) {
        const std::size_t j = u_col[q];
        const double update = mult * u_val[q];
        if (j == i) {
          diag -= update;
        } else if (slot[j] != kAbsent) {
          work[j] -= update;
        } else {
          diag -= alpha * update;
        }
      }
    }
    if (!(diag > 0.0)) {
      for (std::size_t k = begin; k < end; ++k) slot[a.col_idx[k]] = kAbsent;
      throw BreakdownError("ric0_factorize: nonpositive pivot " + std::to_string(diag) +
                               " in row " + std::to_string(i),
                           i);
    }
    pivot[i] = diag;
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t j = a.col_idx[p];
      if (j < i) {
        l_col.push_back(j);
        l_val.push_back(work[j] * std::sqrt(pivot[j]));
      } else if (j > i) {
        u_col.push_back(j);
        u_val.push_back(work[j]);
      }
      slot[j] = kAbsent;
    }
    l_col.push_back(i);
    l_val.push_back(std::sqrt(diag));
    l_ptr.push_back(l_col.size());
    u_ptr.push_back(u_col.size());
  }

  Ric0Precond ric;
  ric.alpha = alpha;
  ric.factor.lower.nrows = ric.factor.lower.ncols = n;
  ric.factor.lower.row_ptr = std::move(l_ptr);
  ric.factor.lower.col_idx = std::move(l_col);
  ric.factor.lower.values = std::move(l_val);
  return {n, std::move(ric)};
}

/// SSOR(omega) preconditioner for symmetric A with positive diagonal.
inline Preconditioner ssor_build(const CsrMatrix& a, double omega) {
  if (!(omega > 0.0 && omega < 2.0)) {
    throw ParameterError("ssor_build: omega must lie in (0, 2), got " + std::to_string(omega));
  }
  detail::require_square_positive_diagonal(a, "ssor_build");
  const std::size_t n = a.nrows;
  SsorPrecond s;
  s.omega = omega;
  s.diag = a.diagonal_values();
  auto& l = s.lower.lower;
  l.nrows = l.ncols = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1] && a.col_idx[k] < i; ++k) {
      l.col_idx.push_back(a.col_idx[k]);
      l.values.push_back(a.values[k]);
    }
    l.col_idx.push_back(i);
    l.values.push_back(s.diag[i] / omega);
    l.row_ptr.push_back(l.col_idx.size());
  }
  return {n, std::move(s)};
}

inline Preconditioner jacobi_build(const CsrMatrix& a) {
  detail::require_square_positive_diagonal(a, "jacobi_build");
  return {a.nrows, JacobiPrecond{a.diagonal_values()}};
}

inline Vector precond_apply(const Preconditioner& p, std::span<const double> r) {
  return p.apply(r);
}

/// Spectral radius of the Jacobi iteration operator, computed on the similar
/// symmetric operator I - D^{-1/2} A D^{-1/2}.
inline double jacobi_spectral_radius(const CsrMatrix& a, std::size_t iters, std::uint64_t seed) {
  detail::require_square_positive_diagonal(a, "jacobi_spectral_radius");
  if (!a.has_offdiagonal()) return 0.0;
  Vector inv_sqrt = a.diagonal_values();
  for (auto& d : inv_sqrt) d = 1.0 / std::sqrt(d);
  auto apply = [&](const Vector& v) {
    Vector s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = inv_sqrt[i] * v[i];
    Vector w = spmv(a, s);
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] - inv_sqrt[i] * w[i];
    return w;
  };
  return power_spectral_radius(apply, a.nrows, iters, seed);
}

/// Classical SOR-optimal relaxation 2 / (1 + sqrt(1 - rho_J^2)). Throws
/// NumericalError when the Jacobi iteration diverges (rho_J >= 1).
inline double sor_optimal_omega(const CsrMatrix& a, std::size_t iters, std::uint64_t seed) {
  const double rho = jacobi_spectral_radius(a, iters, seed);
  if (rho >= 1.0) {
    throw NumericalError("sor_optimal_omega: Jacobi divergent (rho_J = " + std::to_string(rho) +
                         " >= 1), formula inapplicable");
  }
  return 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
}

}  // namespace pcgopt

#endif  // PCGOPT_PRECOND_HPP
