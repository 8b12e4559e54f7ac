#ifndef PCGOPT_DENSE_HPP
#define PCGOPT_DENSE_HPP

// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by the implicit-shift QL iteration. Used as an oracle for Lanczos
// estimates and for small spectra dumps, so it favours clarity over blocking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/vector_ops.hpp"

namespace pcgopt {

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
  }
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a.cols, b.rows, "multiply");
  DenseMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline Vector multiply(const DenseMatrix& a, std::span<const double> x) {
  require_same_size(a.cols, x.size(), "multiply");
  Vector y(a.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  }
  return t;
}

struct EigenDecomposition {
  Vector values;                       // ascending
  std::optional<DenseMatrix> vectors;  // column j pairs with values[j]
};

namespace detail {

constexpr int kMaxQlSweeps = 50;

// Implicit QL on the symmetric tridiagonal (d, e), e[i] coupling i and i+1.
// When z is given its columns are rotated along (z starts as the basis in
// which the tridiagonal matrix is expressed).
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, DenseMatrix* z) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e.resize(static_cast<std::size_t>(n), 0.0);
  e[static_cast<std::size_t>(n - 1)] = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto D = [&](int i) -> double& { return d[static_cast<std::size_t>(i)]; };
  auto E = [&](int i) -> double& { return e[static_cast<std::size_t>(i)]; };

  for (int l = 0; l < n; ++l) {
    int sweeps = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(D(m)) + std::abs(D(m + 1));
        if (std::abs(E(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == kMaxQlSweeps) {
        throw NumericalError("dense_sym_eig: QL iteration did not converge for eigenvalue " +
                             std::to_string(l));
      }
      double g = (D(l + 1) - D(l)) / (2.0 * E(l));
      double r = std::hypot(g, 1.0);
      g = D(m) - D(l) + E(l) / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      int i = m - 1;
      bool deflated = false;
      for (; i >= l; --i) {
        double f = s * E(i);
        const double b = c * E(i);
        r = std::hypot(f, g);
        E(i + 1) = r;
        if (r == 0.0) {
          D(i + 1) -= p;
          E(m) = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = D(i + 1) - p;
        r = (D(i) - g) * s + 2.0 * c * b;
        p = s * r;
        D(i + 1) = g + p;
        g = c * r - b;
        if (z != nullptr) {
          const auto ii = static_cast<std::size_t>(i);
          for (std::size_t k = 0; k < z->rows; ++k) {
            f = (*z)(k, ii + 1);
            (*z)(k, ii + 1) = s * (*z)(k, ii) + c * f;
            (*z)(k, ii) = c * (*z)(k, ii) - s * f;
          }
        }
      }
      if (deflated) continue;
      D(l) -= p;
      E(l) = g;
      E(m) = 0.0;
    } while (m != l);
  }
}

inline EigenDecomposition sorted(std::vector<double> d, std::optional<DenseMatrix> z) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  EigenDecomposition out;
  out.values.resize(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) out.values[j] = d[order[j]];
  if (z) {
    DenseMatrix v(z->rows, z->cols);
    for (std::size_t i = 0; i < z->rows; ++i) {
      for (std::size_t j = 0; j < order.size(); ++j) v(i, j) = (*z)(i, order[j]);
    }
    out.vectors = std::move(v);
  }
  return out;
}

}  // namespace detail

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and sub/super-diagonal `offdiag` (one shorter).
inline EigenDecomposition tridiag_eig(std::span<const double> diag,
                                      std::span<const double> offdiag,
                                      bool want_vectors = false) {
  if (!diag.empty() && offdiag.size() + 1 != diag.size()) {
    throw DimensionError("tridiag_eig: offdiag must be one shorter than diag");
  }
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(offdiag.begin(), offdiag.end());
  std::optional<DenseMatrix> z;
  if (want_vectors) z = DenseMatrix::identity(d.size());
  detail::tridiagonal_ql(d, std::move(e), z ? &*z : nullptr);
  return detail::sorted(std::move(d), std::move(z));
}

/// Eigenvalues (ascending) and optionally eigenvectors of a dense symmetric
/// matrix. Input must be symmetric to 1e-12 relative to its largest entry.
inline EigenDecomposition dense_sym_eig(const DenseMatrix& a, bool want_vectors = false) {
  if (a.rows != a.cols) throw DimensionError("dense_sym_eig: matrix not square");
  const std::size_t n = a.rows;
  if (n == 0) return {};
  double scale = 0.0;
  for (double v : a.data) scale = std::max(scale, std::abs(v));
  bool tridiagonal = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale) {
        throw NumericalError("dense_sym_eig: matrix is not symmetric at (" + std::to_string(i) +
                             ", " + std::to_string(j) + ")");
      }
      if (i > j + 1 && a(i, j) != 0.0) tridiagonal = false;
    }
  }
  if (tridiagonal) {
    Vector d(n), e(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = a(i + 1, i);
    return tridiag_eig(d, e, want_vectors);
  }

  // Householder reduction working on the lower triangle of w. The reflector
  // for column k is kept in w(k+1.., k).
  DenseMatrix w = a;
  Vector d(n), e(n - 1, 0.0), tau(n, 0.0), p(n), v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the reflector
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += w(i, k) * w(i, k);
    const double x0 = w(k + 1, k);
    const double tail2 = xnorm2 - x0 * x0;
    d[k] = w(k, k);
    if (tail2 == 0.0) {
      e[k] = x0;
      tau[k] = 0.0;
      continue;
    }
    const double alpha = -std::copysign(std::sqrt(xnorm2), x0);
    for (std::size_t i = 0; i < m; ++i) v[i] = w(k + 1 + i, k);
    v[0] -= alpha;
    const double vnorm2 = tail2 + v[0] * v[0];
    const double t = 2.0 / vnorm2;
    e[k] = alpha;
    tau[k] = t;
    for (std::size_t i = 0; i < m; ++i) w(k + 1 + i, k) = v[i];

    // p = t * B v over the lower triangle of B = w(k+1.., k+1..)
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double* bi = &w(k + 1 + i, k + 1);
      double acc = 0.0;
      const double vi = v[i];
      for (std::size_t j = 0; j < i; ++j) {
        acc += bi[j] * v[j];
        p[j] += bi[j] * vi;
      }
      p[i] += acc + bi[i] * vi;
    }
    double pv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] *= t;
      pv += p[i] * v[i];
    }
    const double half = 0.5 * t * pv;
    for (std::size_t i = 0; i < m; ++i) p[i] -= half * v[i];
    // B -= v p^T + p v^T (lower triangle)
    for (std::size_t i = 0; i < m; ++i) {
      double* bi = &w(k + 1 + i, k + 1);
      const double vi = v[i];
      const double pi = p[i];
      for (std::size_t j = 0; j <= i; ++j) bi[j] -= vi * p[j] + pi * v[j];
    }
  }
  if (n >= 2) {
    d[n - 2] = w(n - 2, n - 2);
    e[n - 2] = w(n - 1, n - 2);
  }
  d[n - 1] = w(n - 1, n - 1);

  std::optional<DenseMatrix> z;
  if (want_vectors) {
    DenseMatrix q = DenseMatrix::identity(n);
    for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
      if (tau[k] == 0.0) continue;
      const std::size_t m = n - k - 1;
      // q(k+1.., k+1..) = (I - tau v v^T) q(k+1.., k+1..)
      for (std::size_t j = k + 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w(k + 1 + i, k) * q(k + 1 + i, j);
        s *= tau[k];
        for (std::size_t i = 0; i < m; ++i) q(k + 1 + i, j) -= s * w(k + 1 + i, k);
      }
    }
    z = std::move(q);
  }
  e.resize(n - 1);
  detail::tridiagonal_ql(d, std::move(e), z ? &*z : nullptr);
  return detail::sorted(std::move(d), std::move(z));
}

}  // namespace pcgopt

#endif  // PCGOPT_DENSE_HPP
