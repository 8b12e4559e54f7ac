#ifndef PCGOPT_SPARSE_HPP
#define PCGOPT_SPARSE_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/vector_ops.hpp"

namespace pcgopt {

/// One (row, col, value) entry, 0-based.
struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Symmetric matrices store the full pattern;
/// `symmetric` records that the stored entries mirror each other exactly.
struct CsrMatrix {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  bool symmetric = false;

  std::size_t nnz() const noexcept { return values.size(); }

  /// Builds a matrix from unsorted triplets; duplicates are summed.
  static CsrMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                 std::vector<Triplet> entries, bool symmetric = false) {
    for (const auto& t : entries) {
      if (t.row >= nrows || t.col >= ncols) {
        throw DimensionError("from_triplets: entry (" + std::to_string(t.row) + ", " +
                             std::to_string(t.col) + ") out of range");
      }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    CsrMatrix m;
    m.nrows = nrows;
    m.ncols = ncols;
    m.symmetric = symmetric;
    m.row_ptr.assign(nrows + 1, 0);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& t = entries[k];
      if (!m.col_idx.empty() && k > 0 && entries[k - 1].row == t.row &&
          entries[k - 1].col == t.col) {
        m.values.back() += t.value;
        continue;
      }
      m.col_idx.push_back(t.col);
      m.values.push_back(t.value);
      ++m.row_ptr[t.row + 1];
    }
    std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
    return m;
  }

  static CsrMatrix identity(std::size_t n) { return diagonal(Vector(n, 1.0)); }

  static CsrMatrix diagonal(std::span<const double> d) {
    CsrMatrix m;
    m.nrows = m.ncols = d.size();
    m.symmetric = true;
    m.row_ptr.resize(d.size() + 1);
    std::iota(m.row_ptr.begin(), m.row_ptr.end(), std::size_t{0});
    m.col_idx.resize(d.size());
    std::iota(m.col_idx.begin(), m.col_idx.end(), std::size_t{0});
    m.values.assign(d.begin(), d.end());
    return m;
  }

  /// Stored value at (i, j), or 0 when (i, j) is outside the pattern.
  double at(std::size_t i, std::size_t j) const {
    const auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    const auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values[static_cast<std::size_t>(it - col_idx.begin())];
  }

  Vector diagonal_values() const {
    Vector d(std::min(nrows, ncols), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
    return d;
  }

  bool has_offdiagonal() const {
    for (std::size_t i = 0; i < nrows; ++i) {
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        if (col_idx[k] != i && values[k] != 0.0) return true;
      }
    }
    return false;
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < nrows; ++i) {
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        out.push_back({i, col_idx[k], values[k]});
      }
    }
    return out;
  }

  CsrMatrix transpose() const {
    auto t = triplets();
    for (auto& e : t) std::swap(e.row, e.col);
    return from_triplets(ncols, nrows, std::move(t), symmetric);
  }

  /// Checks structural invariants; throws FormatError describing the first
  /// violation.
  void validate() const {
    if (row_ptr.size() != nrows + 1 || row_ptr.front() != 0 || row_ptr.back() != values.size() ||
        col_idx.size() != values.size()) {
      throw FormatError("CsrMatrix: inconsistent array lengths");
    }
    for (std::size_t i = 0; i < nrows; ++i) {
      if (row_ptr[i] > row_ptr[i + 1]) throw FormatError("CsrMatrix: row_ptr decreasing");
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        if (col_idx[k] >= ncols) throw FormatError("CsrMatrix: column index out of range");
        if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1]) {
          throw FormatError("CsrMatrix: column indices not strictly increasing in row " +
                            std::to_string(i));
        }
      }
    }
  }

  /// True when every stored (i, j, v) has a bit-identical (j, i, v).
  bool is_exactly_symmetric() const {
    if (nrows != ncols) return false;
    for (std::size_t i = 0; i < nrows; ++i) {
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        const std::size_t j = col_idx[k];
        const auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[j]);
        const auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[j + 1]);
        const auto it = std::lower_bound(first, last, i);
        if (it == last || *it != i) return false;
        if (values[static_cast<std::size_t>(it - col_idx.begin())] != values[k]) return false;
      }
    }
    return true;
  }
};

/// y = A x with each row accumulated left to right.
inline void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.ncols || y.size() != a.nrows) {
    throw DimensionError("spmv: expected x of size " + std::to_string(a.ncols) + ", got " +
                         std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < a.nrows; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      s += a.values[k] * x[a.col_idx[k]];
    }
    y[i] = s;
  }
}

inline Vector spmv(const CsrMatrix& a, std::span<const double> x) {
  Vector y(a.nrows);
  spmv(a, x, y);
  return y;
}

/// Lower-triangular factor in CSR form with the diagonal stored as the last
/// entry of each row (unless unit_diag, in which case it is implicit).
struct TriFactor {
  CsrMatrix lower;
  bool unit_diag = false;

  std::size_t size() const noexcept { return lower.nrows; }
};

namespace detail {
inline double tri_pivot(const TriFactor& f, std::size_t i, std::size_t k_end) {
  if (f.unit_diag) return 1.0;
  const auto& l = f.lower;
  if (k_end == l.row_ptr[i] || l.col_idx[k_end - 1] != i || l.values[k_end - 1] == 0.0) {
    throw NumericalError("tri_solve: singular factor, zero or missing diagonal in row " +
                         std::to_string(i));
  }
  return l.values[k_end - 1];
}
}  // namespace detail

/// Solves L x = b, or L^T x = b when `transposed`, in place on x (x holds b
/// on entry).
inline void tri_solve_inplace(const TriFactor& f, std::span<double> x, bool transposed) {
  const auto& l = f.lower;
  require_same_size(x.size(), l.nrows, "tri_solve");
  const std::size_t n = l.nrows;
  if (!transposed) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k_end = l.row_ptr[i + 1];
      double s = x[i];
      std::size_t k = l.row_ptr[i];
      for (; k < k_end && l.col_idx[k] < i; ++k) s -= l.values[k] * x[l.col_idx[k]];
      x[i] = s / detail::tri_pivot(f, i, k_end);
    }
  } else {
    for (std::size_t i = n; i-- > 0;) {
      const std::size_t k_end = l.row_ptr[i + 1];
      x[i] /= detail::tri_pivot(f, i, k_end);
      const double xi = x[i];
      for (std::size_t k = l.row_ptr[i]; k < k_end && l.col_idx[k] < i; ++k) {
        x[l.col_idx[k]] -= l.values[k] * xi;
      }
    }
  }
}

inline Vector tri_solve(const TriFactor& f, std::span<const double> b, bool transposed) {
  Vector x(b.begin(), b.end());
  tri_solve_inplace(f, x, transposed);
  return x;
}

}  // namespace pcgopt

#endif  // PCGOPT_SPARSE_HPP
