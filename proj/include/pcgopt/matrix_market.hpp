#ifndef PCGOPT_MATRIX_MARKET_HPP
#define PCGOPT_MATRIX_MARKET_HPP

// Matrix Market exchange format, restricted to "coordinate real symmetric".
// Reading mirrors the stored lower triangle into a full-pattern CsrMatrix.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/sparse.hpp"

namespace pcgopt {

inline CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw FormatError("matrix market: missing %%MatrixMarket matrix banner");
  }
  if (lower(format) != "coordinate" || lower(field) != "real" || lower(symmetry) != "symmetric") {
    throw FormatError("matrix market: unsupported header '" + line +
                      "' (only coordinate real symmetric is accepted)");
  }

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%' &&
        line.find_first_not_of(" \t\r") != std::string::npos) {
      break;
    }
  }
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, entries = 0;
  if (!(size_line >> rows >> cols >> entries) || rows <= 0 || cols <= 0 || entries < 0) {
    throw FormatError("matrix market: bad size line '" + line + "'");
  }
  if (rows != cols) throw FormatError("matrix market: symmetric matrix must be square");

  const auto n = static_cast<std::size_t>(rows);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(entries) * 2);
  long long read = 0;
  while (read < entries && std::getline(in, line)) {
    if (line.empty() || line[0] == '%' || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) throw FormatError("matrix market: bad entry line '" + line + "'");
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw FormatError("matrix market: entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") outside declared size");
    }
    auto r = static_cast<std::size_t>(i - 1);
    auto c = static_cast<std::size_t>(j - 1);
    if (r < c) std::swap(r, c);  // upper-triangle entries are tolerated
    triplets.push_back({r, c, v});
    if (r != c) triplets.push_back({c, r, v});
    ++read;
  }
  if (read != entries) {
    throw FormatError("matrix market: expected " + std::to_string(entries) + " entries, found " +
                      std::to_string(read));
  }
  return CsrMatrix::from_triplets(n, n, std::move(triplets), /*symmetric=*/true);
}

inline CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file " + path.string());
  return read_matrix_market(in);
}

/// Writes the lower triangle of a symmetric matrix, values with 17
/// significant digits so a read-back reproduces them exactly.
inline void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
  if (a.nrows != a.ncols) throw DimensionError("write_matrix_market: matrix not square");
  std::size_t lower = 0;
  for (std::size_t i = 0; i < a.nrows; ++i) {
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) lower += a.col_idx[k] <= i;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.nrows << ' ' << a.ncols << ' ' << lower << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < a.nrows; ++i) {
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      if (a.col_idx[k] <= i) out << i + 1 << ' ' << a.col_idx[k] + 1 << ' ' << a.values[k] << '\n';
    }
  }
}

inline void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix file " + path.string());
  write_matrix_market(out, a);
}

}  // namespace pcgopt

#endif  // PCGOPT_MATRIX_MARKET_HPP
