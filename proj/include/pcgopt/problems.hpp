#ifndef PCGOPT_PROBLEMS_HPP
#define PCGOPT_PROBLEMS_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/sparse.hpp"

namespace pcgopt {

/// -(D1 u_x)_x - (D2 u_y)_y = g on the unit square, u = 0 on the boundary,
/// discretized on `n_interior` x `n_interior` interior nodes.
enum class Coefficient { constant, discontinuous };

/// How the coefficient of the link between two neighbouring nodes is taken.
enum class LinkRule {
  midpoint,    // D evaluated at the link midpoint
  arithmetic,  // mean of D at the two nodes
  harmonic,    // harmonic mean of D at the two nodes
};

struct DiffusionSpec {
  std::size_t n_interior = 50;
  Coefficient coeff = Coefficient::constant;
  LinkRule link = LinkRule::harmonic;

  double mesh_width() const { return 1.0 / static_cast<double>(n_interior + 1); }
};

struct LinearSystem {
  CsrMatrix a;
  Vector b;
  std::optional<Vector> x_exact;
};

/// D1 at (x, y); D2 = D1 / 2. The closed square [1/4, 3/4]^2 is "inside".
inline double diffusion_d1(Coefficient coeff, double x, double y) {
  if (coeff == Coefficient::constant) return 1.0;
  const bool inside = x >= 0.25 && x <= 0.75 && y >= 0.25 && y <= 0.75;
  return inside ? 1000.0 : 1.0;
}

inline double diffusion_d2(Coefficient coeff, double x, double y) {
  if (coeff == Coefficient::constant) return 1.0;
  return 0.5 * diffusion_d1(coeff, x, y);
}

/// Five-point flux-form stencil without the 1/h^2 factor. Nodes are numbered
/// row by row (x fastest). Each link coefficient is computed once from the
/// link's doubled grid indices (see LinkRule), so A is exactly symmetric.
/// b = A x_exact with x_exact = sin(pi x) sin(pi y) at the nodes.
inline LinearSystem build_diffusion(const DiffusionSpec& spec) {
  const std::size_t n = spec.n_interior;
  if (n < 2) throw ParameterError("build_diffusion: n_interior must be >= 2");
  const double h = spec.mesh_width();
  // Coordinate of grid line index k (0 and n+1 are boundary lines); half
  // indices are passed doubled so midpoints are computed identically from
  // either side.
  auto coord2 = [h](std::size_t twice_index) { return 0.5 * static_cast<double>(twice_index) * h; };

  // Coefficient of the link whose midpoint sits at doubled grid indices
  // (mx2, my2); `along_x` tells which index is the odd (half) one.
  auto link = [&](double (*d)(Coefficient, double, double), std::size_t mx2, std::size_t my2,
                  bool along_x) {
    if (spec.link == LinkRule::midpoint) return d(spec.coeff, coord2(mx2), coord2(my2));
    const double a = along_x ? d(spec.coeff, coord2(mx2 - 1), coord2(my2))
                             : d(spec.coeff, coord2(mx2), coord2(my2 - 1));
    const double b = along_x ? d(spec.coeff, coord2(mx2 + 1), coord2(my2))
                             : d(spec.coeff, coord2(mx2), coord2(my2 + 1));
    if (spec.link == LinkRule::arithmetic) return 0.5 * (a + b);
    return 2.0 * a * b / (a + b);
  };

  std::vector<Triplet> t;
  t.reserve(5 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = j * n + i;
      // node (i, j) sits on grid lines (i+1, j+1)
      const std::size_t gx2 = 2 * (i + 1);
      const std::size_t gy2 = 2 * (j + 1);
      const double west = link(diffusion_d1, gx2 - 1, gy2, true);
      const double east = link(diffusion_d1, gx2 + 1, gy2, true);
      const double south = link(diffusion_d2, gx2, gy2 - 1, false);
      const double north = link(diffusion_d2, gx2, gy2 + 1, false);
      if (j > 0) t.push_back({row, row - n, -south});
      if (i > 0) t.push_back({row, row - 1, -west});
      t.push_back({row, row, west + east + south + north});
      if (i + 1 < n) t.push_back({row, row + 1, -east});
      if (j + 1 < n) t.push_back({row, row + n, -north});
    }
  }
  LinearSystem sys;
  sys.a = CsrMatrix::from_triplets(n * n, n * n, std::move(t), /*symmetric=*/true);
  Vector x(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      x[j * n + i] = std::sin(std::numbers::pi * coord2(2 * (i + 1))) *
                     std::sin(std::numbers::pi * coord2(2 * (j + 1)));
    }
  }
  sys.b = spmv(sys.a, x);
  sys.x_exact = std::move(x);
  return sys;
}

/// A = diag(1, 2, ..., m), x_exact = ones, b = A x_exact.
inline LinearSystem build_diag_demo(std::size_t m) {
  if (m < 2) throw ParameterError("build_diag_demo: m must be >= 2");
  Vector d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = static_cast<double>(i + 1);
  LinearSystem sys;
  sys.a = CsrMatrix::diagonal(d);
  sys.x_exact = Vector(m, 1.0);
  sys.b = spmv(sys.a, *sys.x_exact);
  return sys;
}

}  // namespace pcgopt

#endif  // PCGOPT_PROBLEMS_HPP
