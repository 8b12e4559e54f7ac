#ifndef PCGOPT_THEOREM_HPP
#define PCGOPT_THEOREM_HPP

// CG on A = diag(1..m) from an initial error whose leading s-1 eigen-
// components are set to a chosen value, compared with the CG run started
// without those components. Tracks the A-norm error, Chebyshev bounds with
// kappa_1 = lambda_m / lambda_1 and kappa_s = lambda_m / lambda_s, and the
// damping gamma_1 q(lambda_1) of the first component in both runs.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pcgopt/lanczos.hpp"
#include "pcgopt/pcg.hpp"
#include "pcgopt/problems.hpp"
#include "pcgopt/rng.hpp"

namespace pcgopt {

struct TheoremDemoConfig {
  std::size_t m = 1000;
  std::size_t s = 2;  // components 1..s-1 get gamma_head; s = 2 is the single-component case
  double gamma_head = 0.05;
  std::uint64_t seed = 1;
  std::size_t iters = 150;
  double delta = 1e-3;
};

struct TheoremDemoRow {
  std::size_t iter = 0;
  double errA = 0.0;
  double bound_C1 = 0.0;  // 2 C_1^j ||x - x_0||_A
  double bound_Cs = 0.0;  // 2 C_s^j ||x - x_0||_A
  double head_q = 0.0;
  double head_qbar = 0.0;
};

struct TheoremDemoResult {
  std::vector<TheoremDemoRow> rows;
  std::vector<double> errA_bar;  // A-norm error of the comparison run
  double c1 = 0.0;
  double cs = 0.0;
  double head_ratio = 0.0;  // sum_{i<s} l_i g_i^2 / sum_{i>=s} l_i g_i^2
  std::size_t j_delta = 0;  // largest J for which the smallness condition holds
  // errA >= |head_q| always (lambda_1 = 1), so the main-run curve is only
  // approached: crossing is taken against head_qbar, the comparison run
  std::optional<std::size_t> crossing;  // first j >= 1 with errA <= |head_qbar|
  std::size_t closest_approach = 0;     // argmin_j errA / |head_q|
  std::size_t bound_violations = 0;     // j <= J breaking 4(1+delta) C_s^{2j} bound
};

inline double chebyshev_factor(double kappa) {
  const double r = std::sqrt(kappa);
  return (r - 1.0) / (r + 1.0);
}

inline TheoremDemoResult theorem_demo(const TheoremDemoConfig& cfg) {
  if (cfg.m < 2) throw ParameterError("theorem_demo: m must be >= 2");
  if (cfg.s < 1 || cfg.s > cfg.m) throw ParameterError("theorem_demo: need 1 <= s <= m");
  if (cfg.iters < 1 || cfg.iters > cfg.m) throw ParameterError("theorem_demo: need 1 <= iters <= m");
  if (!(cfg.delta > 0.0)) throw ParameterError("theorem_demo: delta must be > 0");

  const auto sys = build_diag_demo(cfg.m);
  const Vector& x_star = *sys.x_exact;
  const std::size_t head = cfg.s - 1;

  NormalStream rng(cfg.seed);
  Vector gamma(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    const double g = rng.next();
    gamma[i] = i < head ? cfg.gamma_head : g;
  }
  Vector x0(cfg.m), x0_bar(cfg.m);
  double head_energy = 0.0, tail_energy = 0.0;
  for (std::size_t i = 0; i < cfg.m; ++i) {
    const double lambda = static_cast<double>(i + 1);
    x0[i] = x_star[i] - gamma[i];
    x0_bar[i] = i < head ? x_star[i] : x0[i];
    (i < head ? head_energy : tail_energy) += lambda * gamma[i] * gamma[i];
  }

  const auto P = Preconditioner::identity(cfg.m);
  const PcgOptions opts{cfg.iters, 0.0};
  const auto run = pcg(sys.a, sys.b, x0, P, opts, std::span<const double>(x_star));
  const auto run_bar = pcg(sys.a, sys.b, x0_bar, P, opts, std::span<const double>(x_star));

  TheoremDemoResult out;
  const double lambda_m = static_cast<double>(cfg.m);
  out.c1 = chebyshev_factor(lambda_m);
  out.cs = chebyshev_factor(lambda_m / static_cast<double>(cfg.s));
  out.head_ratio = tail_energy > 0.0 ? head_energy / tail_energy : 0.0;
  out.errA_bar = run_bar.errA;

  // J: largest j with head_ratio <= 4 C_s^{2j} delta (the right side decreases in j).
  out.j_delta = 0;
  for (std::size_t j = 1; j <= cfg.iters; ++j) {
    if (out.head_ratio <= 4.0 * std::pow(out.cs, 2.0 * static_cast<double>(j)) * cfg.delta) {
      out.j_delta = j;
    } else {
      break;
    }
  }

  const double gamma1 = gamma[0];
  const auto T = run.iters_done > 0 ? tridiag_from_trace(run) : LanczosTridiag{};
  const auto T_bar = run_bar.iters_done > 0 ? tridiag_from_trace(run_bar) : LanczosTridiag{};
  const double e0 = run.errA.front();
  double best_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < run.errA.size(); ++j) {
    TheoremDemoRow row;
    row.iter = j;
    row.errA = run.errA[j];
    row.bound_C1 = 2.0 * std::pow(out.c1, static_cast<double>(j)) * e0;
    row.bound_Cs = 2.0 * std::pow(out.cs, static_cast<double>(j)) * e0;
    row.head_q = gamma1;
    row.head_qbar = gamma1;
    if (j > 0) {
      row.head_q = gamma1 * residual_poly_value(ritz_values(T.leading(j)), 1.0);
      if (j <= T_bar.size()) {
        row.head_qbar = gamma1 * residual_poly_value(ritz_values(T_bar.leading(j)), 1.0);
      }
      if (!out.crossing && row.errA <= std::abs(row.head_qbar)) out.crossing = j;
      const double ratio = row.errA / std::abs(row.head_q);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        out.closest_approach = j;
      }
      if (j <= out.j_delta) {
        const double bound = 4.0 * (1.0 + cfg.delta) *
                             std::pow(out.cs, 2.0 * static_cast<double>(j)) * e0 * e0;
        if (row.errA * row.errA > bound * (1.0 + 1e-13)) ++out.bound_violations;
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace pcgopt

#endif  // PCGOPT_THEOREM_HPP
