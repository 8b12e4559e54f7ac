#ifndef PCGOPT_OPTIMIZE_HPP
#define PCGOPT_OPTIMIZE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/precond.hpp"
#include "pcgopt/stochastic.hpp"

namespace pcgopt {

/// Objective value marking a parameter at which the objective could not be
/// evaluated (e.g. factorization breakdown). Brent never fits a parabola
/// through such a point.
inline constexpr double kRejectedValue = std::numeric_limits<double>::max();

struct BrentSample {
  double x;
  double f;
};

struct BrentResult {
  double x_star = 0.0;
  double f_star = 0.0;
  std::size_t n_evals = 0;
  bool converged = false;
  std::vector<BrentSample> log;
};

/// Brent's bounded minimization: golden-section steps combined with
/// successive parabolic interpolation, one evaluation of f per step. Stops
/// once the bracket is narrower than xtol * (1 + |x|) or after max_evals
/// evaluations.
template <typename F>
BrentResult brent_minimize(F&& f, double lo, double hi, double xtol = 1e-5,
                           std::size_t max_evals = 100) {
  if (!(lo < hi)) throw ParameterError("brent_minimize: need lo < hi");
  if (!(xtol > 0.0)) throw ParameterError("brent_minimize: xtol must be > 0");
  if (max_evals < 1) throw ParameterError("brent_minimize: max_evals must be >= 1");

  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  BrentResult res;
  auto eval = [&](double x) {
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      throw NumericalError("brent_minimize: objective returned " + std::to_string(fx) +
                           " at x = " + std::to_string(x));
    }
    res.log.push_back({x, fx});
    ++res.n_evals;
    return fx;
  };

  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = eval(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  for (;;) {
    const double xm = 0.5 * (a + b);
    const double tol1 = 0.25 * xtol * (1.0 + std::abs(x));
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) {
      res.converged = true;
      break;
    }
    if (res.n_evals >= max_evals) break;

    bool take_golden = true;
    const bool fit_ok = fx < kRejectedValue && fw < kRejectedValue && fv < kRejectedValue;
    if (std::abs(e) > tol1 && fit_ok) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      if (std::isfinite(p) && std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        e = d;
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
        take_golden = false;
      }
    }
    if (take_golden) {
      e = (x >= xm) ? a - x : b - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
    const double fu = eval(u);

    if (fu <= fx) {
      if (u >= x) {
        a = x;
      } else {
        b = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  res.x_star = x;
  res.f_star = fx;
  return res;
}

enum class PrecondFamily { ric0, ssor };

inline Preconditioner build_family(const CsrMatrix& a, PrecondFamily family, double param) {
  return family == PrecondFamily::ric0 ? ric0_factorize(a, param) : ssor_build(a, param);
}

struct OptimizeSpec {
  PrecondFamily family = PrecondFamily::ric0;
  double lo = 0.9;
  double hi = 1.0;
  std::size_t K = 20;
  std::size_t n = 50;
  std::uint64_t seed = 1;
  double xtol = 1e-5;
  std::size_t max_evals = 100;
  FunctionalKind functional = FunctionalKind::Fs;
  TrialDistribution dist = TrialDistribution::normal();
  ErrorNorm norm = ErrorNorm::two_norm;
  std::size_t lanczos_iters = 300;
  bool oracle = false;

  void validate() const {
    if (!(lo < hi)) throw ParameterError("optimize: interval needs lo < hi");
    if (!(xtol > 0.0)) throw ParameterError("optimize: xtol must be > 0");
    if (K < 1) throw ParameterError("optimize: K must be >= 1");
    if (functional == FunctionalKind::Fs && n < 1) throw ParameterError("optimize: n must be >= 1");
    if (family == PrecondFamily::ric0 && (lo < 0.0 || hi > 1.0)) {
      throw ParameterError("optimize: ric0 interval must lie in [0, 1]");
    }
    if (family == PrecondFamily::ssor && (lo < 0.0 || hi > 2.0)) {
      throw ParameterError("optimize: ssor interval must lie in [0, 2]");
    }
  }
};

struct EvalLogEntry {
  double param = 0.0;
  double value = 0.0;
  double std_err = 0.0;
  bool rejected = false;
};

struct OptimizeOutcome {
  BrentResult result;
  std::vector<EvalLogEntry> log;
};

class OptimizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Evaluates the chosen functional for one preconditioner parameter. For F_s
/// the caller supplies the trial vectors so that every evaluation sees the
/// same random initial errors.
inline EvalLogEntry evaluate_functional(const CsrMatrix& a, const OptimizeSpec& spec,
                                        const std::vector<Vector>& trials, double param) {
  EvalLogEntry entry;
  entry.param = param;
  try {
    const auto m = build_family(a, spec.family, param);
    const auto ev = spec.functional == FunctionalKind::Fs
                        ? eval_Fs(a, m, spec.K, trials, spec.norm)
                        : eval_Fc(a, m, spec.K, spec.lanczos_iters, spec.seed, spec.oracle);
    entry.value = ev.value;
    entry.std_err = ev.std_err;
  } catch (const BreakdownError&) {
    entry.rejected = true;
  } catch (const ParameterError&) {
    entry.rejected = true;  // e.g. omega on the boundary of (0, 2)
  }
  if (entry.rejected) entry.value = kRejectedValue;
  return entry;
}

/// Minimizes F_s or F_c over the preconditioner parameter with Brent's method.
inline OptimizeOutcome optimize_parameter(const CsrMatrix& a, const OptimizeSpec& spec) {
  spec.validate();
  std::vector<Vector> trials;
  if (spec.functional == FunctionalKind::Fs) {
    trials = sample_trials(a.nrows, spec.n, spec.dist, spec.seed);
  }
  OptimizeOutcome out;
  auto objective = [&](double param) {
    out.log.push_back(evaluate_functional(a, spec, trials, param));
    return out.log.back().value;
  };
  out.result = brent_minimize(objective, spec.lo, spec.hi, spec.xtol, spec.max_evals);
  std::size_t ok = 0;
  for (const auto& e : out.log) ok += !e.rejected;
  if (ok < 3) {
    throw OptimizationError("optimize: only " + std::to_string(ok) +
                            " successful functional evaluations");
  }
  return out;
}

}  // namespace pcgopt

#endif  // PCGOPT_OPTIMIZE_HPP
