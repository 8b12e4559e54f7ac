#ifndef PCGOPT_EXPERIMENTS_HPP
#define PCGOPT_EXPERIMENTS_HPP

// Experiment drivers behind the command-line tool. Each writes one CSV table
// (header row, 17 significant digits) to the given stream.

#include <cstdio>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcgopt/error.hpp"
#include "pcgopt/lanczos.hpp"
#include "pcgopt/matrix_market.hpp"
#include "pcgopt/optimize.hpp"
#include "pcgopt/pcg.hpp"
#include "pcgopt/precond.hpp"
#include "pcgopt/problems.hpp"
#include "pcgopt/stationary.hpp"
#include "pcgopt/stochastic.hpp"
#include "pcgopt/theorem.hpp"

namespace pcgopt {

inline std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ProblemSpec {
  enum class Kind { diffusion_const, diffusion_disc, diag_demo, matrix_market };
  Kind kind = Kind::diffusion_const;
  std::size_t size = 50;  // n_interior or m
  std::string path;       // matrix_market only

  static ProblemSpec parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParameterError("problem '" + text + "' needs kind:arg");
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    ProblemSpec p;
    if (kind == "mm") {
      p.kind = Kind::matrix_market;
      p.path = arg;
      return p;
    }
    if (kind == "diffusion-const") {
      p.kind = Kind::diffusion_const;
    } else if (kind == "diffusion-disc") {
      p.kind = Kind::diffusion_disc;
    } else if (kind == "diag-demo") {
      p.kind = Kind::diag_demo;
    } else {
      throw ParameterError("unknown problem kind '" + kind + "'");
    }
    try {
      std::size_t used = 0;
      p.size = std::stoul(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw ParameterError("problem size '" + arg + "' is not a positive integer");
    }
    return p;
  }

  std::string str() const {
    switch (kind) {
      case Kind::diffusion_const: return "diffusion-const:" + std::to_string(size);
      case Kind::diffusion_disc: return "diffusion-disc:" + std::to_string(size);
      case Kind::diag_demo: return "diag-demo:" + std::to_string(size);
      case Kind::matrix_market: return "mm:" + path;
    }
    return "";
  }

  bool is_diffusion() const {
    return kind == Kind::diffusion_const || kind == Kind::diffusion_disc;
  }
};

/// Builds the linear system. Matrix Market problems get b = ones and no
/// known solution.
inline LinearSystem build_problem(const ProblemSpec& p) {
  switch (p.kind) {
    case ProblemSpec::Kind::diffusion_const:
      return build_diffusion({p.size, Coefficient::constant});
    case ProblemSpec::Kind::diffusion_disc:
      return build_diffusion({p.size, Coefficient::discontinuous});
    case ProblemSpec::Kind::diag_demo:
      return build_diag_demo(p.size);
    case ProblemSpec::Kind::matrix_market: {
      LinearSystem sys;
      sys.a = read_matrix_market(std::filesystem::path(p.path));
      sys.b = Vector(sys.a.nrows, 1.0);
      return sys;
    }
  }
  throw ParameterError("unknown problem");
}

struct PrecondSpec {
  PrecondKind kind = PrecondKind::identity;
  std::optional<double> param;

  static PrecondSpec parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    PrecondSpec s;
    if (name == "identity") {
      s.kind = PrecondKind::identity;
    } else if (name == "ric0") {
      s.kind = PrecondKind::ric0;
    } else if (name == "ssor") {
      s.kind = PrecondKind::ssor;
    } else if (name == "jacobi") {
      s.kind = PrecondKind::jacobi;
    } else {
      throw ParameterError("unknown preconditioner '" + name + "'");
    }
    if (colon != std::string::npos) {
      try {
        s.param = std::stod(text.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParameterError("bad preconditioner parameter in '" + text + "'");
      }
    }
    return s;
  }

  PrecondFamily family() const {
    if (kind == PrecondKind::ric0) return PrecondFamily::ric0;
    if (kind == PrecondKind::ssor) return PrecondFamily::ssor;
    throw ParameterError("preconditioner '" + to_string(kind) + "' has no parameter to optimize");
  }

  Preconditioner build(const CsrMatrix& a) const {
    switch (kind) {
      case PrecondKind::identity: return Preconditioner::identity(a.nrows);
      case PrecondKind::jacobi: return jacobi_build(a);
      case PrecondKind::ric0:
      case PrecondKind::ssor:
        if (!param) throw ParameterError(to_string(kind) + " needs a parameter (--param)");
        return build_family(a, family(), *param);
    }
    throw ParameterError("unknown preconditioner");
  }

  std::string str() const {
    return to_string(kind) + (param ? ":" + fmt_real(*param) : std::string());
  }
};

inline TrialDistribution parse_distribution(const std::string& text, const ProblemSpec& problem) {
  if (text == "normal") return TrialDistribution::normal();
  if (text.rfind("grf:", 0) == 0) {
    if (!problem.is_diffusion()) {
      throw ParameterError("grf trial distribution requires a diffusion problem");
    }
    double sigma2 = 0.0;
    try {
      sigma2 = std::stod(text.substr(4));
    } catch (const std::exception&) {
      throw ParameterError("bad grf variance in '" + text + "'");
    }
    return TrialDistribution::grf(sigma2, problem.size);
  }
  throw ParameterError("unknown distribution '" + text + "'");
}

struct ExperimentConfig {
  ProblemSpec problem;
  PrecondSpec precond;
  FunctionalKind functional = FunctionalKind::Fs;
  std::size_t K = 20;
  std::size_t n_trials = 50;
  std::uint64_t seed = 1;
  double lo = 0.9;
  double hi = 1.0;
  std::size_t grid_steps = 11;
  std::string dist = "normal";
  double tol = 1e-7;
  std::size_t max_iters = 0;  // 0: ten times the dimension
  ErrorNorm norm = ErrorNorm::two_norm;
  bool oracle = false;
  std::size_t lanczos_iters = 300;
  double xtol = 1e-5;
  std::size_t max_evals = 100;

  OptimizeSpec optimize_spec() const {
    OptimizeSpec s;
    s.family = precond.family();
    s.lo = lo;
    s.hi = hi;
    s.K = K;
    s.n = n_trials;
    s.seed = seed;
    s.xtol = xtol;
    s.max_evals = max_evals;
    s.functional = functional;
    s.dist = parse_distribution(dist, problem);
    s.norm = norm;
    s.lanczos_iters = lanczos_iters;
    s.oracle = oracle;
    return s;
  }

  void print(std::ostream& out) const {
    out << "problem=" << problem.str() << '\n'
        << "precond=" << precond.str() << '\n'
        << "functional=" << to_string(functional) << '\n'
        << "K=" << K << '\n'
        << "n_trials=" << n_trials << '\n'
        << "seed=" << seed << '\n'
        << "interval=" << fmt_real(lo) << ':' << fmt_real(hi) << '\n'
        << "grid_steps=" << grid_steps << '\n'
        << "dist=" << dist << '\n'
        << "tol=" << fmt_real(tol) << '\n'
        << "norm=" << (norm == ErrorNorm::two_norm ? "two" : "a") << '\n'
        << "oracle=" << (oracle ? "true" : "false") << '\n'
        << "lanczos_iters=" << lanczos_iters << '\n'
        << "xtol=" << fmt_real(xtol) << '\n'
        << "max_evals=" << max_evals << '\n';
  }
};

/// Eval log "param,functional_value" followed by "optimum,x*,f*,n_evals".
inline OptimizeOutcome cmd_optimize(const ExperimentConfig& cfg, std::ostream& out) {
  const auto sys = build_problem(cfg.problem);
  const auto outcome = optimize_parameter(sys.a, cfg.optimize_spec());
  out << "param,functional_value\n";
  for (const auto& e : outcome.log) {
    out << fmt_real(e.param) << ',' << (e.rejected ? std::string("inf") : fmt_real(e.value))
        << '\n';
  }
  out << "optimum," << fmt_real(outcome.result.x_star) << ',' << fmt_real(outcome.result.f_star)
      << ',' << outcome.result.n_evals << '\n';
  return outcome;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps < 2) throw ParameterError("grid needs at least 2 points");
  std::vector<double> g(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return g;
}

/// The chosen functional on an explicit parameter grid: "param,value,std_err".
inline std::vector<EvalLogEntry> cmd_curve(const ExperimentConfig& cfg,
                                           const std::vector<double>& grid, std::ostream& out) {
  const auto sys = build_problem(cfg.problem);
  const auto spec = cfg.optimize_spec();
  std::vector<Vector> trials;
  if (spec.functional == FunctionalKind::Fs) {
    trials = sample_trials(sys.a.nrows, spec.n, spec.dist, spec.seed);
  }
  std::vector<EvalLogEntry> rows;
  out << "param,value,std_err\n";
  for (double p : grid) {
    rows.push_back(evaluate_functional(sys.a, spec, trials, p));
    const auto& e = rows.back();
    out << fmt_real(p) << ',' << (e.rejected ? std::string("inf") : fmt_real(e.value)) << ','
        << fmt_real(e.std_err) << '\n';
  }
  return rows;
}

/// Convergence history from x_0 = 0: "iter,relres,err2,errA". Error columns
/// are empty when the exact solution is unknown.
inline PcgTrace cmd_pcg(const ExperimentConfig& cfg, std::ostream& out) {
  const auto sys = build_problem(cfg.problem);
  const auto m = cfg.precond.build(sys.a);
  const Vector x0(sys.a.nrows, 0.0);
  const std::size_t max_iters = cfg.max_iters > 0 ? cfg.max_iters : 10 * sys.a.nrows;
  std::optional<std::span<const double>> x_star;
  if (sys.x_exact) x_star = std::span<const double>(*sys.x_exact);
  auto trace = pcg(sys.a, sys.b, x0, m, PcgOptions{max_iters, cfg.tol}, x_star);
  out << "iter,relres,err2,errA\n";
  for (std::size_t k = 0; k < trace.relres.size(); ++k) {
    out << k << ',' << fmt_real(trace.relres[k]) << ',';
    if (trace.has_errors()) out << fmt_real(trace.err2[k]) << ',' << fmt_real(trace.errA[k]);
    else out << ',';
    out << '\n';
  }
  return trace;
}

/// Eigenvalues of the preconditioned matrix (dense path): "index,eigenvalue".
inline Vector cmd_spectrum(const ExperimentConfig& cfg, std::ostream& out) {
  const auto sys = build_problem(cfg.problem);
  const auto m = cfg.precond.build(sys.a);
  Vector ev = preconditioned_spectrum_dense(sys.a, m);
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < ev.size(); ++i) out << i << ',' << fmt_real(ev[i]) << '\n';
  return ev;
}

inline TheoremDemoResult cmd_theorem(const TheoremDemoConfig& cfg, std::ostream& out) {
  auto res = theorem_demo(cfg);
  out << "iter,errA,bound_C1,bound_Cs,head_q,head_qbar,J_delta\n";
  for (const auto& r : res.rows) {
    out << r.iter << ',' << fmt_real(r.errA) << ',' << fmt_real(r.bound_C1) << ','
        << fmt_real(r.bound_Cs) << ',' << fmt_real(r.head_q) << ',' << fmt_real(r.head_qbar) << ','
        << res.j_delta << '\n';
  }
  return res;
}

inline std::vector<MeanRateRecord> cmd_meanrate(std::size_t m, double rho_target,
                                                std::size_t k_max, std::size_t n_trials,
                                                std::uint64_t seed, std::ostream& out) {
  const auto scheme = random_contractive_scheme(m, rho_target, seed);
  auto recs = verify_mean_rate(scheme, k_max, n_trials, seed);
  out << "k,empirical_ek,frob_norm,rho_pow\n";
  for (const auto& r : recs) {
    out << r.k << ',' << fmt_real(r.empirical_ek) << ',' << fmt_real(r.frob_norm) << ','
        << fmt_real(r.rho_pow) << '\n';
  }
  return recs;
}

}  // namespace pcgopt

#endif  // PCGOPT_EXPERIMENTS_HPP
