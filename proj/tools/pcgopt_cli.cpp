// pcgopt: command-line runner for preconditioner-parameter experiments.
//
//   pcgopt optimize --problem diffusion-const:50 --precond ric0 --functional fs --K 20
//   pcgopt curve    --problem diffusion-const:50 --precond ric0 --grid 0.9:1:11
//   pcgopt pcg      --problem diffusion-disc:50 --precond ric0:0.9767
//   pcgopt spectrum --problem diffusion-const:50 --precond ric0:0.98
//   pcgopt theorem  --m 1000 --s 2 --gamma-head 0.05
//   pcgopt meanrate --m 50 --rho 0.8 --k-max 20 --n-trials 10000
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "pcgopt/experiments.hpp"
#include "pcgopt/parallel.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

std::pair<double, double> parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw pcgopt::ParameterError("interval must be lo:hi");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw pcgopt::ParameterError("bad interval '" + text + "'");
  }
}

struct Grid {
  double lo, hi;
  std::size_t steps;
};

Grid parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw pcgopt::ParameterError("grid must be lo:hi:steps");
  }
  try {
    return {std::stod(text.substr(0, c1)), std::stod(text.substr(c1 + 1, c2 - c1 - 1)),
            std::stoul(text.substr(c2 + 1))};
  } catch (const std::exception&) {
    throw pcgopt::ParameterError("bad grid '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preconditioner parameter optimization with stochastic and classical functionals"};
  app.require_subcommand(1);

  std::string problem = "diffusion-const:50";
  std::string precond = "identity";
  double param = 0.0;
  std::string functional = "fs";
  std::string interval;
  std::string grid = "0.9:1:11";
  std::string norm = "two";
  std::string out_path;
  std::size_t threads = 1;
  bool print_config = false;
  pcgopt::ExperimentConfig cfg;
  pcgopt::TheoremDemoConfig theorem;
  std::size_t mr_m = 50, mr_kmax = 20, mr_trials = 10000;
  double mr_rho = 0.8;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output CSV path (default: stdout)");
    sub->add_option("--seed", cfg.seed, "Master random seed");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sub->add_flag("--print-config", print_config, "Echo the resolved configuration to stderr");
  };
  auto add_problem = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--problem", problem,
                    "diffusion-const:<n> | diffusion-disc:<n> | diag-demo:<m> | mm:<path>");
    sub->add_option("--precond", precond, "identity | jacobi | ric0[:alpha] | ssor[:omega]");
    sub->add_option("--param", param, "Preconditioner parameter (alpha or omega)");
  };
  auto add_functional = [&](CLI::App* sub) {
    sub->add_option("--functional", functional, "fs | fc")
        ->check(CLI::IsMember({"fs", "fc"}));
    sub->add_option("--K", cfg.K, "PCG iterations inside the functional");
    sub->add_option("--n-trials", cfg.n_trials, "Random initial guesses for fs");
    sub->add_option("--dist", cfg.dist, "normal | grf:<sigma2>");
    sub->add_option("--norm", norm, "two | a")->check(CLI::IsMember({"two", "a"}));
    sub->add_flag("--oracle", cfg.oracle, "Dense eigensolver for fc instead of Lanczos");
    sub->add_option("--lanczos-iters", cfg.lanczos_iters, "Lanczos iteration cap for fc");
  };

  auto* optimize = app.add_subcommand("optimize", "Brent optimization of the parameter");
  add_problem(optimize);
  add_functional(optimize);
  optimize->add_option("--interval", interval, "Search interval lo:hi");
  optimize->add_option("--xtol", cfg.xtol, "Brent accuracy");
  optimize->add_option("--max-evals", cfg.max_evals, "Evaluation budget");

  auto* curve = app.add_subcommand("curve", "Functional on a parameter grid");
  add_problem(curve);
  add_functional(curve);
  curve->add_option("--grid", grid, "lo:hi:steps");

  auto* pcg = app.add_subcommand("pcg", "PCG convergence history");
  add_problem(pcg);
  pcg->add_option("--tol", cfg.tol, "Relative residual tolerance");
  pcg->add_option("--max-iters", cfg.max_iters, "Iteration cap (0 = 10 m)");

  auto* spectrum = app.add_subcommand("spectrum", "Dense spectrum of the preconditioned matrix");
  add_problem(spectrum);
  spectrum->add_flag("--oracle", cfg.oracle, "Accepted for symmetry; spectrum is always dense");

  auto* thm = app.add_subcommand("theorem", "CG error versus first-component damping");
  add_common(thm);
  thm->add_option("--m", theorem.m, "Dimension of diag(1..m)");
  thm->add_option("--s", theorem.s, "Components 1..s-1 set to --gamma-head");
  thm->add_option("--gamma-head", theorem.gamma_head, "Value of the leading components");
  thm->add_option("--iters", theorem.iters, "CG iterations");
  thm->add_option("--delta", theorem.delta, "Smallness threshold for J");

  auto* meanrate = app.add_subcommand("meanrate", "Stationary mean-rate check");
  add_common(meanrate);
  meanrate->add_option("--m", mr_m, "Dimension of G");
  meanrate->add_option("--rho", mr_rho, "Spectral radius of G");
  meanrate->add_option("--k-max", mr_kmax, "Largest power");
  meanrate->add_option("--n-trials", mr_trials, "Monte-Carlo trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    pcgopt::set_thread_count(threads);
    cfg.problem = pcgopt::ProblemSpec::parse(problem);
    cfg.precond = pcgopt::PrecondSpec::parse(precond);
    if (!cfg.precond.param && (optimize->parsed() || curve->parsed())) {
      // parameter search range defaults per family
      if (cfg.precond.kind == pcgopt::PrecondKind::ssor) {
        cfg.lo = 0.0;
        cfg.hi = 2.0;
      }
    }
    for (auto* sub : {optimize, curve, pcg, spectrum}) {
      if (sub->parsed() && sub->count("--param") > 0) cfg.precond.param = param;
    }
    cfg.functional = functional == "fs" ? pcgopt::FunctionalKind::Fs : pcgopt::FunctionalKind::Fc;
    cfg.norm = norm == "two" ? pcgopt::ErrorNorm::two_norm : pcgopt::ErrorNorm::a_norm;
    if (!interval.empty()) std::tie(cfg.lo, cfg.hi) = parse_interval(interval);
    const Grid g = parse_grid(grid);
    cfg.grid_steps = g.steps;
    theorem.seed = cfg.seed;

    if (print_config) {
      std::cerr << "command=" << app.get_subcommands().front()->get_name() << '\n';
      cfg.print(std::cerr);
    }

    std::unique_ptr<std::ofstream> file;
    if (!out_path.empty()) {
      file = std::make_unique<std::ofstream>(out_path);
      if (!*file) throw pcgopt::IoError("cannot write " + out_path);
    }
    std::ostream& out = file ? *file : std::cout;

    if (optimize->parsed()) {
      pcgopt::cmd_optimize(cfg, out);
    } else if (curve->parsed()) {
      pcgopt::cmd_curve(cfg, pcgopt::linear_grid(g.lo, g.hi, g.steps), out);
    } else if (pcg->parsed()) {
      pcgopt::cmd_pcg(cfg, out);
    } else if (spectrum->parsed()) {
      pcgopt::cmd_spectrum(cfg, out);
    } else if (thm->parsed()) {
      pcgopt::cmd_theorem(theorem, out);
    } else if (meanrate->parsed()) {
      pcgopt::cmd_meanrate(mr_m, mr_rho, mr_kmax, mr_trials, cfg.seed, out);
    }
    out.flush();
    if (!out) throw pcgopt::IoError("write failed");
  } catch (const pcgopt::ParameterError& e) {
    std::cerr << "pcgopt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pcgopt::DimensionError& e) {
    std::cerr << "pcgopt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pcgopt::NumericalError& e) {
    std::cerr << "pcgopt: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const pcgopt::IoError& e) {
    std::cerr << "pcgopt: " << e.what() << '\n';
    return kExitIo;
  } catch (const pcgopt::FormatError& e) {
    std::cerr << "pcgopt: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
