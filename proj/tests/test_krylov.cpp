#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pcgopt/lanczos.hpp"
#include "pcgopt/pcg.hpp"
#include "pcgopt/precond.hpp"
#include "pcgopt/problems.hpp"
#include "pcgopt/theorem.hpp"

using namespace pcgopt;

TEST(Pcg, IdentitySystemConvergesInOneStep) {
  const auto a = CsrMatrix::identity(4);
  const Vector b{1, -2, 3, 0.5};
  const auto t = pcg(a, b, Vector(4, 0.0), Preconditioner::identity(4), {});
  EXPECT_EQ(t.iters_done, 1u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(t.final_x[i], b[i]);
}

TEST(Pcg, ZeroResidualStopsImmediately) {
  const auto a = CsrMatrix::identity(3);
  const auto t = pcg(a, Vector{1, 1, 1}, Vector{1, 1, 1}, Preconditioner::identity(3), {});
  EXPECT_EQ(t.iters_done, 0u);
}

TEST(Pcg, ChebyshevBoundOnDiagonalDemo) {
  const auto sys = build_diag_demo(1000);
  NormalStream rng(17);
  const Vector x0 = rng.vector(1000);
  const auto t = pcg(sys.a, sys.b, x0, Preconditioner::identity(1000), {300, 0.0},
                     std::span<const double>(*sys.x_exact));
  const double c1 = (std::sqrt(1000.0) - 1) / (std::sqrt(1000.0) + 1);
  ASSERT_EQ(t.errA.size(), 301u);
  for (std::size_t k = 0; k < t.errA.size(); ++k) {
    EXPECT_LE(t.errA[k], 2.0 * std::pow(c1, static_cast<double>(k)) * t.errA[0] * (1 + 1e-13));
  }
}

TEST(Pcg, ErrorNormsMonotoneInANorm) {
  const auto sys = build_diffusion({12, Coefficient::discontinuous});
  const auto t = pcg(sys.a, sys.b, Vector(sys.a.nrows, 0.0), ric0_factorize(sys.a, 0.9), {},
                     std::span<const double>(*sys.x_exact));
  for (std::size_t k = 1; k < t.errA.size(); ++k) EXPECT_LE(t.errA[k], t.errA[k - 1] * (1 + 1e-12));
  EXPECT_LE(t.relres.back(), 1e-7);
}

// needs 23 steps here, reference K is 20 (see README notes)
TEST(Pcg, NearOptimalRicConvergesInAboutTwentySteps) {
  const auto sys = build_diffusion({50, Coefficient::constant});
  const auto t = pcg(sys.a, sys.b, Vector(sys.a.nrows, 0.0), ric0_factorize(sys.a, 0.983), {25, 1e-7});
  EXPECT_LE(t.relres.back(), 1e-7);
  EXPECT_LE(t.iters_done, 25u);
}

TEST(Pcg, IndefiniteMatrixDetected) {
  const auto a = CsrMatrix::diagonal(Vector{1, -1});
  EXPECT_THROW(pcg(a, Vector{1, 1}, Vector{0, 0}, Preconditioner::identity(2), {}), NumericalError);
}

TEST(Pcg, DimensionMismatch) {
  const auto a = CsrMatrix::identity(3);
  EXPECT_THROW(pcg(a, Vector(2, 1.0), Vector(3, 0.0), Preconditioner::identity(3), {}),
               DimensionError);
}

TEST(LanczosTridiag, ScalarOperatorOneStep) {
  const auto a = CsrMatrix::diagonal(Vector(5, 3.0));
  const auto t = pcg(a, Vector{1, 2, 3, 4, 5}, Vector(5, 0.0), Preconditioner::identity(5), {});
  const auto T = tridiag_from_trace(t);
  ASSERT_EQ(T.size(), 1u);
  EXPECT_NEAR(T.diag[0], 3.0, 1e-14);
}

TEST(LanczosTridiag, ExhaustedKrylovSpaceReproducesSpectrum) {
  const auto a = CsrMatrix::diagonal(Vector{1, 2, 3});
  const auto t = pcg(a, Vector{1, 1, 1}, Vector(3, 0.0), Preconditioner::identity(3), {3, 0.0});
  const Vector ritz = ritz_values(tridiag_from_trace(t));
  ASSERT_EQ(ritz.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ritz[i], i + 1.0, 1e-10);
}

TEST(LanczosTridiag, LeadingBlock) {
  const LanczosTridiag T{{1, 2, 3}, {4, 5}};
  const auto L = T.leading(2);
  EXPECT_EQ(L.diag, (Vector{1, 2}));
  EXPECT_EQ(L.offdiag, (Vector{4}));
}

TEST(LanczosTridiag, BadCoefficientsRejected) {
  PcgTrace t;
  t.cg_alpha = {1.0, -1.0};
  t.cg_beta = {0.5};
  EXPECT_THROW(tridiag_from_trace(t), NumericalError);
  t.cg_alpha = {1.0, 1.0};
  t.cg_beta = {-0.5};
  EXPECT_THROW(tridiag_from_trace(t), NumericalError);
}

TEST(ResidualPoly, Examples) {
  EXPECT_DOUBLE_EQ(residual_poly_value(Vector{0.3, 7.0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(residual_poly_value(Vector{2.0}, 2.0), 0.0);
  EXPECT_NEAR(residual_poly_value(Vector{1.0, 3.0}, 2.0), -1.0 / 3.0, 1e-15);
  EXPECT_THROW(residual_poly_value(Vector{1.0, 0.0}, 2.0), ParameterError);
}

TEST(ConditionNumber, PerfectPreconditionerGivesOne) {
  const auto a = oracle::tridiag(40, 4.0, -1.0);
  const auto m = ric0_factorize(a, 0.0);
  EXPECT_NEAR(preconditioned_condition_number(a, m, 60, 1, false).kappa, 1.0, 1e-10);
  EXPECT_NEAR(preconditioned_condition_number(a, m, 60, 1, true).kappa, 1.0, 1e-10);
}

TEST(ConditionNumber, DiagonalDemoKnownSpectrum) {
  const auto sys = build_diag_demo(1000);
  const auto s = preconditioned_condition_number(sys.a, Preconditioner::identity(1000), 200, 3, false);
  EXPECT_NEAR(s.kappa, 1000.0, 0.1);
}

TEST(ConditionNumber, LanczosAgreesWithDenseOracle) {
  const auto a = build_diffusion({12, Coefficient::discontinuous}).a;
  for (const auto& m : {ric0_factorize(a, 0.5), ssor_build(a, 1.4), jacobi_build(a)}) {
    const double dense = preconditioned_condition_number(a, m, 0, 0, true).kappa;
    const double lanczos = preconditioned_condition_number(a, m, 144, 5, false).kappa;
    EXPECT_NEAR(lanczos / dense, 1.0, 1e-6);
  }
}

TEST(ConditionNumber, DenseSpectrumMatchesDenseGeneralizedProblem) {
  // eigenvalues of M^{-1} A computed from the dense SSOR matrix
  const auto a = build_diffusion({4, Coefficient::constant}).a;
  const auto ad = oracle::to_dense(a);
  const auto l = oracle::cholesky(oracle::ssor_matrix(ad, 1.2));
  oracle::DenseMatrix s(ad.rows, ad.cols);
  // S = L^{-1} A L^{-T}, column by column
  for (std::size_t j = 0; j < ad.cols; ++j) {
    Vector e(ad.rows, 0.0);
    e[j] = 1.0;
    const Vector y = oracle::solve(pcgopt::transpose(l), e);
    const Vector w = oracle::solve(l, oracle::matvec(ad, y));
    for (std::size_t i = 0; i < ad.rows; ++i) s(i, j) = w[i];
  }
  for (std::size_t i = 0; i < s.rows; ++i) {
    for (std::size_t j = 0; j < i; ++j) s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));
  }
  const Vector want = dense_sym_eig(s).values;
  const Vector got = preconditioned_spectrum_dense(a, ssor_build(a, 1.2));
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
}

TEST(TheoremDemo, ZeroHeadGivesIdenticalRuns) {
  TheoremDemoConfig cfg;
  cfg.m = 200;
  cfg.gamma_head = 0.0;
  cfg.iters = 60;
  const auto res = theorem_demo(cfg);
  ASSERT_EQ(res.errA_bar.size(), res.rows.size());
  for (std::size_t j = 0; j < res.rows.size(); ++j) {
    EXPECT_NEAR(res.rows[j].errA, res.errA_bar[j], 1e-12 * (1 + res.rows[0].errA));
  }
}

TEST(TheoremDemo, ChebyshevFactors) {
  TheoremDemoConfig cfg;
  cfg.m = 100;
  cfg.s = 3;
  cfg.iters = 20;
  const auto res = theorem_demo(cfg);
  EXPECT_NEAR(res.c1, chebyshev_factor(100.0), 1e-15);
  EXPECT_NEAR(res.cs, chebyshev_factor(100.0 / 3.0), 1e-15);
  EXPECT_EQ(res.rows.front().iter, 0u);
}

TEST(TheoremDemo, ConfigValidation) {
  TheoremDemoConfig cfg;
  cfg.s = 0;
  EXPECT_THROW(theorem_demo(cfg), ParameterError);
  cfg = {};
  cfg.iters = 5000;
  EXPECT_THROW(theorem_demo(cfg), ParameterError);
}
