#include "rmshell/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "rmshell/classical_reference.hpp"
#include "rmshell/presets.hpp"

namespace {

using rmshell::BoundaryData;
using rmshell::DimensionlessSet;
using rmshell::Equation;
using rmshell::make_problem;

//                                g1    g2   g3   beta  lc   delta
const DimensionlessSet<double> kFig2{1.45, 5.0, 2.0, 0.15, 2.0, 0.0};

rmshell::CoefficientSet<double> solve(const rmshell::ShellProblem& pr) {
  return rmshell::solve_coefficients(pr.material, pr.geometry, pr.boundary);
}

double fd_error(const rmshell::ShellProblem& pr, std::size_t n) {
  const rmshell::FieldEvaluator<double> exact(pr.material, pr.geometry, solve(pr));
  return rmshell::fd_displacement_error(rmshell::fd_solve(pr.material, pr.geometry, pr.boundary, n), exact);
}

TEST(Residuals, ThickShellBelowBudget) {
  const auto pr = make_problem(kFig2);
  const auto rep = rmshell::residual_check(pr.material, pr.geometry, solve(pr), 1000);
  EXPECT_EQ(rep.grid.size(), 1000U);
  EXPECT_GT(rep.grid.front(), pr.geometry.r_i);
  EXPECT_LT(rep.grid.back(), pr.geometry.r_o);
  EXPECT_LE(rep.max_radial(), 1e-7);
  EXPECT_EQ(rep.max_shear(), 0.0);
  EXPECT_GT(rep[Equation::kRadialBalance].normalization, 0.0);
}

TEST(Residuals, EveryPresetBelowBudget) {
  for (const auto& fig : rmshell::figure_presets()) {
    for (const auto& curve : fig.curves) {
      const auto pr = make_problem(curve.set);
      const auto rep = rmshell::residual_check(pr.material, pr.geometry, solve(pr), 1000);
      EXPECT_LE(rep.max_radial(), 1e-7) << "figure " << fig.id << " " << curve.label;
      EXPECT_EQ(rep.max_shear(), 0.0);
    }
  }
}

TEST(Residuals, ZeroDataGivesExactZeros) {
  auto pr = make_problem(kFig2);
  pr.boundary = {0.0, 0.0};
  const auto rep = rmshell::residual_check(pr.material, pr.geometry, solve(pr), 50);
  for (const auto& e : rep.equations) {
    EXPECT_EQ(e.max_abs, 0.0);
    EXPECT_EQ(e.max_normalized, 0.0);
  }
}

TEST(Residuals, TooFewSamplesRejected) {
  const auto pr = make_problem(kFig2);
  EXPECT_THROW(rmshell::residual_check(pr.material, pr.geometry, solve(pr), 9), rmshell::DomainError);
}

// Classical displacement with P = grad u meets the same boundary data but
// not the moment balances; the check must see that.
TEST(Residuals, DistinguishClassicalImpostor) {
  for (const auto& set : {kFig2, DimensionlessSet<double>{2.0, 5.0, 1.3, 0.15, 2.0, 0.0},
                          DimensionlessSet<double>{1.5, 5.0, 2.0, 0.25, 1.0, 0.5}}) {
    const auto pr = make_problem(set);
    const auto c = rmshell::classical_solve(pr.geometry, pr.boundary);
    auto fields = [&c](long double r) {
      const long double a = c.alpha;
      const long double b = c.beta;
      const long double u = a * r + b / r;
      return std::array<long double, 5>{u, a - b / (r * r), u / r, 0.0L, 0.0L};
    };
    const auto rep = rmshell::residual_check_fields<double, long double>(pr.material, pr.geometry, fields, 200);
    EXPECT_GT(rep.max_radial(), 1e-2);
  }
}

TEST(FiniteDifference, ConvergesAtSecondOrder) {
  const auto pr = make_problem(kFig2);
  const double e512 = fd_error(pr, 512);
  const double e1024 = fd_error(pr, 1024);
  const double e2048 = fd_error(pr, 2048);
  EXPECT_LE(e1024, 1e-3);
  EXPECT_LE(e2048, 1e-4);
  const double order = rmshell::observed_order(e512, e2048, 1.0 / 511, 1.0 / 2047);
  EXPECT_NEAR(order, 2.0, 0.3);
  EXPECT_NEAR(e1024 / e2048, 4.0, 1.2);
}

TEST(FiniteDifference, EveryPresetWithinTolerance) {
  for (const auto& fig : rmshell::figure_presets()) {
    for (const auto& curve : fig.curves) {
      const auto pr = make_problem(curve.set);
      const double e1024 = fd_error(pr, 1024);
      EXPECT_LE(e1024, 1e-3) << "figure " << fig.id << " " << curve.label;
      EXPECT_LT(fd_error(pr, 2048), e1024);
    }
  }
}

TEST(FiniteDifference, BoundaryRowsImposedExactly) {
  auto pr = make_problem(DimensionlessSet<double>{1.5, 5.5, 2.0, 0.2, 1.0, -0.5});
  const auto fd = rmshell::fd_solve(pr.material, pr.geometry, pr.boundary, 200);
  EXPECT_EQ(fd.r.front(), pr.geometry.r_i);
  EXPECT_EQ(fd.r.back(), pr.geometry.r_o);
  EXPECT_EQ(fd.u_r.front(), pr.boundary.u_i);
  EXPECT_EQ(fd.u_r.back(), pr.boundary.u_o);
  EXPECT_EQ(fd.p_tt.front(), pr.boundary.u_i / pr.geometry.r_i);
  EXPECT_EQ(fd.p_tt.back(), pr.boundary.u_o / pr.geometry.r_o);
  EXPECT_EQ(fd.order, 2);
}

TEST(FiniteDifference, ZeroDataGivesZeroSolution) {
  auto pr = make_problem(kFig2);
  pr.boundary = {0.0, 0.0};
  const auto fd = rmshell::fd_solve(pr.material, pr.geometry, pr.boundary, 64);
  for (std::size_t k = 0; k < fd.size(); ++k) {
    EXPECT_EQ(fd.u_r[k], 0.0);
    EXPECT_EQ(fd.p_rr[k], 0.0);
    EXPECT_EQ(fd.p_tt[k], 0.0);
  }
}

TEST(FiniteDifference, CoupleModulusNeverRead) {
  const auto a = make_problem(kFig2, 1.0, 1.0, 1.0, 0.0);
  const auto b = make_problem(kFig2, 1.0, 1.0, 1.0, 100.0);
  const auto fa = rmshell::fd_solve(a.material, a.geometry, a.boundary, 128);
  const auto fb = rmshell::fd_solve(b.material, b.geometry, b.boundary, 128);
  EXPECT_EQ(fa.u_r, fb.u_r);
  EXPECT_EQ(fa.p_rr, fb.p_rr);
  EXPECT_EQ(fa.p_tt, fb.p_tt);
}

TEST(FiniteDifference, SmallGridRejected) {
  const auto pr = make_problem(kFig2);
  EXPECT_THROW(rmshell::fd_solve(pr.material, pr.geometry, pr.boundary, 31), rmshell::DomainError);
}

TEST(Energy, ZeroForZeroData) {
  const auto pr = make_problem(kFig2);
  EXPECT_EQ(rmshell::energy_check(pr.material, pr.geometry, BoundaryData<double>{0.0, 0.0}, 101), 0.0);
}

TEST(Energy, PositiveAndQuadratic) {
  for (const auto& fig : rmshell::figure_presets()) {
    for (const auto& curve : fig.curves) {
      const auto pr = make_problem(curve.set);
      const double e = rmshell::energy_check(pr.material, pr.geometry, pr.boundary, 1001);
      const BoundaryData<double> doubled{2 * pr.boundary.u_i, 2 * pr.boundary.u_o};
      const double e2 = rmshell::energy_check(pr.material, pr.geometry, doubled, 1001);
      EXPECT_GT(e, 0.0) << curve.label;
      EXPECT_LE(std::abs(e2 - 4 * e), 1e-8 * 4 * e) << curve.label;
    }
  }
}

TEST(Energy, OracleEnergyAgrees) {
  for (const auto& set : {kFig2, DimensionlessSet<double>{1.5, 5.0, 2.0, 0.25, 1.0, 0.5}}) {
    const auto pr = make_problem(set);
    const rmshell::FieldEvaluator<double> eval(pr.material, pr.geometry, solve(pr));
    const double exact = rmshell::energy_along(pr.material, eval, 4001);
    const double fd = rmshell::energy_along(pr.material, rmshell::fd_solve(pr.material, pr.geometry, pr.boundary, 1024));
    EXPECT_LE(std::abs(fd - exact), 1e-3 * exact);
  }
}

TEST(Verify, SolvedConstantsPass) {
  const auto pr = make_problem(kFig2);
  const auto rep = rmshell::verify(pr.material, pr.geometry, pr.boundary, solve(pr));
  EXPECT_TRUE(rep.passed()) << (rep.failures.empty() ? "" : rep.failures.front());
  EXPECT_LE(rep.residuals.max_radial(), 1e-7);
}

TEST(Verify, PerturbedConstantFails) {
  const auto pr = make_problem(kFig2);
  auto c = solve(pr);
  c.c1 *= 1.01;
  const auto rep = rmshell::verify(pr.material, pr.geometry, pr.boundary, c);
  EXPECT_FALSE(rep.passed());
  EXPECT_GT(rep.boundary.max(), 1e-9);
}

TEST(Verify, ZeroDataPassesWithZeroMetrics) {
  auto pr = make_problem(kFig2);
  pr.boundary = {0.0, 0.0};
  const auto rep = rmshell::verify(pr.material, pr.geometry, pr.boundary, solve(pr));
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.residuals.max_radial(), 0.0);
  EXPECT_EQ(rep.boundary.max(), 0.0);
  EXPECT_EQ(rep.fd_error, 0.0);
  EXPECT_EQ(rep.energy, 0.0);
  EXPECT_EQ(rep.energy_gap, 0.0);
}

}  // namespace
