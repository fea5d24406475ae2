#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include <dspol/equilibrium.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dspol;
using fixtures::rel_err;

namespace {

DressedFrame fig3_frame()
{
    return fixtures::preset_frame("fig3");
}

DressedFrame fig3_frame_at(double delta_eff)
{
    return build_dressed_frame(
        with_tuning(fixtures::preset_params("fig3"), CavityTuning::effective(delta_eff)));
}

} // namespace

TEST(Hopfield, ResonantMixing)
{
    const auto h = hopfield_coefficients(0.0, 3.0);
    EXPECT_DOUBLE_EQ(h.x, 1.0 / std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(h.c, 1.0 / std::sqrt(2.0));
}

TEST(Hopfield, TenCouplingsDetuned)
{
    const double k = 0.7;
    const auto h = hopfield_coefficients(10.0 * k, k);
    EXPECT_NEAR(h.x, std::sqrt(0.5 * (1.0 + 10.0 / std::sqrt(104.0))), 1e-15);
    EXPECT_NEAR(h.x, 0.995133326668, 1e-12);
}

TEST(Hopfield, PhotonLikeAsymptote)
{
    const auto h = hopfield_coefficients(-1e9, 1.0);
    EXPECT_LT(h.x, 1e-8);
    EXPECT_DOUBLE_EQ(h.c, 1.0);
}

TEST(HopfieldProperty, Normalized)
{
    oracle::Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double k = rng.log_uniform(1e-4, 10.0);
        const double d = rng.uniform(-1.0, 1.0) * rng.log_uniform(1e-6, 1e4);
        const auto h = hopfield_coefficients(d, k);
        EXPECT_NEAR(h.x * h.x + h.c * h.c, 1.0, 1e-12);
    }
    EXPECT_THROW(hopfield_coefficients(1.0, 0.0), InvalidArgument);
}

TEST(NormalBranches, DegenerateAtHalfFilling)
{
    auto f = fig3_frame_at(0.0);
    const auto b = normal_branches(0.5, f);
    EXPECT_DOUBLE_EQ(b.mu_upper, b.mu_lower);
    EXPECT_DOUBLE_EQ(b.mu_upper, 0.5 * (f.delta_cav + f.omega_rabi));
}

TEST(NormalBranches, VacuumSplitting)
{
    const auto f = fig3_frame_at(0.0);
    const auto b = normal_branches(0.0, f);
    EXPECT_NEAR(b.mu_upper - b.mu_lower, 2.0 * f.kappa_12, 1e-12);
    EXPECT_GE(b.mu_upper, b.mu_lower);
}

TEST(NormalBranches, FigureThreeLowerBranch)
{
    // With delta_c = 0 the lower branch sits just below the pump, shifted by
    // -2 kappa^2 (1/2 - rho) / Omega_R to leading order.
    const auto f = fig3_frame();
    const auto b = normal_branches(0.27, f);
    const oracle::ld k = f.kappa_12;
    const oracle::ld r = f.omega_rabi;
    const oracle::ld exact = (r - std::sqrt(r * r + 8 * k * k * 0.23L)) / 2;
    EXPECT_LT(rel_err(b.mu_lower, static_cast<double>(exact)), 1e-9);
    EXPECT_NEAR(b.mu_lower, -0.10003, 1e-5);
    EXPECT_NEAR(units::to_thz(b.mu_upper), 11.0613, 1e-4);
}

TEST(NormalBranches, ComplexRadicandRejected)
{
    EXPECT_THROW(normal_branches(0.9, fig3_frame_at(0.0)), DomainError);
}

TEST(CriticalTemperature, FigureThreeValue)
{
    const auto f = fig3_frame();
    EXPECT_NEAR(critical_temperature(0.27, f.delta_eff), 532.9574, 1e-3);
    EXPECT_NEAR(critical_temperature(0.27, -units::from_thz(22.0)), 1061.54, 1e-2);
    EXPECT_DOUBLE_EQ(critical_temperature(0.27, 2.0 * f.delta_eff),
                     2.0 * critical_temperature(0.27, f.delta_eff));
}

TEST(CriticalTemperature, Errors)
{
    EXPECT_THROW(critical_temperature(0.5, -1.0), DomainError);
    EXPECT_THROW(critical_temperature(0.27, 1.0), DomainError);
    EXPECT_THROW(critical_temperature(0.0, -1.0), InvalidArgument);
    EXPECT_GT(critical_temperature(0.5 - 1e-9, -1.0), 1e8);
}

TEST(CriticalTemperature, ExactApproachesFarDetunedLimit)
{
    double prev = INFINITY;
    for (double ratio : {5.0, 10.0, 30.0, 100.0, 1000.0}) {
        const auto f0 = fig3_frame();
        const auto f = fig3_frame_at(-ratio * f0.kappa_12);
        const double gap = rel_err(critical_temperature_exact(0.27, f), critical_temperature(0.27, f.delta_eff));
        EXPECT_LT(gap, prev) << ratio;
        EXPECT_LT(gap, 2.0 / (ratio * ratio)) << ratio;
        prev = gap;
    }
}

TEST(SolveGap, NormalStateAboveTc)
{
    const auto f = fig3_frame();
    const auto s = solve_gap(0.27, f, 600.0);
    EXPECT_EQ(s.lambda, 0.0);
    EXPECT_TRUE(s.converged);
    EXPECT_EQ(s.root_count, 0);
}

TEST(SolveGap, FigureThreeAt400K)
{
    const auto f = fig3_frame();
    const auto s = solve_gap(0.27, f, 400.0);
    ASSERT_TRUE(s.converged);
    EXPECT_NEAR(s.lambda, 0.245811, 1e-6);
    const double closed = order_parameter_closed_form(0.27, f.delta_eff, 400.0, std::sqrt(0.27));
    EXPECT_LT(rel_err(s.lambda, closed), 0.05);
    EXPECT_EQ(s.root_count, 1);
}

TEST(SolveGap, FigureThreeAt530K)
{
    const auto f = fig3_frame();
    const auto s = solve_gap(0.27, f, 530.0);
    ASSERT_TRUE(s.converged);
    EXPECT_NEAR(s.lambda, 0.0371109, 1e-6);
    // Within 3 K of the transition the closed form inherits the O(kappa^2/Delta^2) shift
    // of the critical temperature, amplified by the square-root onset.
    const double closed = order_parameter_closed_form(0.27, f.delta_eff, 530.0, std::sqrt(0.27));
    EXPECT_NEAR(closed, 0.0330531, 1e-6);
    EXPECT_LT(rel_err(s.lambda, closed), 0.15);
}

TEST(SolveGap, MatchesDirectTwoEquationOracle)
{
    const auto f0 = fig3_frame();
    for (double ratio : {3.0, 10.0, 17.8}) {
        const auto f = fig3_frame_at(-ratio * f0.kappa_12);
        const double tc = critical_temperature_exact(0.27, f);
        for (double rho : {0.1, 0.27, 0.45}) {
            const double tcr = critical_temperature_exact(rho, f);
            for (double frac : {0.3, 0.7, 0.95}) {
                const double t = frac * tcr;
                const auto s = solve_gap(rho, f, t);
                const double o = static_cast<double>(oracle::gap_lambda(rho, f.delta_eff, f.kappa_12, t));
                ASSERT_GT(o, 0.0);
                EXPECT_LT(rel_err(s.lambda, o), 1e-7) << ratio << " " << rho << " " << frac;
            }
        }
        (void)tc;
    }
}

TEST(SolveGap, ResidualsWithinTolerance)
{
    const auto f = fig3_frame();
    for (double t : {100.0, 300.0, 500.0, 530.0}) {
        GapOptions opt;
        opt.tol = 1e-10;
        const auto s = solve_gap(0.27, f, t, opt);
        ASSERT_TRUE(s.converged);
        const double th = std::tanh(units::hbar_over_kb * s.theta_big / (2.0 * t));
        EXPECT_LE(std::abs(s.omega_c_tilde * s.lambda - s.lambda * f.kappa_12 * f.kappa_12 * th / s.theta_big), 1e-10);
        EXPECT_LE(std::abs(0.27 - (0.5 + s.lambda * s.lambda - s.omega_r_tilde * th / (2.0 * s.theta_big))), 1e-10);
        EXPECT_GE(s.theta_big, std::abs(s.omega_r_tilde));
        EXPECT_DOUBLE_EQ(s.omega_r_tilde, f.omega_rabi - s.mu);
        EXPECT_NEAR(s.omega_c_tilde, f.delta_cav - s.mu, 1e-12);
    }
}

TEST(SolveGap, TrivialRootIdentity)
{
    oracle::Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const double rho = rng.uniform(0.01, 0.49);
        const double d = -rng.log_uniform(0.1, 100.0);
        const double k = rng.log_uniform(0.01, 10.0);
        const detail::GapSystem sys(rho, d, k, rng.uniform(10.0, 2000.0), PolaritonBranch::Lower);
        EXPECT_EQ(0.0 * sys.at(0.0).residual, 0.0);
    }
}

TEST(SolveGap, RootDisappearsAtExactCriticalTemperature)
{
    const auto f = fig3_frame();
    for (double rho : {0.1, 0.27, 0.45}) {
        const double tc = critical_temperature_exact(rho, f);
        EXPECT_GT(solve_gap(rho, f, tc * (1.0 - 1e-6)).lambda, 0.0) << rho;
        EXPECT_EQ(solve_gap(rho, f, tc * (1.0 + 1e-6)).lambda, 0.0) << rho;
    }
}

TEST(SolveGap, SquareRootOnset)
{
    const auto f = fig3_frame();
    const double tc = critical_temperature_exact(0.27, f);
    std::vector<double> xs;
    std::vector<double> ys;
    for (double eps = 1e-6; eps <= 1e-2; eps *= std::sqrt(10.0)) {
        const double l = solve_gap(0.27, f, tc * (1.0 - eps)).lambda;
        ASSERT_GT(l, 0.0);
        xs.push_back(std::log(eps));
        ys.push_back(std::log(l));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(slope, 0.5, 0.05);
}

TEST(SolveGap, FigureThreeScanShape)
{
    const auto f0 = fig3_frame();
    double prev = INFINITY;
    bool seen_zero = false;
    for (int i = 0; i <= 200; ++i) {
        const double d = -f0.omega_rabi + i * units::from_thz(0.0005);
        const auto f = fig3_frame_at(d);
        const double l = solve_gap(0.27, f, 530.0).lambda;
        const double tc = critical_temperature_exact(0.27, f);
        EXPECT_EQ(l > 0.0, tc > 530.0) << i;
        if (l > 0.0) {
            EXPECT_FALSE(seen_zero) << i;
            EXPECT_LT(l, prev) << i;
            prev = l;
        } else {
            seen_zero = true;
        }
    }
    EXPECT_TRUE(seen_zero);
}

TEST(LambdaInfinity, PhotonLikeLimit)
{
    const auto f = fig3_frame();
    const double l = lambda_infinity(0.27, f);
    EXPECT_NEAR(l, 0.518809, 1e-6);
    EXPECT_LT(rel_err(l, std::sqrt(0.27)), 0.03);
    EXPECT_GT(lambda_infinity(0.30, f), l);
    EXPECT_LT(lambda_infinity(1e-6, f), 1e-3);
}

TEST(ClosedForm, PhaseBoundaryAndSaturation)
{
    const double rho = 0.27;
    const double d = -1.0;
    const double zeta_c = -std::log(1.0 / rho - 1.0);
    const double t_c = units::hbar_over_kb * d / zeta_c;
    EXPECT_NEAR(order_parameter_closed_form(rho, d, t_c, 0.5), 0.0, 1e-7);
    EXPECT_EQ(order_parameter_closed_form(rho, d, 1.01 * t_c, 0.5), 0.0);
    EXPECT_NEAR(order_parameter_closed_form(rho, d, 1e-3 * t_c, 0.5), 0.5, 1e-12);
    EXPECT_THROW(order_parameter_closed_form(0.5, d, 1.0, 0.5), DomainError);
    EXPECT_NEAR(t_c, critical_temperature(rho, d), 1e-9);
}

TEST(ClosedForm, FigureThreeAt400K)
{
    const auto f = fig3_frame();
    EXPECT_NEAR(order_parameter_closed_form(0.27, f.delta_eff, 400.0, std::sqrt(0.27)), 0.245052, 1e-6);
}

TEST(ClosedFormAgreement, ImprovesWithDetuning)
{
    const auto f0 = fig3_frame();
    auto worst = [&](double ratio) {
        const auto f = fig3_frame_at(-ratio * f0.kappa_12);
        double w = 0.0;
        for (double rho : {0.1, 0.27, 0.45}) {
            const double li = lambda_infinity(rho, f);
            const double tc = critical_temperature(rho, f.delta_eff);
            for (double frac : {0.5, 0.75, 0.95}) {
                const double s = solve_gap(rho, f, frac * tc).lambda;
                const double c = order_parameter_closed_form(rho, f.delta_eff, frac * tc, li);
                w = std::max(w, rel_err(s, c));
            }
        }
        return w;
    };
    const double w10 = worst(10.0);
    const double w30 = worst(30.0);
    const double w100 = worst(100.0);
    EXPECT_LT(w30, w10);
    EXPECT_LT(w100, w30);
    EXPECT_LT(w100, 0.01);
}

TEST(SolveGap, UpperBranchOptionRuns)
{
    GapOptions opt;
    opt.branch = PolaritonBranch::Upper;
    const auto s = solve_gap(0.27, fig3_frame(), 400.0, opt);
    EXPECT_GE(s.lambda, 0.0);
}

TEST(SolveGap, InputValidation)
{
    const auto f = fig3_frame();
    EXPECT_THROW(solve_gap(0.0, f, 400.0), InvalidArgument);
    EXPECT_THROW(solve_gap(1.0, f, 400.0), InvalidArgument);
    EXPECT_THROW(solve_gap(0.27, f, 0.0), InvalidArgument);
    GapOptions opt;
    opt.tol = 0.0;
    EXPECT_THROW(solve_gap(0.27, f, 400.0, opt), InvalidArgument);
}
