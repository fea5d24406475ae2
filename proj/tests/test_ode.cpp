#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include <dspol/ode.hpp>

using namespace dspol;
using ode::State;

namespace {

ode::StepControl tight()
{
    ode::StepControl c;
    c.rel_tol = 1e-11;
    c.abs_tol = 1e-13;
    return c;
}

} // namespace

TEST(DormandPrince, ExponentialDecay)
{
    State<1> y{1.0};
    auto stats = ode::dormand_prince<1>([](double, const State<1>& v) { return State<1>{-0.7 * v[0]}; },
                                        0.0, y, 10.0, tight(),
                                        [&](const ode::StepSpan<1>& s) { y = s.y1; });
    EXPECT_NEAR(y[0], std::exp(-7.0), 1e-11);
    EXPECT_GT(stats.steps, 0U);
}

TEST(DormandPrince, HarmonicOscillatorPhase)
{
    State<2> y{1.0, 0.0};
    double t_last = 0.0;
    ode::dormand_prince<2>([](double, const State<2>& v) { return State<2>{v[1], -v[0]}; }, 0.0, y,
                           20.0 * M_PI, tight(), [&](const ode::StepSpan<2>& s) {
                               y = s.y1;
                               t_last = s.t1;
                           });
    EXPECT_EQ(t_last, 20.0 * M_PI);
    EXPECT_NEAR(y[0], 1.0, 1e-8);
    EXPECT_NEAR(y[1], 0.0, 1e-8);
}

TEST(DormandPrince, TimeDependentForcing)
{
    // y' = cos t, y(0) = 0  =>  y = sin t
    State<1> y{0.0};
    ode::dormand_prince<1>([](double t, const State<1>&) { return State<1>{std::cos(t)}; }, 0.0, y,
                           3.0, tight(), [&](const ode::StepSpan<1>& s) { y = s.y1; });
    EXPECT_NEAR(y[0], std::sin(3.0), 1e-11);
}

TEST(DormandPrince, StepsAreContiguousAndEndExactly)
{
    double prev = 0.5;
    std::size_t n = 0;
    ode::StepControl c;
    c.max_step = 0.013;
    ode::dormand_prince<1>([](double, const State<1>& v) { return State<1>{-v[0]}; }, 0.5,
                           State<1>{1.0}, 1.7, c, [&](const ode::StepSpan<1>& s) {
                               EXPECT_EQ(s.t0, prev);
                               EXPECT_GT(s.t1, s.t0);
                               EXPECT_LE(s.t1 - s.t0, 0.013 * (1 + 1e-12));
                               prev = s.t1;
                               ++n;
                           });
    EXPECT_EQ(prev, 1.7);
    EXPECT_GE(n, 93U);
}

TEST(DormandPrince, DenseOutputMatchesSolution)
{
    double worst = 0.0;
    ode::StepControl c = tight();
    c.max_step = 0.05;
    ode::dormand_prince<2>([](double, const State<2>& v) { return State<2>{v[1], -v[0]}; }, 0.0,
                           State<2>{1.0, 0.0}, 5.0, c, [&](const ode::StepSpan<2>& s) {
                               for (double u : {0.25, 0.5, 0.75}) {
                                   const double t = s.t0 + u * (s.t1 - s.t0);
                                   worst = std::max(worst, std::abs(s.at(t)[0] - std::cos(t)));
                               }
                               EXPECT_EQ(s.at(s.t0)[0], s.y0[0]);
                               EXPECT_NEAR(s.at(s.t1)[0], s.y1[0], 1e-15);
                           });
    EXPECT_LT(worst, 1e-7);
}

TEST(DormandPrince, ToleranceControlsError)
{
    auto run = [](double rtol) {
        ode::StepControl c;
        c.rel_tol = rtol;
        c.abs_tol = rtol * 1e-3;
        State<2> y{1.0, 0.0};
        ode::dormand_prince<2>([](double, const State<2>& v) { return State<2>{v[1], -v[0]}; }, 0.0,
                               y, 30.0, c, [&](const ode::StepSpan<2>& s) { y = s.y1; });
        return std::hypot(y[0] - std::cos(30.0), y[1] + std::sin(30.0));
    };
    const double e6 = run(1e-6);
    const double e10 = run(1e-10);
    EXPECT_LT(e10, e6 * 1e-2);
    EXPECT_LT(e10, 1e-8);
}

TEST(DormandPrince, StiffnessRaisesStepCount)
{
    std::size_t soft = 0, stiff = 0;
    soft = ode::dormand_prince<1>([](double, const State<1>& v) { return State<1>{-v[0]}; }, 0.0,
                                  State<1>{1.0}, 1.0, ode::StepControl{}, [](auto&&) {}).steps;
    stiff = ode::dormand_prince<1>([](double, const State<1>& v) { return State<1>{-1e3 * v[0]}; },
                                   0.0, State<1>{1.0}, 1.0, ode::StepControl{}, [](auto&&) {}).steps;
    EXPECT_GT(stiff, soft);
}

TEST(DormandPrince, NonFiniteStateThrows)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(ode::dormand_prince<1>([](double, const State<1>& v) { return v; }, 0.0,
                                        State<1>{nan}, 1.0, ode::StepControl{}, [](auto&&) {}),
                 IntegrationError);
    // Finite-time blow-up of y' = y^2 at t = 1.
    try {
        ode::dormand_prince<1>([](double, const State<1>& v) { return State<1>{v[0] * v[0]}; }, 0.0,
                               State<1>{1.0}, 2.0, ode::StepControl{}, [](auto&&) {});
        FAIL() << "blow-up not detected";
    } catch (const IntegrationError& e) {
        EXPECT_NEAR(e.time(), 1.0, 1e-3);
    }
}

TEST(DormandPrince, StepBudgetEnforced)
{
    ode::StepControl c;
    c.max_steps = 10;
    c.max_step = 1e-3;
    EXPECT_THROW(ode::dormand_prince<1>([](double, const State<1>& v) { return v; }, 0.0,
                                        State<1>{1.0}, 1.0, c, [](auto&&) {}),
                 IntegrationError);
}

TEST(DormandPrince, ArgumentValidation)
{
    auto f = [](double, const State<1>& v) { return v; };
    EXPECT_THROW(ode::dormand_prince<1>(f, 1.0, State<1>{1.0}, 1.0, ode::StepControl{}, [](auto&&) {}),
                 InvalidArgument);
    ode::StepControl c;
    c.rel_tol = 0.0;
    EXPECT_THROW(ode::dormand_prince<1>(f, 0.0, State<1>{1.0}, 1.0, c, [](auto&&) {}), InvalidArgument);
}
