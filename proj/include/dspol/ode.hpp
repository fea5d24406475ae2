#pragma once

// Embedded Dormand-Prince 5(4) pair with error-per-step control and cubic Hermite
// dense output. Fixed-size real state; callers pack complex variables themselves.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "errors.hpp"

namespace dspol::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double initial_step = 0.0; ///< 0 selects a step from the local derivative scale
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;
};

struct Stats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double last_error = 0.0; ///< scaled error norm of the last accepted step
};

/// One accepted step, enough to interpolate anywhere inside it.
template <std::size_t N>
struct StepSpan {
    double t0;
    double t1;
    const State<N>& y0;
    const State<N>& dy0;
    const State<N>& y1;
    const State<N>& dy1;

    State<N> at(double t) const
    {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        State<N> out;
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = h00 * y0[i] + h10 * h * dy0[i] + h01 * y1[i] + h11 * h * dy1[i];
        }
        return out;
    }
};

namespace detail {

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1,
                  const StepControl& ctl)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double scale = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / scale;
        sum += r * r;
    }
    return std::sqrt(sum / N);
}

template <std::size_t N>
bool all_finite(const State<N>& y)
{
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N, class Rhs>
double initial_step(Rhs& f, double t0, const State<N>& y0, const State<N>& f0, double span,
                    const StepControl& ctl)
{
    const double d0 = error_norm(y0, y0, y0, ctl);
    const double d1 = error_norm(f0, y0, y0, ctl);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h0 = std::min(h0, span);

    State<N> y1;
    for (std::size_t i = 0; i < N; ++i) {
        y1[i] = y0[i] + h0 * f0[i];
    }
    const State<N> f1 = f(t0 + h0, y1);
    State<N> df;
    for (std::size_t i = 0; i < N; ++i) {
        df[i] = f1[i] - f0[i];
    }
    const double d2 = error_norm(df, y0, y0, ctl) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, span});
}

} // namespace detail

/// Integrates y' = f(t, y) from t0 to t_end. `on_step` receives a StepSpan for every
/// accepted step; the last step ends exactly at t_end.
///
/// Throws IntegrationError on step-size underflow, on a non-finite accepted state, or
/// when max_steps is exhausted.
template <std::size_t N, class Rhs, class OnStep>
Stats dormand_prince(Rhs&& f, double t0, State<N> y, double t_end, const StepControl& ctl,
                     OnStep&& on_step)
{
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (!(t_end > t0)) {
        throw InvalidArgument("dormand_prince: t_end must exceed t0");
    }
    if (!(ctl.rel_tol > 0.0) || !(ctl.abs_tol > 0.0)) {
        throw InvalidArgument("dormand_prince: tolerances must be > 0");
    }
    if (!detail::all_finite(y)) {
        throw IntegrationError("non-finite initial state", t0);
    }

    Stats stats;
    double t = t0;
    State<N> k1 = f(t, y);
    double h = ctl.initial_step > 0.0 ? ctl.initial_step
                                      : detail::initial_step<N>(f, t0, y, k1, t_end - t0, ctl);
    h = std::min(h, ctl.max_step);

    State<N> tmp, k2, k3, k4, k5, k6, k7, y_new, err;
    bool last_rejected = false;

    while (t < t_end) {
        if (stats.steps + stats.rejected >= ctl.max_steps) {
            throw IntegrationError("maximum number of steps exceeded", t);
        }
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            throw IntegrationError("step size underflow", t);
        }
        // Absorb a sliver remainder into this step rather than leaving it for the next.
        const bool final_step = t + 1.01 * h >= t_end;
        if (final_step) {
            h = t_end - t;
        }

        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = f(t + c2 * h, tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(t + c3 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(t + c4 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(t + c5 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = f(t + h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const double t_new = final_step ? t_end : t + h;
        k7 = f(t_new, y_new);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

        const double en = detail::error_norm(err, y, y_new, ctl);
        if (!std::isfinite(en) || en > 1.0) {
            ++stats.rejected;
            const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
            h *= fac;
            last_rejected = true;
            continue;
        }
        if (!detail::all_finite(y_new)) {
            throw IntegrationError("non-finite state", t_new);
        }

        on_step(StepSpan<N>{t, t_new, y, k1, y_new, k7});

        ++stats.steps;
        stats.last_error = en;
        t = t_new;
        y = y_new;
        k1 = k7;

        double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (last_rejected) {
            fac = std::min(fac, 1.0);
        }
        h = std::min(h * fac, ctl.max_step);
        last_rejected = false;
    }
    return stats;
}

} // namespace dspol::ode
