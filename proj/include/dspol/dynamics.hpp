#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "ds_core.hpp"
#include "errors.hpp"
#include "ode.hpp"

namespace dspol {

using cplx = std::complex<double>;

struct BlochState {
    cplx lambda{};   ///< normalized cavity amplitude
    cplx s{};        ///< collective DS polarization
    double s_z = 0.0;
    double t = 0.0;  ///< ps

    bool operator==(const BlochState&) const = default;
};

struct BlochDerivative {
    cplx d_lambda{};
    cplx d_s{};
    double d_s_z = 0.0;
};

/// Initial condition of a cavity seeded with a weak real field and all atoms in |2>.
inline BlochState default_initial_state()
{
    return {cplx{0.05, 0.0}, cplx{}, -1.0, 0.0};
}

inline double bloch_radius_sq(const BlochState& st)
{
    return 4.0 * std::norm(st.s) + st.s_z * st.s_z;
}

namespace detail {

/// Right-hand side with the cavity and polarization phase rotations given explicitly,
/// so the same code serves the raw and co-rotating frames.
inline BlochDerivative bloch_rhs(Transition tr, const cplx& lambda, const cplx& s, double s_z,
                                 double cavity_rotation, double polarization_rotation,
                                 const DressedFrame& f)
{
    const double g_perp = f.gamma_perp();
    const double relax = -f.relaxation_rate() * (s_z - f.s_z_st);
    const cplx i{0.0, 1.0};
    BlochDerivative d;
    if (tr == Transition::OneTwo) {
        const double k = f.kappa_12;
        d.d_lambda = -cplx{f.gamma_cav, cavity_rotation} * lambda - i * k * s;
        d.d_s = -cplx{g_perp, polarization_rotation} * s + i * k * lambda * s_z;
        d.d_s_z = relax - 4.0 * k * std::imag(s * std::conj(lambda));
    } else {
        const double k = f.kappa_21;
        d.d_lambda = -cplx{f.gamma_cav, cavity_rotation} * lambda + i * k * std::conj(s);
        d.d_s = -cplx{g_perp, polarization_rotation} * s - i * k * std::conj(lambda) * s_z;
        d.d_s_z = relax + 4.0 * k * std::imag(s * lambda);
    }
    return d;
}

/// Common rotation frequency that makes the rotated system autonomous and slow.
/// OneTwo: lambda, S ~ exp(-i w t); TwoOne: lambda ~ exp(-i w t), S ~ exp(+i w t).
inline double corotation_frequency(Transition tr, const DressedFrame& f)
{
    return tr == Transition::OneTwo ? 0.5 * (f.delta_cav + f.omega_rabi)
                                    : 0.5 * (f.delta_cav - f.omega_rabi);
}

inline double polarization_sign(Transition tr)
{
    return tr == Transition::OneTwo ? 1.0 : -1.0;
}

} // namespace detail

/// Mean-field equations for the |1(N)> -> |2(N-1)> transition.
inline BlochDerivative rhs_12(const BlochState& st, const DressedFrame& frame)
{
    return detail::bloch_rhs(Transition::OneTwo, st.lambda, st.s, st.s_z, frame.delta_cav,
                             frame.omega_rabi, frame);
}

/// Mean-field equations for the |2(N)> -> |1(N-1)> transition.
inline BlochDerivative rhs_21(const BlochState& st, const DressedFrame& frame)
{
    return detail::bloch_rhs(Transition::TwoOne, st.lambda, st.s, st.s_z, frame.delta_cav,
                             frame.omega_rabi, frame);
}

inline BlochDerivative rhs(Transition tr, const BlochState& st, const DressedFrame& frame)
{
    return tr == Transition::OneTwo ? rhs_12(st, frame) : rhs_21(st, frame);
}

struct Trajectory {
    std::vector<BlochState> samples;
    Transition transition = Transition::OneTwo;
    DressedFrame frame;
    ode::Stats stats;
};

struct IntegrateOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    std::size_t output_points = 2000; ///< uniform grid including both end points; 0 disables
    bool record_steps = true;         ///< also emit every accepted integrator step
    bool rotating_frame = true;       ///< integrate in the co-rotating frame, undone on output
    double max_step = 0.0;            ///< 0 leaves the step unbounded
    std::size_t max_steps = 50'000'000;
};

/// Adaptive Dormand-Prince integration of the selected transition's equations.
inline Trajectory integrate(Transition tr, const BlochState& initial, const DressedFrame& frame,
                            double t_end, const IntegrateOptions& opt = {})
{
    using detail::require;
    require(std::isfinite(t_end) && t_end > initial.t, "integrate: t_end must exceed initial.t");
    require(opt.rel_tol > 0.0 && opt.abs_tol > 0.0, "integrate: tolerances must be > 0");
    require(opt.output_points != 1, "integrate: output_points must be 0 or >= 2");
    require(opt.output_points >= 2 || opt.record_steps,
            "integrate: no output requested (output_points = 0 and record_steps = false)");

    const double omega = opt.rotating_frame ? detail::corotation_frequency(tr, frame) : 0.0;
    const double pol_sign = detail::polarization_sign(tr);
    const double cav_rot = frame.delta_cav - omega;
    const double pol_rot = frame.omega_rabi - pol_sign * omega;
    const double t0 = initial.t;

    using Vec = ode::State<5>;
    auto f = [&](double, const Vec& y) {
        const auto d = detail::bloch_rhs(tr, {y[0], y[1]}, {y[2], y[3]}, y[4], cav_rot, pol_rot,
                                         frame);
        return Vec{d.d_lambda.real(), d.d_lambda.imag(), d.d_s.real(), d.d_s.imag(), d.d_s_z};
    };
    auto unpack = [&](double t, const Vec& y) {
        const double phase = omega * (t - t0);
        const cplx rot_lambda = std::polar(1.0, -phase);
        const cplx rot_s = std::polar(1.0, -pol_sign * phase);
        return BlochState{cplx{y[0], y[1]} * rot_lambda, cplx{y[2], y[3]} * rot_s, y[4], t};
    };

    Trajectory traj;
    traj.transition = tr;
    traj.frame = frame;
    traj.samples.push_back(initial);

    std::vector<double> grid;
    if (opt.output_points >= 2) {
        grid.resize(opt.output_points);
        const double dt = (t_end - t0) / static_cast<double>(opt.output_points - 1);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            grid[k] = t0 + dt * static_cast<double>(k);
        }
        grid.back() = t_end;
    }
    std::size_t next = grid.empty() ? 0 : 1;

    auto on_step = [&](const ode::StepSpan<5>& span) {
        for (; next < grid.size() && grid[next] <= span.t1; ++next) {
            const double t = grid[next];
            if (t <= traj.samples.back().t) {
                continue;
            }
            traj.samples.push_back(unpack(t, t == span.t1 ? span.y1 : span.at(t)));
        }
        if ((opt.record_steps || span.t1 == t_end) && span.t1 > traj.samples.back().t) {
            traj.samples.push_back(unpack(span.t1, span.y1));
        }
    };

    ode::StepControl ctl;
    ctl.rel_tol = opt.rel_tol;
    ctl.abs_tol = opt.abs_tol;
    ctl.max_steps = opt.max_steps;
    if (opt.max_step > 0.0) {
        ctl.max_step = opt.max_step;
    }
    const Vec y0{initial.lambda.real(), initial.lambda.imag(), initial.s.real(), initial.s.imag(),
                 initial.s_z};
    traj.stats = ode::dormand_prince<5>(f, t0, y0, t_end, ctl, on_step);
    return traj;
}

/// Cavity-free relaxation of the imbalance towards its stationary value.
inline double analytic_sz_relaxation(double t, double s_z0, const DressedFrame& frame)
{
    return frame.s_z_st + (s_z0 - frame.s_z_st) * std::exp(-frame.relaxation_rate() * t);
}

/// First time the imbalance reaches `threshold`: from below for OneTwo, from above for
/// TwoOne. Linear interpolation between the bracketing samples.
inline std::optional<double> detect_lasing_onset(const Trajectory& traj, double threshold)
{
    detail::require(!traj.samples.empty(), "detect_lasing_onset: empty trajectory");
    const double sign = traj.transition == Transition::OneTwo ? 1.0 : -1.0;
    auto excess = [&](const BlochState& s) { return sign * (s.s_z - threshold); };

    const auto& xs = traj.samples;
    if (excess(xs.front()) >= 0.0) {
        return xs.front().t;
    }
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const double b = excess(xs[k]);
        if (b >= 0.0) {
            const double a = excess(xs[k - 1]);
            return xs[k - 1].t + (xs[k].t - xs[k - 1].t) * (-a / (b - a));
        }
    }
    return std::nullopt;
}

/// Rate of change of the polariton density |lambda|^2 + (S_z + 1)/2.
inline double rho_rate(const BlochState& st, const DressedFrame& frame)
{
    return -0.5 * frame.relaxation_rate() * (st.s_z - frame.s_z_st)
           - 2.0 * frame.gamma_cav * std::norm(st.lambda);
}

} // namespace dspol
