#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "ds_core.hpp"
#include "dynamics.hpp"
#include "errors.hpp"

namespace dspol {

struct ThresholdReport {
    Transition transition = Transition::OneTwo;
    double s_z_thr = 0.0;
    double s_z_st = 0.0;
    double mu = 0.0;         ///< lasing frequency relative to the pump, rad/ps
    double lambda_sq = 0.0;
    bool lasing = false;
    std::pair<cplx, cplx> mu_branches; ///< (mu_1, mu_2), mu_2 the less damped one, at S_z = s_z_thr
};

struct SelfConsistentImbalance {
    double s_z_bar = 0.0;
    cplx omega_r_eff_tilde{};
    double gamma_eff = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct Threshold {
    double s_z_thr = 0.0;
    double mu = 0.0;
};

/// Detuning that controls the threshold: Delta for OneTwo, Delta + 2 Omega_R for TwoOne.
inline double threshold_detuning(Transition tr, const DressedFrame& f)
{
    return tr == Transition::OneTwo ? f.delta_eff : f.delta_eff + 2.0 * f.omega_rabi;
}

/// Normal-mode frequencies of the linearized cavity/polarization pair at fixed imbalance.
/// Ordered so that the second has the larger imaginary part.
inline std::pair<cplx, cplx> complex_branches(Transition tr, const DressedFrame& f, double s_z_bar)
{
    const cplx cavity{f.delta_cav, -f.gamma_cav};
    const double k = f.coupling(tr);
    cplx matter;
    cplx root;
    if (tr == Transition::OneTwo) {
        matter = cplx{f.omega_rabi, -f.gamma_perp()};
        const cplx diff = cavity - matter;
        root = std::sqrt(diff * diff - 4.0 * k * k * s_z_bar);
    } else {
        matter = -cplx{f.omega_rabi, f.gamma_perp()};
        const cplx sum = cavity - matter;
        root = std::sqrt(sum * sum + 4.0 * k * k * s_z_bar);
    }
    const cplx a = 0.5 * (cavity + matter + root);
    const cplx b = 0.5 * (cavity + matter - root);
    return a.imag() > b.imag() ? std::pair{b, a} : std::pair{a, b};
}

inline Threshold threshold(Transition tr, const DressedFrame& f)
{
    const double k = f.coupling(tr);
    if (!(k > 0.0)) {
        throw DomainError("threshold: effective coupling is zero");
    }
    const double g_perp = f.gamma_perp();
    const double g_sum = f.gamma_cav + g_perp;
    const double d = threshold_detuning(tr, f);
    const double detuned = g_sum > 0.0 ? 1.0 + (d / g_sum) * (d / g_sum) : 1.0;
    const double magnitude = f.gamma_cav * g_perp / (k * k) * detuned;
    const double pull = g_sum > 0.0 ? d * f.gamma_cav / g_sum : 0.0;
    return {tr == Transition::OneTwo ? magnitude : -magnitude, f.delta_cav - pull};
}

/// Saturated stationary imbalance at cavity amplitude |lambda|, by damped fixed-point
/// iteration. For TwoOne the detuning entering the effective Rabi frequency is
/// Delta + 2 Omega_R and the coupling term enters with the opposite sign, as in the
/// corresponding branch formula.
inline SelfConsistentImbalance self_consistent_imbalance(Transition tr, const DressedFrame& f,
                                                         double lambda_abs, double tol = 1e-12,
                                                         int max_iterations = 500,
                                                         double damping = 0.5)
{
    detail::require(lambda_abs >= 0.0 && std::isfinite(lambda_abs),
                    "self_consistent_imbalance: lambda_abs must be >= 0");
    detail::require(tol > 0.0, "self_consistent_imbalance: tol must be > 0");
    detail::require(damping > 0.0 && damping <= 1.0,
                    "self_consistent_imbalance: damping must lie in (0, 1]");

    SelfConsistentImbalance out;
    out.gamma_eff = f.gamma_perp() - f.gamma_cav;
    const double k = f.coupling(tr);
    const double d = threshold_detuning(tr, f);
    const double coupling_sign = tr == Transition::OneTwo ? -1.0 : 1.0;
    const cplx shifted{d, out.gamma_eff};

    auto omega_eff = [&](double s_bar) {
        return 0.5 * (-shifted + std::sqrt(shifted * shifted + coupling_sign * 4.0 * k * k * s_bar));
    };
    const double rate = f.relaxation_rate();
    const double load = rate > 0.0 ? 4.0 * f.gamma_perp() * k * k * lambda_abs * lambda_abs / rate
                                   : (lambda_abs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    auto map = [&](double s_bar, cplx& om) {
        om = omega_eff(s_bar);
        const double n = std::norm(om);
        if (load == 0.0) {
            return f.s_z_st;
        }
        return std::isinf(load) || n + load == 0.0 ? 0.0 : f.s_z_st * n / (n + load);
    };

    double s = f.s_z_st;
    for (int it = 1; it <= max_iterations; ++it) {
        const double next = (1.0 - damping) * s + damping * map(s, out.omega_r_eff_tilde);
        out.iterations = it;
        const bool done = std::abs(next - s) <= tol;
        s = next;
        if (done) {
            out.converged = true;
            break;
        }
    }
    out.s_z_bar = s;
    out.omega_r_eff_tilde = omega_eff(s);
    return out;
}

/// Threshold, lasing frequency and steady |lambda|^2 from the density balance, clipped at 0.
inline ThresholdReport steady_report(Transition tr, const DressedFrame& f)
{
    const Threshold th = threshold(tr, f);
    if (!(f.gamma_cav > 0.0)) {
        throw DomainError("steady_report: cavity decay rate must be > 0");
    }
    ThresholdReport r;
    r.transition = tr;
    r.s_z_thr = th.s_z_thr;
    r.s_z_st = f.s_z_st;
    r.mu = th.mu;
    const double excess = tr == Transition::OneTwo ? f.s_z_st - th.s_z_thr : th.s_z_thr - f.s_z_st;
    r.lambda_sq = std::max(0.0, f.relaxation_rate() * excess / (4.0 * f.gamma_cav));
    r.lasing = r.lambda_sq > 0.0;
    r.mu_branches = complex_branches(tr, f, th.s_z_thr);
    return r;
}

} // namespace dspol
