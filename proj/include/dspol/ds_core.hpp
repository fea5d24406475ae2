#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>
#include <utility>

#include "errors.hpp"
#include "units.hpp"

namespace dspol {

/// Which dressed-state transition the cavity mode is tuned to.
///   OneTwo: |1(N)> -> |2(N-1)>, coupling kappa*cos^2(theta)
///   TwoOne: |2(N)> -> |1(N-1)>, coupling kappa*sin^2(theta)
enum class Transition { OneTwo, TwoOne };

constexpr std::string_view to_string(Transition t)
{
    return t == Transition::OneTwo ? "OneTwo" : "TwoOne";
}

/// Raw physical inputs. All frequencies are angular, in rad/ps; temperature in K.
struct SystemParams {
    double omega = 0.0;        ///< resonant Rabi frequency
    double delta = 0.0;        ///< atom-pump detuning w_L - w_at (signed)
    double kappa = 0.0;        ///< cooperative atom-cavity coupling
    double gamma_coll = 0.0;   ///< collisional broadening
    double eta_coll = 0.0;     ///< collisional phase shift
    double gamma_spont = 0.0;  ///< spontaneous emission rate
    double gamma_cav = 0.0;    ///< cavity decay rate
    double delta_cav = 0.0;    ///< cavity-pump detuning w_c - w_L
    double temperature = 0.0;  ///< K

    bool operator==(const SystemParams&) const = default;
};

inline void validate(const SystemParams& p)
{
    using detail::require;
    for (double v : {p.omega, p.delta, p.kappa, p.gamma_coll, p.eta_coll, p.gamma_spont,
                     p.gamma_cav, p.delta_cav, p.temperature}) {
        require(std::isfinite(v), "SystemParams: non-finite value");
    }
    require(p.omega > 0.0, "SystemParams: omega must be > 0");
    require(p.kappa >= 0.0, "SystemParams: kappa must be >= 0");
    require(p.gamma_coll >= 0.0, "SystemParams: gamma_coll must be >= 0");
    require(p.gamma_spont >= 0.0, "SystemParams: gamma_spont must be >= 0");
    require(p.gamma_cav >= 0.0, "SystemParams: gamma_cav must be >= 0");
    require(p.temperature > 0.0, "SystemParams: temperature must be > 0");
}

/// Squared mixing amplitudes (sin^2 theta, cos^2 theta).
///
/// The small amplitude is computed in rationalized form so that the far-detuned
/// limit does not lose precision, and delta -> -delta swaps the pair bit for bit.
inline std::pair<double, double> mixing_squares(double omega, double delta)
{
    const double omega_r = std::hypot(delta, omega);
    const double small = omega * omega / (2.0 * omega_r * (omega_r + std::abs(delta)));
    const double large = (omega_r + std::abs(delta)) / (2.0 * omega_r);
    return delta >= 0.0 ? std::pair{large, small} : std::pair{small, large};
}

/// Generalized Rabi frequency including the collisional shift eta*cos(2 theta).
inline double effective_rabi(const SystemParams& p)
{
    const auto [s2, c2] = mixing_squares(p.omega, p.delta);
    return std::hypot(p.delta, p.omega) + p.eta_coll * (c2 - s2);
}

/// How the cavity frequency is pinned when other parameters move.
struct CavityTuning {
    enum class Kind {
        FixedCavity,       ///< delta_cav given directly
        FixedEffective,    ///< Delta = delta_cav - Omega_R given
        ResonantOneTwo,    ///< Delta = 0 (blue Mollow sideband)
        RedSidebandTwoOne  ///< Delta = -2 Omega_R (red Mollow sideband)
    };

    Kind kind = Kind::FixedCavity;
    double value = 0.0;

    bool operator==(const CavityTuning&) const = default;

    static CavityTuning cavity(double delta_cav) { return {Kind::FixedCavity, delta_cav}; }
    static CavityTuning effective(double delta_eff) { return {Kind::FixedEffective, delta_eff}; }
    static CavityTuning resonant_one_two() { return {Kind::ResonantOneTwo, 0.0}; }
    static CavityTuning red_sideband_two_one() { return {Kind::RedSidebandTwoOne, 0.0}; }

    /// Most favourable tuning for lasing on the given transition.
    static CavityTuning optimal_for(Transition t)
    {
        return t == Transition::OneTwo ? resonant_one_two() : red_sideband_two_one();
    }

    double delta_cav(double omega_rabi) const
    {
        switch (kind) {
        case Kind::FixedCavity: return value;
        case Kind::FixedEffective: return value + omega_rabi;
        case Kind::ResonantOneTwo: return omega_rabi;
        case Kind::RedSidebandTwoOne: return -omega_rabi;
        }
        return value;
    }
};

inline SystemParams with_tuning(SystemParams p, const CavityTuning& tuning)
{
    p.delta_cav = tuning.delta_cav(effective_rabi(p));
    return p;
}

/// Everything derived in the dressed-state frame.
struct DressedFrame {
    double sin_theta = 0.0;
    double cos_theta = 0.0;
    double omega_rabi = 0.0;  ///< Omega_R, includes eta_1
    double kappa_12 = 0.0;
    double kappa_21 = 0.0;
    double w = 0.0;           ///< collisional DS transfer rate
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double gamma_1 = 0.0;     ///< collisional dephasing
    double eta_1 = 0.0;
    double cap_gamma_1 = 0.0; ///< radiative dephasing
    double s_z_eq = 0.0;
    double s_z_st = 0.0;
    double delta_eff = 0.0;   ///< Delta = delta_cav - Omega_R
    double delta_cav = 0.0;
    double gamma_cav = 0.0;

    /// Total polarization damping Gamma_1 + gamma_1.
    double gamma_perp() const { return cap_gamma_1 + gamma_1; }
    /// Cavity-free relaxation rate of S_z, 2w + Gamma_+.
    double relaxation_rate() const { return 2.0 * w + gamma_plus; }
    double coupling(Transition t) const { return t == Transition::OneTwo ? kappa_12 : kappa_21; }
};

inline DressedFrame build_dressed_frame(const SystemParams& p)
{
    validate(p);

    const auto [s2, c2] = mixing_squares(p.omega, p.delta);
    const double s4_plus_c4 = s2 * s2 + c2 * c2;
    const double sin2_2theta = 4.0 * s2 * c2;
    const double cos_2theta = c2 - s2;

    DressedFrame f;
    f.sin_theta = std::sqrt(s2);
    f.cos_theta = std::sqrt(c2);
    f.eta_1 = p.eta_coll * cos_2theta;
    f.omega_rabi = effective_rabi(p);
    f.kappa_12 = p.kappa * c2;
    f.kappa_21 = p.kappa * s2;
    f.w = 0.5 * p.gamma_coll * sin2_2theta;
    f.gamma_plus = p.gamma_spont * s4_plus_c4;
    f.gamma_minus = p.gamma_spont * (s2 - c2) * (s2 + c2);
    f.gamma_1 = p.gamma_coll * s4_plus_c4;
    f.cap_gamma_1 = 0.25 * p.gamma_spont * (2.0 + sin2_2theta);
    f.s_z_eq = -std::tanh(units::hbar_over_kb * f.omega_rabi / (2.0 * p.temperature));

    const double rate = f.relaxation_rate();
    // Without any relaxation channel the imbalance has no preferred value; keep equilibrium.
    f.s_z_st = rate > 0.0 ? (2.0 * f.w * f.s_z_eq + f.gamma_minus) / rate : f.s_z_eq;

    f.delta_cav = p.delta_cav;
    f.gamma_cav = p.gamma_cav;
    f.delta_eff = p.delta_cav - f.omega_rabi;
    return f;
}

/// Leading-order couplings (kappa_12, kappa_21) in the far-detuned limit |delta| >> Omega.
inline std::pair<double, double> perturbative_couplings(const SystemParams& p)
{
    if (p.delta == 0.0) {
        throw DomainError("perturbative_couplings: requires delta != 0");
    }
    const double eps = p.omega * p.omega / (4.0 * p.delta * p.delta);
    const double strong = p.kappa * (1.0 - eps);
    const double weak = p.kappa * eps;
    return p.delta < 0.0 ? std::pair{strong, weak} : std::pair{weak, strong};
}

/// Estimated DS thermalization time 2 pi delta^2 / (gamma Omega^2), in ps.
inline double thermalization_time(const SystemParams& p)
{
    validate(p);
    if (p.gamma_coll == 0.0) {
        throw DomainError("thermalization_time: gamma_coll = 0, no thermalization");
    }
    return units::two_pi * p.delta * p.delta / (p.gamma_coll * p.omega * p.omega);
}

struct ConditionFlags {
    bool thermalized = false;
    bool strong_coupling_12 = false;
    bool strong_coupling_21 = false;
    bool thresholdless_12 = false;

    bool operator==(const ConditionFlags&) const = default;
};

/// Validity conditions with "a >> b" read as b <= margin * a.
inline ConditionFlags check_conditions(const DressedFrame& frame, const SystemParams& p,
                                       double margin = 0.1)
{
    validate(p);
    detail::require(std::isfinite(margin) && margin > 0.0 && margin <= 1.0,
                    "check_conditions: margin must lie in (0, 1]");

    ConditionFlags flags;

    const double mixing = p.omega * p.omega / (p.delta * p.delta); // inf at resonance
    flags.thermalized = p.gamma_coll > 0.0
                        && p.gamma_spont / p.gamma_coll <= margin * mixing
                        && mixing <= margin;

    const double loss = std::max({p.gamma_coll, p.gamma_spont, p.gamma_cav});
    flags.strong_coupling_12 = loss <= margin * frame.kappa_12;
    flags.strong_coupling_21 = loss <= margin * frame.kappa_21;
    flags.thresholdless_12 = std::sqrt(p.gamma_coll * p.gamma_cav) <= margin * frame.kappa_12;
    return flags;
}

} // namespace dspol
