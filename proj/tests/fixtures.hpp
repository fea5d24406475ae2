#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>

#include <dspol/config.hpp>
#include <dspol/ds_core.hpp>
#include <dspol/steady_state.hpp>

#include "oracles.hpp"

namespace fixtures {

inline dspol::SystemParams preset_params(std::string_view name)
{
    return dspol::config::preset(name).value().params;
}

inline dspol::DressedFrame preset_frame(std::string_view name)
{
    return dspol::build_dressed_frame(preset_params(name));
}

inline double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// Random 1->2 lasing frame at resonant cavity tuning, pumped at least 1.5x above
/// threshold and in the good-cavity regime (Gamma_c <= Gamma_perp / 2). Bad-cavity frames
/// can self-pulse and have no stationary lasing state to compare against.
inline dspol::DressedFrame random_lasing_frame(oracle::Rng& rng)
{
    using namespace dspol;
    for (;;) {
        SystemParams p;
        p.omega = units::from_thz(rng.uniform(0.5, 1.5));
        p.delta = units::from_thz(rng.uniform(5.0, 30.0));
        p.kappa = units::from_thz(rng.uniform(0.3, 1.0));
        p.gamma_coll = units::from_ghz(rng.log_uniform(0.1, 3.0));
        p.gamma_spont = units::from_rad_per_ns(rng.log_uniform(0.01, 0.1));
        p.gamma_cav = units::from_mhz(rng.log_uniform(30.0, 300.0));
        p.temperature = rng.uniform(300.0, 800.0);
        const auto f = build_dressed_frame(with_tuning(p, CavityTuning::resonant_one_two()));
        const auto r = steady_report(Transition::OneTwo, f);
        if (r.lasing && f.s_z_st >= 1.5 * r.s_z_thr && f.gamma_cav <= 0.5 * f.gamma_perp()) {
            return f;
        }
    }
}

} // namespace fixtures
