#pragma once

#include <numbers>

// Internal unit system: angular frequencies in rad/ps, times in ps, temperatures in K.
namespace dspol::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// hbar / k_B in K*ps.
inline constexpr double hbar_over_kb = 7.6382;

constexpr double from_thz(double cyclic) { return two_pi * cyclic; }
constexpr double from_ghz(double cyclic) { return two_pi * cyclic * 1e-3; }
constexpr double from_mhz(double cyclic) { return two_pi * cyclic * 1e-6; }
constexpr double from_rad_per_ns(double angular) { return angular * 1e-3; }

constexpr double to_thz(double angular) { return angular / two_pi; }
constexpr double to_ghz(double angular) { return angular / two_pi * 1e3; }
constexpr double to_rad_per_ns(double angular) { return angular * 1e3; }

constexpr double ns(double t_ns) { return t_ns * 1e3; }
constexpr double to_ns(double t_ps) { return t_ps * 1e-3; }

/// Temperature equivalent of an angular frequency, hbar*omega/k_B.
constexpr double kelvin_of(double angular) { return hbar_over_kb * angular; }

} // namespace dspol::units
