#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "ds_core.hpp"
#include "errors.hpp"
#include "units.hpp"

namespace dspol {

/// Polariton number density: photons plus upper-DS population per atom.
inline double polariton_density(double lambda, double s_z)
{
    return lambda * lambda + 0.5 * (s_z + 1.0);
}

/// Excitation number density rho_ex = rho - 1/2.
inline double excitation_density(double rho)
{
    return rho - 0.5;
}

struct HopfieldCoefficients {
    double x = 0.0; ///< matter weight of the upper branch
    double c = 0.0;
};

/// X = sqrt((1 + Delta / sqrt(4 kappa^2 + Delta^2)) / 2), C = sqrt(1 - X^2).
inline HopfieldCoefficients hopfield_coefficients(double delta_eff, double kappa_12)
{
    detail::require(kappa_12 > 0.0 && std::isfinite(kappa_12) && std::isfinite(delta_eff),
                    "hopfield_coefficients: kappa_12 must be > 0");
    const double r = std::hypot(2.0 * kappa_12, delta_eff);
    const double k2 = 4.0 * kappa_12 * kappa_12;
    // 1 +- Delta/r, the cancelling side rationalized.
    const double plus = delta_eff >= 0.0 ? (r + delta_eff) / r : k2 / (r * (r - delta_eff));
    const double minus = delta_eff >= 0.0 ? k2 / (r * (r + delta_eff)) : (r - delta_eff) / r;
    return {std::sqrt(0.5 * plus), std::sqrt(0.5 * minus)};
}

struct PolaritonBranches {
    double mu_upper = 0.0;
    double mu_lower = 0.0;
    double hopfield_x = 0.0;
    double hopfield_c = 0.0;
};

/// Normal-state (lambda = 0) branch frequencies at polariton density rho.
inline PolaritonBranches normal_branches(double rho, const DressedFrame& frame)
{
    const double d = frame.delta_eff;
    const double k = frame.kappa_12;
    const double radicand = d * d - 8.0 * k * k * (rho - 0.5);
    if (!(radicand >= 0.0)) {
        throw DomainError("normal_branches: complex effective Rabi frequency");
    }
    const double omega_eff = std::sqrt(radicand);
    const double centre = frame.delta_cav + frame.omega_rabi;
    const auto hop = hopfield_coefficients(d, k);
    return {0.5 * (centre + omega_eff), 0.5 * (centre - omega_eff), hop.x, hop.c};
}

/// Critical temperature in the far-detuned limit, hbar Delta / (2 k_B atanh(2 rho - 1)).
inline double critical_temperature(double rho, double delta_eff)
{
    detail::require(rho > 0.0 && rho < 1.0, "critical_temperature: rho must lie in (0, 1)");
    if (rho == 0.5) {
        throw DomainError("critical_temperature: undefined at rho = 1/2");
    }
    const double tc = units::hbar_over_kb * delta_eff / (2.0 * std::atanh(2.0 * rho - 1.0));
    if (!(tc > 0.0) || !std::isfinite(tc)) {
        throw DomainError("critical_temperature: no transition for this sign of Delta");
    }
    return tc;
}

enum class PolaritonBranch { Lower, Upper };

namespace detail {

struct GapTerms {
    double omega_r_tilde;
    double omega_c_tilde;
    double theta;
    double tanh_term; ///< tanh(hbar Theta / 2 k_B T), 1 at zero temperature
    double residual;  ///< Omega_c~ - kappa^2 tanh / Theta
};

/// Chemical-potential-shifted frequencies after eliminating mu between the gap and
/// density equations. The cancelling combination is evaluated through the identity
/// Omega_R~ * Omega_c~ = -2 kappa^2 (rho - lambda^2 - 1/2).
class GapSystem {
public:
    GapSystem(double rho, double delta_eff, double kappa, std::optional<double> temperature,
              PolaritonBranch branch)
        : rho_(rho), d_(delta_eff), k_(kappa), t_(temperature), branch_(branch)
    {
    }

    GapTerms at(double lambda) const
    {
        const double excess = rho_ - lambda * lambda - 0.5;
        const double radicand = d_ * d_ - 8.0 * k_ * k_ * excess;
        if (!(radicand >= 0.0)) {
            throw DomainError("solve_gap: complex effective Rabi frequency");
        }
        const double omega_eff = std::sqrt(radicand);
        const double product = -2.0 * k_ * k_ * excess;

        double r_tilde = 0.0;
        double c_tilde = 0.0;
        if (branch_ == PolaritonBranch::Lower) {
            if (d_ < 0.0) {
                r_tilde = 0.5 * (omega_eff - d_);
                c_tilde = product / r_tilde;
            } else {
                c_tilde = 0.5 * (d_ + omega_eff);
                r_tilde = c_tilde != 0.0 ? product / c_tilde : 0.0;
            }
        } else {
            r_tilde = -0.5 * (d_ + omega_eff);
            c_tilde = 0.5 * (d_ - omega_eff);
        }

        const double theta = std::sqrt(r_tilde * r_tilde + 4.0 * k_ * k_ * lambda * lambda);
        const double th = tanh_term(theta);
        return {r_tilde, c_tilde, theta, th, c_tilde - k_ * k_ * ratio(th, theta)};
    }

    /// tanh(hbar Theta / 2 k_B T) / Theta with its Theta -> 0 limit.
    double ratio(double th, double theta) const
    {
        if (theta > 0.0) {
            return th / theta;
        }
        return t_ ? units::hbar_over_kb / (2.0 * *t_) : std::numeric_limits<double>::infinity();
    }

    double tanh_term(double theta) const
    {
        return t_ ? std::tanh(units::hbar_over_kb * theta / (2.0 * *t_)) : 1.0;
    }

    double rho() const { return rho_; }
    const std::optional<double>& temperature() const { return t_; }

private:
    double rho_;
    double d_;
    double k_;
    std::optional<double> t_;
    PolaritonBranch branch_;
};

} // namespace detail

struct GapOptions {
    double tol = 1e-10;
    int max_iterations = 200;
    double lambda_floor = 1e-8;  ///< smallest lambda probed for a nontrivial root
    int scan_points = 64;        ///< geometric pre-scan used to bracket and count roots
    PolaritonBranch branch = PolaritonBranch::Lower;
};

struct EquilibriumSolution {
    double lambda = 0.0;
    double mu = 0.0;
    double omega_r_tilde = 0.0;
    double omega_c_tilde = 0.0;
    double theta_big = 0.0;
    double rho = 0.0;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    int root_count = 0; ///< nontrivial sign changes seen in the pre-scan; > 1 is reported, not resolved
};

namespace detail {

inline EquilibriumSolution finish(const GapSystem& sys, const DressedFrame& frame, double lambda,
                                  const GapTerms& g, int iterations, int roots, double tol)
{
    EquilibriumSolution s;
    s.lambda = lambda;
    s.omega_r_tilde = g.omega_r_tilde;
    s.omega_c_tilde = g.omega_c_tilde;
    s.theta_big = g.theta;
    s.mu = frame.omega_rabi - g.omega_r_tilde;
    s.rho = sys.rho();
    s.iterations = iterations;
    s.root_count = roots;

    const double gap_res = std::abs(lambda * g.residual);
    const double density_res = std::abs(
        sys.rho() - (0.5 + lambda * lambda - 0.5 * g.omega_r_tilde * sys.ratio(g.tanh_term, g.theta)));
    s.residual = std::max(gap_res, density_res);
    s.converged = s.residual <= tol;
    return s;
}

inline EquilibriumSolution normal_state(const GapSystem& sys, const DressedFrame& frame, int roots,
                                        double tol)
{
    // lambda = 0 solves the gap equation for any mu; the density equation alone fixes mu.
    GapTerms g{};
    const double rho = sys.rho();
    if (sys.temperature()) {
        g.omega_r_tilde = 2.0 * *sys.temperature() / units::hbar_over_kb * std::atanh(1.0 - 2.0 * rho);
    } else {
        g.omega_r_tilde = rho < 0.5 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    g.omega_c_tilde = frame.delta_eff + g.omega_r_tilde;
    g.theta = std::abs(g.omega_r_tilde);
    g.tanh_term = sys.tanh_term(g.theta);
    g.residual = 0.0;
    auto s = finish(sys, frame, 0.0, g, 0, roots, tol);
    if (!sys.temperature()) {
        s.residual = 0.0;
        s.converged = true;
    }
    return s;
}

inline EquilibriumSolution solve(const GapSystem& sys, const DressedFrame& frame,
                                 const GapOptions& opt)
{
    const double lo_bound = opt.lambda_floor;
    const double hi_bound = std::sqrt(sys.rho());
    if (!(hi_bound > lo_bound)) {
        return normal_state(sys, frame, 0, opt.tol);
    }

    // Geometric pre-scan: resolves small roots just below T_C and counts sign changes.
    const int n = std::max(opt.scan_points, 2);
    const double ratio = std::pow(hi_bound / lo_bound, 1.0 / (n - 1));
    std::vector<double> grid(n);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = i + 1 == n ? hi_bound : lo_bound * std::pow(ratio, i);
        values[i] = sys.at(grid[i]).residual;
    }

    int roots = 0;
    int first = -1;
    for (int i = 0; i + 1 < n; ++i) {
        if ((values[i] < 0.0) != (values[i + 1] < 0.0)) {
            ++roots;
            if (first < 0) {
                first = i;
            }
        }
    }
    if (first < 0) {
        return normal_state(sys, frame, 0, opt.tol);
    }

    double lo = grid[first];
    double hi = grid[first + 1];
    const bool lo_negative = values[first] < 0.0;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if ((sys.at(mid).residual < 0.0) == lo_negative) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double lambda = 0.5 * (lo + hi);
    return finish(sys, frame, lambda, sys.at(lambda), it, roots, opt.tol);
}

inline void check_gap_inputs(double rho, const GapOptions& opt)
{
    require(rho > 0.0 && rho < 1.0, "solve_gap: rho must lie in (0, 1)");
    require(opt.tol > 0.0, "solve_gap: tol must be > 0");
    require(opt.lambda_floor > 0.0, "solve_gap: lambda_floor must be > 0");
}

} // namespace detail

/// Self-consistent order parameter of the superradiant transition at temperature T.
///
/// Solves the gap and density equations together, with mu eliminated on the chosen
/// polariton branch. Bisection on lambda in [lambda_floor, sqrt(rho)]; lambda = 0 is
/// returned (converged) when the pre-scan finds no sign change.
inline EquilibriumSolution solve_gap(double rho, const DressedFrame& frame, double temperature,
                                     const GapOptions& opt = {})
{
    detail::check_gap_inputs(rho, opt);
    detail::require(temperature > 0.0 && std::isfinite(temperature),
                    "solve_gap: temperature must be > 0");
    const detail::GapSystem sys(rho, frame.delta_eff, frame.kappa_12, temperature, opt.branch);
    return detail::solve(sys, frame, opt);
}

/// Gap solution with tanh replaced by 1 (hbar Omega_R~ >> k_B T).
inline EquilibriumSolution solve_gap_zero_temperature(double rho, const DressedFrame& frame,
                                                      const GapOptions& opt = {})
{
    detail::check_gap_inputs(rho, opt);
    const detail::GapSystem sys(rho, frame.delta_eff, frame.kappa_12, std::nullopt, opt.branch);
    return detail::solve(sys, frame, opt);
}

inline double lambda_infinity(double rho, const DressedFrame& frame, const GapOptions& opt = {})
{
    return solve_gap_zero_temperature(rho, frame, opt).lambda;
}

/// Temperature at which the nontrivial root of the full gap system vanishes.
/// Reduces to critical_temperature() when |Delta| >> kappa_12.
inline double critical_temperature_exact(double rho, const DressedFrame& frame)
{
    detail::require(rho > 0.0 && rho < 1.0, "critical_temperature_exact: rho must lie in (0, 1)");
    if (rho == 0.5) {
        throw DomainError("critical_temperature_exact: undefined at rho = 1/2");
    }
    const detail::GapSystem sys(rho, frame.delta_eff, frame.kappa_12, std::nullopt,
                                PolaritonBranch::Lower);
    const double r_tilde = sys.at(0.0).omega_r_tilde;
    const double tc = units::hbar_over_kb * r_tilde / (2.0 * std::atanh(1.0 - 2.0 * rho));
    if (!(tc > 0.0) || !std::isfinite(tc)) {
        throw DomainError("critical_temperature_exact: no transition for these parameters");
    }
    return tc;
}

/// Closed-form order parameter in the far-detuned limit:
/// lambda = lambda_inf * sqrt(1 - 1 / (rho (1 + (1/rho - 1)^(zeta/zeta_c)))),
/// zeta = hbar Delta / k_B T, zeta_c = -ln(1/rho - 1). Zero in the normal state.
inline double order_parameter_closed_form(double rho, double delta_eff, double temperature,
                                          double lambda_inf)
{
    detail::require(rho > 0.0 && rho < 1.0, "order_parameter_closed_form: rho must lie in (0, 1)");
    detail::require(temperature > 0.0, "order_parameter_closed_form: temperature must be > 0");
    if (rho == 0.5) {
        throw DomainError("order_parameter_closed_form: zeta_c = 0 at rho = 1/2");
    }
    const double zeta = units::hbar_over_kb * delta_eff / temperature;
    const double zeta_c = -std::log(1.0 / rho - 1.0);
    const double braced = 1.0 - 1.0 / (rho * (1.0 + std::pow(1.0 / rho - 1.0, zeta / zeta_c)));
    return braced > 0.0 ? lambda_inf * std::sqrt(braced) : 0.0;
}

} // namespace dspol
