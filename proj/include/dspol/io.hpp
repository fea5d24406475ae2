#pragma once

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ds_core.hpp"
#include "dynamics.hpp"
#include "equilibrium.hpp"
#include "scans.hpp"
#include "steady_state.hpp"

namespace dspol::io {

/// 17 significant digits in scientific notation; "nan", "inf", "-inf" for non-finite values.
inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return {buf, res.ptr};
}

/// Comma-separated table writer with LF line endings.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header) : os_(os)
    {
        bool first = true;
        for (auto h : header) {
            os_ << (first ? "" : ",") << h;
            first = false;
        }
        os_ << '\n';
    }

    CsvWriter& operator<<(double v) { return put(format_double(v)); }
    CsvWriter& operator<<(int v) { return put(std::to_string(v)); }
    CsvWriter& operator<<(bool v) { return put(v ? "1" : "0"); }
    CsvWriter& operator<<(std::string_view v) { return put(v); }
    CsvWriter& operator<<(char v) { return put(std::string_view(&v, 1)); }

    void end_row()
    {
        os_ << '\n';
        fresh_ = true;
    }

private:
    CsvWriter& put(std::string_view s)
    {
        if (!fresh_) {
            os_ << ',';
        }
        os_ << s;
        fresh_ = false;
        return *this;
    }

    std::ostream& os_;
    bool fresh_ = true;
};

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    CsvWriter w(os, {"t_ps", "re_lambda", "im_lambda", "abs_lambda", "re_S", "im_S", "abs_S", "s_z"});
    for (const auto& s : traj.samples) {
        w << s.t << s.lambda.real() << s.lambda.imag() << std::abs(s.lambda) << s.s.real()
          << s.s.imag() << std::abs(s.s) << s.s_z;
        w.end_row();
    }
}

inline void write_imbalance_csv(std::ostream& os, const std::vector<ImbalanceRow>& rows,
                                std::string_view axis)
{
    CsvWriter w(os, {axis, "s_z_st", "s_z_eq"});
    for (const auto& r : rows) {
        w << r.x << r.s_z_st << r.s_z_eq;
        w.end_row();
    }
}

inline void write_order_parameter_csv(std::ostream& os, const std::vector<OrderParameterRow>& rows,
                                      std::string_view axis)
{
    CsvWriter w(os, {axis, "abs_lambda", "s_z_st", "s_z_thr", "mu", "lasing"});
    for (const auto& r : rows) {
        w << r.x << r.lambda_abs << r.s_z_st << r.s_z_thr << r.mu << r.lasing;
        w.end_row();
    }
}

inline void write_equilibrium_csv(std::ostream& os, const std::vector<EquilibriumRow>& rows)
{
    CsvWriter w(os, {"delta_eff", "lambda", "t_c", "t_c_exact", "mu", "converged", "root_count"});
    for (const auto& r : rows) {
        w << r.delta_eff << r.lambda << r.t_c << r.t_c_exact << r.mu << r.converged << r.root_count;
        w.end_row();
    }
}

inline void write_phase_csv(std::ostream& os, const PhaseDiagram& d)
{
    CsvWriter w(os, {"row", "col", "delta_over_omega", "kappa_over_gamma", "classification",
                     "thermalized", "strong_12", "strong_21", "lambda_12", "lambda_21"});
    for (std::size_t r = 0; r < d.rows; ++r) {
        for (std::size_t c = 0; c < d.cols; ++c) {
            const auto& cell = d.at(r, c);
            w << static_cast<int>(r) << static_cast<int>(c) << cell.delta_over_omega
              << cell.kappa_over_gamma << phase_symbol(cell.classification) << cell.thermalized
              << cell.strong_12 << cell.strong_21 << cell.lambda_12 << cell.lambda_21;
            w.end_row();
        }
    }
}

using nlohmann::json;

inline json complex_json(const cplx& z)
{
    return {{"re", z.real()}, {"im", z.imag()}};
}

inline json to_json(const DressedFrame& f)
{
    return {{"sin_theta", f.sin_theta},     {"cos_theta", f.cos_theta},
            {"omega_rabi", f.omega_rabi},   {"kappa_12", f.kappa_12},
            {"kappa_21", f.kappa_21},       {"w", f.w},
            {"gamma_plus", f.gamma_plus},   {"gamma_minus", f.gamma_minus},
            {"gamma_1", f.gamma_1},         {"eta_1", f.eta_1},
            {"cap_gamma_1", f.cap_gamma_1}, {"s_z_eq", f.s_z_eq},
            {"s_z_st", f.s_z_st},           {"delta_eff", f.delta_eff}};
}

inline json to_json(const ConditionFlags& c)
{
    return {{"thermalized", c.thermalized},
            {"strong_coupling_12", c.strong_coupling_12},
            {"strong_coupling_21", c.strong_coupling_21},
            {"thresholdless_12", c.thresholdless_12}};
}

inline json to_json(const ThresholdReport& r)
{
    return {{"transition", std::string(to_string(r.transition))},
            {"s_z_thr", r.s_z_thr},
            {"s_z_st", r.s_z_st},
            {"mu", r.mu},
            {"lambda_sq", r.lambda_sq},
            {"lasing", r.lasing},
            {"mu_branches", json::array({complex_json(r.mu_branches.first),
                                         complex_json(r.mu_branches.second)})}};
}

inline json to_json(const SelfConsistentImbalance& s)
{
    return {{"s_z_bar", s.s_z_bar},
            {"omega_r_eff_tilde", complex_json(s.omega_r_eff_tilde)},
            {"gamma_eff", s.gamma_eff},
            {"converged", s.converged}};
}

inline json to_json(const EquilibriumSolution& s)
{
    return {{"lambda", s.lambda},
            {"mu", s.mu},
            {"omega_r_tilde", s.omega_r_tilde},
            {"omega_c_tilde", s.omega_c_tilde},
            {"theta_big", s.theta_big},
            {"rho", s.rho},
            {"converged", s.converged},
            {"iterations", s.iterations},
            {"residual", s.residual},
            {"root_count", s.root_count}};
}

} // namespace dspol::io
