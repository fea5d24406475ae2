#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ds_core.hpp"
#include "equilibrium.hpp"
#include "errors.hpp"
#include "steady_state.hpp"

namespace dspol {

enum class SweepAxis { Delta, DeltaEff, GammaColl, Temperature, KappaOverGamma };

constexpr std::string_view to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::Delta: return "delta";
    case SweepAxis::DeltaEff: return "delta_eff";
    case SweepAxis::GammaColl: return "gamma_coll";
    case SweepAxis::Temperature: return "temperature";
    case SweepAxis::KappaOverGamma: return "kappa_over_gamma";
    }
    return "delta";
}

inline std::optional<SweepAxis> parse_sweep_axis(std::string_view s)
{
    for (auto a : {SweepAxis::Delta, SweepAxis::DeltaEff, SweepAxis::GammaColl,
                   SweepAxis::Temperature, SweepAxis::KappaOverGamma}) {
        if (to_string(a) == s) {
            return a;
        }
    }
    return std::nullopt;
}

enum class Spacing { Linear, Log };

struct AxisRange {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;
    Spacing spacing = Spacing::Linear;

    bool operator==(const AxisRange&) const = default;

    void check() const
    {
        detail::require(std::isfinite(min) && std::isfinite(max) && min < max,
                        "AxisRange: requires finite min < max");
        detail::require(count >= 2, "AxisRange: requires count >= 2");
        detail::require(spacing == Spacing::Linear || min > 0.0,
                        "AxisRange: log spacing requires min > 0");
    }

    std::vector<double> values() const
    {
        check();
        std::vector<double> v(count);
        const double n = static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) {
            const double u = static_cast<double>(i) / n;
            v[i] = spacing == Spacing::Linear ? min + (max - min) * u
                                              : min * std::pow(max / min, u);
        }
        v.front() = min;
        v.back() = max;
        return v;
    }
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::Delta;
    AxisRange range;
    SystemParams base;
    CavityTuning tuning;                   ///< reapplied at every point
    std::optional<Transition> transition;  ///< unset for equilibrium sweeps
};

/// Parameters at one sweep point, with the cavity tuning reapplied after the axis update.
inline SystemParams params_at(const SweepSpec& spec, double x)
{
    SystemParams p = spec.base;
    CavityTuning tuning = spec.tuning;
    switch (spec.axis) {
    case SweepAxis::Delta: p.delta = x; break;
    case SweepAxis::DeltaEff: tuning = CavityTuning::effective(x); break;
    case SweepAxis::GammaColl: p.gamma_coll = x; break;
    case SweepAxis::Temperature: p.temperature = x; break;
    case SweepAxis::KappaOverGamma:
        detail::require(x > 0.0, "params_at: kappa_over_gamma must be > 0");
        p.gamma_coll = p.kappa / x;
        break;
    }
    return with_tuning(p, tuning);
}

struct ImbalanceRow {
    double x;
    double s_z_st;
    double s_z_eq;
};

inline std::vector<ImbalanceRow> sweep_stationary_imbalance(const SweepSpec& spec)
{
    std::vector<ImbalanceRow> rows;
    for (double x : spec.range.values()) {
        const auto f = build_dressed_frame(params_at(spec, x));
        rows.push_back({x, f.s_z_st, f.s_z_eq});
    }
    return rows;
}

struct OrderParameterRow {
    double x;
    double lambda_abs;
    double s_z_st;
    double s_z_thr;
    double mu;
    bool lasing;
};

inline std::vector<OrderParameterRow> sweep_order_parameter(const SweepSpec& spec)
{
    detail::require(spec.transition.has_value(), "sweep_order_parameter: transition not set");
    std::vector<OrderParameterRow> rows;
    for (double x : spec.range.values()) {
        const auto f = build_dressed_frame(params_at(spec, x));
        const auto r = steady_report(*spec.transition, f);
        rows.push_back({x, std::sqrt(r.lambda_sq), r.s_z_st, r.s_z_thr, r.mu, r.lasing});
    }
    return rows;
}

struct EquilibriumRow {
    double delta_eff;
    double lambda;
    double t_c;        ///< far-detuned critical temperature, NaN where no transition exists
    double t_c_exact;  ///< critical temperature of the full gap system, NaN where none exists
    double mu;
    bool converged;
    int root_count;
};

inline std::vector<EquilibriumRow> sweep_equilibrium(const SweepSpec& spec, double rho,
                                                     const GapOptions& opt = {})
{
    detail::require(spec.axis == SweepAxis::DeltaEff, "sweep_equilibrium: axis must be delta_eff");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<EquilibriumRow> rows;
    for (double x : spec.range.values()) {
        const auto p = params_at(spec, x);
        const auto f = build_dressed_frame(p);
        const auto sol = solve_gap(rho, f, p.temperature, opt);
        double tc = nan;
        double tc_exact = nan;
        try {
            tc = critical_temperature(rho, f.delta_eff);
        } catch (const DomainError&) {
        }
        try {
            tc_exact = critical_temperature_exact(rho, f);
        } catch (const DomainError&) {
        }
        rows.push_back({f.delta_eff, sol.lambda, tc, tc_exact, sol.mu, sol.converged, sol.root_count});
    }
    return rows;
}

enum class Phase { SuperradiantEquilibrium, Lasing12, Lasing21, Normal };

constexpr char phase_symbol(Phase c)
{
    switch (c) {
    case Phase::SuperradiantEquilibrium: return 'S';
    case Phase::Lasing12: return '1';
    case Phase::Lasing21: return '2';
    case Phase::Normal: return 'N';
    }
    return 'N';
}

constexpr std::string_view to_string(Phase c)
{
    switch (c) {
    case Phase::SuperradiantEquilibrium: return "SuperradiantEquilibrium";
    case Phase::Lasing12: return "Lasing12";
    case Phase::Lasing21: return "Lasing21";
    case Phase::Normal: return "Normal";
    }
    return "Normal";
}

struct PhaseCell {
    double delta_over_omega = 0.0;
    double kappa_over_gamma = 0.0;
    Phase classification = Phase::Normal;
    bool thermalized = false;
    bool strong_12 = false;
    bool strong_21 = false;
    double lambda_12 = 0.0;
    double lambda_21 = 0.0;

    bool operator==(const PhaseCell&) const = default;
};

struct PhaseGridSpec {
    AxisRange delta_over_omega;  ///< columns; delta = x * omega
    AxisRange kappa_over_gamma;  ///< rows; gamma_coll = kappa / y
    SystemParams base;
    double margin = 0.1;
    unsigned threads = 0;        ///< 0: DSPOL_THREADS or the hardware concurrency
};

struct PhaseDiagram {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<PhaseCell> cells; ///< row-major, row index along kappa_over_gamma

    const PhaseCell& at(std::size_t row, std::size_t col) const { return cells[row * cols + col]; }

    /// One character per cell, largest kappa/gamma on the first line.
    std::string classification_matrix() const
    {
        std::string out;
        out.reserve(rows * (cols + 1));
        for (std::size_t r = rows; r-- > 0;) {
            for (std::size_t c = 0; c < cols; ++c) {
                out += phase_symbol(at(r, c).classification);
            }
            out += '\n';
        }
        return out;
    }
};

inline unsigned default_thread_count()
{
    if (const char* env = std::getenv("DSPOL_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline PhaseCell classify_cell(const SystemParams& base, double x, double y, double margin)
{
    SystemParams p = base;
    p.delta = x * p.omega;
    p.gamma_coll = p.kappa / y;

    const auto f12 = build_dressed_frame(with_tuning(p, CavityTuning::resonant_one_two()));
    const auto f21 = build_dressed_frame(with_tuning(p, CavityTuning::red_sideband_two_one()));
    const auto flags = check_conditions(f12, p, margin);

    PhaseCell c;
    c.delta_over_omega = x;
    c.kappa_over_gamma = y;
    c.thermalized = flags.thermalized;
    c.strong_12 = flags.strong_coupling_12;
    c.strong_21 = flags.strong_coupling_21;
    c.lambda_12 = std::sqrt(steady_report(Transition::OneTwo, f12).lambda_sq);
    c.lambda_21 = std::sqrt(steady_report(Transition::TwoOne, f21).lambda_sq);

    if (c.thermalized && c.strong_12 && p.delta < 0.0) {
        c.classification = Phase::SuperradiantEquilibrium;
    } else if (c.lambda_12 > 0.0) {
        c.classification = Phase::Lasing12;
    } else if (c.lambda_21 > 0.0) {
        c.classification = Phase::Lasing21;
    }
    return c;
}

/// Classifies every cell of the (delta/Omega, kappa/gamma) grid. Rows are distributed over
/// worker threads; each cell is written to its own slot, so output order is fixed.
inline PhaseDiagram phase_diagram(const PhaseGridSpec& spec)
{
    validate(spec.base);
    detail::require(spec.base.kappa > 0.0, "phase_diagram: kappa must be > 0");
    const auto xs = spec.delta_over_omega.values();
    const auto ys = spec.kappa_over_gamma.values();
    for (double y : ys) {
        detail::require(y > 0.0, "phase_diagram: kappa_over_gamma must be > 0");
    }

    PhaseDiagram d;
    d.rows = ys.size();
    d.cols = xs.size();
    d.cells.resize(d.rows * d.cols);

    const unsigned workers = std::min<std::size_t>(
        spec.threads > 0 ? spec.threads : default_thread_count(), d.rows);
    std::atomic<std::size_t> next_row{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto work = [&] {
        try {
            for (std::size_t r; !failed && (r = next_row++) < d.rows;) {
                for (std::size_t c = 0; c < d.cols; ++c) {
                    d.cells[r * d.cols + c] = classify_cell(spec.base, xs[c], ys[r], spec.margin);
                }
            }
        } catch (...) {
            if (!failed.exchange(true)) {
                failure = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return d;
}

} // namespace dspol
