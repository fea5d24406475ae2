#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ds_core.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "scans.hpp"
#include "units.hpp"

namespace dspol::config {

/// Bad configuration input. `line` is 1-based within the file, 0 for command-line overrides.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line)
    {
    }

    int line() const noexcept { return line_; }

private:
    int line_;
};

enum class Command { None, Frame, EquilibriumScan, Dynamics, SteadyState, Sweep, PhaseDiagram };

inline constexpr std::array<std::pair<Command, std::string_view>, 7> command_names{{
    {Command::None, "none"},
    {Command::Frame, "frame"},
    {Command::EquilibriumScan, "equilibrium-scan"},
    {Command::Dynamics, "dynamics"},
    {Command::SteadyState, "steady-state"},
    {Command::Sweep, "sweep"},
    {Command::PhaseDiagram, "phase-diagram"},
}};

enum class SweepKind { StationaryImbalance, OrderParameter };

struct DynamicsConfig {
    double t_end = units::ns(400.0);
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    std::size_t output_points = 2000;
    BlochState initial = default_initial_state();

    bool operator==(const DynamicsConfig&) const = default;
};

struct SweepConfig {
    SweepKind kind = SweepKind::OrderParameter;
    SweepAxis axis = SweepAxis::Delta;
    AxisRange range{units::from_thz(1.0), units::from_thz(40.0), 400, Spacing::Linear};
    std::vector<double> gamma_series; ///< one output table per collisional width; empty uses params

    bool operator==(const SweepConfig&) const = default;
};

struct PhaseConfig {
    AxisRange delta_over_omega{-40.0, 40.0, 200, Spacing::Linear};
    AxisRange kappa_over_gamma{1.0, 1e5, 200, Spacing::Log};

    bool operator==(const PhaseConfig&) const = default;
};

struct RunConfig {
    std::string preset;
    Command command = Command::None;
    SystemParams params;
    CavityTuning tuning;
    Transition transition = Transition::OneTwo;
    double rho = 0.27;
    double margin = 0.1;
    double tol = 1e-10;
    DynamicsConfig dynamics;
    SweepConfig sweep;
    PhaseConfig phase;
    std::string out_dir = ".";

    bool operator==(const RunConfig&) const = default;

    /// Parameters with the cavity tuning applied.
    SystemParams tuned_params() const { return with_tuning(params, tuning); }
};

inline std::string_view to_string(Command c)
{
    for (const auto& [cmd, name] : command_names) {
        if (cmd == c) {
            return name;
        }
    }
    return "none";
}

inline std::optional<Command> parse_command(std::string_view s)
{
    for (const auto& [cmd, name] : command_names) {
        if (name == s && cmd != Command::None) {
            return cmd;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// Presets

inline SystemParams preset_base()
{
    SystemParams p;
    p.omega = units::from_thz(1.0);
    p.kappa = units::from_thz(0.62);
    p.gamma_spont = units::from_rad_per_ns(0.037);
    p.gamma_cav = units::from_mhz(100.0);
    p.temperature = 530.0;
    return p;
}

inline const std::vector<std::string_view>& preset_names()
{
    static const std::vector<std::string_view> names{"fig3", "fig4", "fig6", "fig7", "fig8", "fig9"};
    return names;
}

inline std::optional<RunConfig> preset(std::string_view name)
{
    RunConfig c;
    c.preset = std::string(name);
    c.params = preset_base();
    const std::vector<double> widths{units::from_ghz(0.36), units::from_ghz(3.6),
                                     units::from_ghz(36.0)};

    if (name == "fig3") {
        c.command = Command::EquilibriumScan;
        c.params.delta = units::from_thz(-11.0);
        c.params.gamma_coll = units::from_ghz(30.0);
        c.tuning = CavityTuning::cavity(0.0);
        c.rho = 0.27;
        c.sweep.kind = SweepKind::OrderParameter;
        c.sweep.axis = SweepAxis::DeltaEff;
        c.sweep.range = {units::from_thz(-11.2), units::from_thz(-10.8), 401, Spacing::Linear};
    } else if (name == "fig4") {
        c.command = Command::Sweep;
        c.params.delta = units::from_thz(11.0);
        c.params.gamma_coll = units::from_ghz(0.36);
        c.tuning = CavityTuning::resonant_one_two();
        c.sweep.kind = SweepKind::StationaryImbalance;
        c.sweep.axis = SweepAxis::Delta;
        c.sweep.range = {units::from_thz(-30.0), units::from_thz(30.0), 601, Spacing::Linear};
        c.sweep.gamma_series = {0.0, widths[0], widths[1], widths[2]};
    } else if (name == "fig6") {
        c.command = Command::Dynamics;
        c.params.delta = units::from_thz(11.0);
        c.params.gamma_coll = units::from_ghz(0.36);
        c.tuning = CavityTuning::resonant_one_two();
        c.transition = Transition::OneTwo;
        c.dynamics.t_end = units::ns(400.0);
    } else if (name == "fig7") {
        c.command = Command::Sweep;
        c.params.delta = units::from_thz(11.0);
        c.params.gamma_coll = units::from_ghz(0.36);
        c.tuning = CavityTuning::resonant_one_two();
        c.transition = Transition::OneTwo;
        c.sweep.kind = SweepKind::OrderParameter;
        c.sweep.axis = SweepAxis::Delta;
        c.sweep.range = {units::from_thz(0.5), units::from_thz(40.0), 400, Spacing::Linear};
        c.sweep.gamma_series = widths;
    } else if (name == "fig8") {
        c.command = Command::PhaseDiagram;
        c.params.delta = units::from_thz(11.0);
        c.params.gamma_coll = units::from_ghz(0.36);
        c.tuning = CavityTuning::resonant_one_two();
        c.margin = 0.1;
        c.phase.delta_over_omega = {-40.0, 40.0, 200, Spacing::Linear};
        c.phase.kappa_over_gamma = {1.0, 1e5, 200, Spacing::Log};
    } else if (name == "fig9") {
        c.command = Command::Sweep;
        c.params.delta = units::from_thz(11.0);
        c.params.gamma_coll = units::from_ghz(0.36);
        c.tuning = CavityTuning::red_sideband_two_one();
        c.transition = Transition::TwoOne;
        c.dynamics.t_end = units::ns(50.0);
        c.sweep.kind = SweepKind::OrderParameter;
        c.sweep.axis = SweepAxis::Delta;
        c.sweep.range = {units::from_thz(-40.0), units::from_thz(40.0), 801, Spacing::Linear};
        c.sweep.gamma_series = widths;
    } else {
        return std::nullopt;
    }
    c.params = c.tuned_params();
    return c;
}

// ---------------------------------------------------------------------------------------
// Key table

enum class Dim { Frequency, Temperature, Time, Plain };

namespace detail {

inline constexpr double identity(double v) { return v; }

struct Suffix {
    std::string_view text;
    Dim dim;
    double (*convert)(double); ///< written value to internal units
};

inline constexpr std::array<Suffix, 8> suffixes{{
    {"_rad_per_ps", Dim::Frequency, identity},
    {"_rad_per_ns", Dim::Frequency, units::from_rad_per_ns},
    {"_thz", Dim::Frequency, units::from_thz},
    {"_ghz", Dim::Frequency, units::from_ghz},
    {"_mhz", Dim::Frequency, units::from_mhz},
    {"_k", Dim::Temperature, identity},
    {"_ns", Dim::Time, units::ns},
    {"_ps", Dim::Time, identity},
}};

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view s, int line, std::string_view key)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(line, "key '" + std::string(key) + "': not a finite number: '"
                                    + std::string(s) + "'");
    }
    return v;
}

inline std::size_t parse_count(std::string_view s, int line, std::string_view key)
{
    s = trim(s);
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError(line, "key '" + std::string(key) + "': not a non-negative integer: '"
                                    + std::string(s) + "'");
    }
    return v;
}

struct Entry {
    std::string_view base;
    Dim dim;
    bool list = false;
    std::function<void(RunConfig&, double)> set_number;
    std::function<void(RunConfig&, std::string_view, int)> set_text; ///< for textual keys
};

inline Spacing parse_spacing(std::string_view v, int line)
{
    if (v == "linear") return Spacing::Linear;
    if (v == "log") return Spacing::Log;
    throw ConfigError(line, "spacing must be 'linear' or 'log', got '" + std::string(v) + "'");
}

inline std::string_view spacing_name(Spacing s)
{
    return s == Spacing::Linear ? "linear" : "log";
}

inline std::string_view tuning_name(CavityTuning::Kind k)
{
    switch (k) {
    case CavityTuning::Kind::FixedCavity: return "fixed_cavity";
    case CavityTuning::Kind::FixedEffective: return "fixed_effective";
    case CavityTuning::Kind::ResonantOneTwo: return "resonant_one_two";
    case CavityTuning::Kind::RedSidebandTwoOne: return "red_sideband_two_one";
    }
    return "fixed_cavity";
}

inline std::string_view transition_name(Transition t)
{
    return t == Transition::OneTwo ? "one_two" : "two_one";
}

inline std::string_view kind_name(SweepKind k)
{
    return k == SweepKind::StationaryImbalance ? "stationary_imbalance" : "order_parameter";
}

inline Dim axis_dim(SweepAxis a)
{
    switch (a) {
    case SweepAxis::Temperature: return Dim::Temperature;
    case SweepAxis::KappaOverGamma: return Dim::Plain;
    default: return Dim::Frequency;
    }
}

inline std::vector<Entry> make_entries()
{
    using C = RunConfig;
    std::vector<Entry> e;
    auto num = [&](std::string_view base, Dim dim, std::function<void(C&, double)> f) {
        e.push_back({base, dim, false, std::move(f), {}});
    };
    auto text = [&](std::string_view base, std::function<void(C&, std::string_view, int)> f) {
        e.push_back({base, Dim::Plain, false, {}, std::move(f)});
    };
    auto integer = [&](std::string_view base, std::function<void(C&, std::size_t)> f) {
        e.push_back({base, Dim::Plain, false, {}, [base, f](C& c, std::string_view v, int line) {
                         f(c, parse_count(v, line, base));
                     }});
    };

    text("command", [](C& c, std::string_view v, int line) {
        const auto cmd = parse_command(v);
        if (!cmd) {
            throw ConfigError(line, "unknown command '" + std::string(v) + "'");
        }
        c.command = *cmd;
    });
    num("params.omega", Dim::Frequency, [](C& c, double v) { c.params.omega = v; });
    num("params.delta", Dim::Frequency, [](C& c, double v) { c.params.delta = v; });
    num("params.kappa", Dim::Frequency, [](C& c, double v) { c.params.kappa = v; });
    num("params.gamma_coll", Dim::Frequency, [](C& c, double v) { c.params.gamma_coll = v; });
    num("params.eta_coll", Dim::Frequency, [](C& c, double v) { c.params.eta_coll = v; });
    num("params.gamma_spont", Dim::Frequency, [](C& c, double v) { c.params.gamma_spont = v; });
    num("params.gamma_cav", Dim::Frequency, [](C& c, double v) { c.params.gamma_cav = v; });
    num("params.temperature", Dim::Temperature, [](C& c, double v) { c.params.temperature = v; });

    text("cavity.tuning", [](C& c, std::string_view v, int line) {
        for (auto k : {CavityTuning::Kind::FixedCavity, CavityTuning::Kind::FixedEffective,
                       CavityTuning::Kind::ResonantOneTwo, CavityTuning::Kind::RedSidebandTwoOne}) {
            if (tuning_name(k) == v) {
                c.tuning.kind = k;
                return;
            }
        }
        throw ConfigError(line, "unknown cavity tuning '" + std::string(v) + "'");
    });
    num("cavity.delta_cav", Dim::Frequency,
        [](C& c, double v) { c.tuning = CavityTuning::cavity(v); });
    num("cavity.delta_eff", Dim::Frequency,
        [](C& c, double v) { c.tuning = CavityTuning::effective(v); });

    text("transition", [](C& c, std::string_view v, int line) {
        if (v == "one_two") {
            c.transition = Transition::OneTwo;
        } else if (v == "two_one") {
            c.transition = Transition::TwoOne;
        } else {
            throw ConfigError(line, "transition must be 'one_two' or 'two_one'");
        }
    });
    num("equilibrium.rho", Dim::Plain, [](C& c, double v) { c.rho = v; });
    num("margin", Dim::Plain, [](C& c, double v) { c.margin = v; });
    num("tol", Dim::Plain, [](C& c, double v) { c.tol = v; });

    num("dynamics.t_end", Dim::Time, [](C& c, double v) { c.dynamics.t_end = v; });
    num("dynamics.rel_tol", Dim::Plain, [](C& c, double v) { c.dynamics.rel_tol = v; });
    num("dynamics.abs_tol", Dim::Plain, [](C& c, double v) { c.dynamics.abs_tol = v; });
    integer("dynamics.output_points", [](C& c, std::size_t v) { c.dynamics.output_points = v; });
    num("dynamics.re_lambda0", Dim::Plain,
        [](C& c, double v) { c.dynamics.initial.lambda.real(v); });
    num("dynamics.im_lambda0", Dim::Plain,
        [](C& c, double v) { c.dynamics.initial.lambda.imag(v); });
    num("dynamics.re_s0", Dim::Plain, [](C& c, double v) { c.dynamics.initial.s.real(v); });
    num("dynamics.im_s0", Dim::Plain, [](C& c, double v) { c.dynamics.initial.s.imag(v); });
    num("dynamics.s_z0", Dim::Plain, [](C& c, double v) { c.dynamics.initial.s_z = v; });

    text("sweep.kind", [](C& c, std::string_view v, int line) {
        if (v == kind_name(SweepKind::StationaryImbalance)) {
            c.sweep.kind = SweepKind::StationaryImbalance;
        } else if (v == kind_name(SweepKind::OrderParameter)) {
            c.sweep.kind = SweepKind::OrderParameter;
        } else {
            throw ConfigError(line, "sweep.kind must be 'stationary_imbalance' or 'order_parameter'");
        }
    });
    text("sweep.axis", [](C& c, std::string_view v, int line) {
        const auto a = parse_sweep_axis(v);
        if (!a) {
            throw ConfigError(line, "unknown sweep axis '" + std::string(v) + "'");
        }
        c.sweep.axis = *a;
    });
    // The dimension of sweep.min/max depends on the axis and is checked after parsing.
    e.push_back({"sweep.min", Dim::Plain, false, [](C& c, double v) { c.sweep.range.min = v; }, {}});
    e.push_back({"sweep.max", Dim::Plain, false, [](C& c, double v) { c.sweep.range.max = v; }, {}});
    integer("sweep.points", [](C& c, std::size_t v) { c.sweep.range.count = v; });
    text("sweep.spacing", [](C& c, std::string_view v, int line) {
        c.sweep.range.spacing = parse_spacing(v, line);
    });
    e.push_back({"sweep.gamma_series", Dim::Frequency, true, {}, {}});

    num("phase.delta_over_omega_min", Dim::Plain,
        [](C& c, double v) { c.phase.delta_over_omega.min = v; });
    num("phase.delta_over_omega_max", Dim::Plain,
        [](C& c, double v) { c.phase.delta_over_omega.max = v; });
    integer("phase.columns", [](C& c, std::size_t v) { c.phase.delta_over_omega.count = v; });
    text("phase.delta_over_omega_spacing", [](C& c, std::string_view v, int line) {
        c.phase.delta_over_omega.spacing = parse_spacing(v, line);
    });
    num("phase.kappa_over_gamma_min", Dim::Plain,
        [](C& c, double v) { c.phase.kappa_over_gamma.min = v; });
    num("phase.kappa_over_gamma_max", Dim::Plain,
        [](C& c, double v) { c.phase.kappa_over_gamma.max = v; });
    integer("phase.rows", [](C& c, std::size_t v) { c.phase.kappa_over_gamma.count = v; });
    text("phase.kappa_over_gamma_spacing", [](C& c, std::string_view v, int line) {
        c.phase.kappa_over_gamma.spacing = parse_spacing(v, line);
    });
    text("output.dir", [](C& c, std::string_view v, int line) {
        if (v.empty()) {
            throw ConfigError(line, "output.dir must not be empty");
        }
        c.out_dir = std::string(v);
    });
    return e;
}

inline const std::vector<Entry>& entries()
{
    static const std::vector<Entry> table = make_entries();
    return table;
}

inline const Entry* find_entry(std::string_view base)
{
    for (const auto& e : entries()) {
        if (e.base == base) {
            return &e;
        }
    }
    return nullptr;
}

struct RawLine {
    int line;
    std::string key;
    std::string value;
};

inline bool is_dimensioned_sweep_bound(std::string_view base)
{
    return base == "sweep.min" || base == "sweep.max";
}

/// Applies one key; returns the dimension actually written for sweep bounds.
inline std::optional<Dim> apply(RunConfig& c, const RawLine& l)
{
    const std::string_view key = l.key;
    const std::string_view value = trim(l.value);

    if (const Entry* e = find_entry(key)) {
        if (e->set_text) {
            e->set_text(c, value, l.line);
            return std::nullopt;
        }
        if (e->dim != Dim::Plain) {
            throw ConfigError(l.line, "key '" + l.key + "' requires a unit suffix");
        }
        e->set_number(c, parse_number(value, l.line, key));
        return is_dimensioned_sweep_bound(key) ? std::optional{Dim::Plain} : std::nullopt;
    }

    for (const auto& s : suffixes) {
        if (key.size() <= s.text.size() || !key.ends_with(s.text)) {
            continue;
        }
        const std::string_view base = key.substr(0, key.size() - s.text.size());
        const Entry* e = find_entry(base);
        if (!e) {
            continue;
        }
        if (is_dimensioned_sweep_bound(base)) {
            e->set_number(c, s.convert(parse_number(value, l.line, key)));
            return s.dim;
        }
        if (e->set_text || e->dim != s.dim) {
            throw ConfigError(l.line, "unit suffix '" + std::string(s.text)
                                          + "' does not match key '" + std::string(base) + "'");
        }
        if (e->list) {
            std::vector<double> values;
            std::string_view rest = value;
            while (!trim(rest).empty()) {
                const auto comma = rest.find(',');
                values.push_back(s.convert(parse_number(rest.substr(0, comma), l.line, key)));
                if (comma == std::string_view::npos) {
                    break;
                }
                rest.remove_prefix(comma + 1);
                if (trim(rest).empty()) {
                    throw ConfigError(l.line, "key '" + l.key + "': trailing comma");
                }
            }
            c.sweep.gamma_series = std::move(values);
            return std::nullopt;
        }
        e->set_number(c, s.convert(parse_number(value, l.line, key)));
        return std::nullopt;
    }
    throw ConfigError(l.line, "unknown key '" + l.key + "'");
}

inline std::vector<RawLine> tokenize(std::string_view text)
{
    std::vector<RawLine> out;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, "expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(line_no, "empty key");
        }
        out.push_back({line_no, std::string(key), std::string(trim(line.substr(eq + 1)))});
    }
    return out;
}

} // namespace detail

/// Parses line-oriented `key = value` text. `overrides` are `KEY=VALUE` strings applied
/// after the file. A preset, wherever it appears, is applied first; explicit keys then
/// override it, later lines winning.
inline RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {})
{
    auto lines = detail::tokenize(text);
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(0, "override '" + o + "' is not KEY=VALUE");
        }
        lines.push_back({0, std::string(detail::trim(std::string_view(o).substr(0, eq))),
                         std::string(detail::trim(std::string_view(o).substr(eq + 1)))});
    }

    RunConfig c;
    const detail::RawLine* preset_line = nullptr;
    for (const auto& l : lines) {
        if (l.key == "preset") {
            preset_line = &l;
        }
    }
    if (preset_line) {
        auto p = preset(preset_line->value);
        if (!p) {
            throw ConfigError(preset_line->line, "unknown preset '" + preset_line->value + "'");
        }
        c = std::move(*p);
    }

    bool have_omega = preset_line != nullptr;
    bool have_temperature = preset_line != nullptr;
    std::vector<std::pair<int, Dim>> bound_dims;
    for (const auto& l : lines) {
        if (l.key == "preset") {
            continue;
        }
        if (const auto dim = detail::apply(c, l)) {
            bound_dims.emplace_back(l.line, *dim);
        }
        have_omega = have_omega || l.key.starts_with("params.omega_");
        have_temperature = have_temperature || l.key.starts_with("params.temperature_");
    }

    if (!have_omega) {
        throw ConfigError(0, "missing required key 'params.omega_<unit>'");
    }
    if (!have_temperature) {
        throw ConfigError(0, "missing required key 'params.temperature_k'");
    }
    for (const auto& [line, dim] : bound_dims) {
        if (dim != detail::axis_dim(c.sweep.axis)) {
            throw ConfigError(line, "unit suffix of sweep bound does not match axis '"
                                        + std::string(to_string(c.sweep.axis)) + "'");
        }
    }
    try {
        validate(c.params);
    } catch (const InvalidArgument& e) {
        throw ConfigError(0, e.what());
    }
    c.params = c.tuned_params();
    return c;
}

/// Text that parse_config maps back to an equal RunConfig. Frequencies are written in
/// rad/ps with 17 significant digits.
inline std::string serialize(const RunConfig& c)
{
    using io::format_double;
    std::ostringstream os;
    auto line = [&](std::string_view k, const std::string& v) { os << k << " = " << v << '\n'; };
    auto freq = [&](std::string_view k, double v) {
        line(std::string(k) + "_rad_per_ps", format_double(v));
    };

    if (!c.preset.empty()) {
        line("preset", c.preset);
    }
    if (c.command != Command::None) {
        line("command", std::string(to_string(c.command)));
    }
    freq("params.omega", c.params.omega);
    freq("params.delta", c.params.delta);
    freq("params.kappa", c.params.kappa);
    freq("params.gamma_coll", c.params.gamma_coll);
    freq("params.eta_coll", c.params.eta_coll);
    freq("params.gamma_spont", c.params.gamma_spont);
    freq("params.gamma_cav", c.params.gamma_cav);
    line("params.temperature_k", format_double(c.params.temperature));

    switch (c.tuning.kind) {
    case CavityTuning::Kind::FixedCavity: freq("cavity.delta_cav", c.tuning.value); break;
    case CavityTuning::Kind::FixedEffective: freq("cavity.delta_eff", c.tuning.value); break;
    default: line("cavity.tuning", std::string(detail::tuning_name(c.tuning.kind))); break;
    }
    line("transition", std::string(detail::transition_name(c.transition)));
    line("equilibrium.rho", format_double(c.rho));
    line("margin", format_double(c.margin));
    line("tol", format_double(c.tol));

    line("dynamics.t_end_ps", format_double(c.dynamics.t_end));
    line("dynamics.rel_tol", format_double(c.dynamics.rel_tol));
    line("dynamics.abs_tol", format_double(c.dynamics.abs_tol));
    line("dynamics.output_points", std::to_string(c.dynamics.output_points));
    line("dynamics.re_lambda0", format_double(c.dynamics.initial.lambda.real()));
    line("dynamics.im_lambda0", format_double(c.dynamics.initial.lambda.imag()));
    line("dynamics.re_s0", format_double(c.dynamics.initial.s.real()));
    line("dynamics.im_s0", format_double(c.dynamics.initial.s.imag()));
    line("dynamics.s_z0", format_double(c.dynamics.initial.s_z));

    line("sweep.kind", std::string(detail::kind_name(c.sweep.kind)));
    line("sweep.axis", std::string(to_string(c.sweep.axis)));
    const char* bound_suffix = "";
    switch (detail::axis_dim(c.sweep.axis)) {
    case Dim::Frequency: bound_suffix = "_rad_per_ps"; break;
    case Dim::Temperature: bound_suffix = "_k"; break;
    default: break;
    }
    line(std::string("sweep.min") + bound_suffix, format_double(c.sweep.range.min));
    line(std::string("sweep.max") + bound_suffix, format_double(c.sweep.range.max));
    line("sweep.points", std::to_string(c.sweep.range.count));
    line("sweep.spacing", std::string(detail::spacing_name(c.sweep.range.spacing)));
    std::string series;
    for (double g : c.sweep.gamma_series) {
        series += (series.empty() ? "" : ", ") + format_double(g);
    }
    line("sweep.gamma_series_rad_per_ps", series);

    const auto& px = c.phase.delta_over_omega;
    const auto& py = c.phase.kappa_over_gamma;
    line("phase.delta_over_omega_min", format_double(px.min));
    line("phase.delta_over_omega_max", format_double(px.max));
    line("phase.columns", std::to_string(px.count));
    line("phase.delta_over_omega_spacing", std::string(detail::spacing_name(px.spacing)));
    line("phase.kappa_over_gamma_min", format_double(py.min));
    line("phase.kappa_over_gamma_max", format_double(py.max));
    line("phase.rows", std::to_string(py.count));
    line("phase.kappa_over_gamma_spacing", std::string(detail::spacing_name(py.spacing)));
    line("output.dir", c.out_dir);
    return os.str();
}

} // namespace dspol::config
