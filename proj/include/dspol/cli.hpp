#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "ds_core.hpp"
#include "dynamics.hpp"
#include "equilibrium.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "scans.hpp"
#include "steady_state.hpp"

namespace dspol::cli {

enum ExitCode : int { Ok = 0, Usage = 2, ConfigFailure = 3, IoFailure = 4, SolverFailure = 5 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver finished but did not meet its tolerance; artifacts were still written.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string usage()
{
    return "usage: dspol <command> [--config PATH] [--preset NAME] [--out DIR] [--margin X]\n"
           "                       [--tol X] [--set KEY=VALUE]...\n"
           "commands: frame, equilibrium-scan, dynamics, steady-state, sweep, phase-diagram\n"
           "presets:  fig3, fig4, fig6, fig7, fig8, fig9\n";
}

namespace detail {

inline std::string short_num(double v, int digits = 3)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline void write_file(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& body)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    body(os);
    os.flush();
    if (!os) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

inline void error_json(std::ostream& err, std::string_view kind, const std::string& msg,
                       std::optional<int> line = std::nullopt)
{
    nlohmann::json j{{"status", "error"}, {"kind", kind}, {"message", msg}};
    if (line) {
        j["line"] = *line;
    }
    err << j.dump() << '\n';
}

inline nlohmann::json params_json(const SystemParams& p)
{
    return {{"omega", p.omega},           {"delta", p.delta},
            {"kappa", p.kappa},           {"gamma_coll", p.gamma_coll},
            {"eta_coll", p.eta_coll},     {"gamma_spont", p.gamma_spont},
            {"gamma_cav", p.gamma_cav},   {"delta_cav", p.delta_cav},
            {"temperature", p.temperature}};
}

inline SweepSpec sweep_spec(const config::RunConfig& c, const SystemParams& base)
{
    SweepSpec s;
    s.axis = c.sweep.axis;
    s.range = c.sweep.range;
    s.base = base;
    s.tuning = c.tuning;
    s.transition = c.transition;
    return s;
}

inline std::string cmd_frame(const config::RunConfig& c, std::ostream& out)
{
    const auto p = c.tuned_params();
    const auto f = build_dressed_frame(p);
    nlohmann::json j{{"params", params_json(p)},
                     {"frame", io::to_json(f)},
                     {"conditions", io::to_json(check_conditions(f, p, c.margin))}};
    j["thermalization_time_ps"] = p.gamma_coll > 0.0 ? nlohmann::json(thermalization_time(p))
                                                     : nlohmann::json(nullptr);
    out << j.dump(2) << '\n';
    return "Omega_R/2pi = " + short_num(units::to_thz(f.omega_rabi)) + " THz, S_z_st = "
           + short_num(f.s_z_st);
}

inline std::string cmd_equilibrium(const config::RunConfig& c, const std::filesystem::path& dir)
{
    if (c.sweep.axis != SweepAxis::DeltaEff) {
        throw config::ConfigError(0, "equilibrium-scan requires sweep.axis = delta_eff");
    }
    GapOptions opt;
    opt.tol = c.tol;
    const auto rows = sweep_equilibrium(sweep_spec(c, c.params), c.rho, opt);
    write_file(dir / "equilibrium_scan.csv", [&](std::ostream& os) { io::write_equilibrium_csv(os, rows); });

    std::size_t ordered = 0;
    std::size_t failed = 0;
    std::optional<double> edge;
    for (const auto& r : rows) {
        failed += r.converged ? 0 : 1;
        if (r.lambda > 0.0) {
            ++ordered;
            edge = edge ? std::max(*edge, r.delta_eff) : r.delta_eff;
        }
    }
    if (failed > 0) {
        throw SolverError("gap solver did not converge at " + std::to_string(failed) + " points");
    }
    std::string s = "points = " + std::to_string(rows.size()) + ", lambda > 0 on "
                    + std::to_string(ordered);
    if (edge) {
        s += ", last ordered Delta/2pi = " + short_num(units::to_thz(*edge), 6) + " THz";
    }
    return s;
}

inline std::string cmd_dynamics(const config::RunConfig& c, const std::filesystem::path& dir)
{
    const auto f = build_dressed_frame(c.tuned_params());
    IntegrateOptions opt;
    opt.rel_tol = c.dynamics.rel_tol;
    opt.abs_tol = c.dynamics.abs_tol;
    opt.output_points = c.dynamics.output_points;
    BlochState init = c.dynamics.initial;
    init.t = 0.0;
    const auto traj = integrate(c.transition, init, f, c.dynamics.t_end, opt);
    write_file(dir / "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, traj); });

    const auto th = threshold(c.transition, f);
    const auto onset = detect_lasing_onset(traj, th.s_z_thr);
    return "tau_L = " + (onset ? short_num(units::to_ns(*onset)) + " ns" : std::string("none"))
           + ", |lambda|_ss = " + short_num(std::abs(traj.samples.back().lambda));
}

inline std::string cmd_steady(const config::RunConfig& c, const std::filesystem::path& dir,
                              std::ostream& out)
{
    const auto f = build_dressed_frame(c.tuned_params());
    const auto r = steady_report(c.transition, f);
    const auto sc = self_consistent_imbalance(c.transition, f, std::sqrt(r.lambda_sq),
                                              std::min(c.tol, 1e-12));
    const nlohmann::json j{{"report", io::to_json(r)}, {"self_consistent", io::to_json(sc)}};
    write_file(dir / "steady_state.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    out << j.dump(2) << '\n';
    if (!sc.converged) {
        throw SolverError("self-consistent imbalance did not converge");
    }
    return "S_z_thr = " + short_num(r.s_z_thr) + ", |lambda|_ss = " + short_num(std::sqrt(r.lambda_sq))
           + ", lasing = " + (r.lasing ? "true" : "false");
}

inline std::string cmd_sweep(const config::RunConfig& c, const std::filesystem::path& dir)
{
    const auto& series = c.sweep.gamma_series;
    if (!series.empty()
        && (c.sweep.axis == SweepAxis::GammaColl || c.sweep.axis == SweepAxis::KappaOverGamma)) {
        throw config::ConfigError(0, "sweep.gamma_series conflicts with a gamma sweep axis");
    }
    const std::string kind = c.sweep.kind == config::SweepKind::StationaryImbalance
                                 ? "stationary_imbalance"
                                 : "order_parameter";
    const auto axis = to_string(c.sweep.axis);

    std::vector<double> widths = series;
    if (widths.empty()) {
        widths.push_back(c.params.gamma_coll);
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        SystemParams base = c.params;
        base.gamma_coll = widths[i];
        const auto spec = sweep_spec(c, base);
        const std::string name = "sweep_" + kind
                                 + (series.empty() ? std::string() : "_" + std::to_string(i)) + ".csv";
        if (c.sweep.kind == config::SweepKind::StationaryImbalance) {
            const auto rows = sweep_stationary_imbalance(spec);
            write_file(dir / name, [&](std::ostream& os) { io::write_imbalance_csv(os, rows, axis); });
        } else {
            const auto rows = sweep_order_parameter(spec);
            for (const auto& r : rows) {
                peak = std::max(peak, r.lambda_abs);
            }
            write_file(dir / name, [&](std::ostream& os) { io::write_order_parameter_csv(os, rows, axis); });
        }
    }
    std::string s = "tables = " + std::to_string(widths.size()) + ", points = "
                    + std::to_string(c.sweep.range.count);
    if (c.sweep.kind == config::SweepKind::OrderParameter) {
        s += ", max |lambda| = " + short_num(peak);
    }
    return s;
}

inline std::string cmd_phase(const config::RunConfig& c, const std::filesystem::path& dir)
{
    PhaseGridSpec spec;
    spec.delta_over_omega = c.phase.delta_over_omega;
    spec.kappa_over_gamma = c.phase.kappa_over_gamma;
    spec.base = c.params;
    spec.margin = c.margin;
    const auto d = phase_diagram(spec);
    write_file(dir / "phase_diagram.csv", [&](std::ostream& os) { io::write_phase_csv(os, d); });
    write_file(dir / "phase_matrix.txt", [&](std::ostream& os) { os << d.classification_matrix(); });

    std::size_t counts[4] = {0, 0, 0, 0};
    for (const auto& cell : d.cells) {
        ++counts[static_cast<int>(cell.classification)];
    }
    return "cells = " + std::to_string(d.cells.size()) + ", S = " + std::to_string(counts[0])
           + ", 1 = " + std::to_string(counts[1]) + ", 2 = " + std::to_string(counts[2])
           + ", N = " + std::to_string(counts[3]);
}

} // namespace detail

/// Executes one configured command. Artifacts go to `c.out_dir`, the one-line summary to
/// `out`, failures to `err` as a single JSON object.
inline int run(const config::RunConfig& c, std::ostream& out, std::ostream& err)
{
    using config::Command;
    if (c.command == Command::None) {
        err << usage();
        return Usage;
    }
    try {
        const std::filesystem::path dir = c.out_dir;
        if (c.command != Command::Frame) {
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) {
                throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
            }
        }
        std::string summary;
        switch (c.command) {
        case Command::Frame: summary = detail::cmd_frame(c, out); break;
        case Command::EquilibriumScan: summary = detail::cmd_equilibrium(c, dir); break;
        case Command::Dynamics: summary = detail::cmd_dynamics(c, dir); break;
        case Command::SteadyState: summary = detail::cmd_steady(c, dir, out); break;
        case Command::Sweep: summary = detail::cmd_sweep(c, dir); break;
        case Command::PhaseDiagram: summary = detail::cmd_phase(c, dir); break;
        case Command::None: break;
        }
        out << summary << '\n';
        return Ok;
    } catch (const config::ConfigError& e) {
        detail::error_json(err, "config", e.what(), e.line());
        return ConfigFailure;
    } catch (const InvalidArgument& e) {
        detail::error_json(err, "config", e.what());
        return ConfigFailure;
    } catch (const IoError& e) {
        detail::error_json(err, "io", e.what());
        return IoFailure;
    } catch (const DomainError& e) {
        detail::error_json(err, "solver", e.what());
        return SolverFailure;
    } catch (const IntegrationError& e) {
        detail::error_json(err, "solver", e.what());
        return SolverFailure;
    } catch (const SolverError& e) {
        detail::error_json(err, "solver", e.what());
        return SolverFailure;
    }
}

/// Full command-line entry point: argument parsing, config loading, dispatch.
inline int run_command_line(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dressed-state polariton simulator", "dspol"};
    std::string command;
    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::optional<double> margin;
    std::optional<double> tol;
    std::vector<std::string> sets;

    app.add_option("command", command, "frame | equilibrium-scan | dynamics | steady-state | sweep | phase-diagram");
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--preset", preset_name, "fig3 | fig4 | fig6 | fig7 | fig8 | fig9");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--margin", margin, "numeric reading of '>>' in validity conditions");
    app.add_option("--tol", tol, "solver tolerance");
    app.add_option("--set", sets, "KEY=VALUE override, repeatable");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        detail::error_json(err, "usage", e.what());
        err << usage();
        return Usage;
    }

    std::string text;
    if (!config_path.empty()) {
        std::ifstream is(config_path, std::ios::binary);
        if (!is) {
            detail::error_json(err, "io", "cannot read config '" + config_path + "'");
            return IoFailure;
        }
        text.assign(std::istreambuf_iterator<char>(is), {});
    }

    std::vector<std::string> overrides;
    if (!preset_name.empty()) overrides.push_back("preset=" + preset_name);
    if (!command.empty()) overrides.push_back("command=" + command);
    if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);
    if (margin) overrides.push_back("margin=" + io::format_double(*margin));
    if (tol) overrides.push_back("tol=" + io::format_double(*tol));
    overrides.insert(overrides.end(), sets.begin(), sets.end());

    config::RunConfig cfg;
    try {
        bool requested = !command.empty() || !preset_name.empty();
        for (const auto& l : config::detail::tokenize(text)) {
            requested = requested || l.key == "command" || l.key == "preset";
        }
        for (const auto& s : sets) {
            requested = requested || s.starts_with("command=") || s.starts_with("preset=");
        }
        if (!requested) {
            err << usage();
            return Usage;
        }
        cfg = config::parse_config(text, overrides);
    } catch (const config::ConfigError& e) {
        detail::error_json(err, "config", e.what(), e.line());
        return ConfigFailure;
    }
    return run(cfg, out, err);
}

} // namespace dspol::cli
