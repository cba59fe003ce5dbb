#include "swimmer/cli.hpp"

#include "swimmer/error.hpp"
#include "swimmer/expansion.hpp"
#include "swimmer/experiments.hpp"
#include "swimmer/json_io.hpp"
#include "swimmer/ocp.hpp"
#include "swimmer/simulate.hpp"
#include "swimmer/stroke.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace swimmer {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Flags {
    std::string config;
    std::string out;
    std::optional<long long> seed;
    std::optional<int> steps;
};

json load_config(const Flags& flags) {
    if (flags.config.empty()) return json::object();
    std::ifstream in(flags.config);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + flags.config + "'");
    try {
        json j = json::parse(in);
        if (!j.is_object()) fail_validation("config must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        fail_validation("config '" + flags.config + "' is not valid JSON: " + e.what());
    }
}

fs::path output_dir(const Flags& flags) {
    const fs::path dir(flags.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + flags.out + "': " + ec.message());
    return dir;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    writer(f);
    f.flush();
    if (!f) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

void write_json(const fs::path& path, const json& j) {
    write_file(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

int steps_flag(const Flags& flags, int fallback) {
    const int s = flags.steps.value_or(fallback);
    if (s < 1) fail_validation("--steps must be >= 1");
    return s;
}

// {"L", "L2"} or {"ratio", "c"}; defaults to the classical L = 1, L2 = 2.
DesignParams read_design(const json& cfg, const DragModel& drag) {
    DesignParams p;
    p.drag = drag;
    if (cfg.contains("design")) {
        const json& d = cfg.at("design");
        reject_unknown_keys(d, {"L", "L2", "ratio", "c"}, "design");
        if (d.contains("ratio")) {
            if (d.contains("L") || d.contains("L2")) fail_validation("design: give either L/L2 or ratio/c");
            p = DesignParams::from_ratio(require_number(d, "ratio", "design"), number_or(d, "c", 4.0, "design"), drag);
        } else {
            if (d.contains("c")) fail_validation("design.c only applies together with design.ratio");
            p.L = number_or(d, "L", 1.0, "design");
            p.L2 = number_or(d, "L2", 2.0, "design");
        }
    }
    p.validate();
    return p;
}

DragModel read_drag(const json& cfg) {
    return cfg.contains("drag") ? cfg.at("drag").get<DragModel>() : DragModel{};
}

struct Bounds {
    double a, b, T;
};

Bounds read_bounds(const json& j, const std::string& ctx) {
    reject_unknown_keys(j, {"a", "b", "T"}, ctx);
    Bounds bd{require_number(j, "a", ctx), require_number(j, "b", ctx), number_or(j, "T", 1.0, ctx)};
    if (!(bd.a > 0.0) || !(bd.b > 0.0) || !(bd.T > 0.0)) fail_validation(ctx + ": a, b and T must be positive");
    return bd;
}

PhasePoint read_point(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail_validation(ctx + " must be [beta1, beta3]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Scheme read_scheme(const json& cfg) {
    if (!cfg.contains("scheme")) return Scheme::ImplicitMidpoint;
    const std::string s = cfg.at("scheme").is_string() ? cfg.at("scheme").get<std::string>() : "";
    if (s == "midpoint") return Scheme::ImplicitMidpoint;
    if (s == "rk4") return Scheme::RungeKutta4;
    fail_validation("scheme must be 'midpoint' or 'rk4'");
}

ControlSchedule reversed_schedule(const ControlSchedule& s) {
    ControlSchedule r;
    for (auto it = s.segments.rbegin(); it != s.segments.rend(); ++it) {
        r.segments.push_back({it->duration, {-it->rate.db1, -it->rate.db3}});
    }
    return r;
}

json design_json(const DesignParams& p) {
    return {{"L", rounded(p.L)}, {"L2", rounded(p.L2)}, {"ratio", rounded(p.ratio())}, {"drag", p.drag}};
}

json cmd_simulate(const json& cfg, const Flags& flags) {
    reject_unknown_keys(cfg, {"design", "drag", "steps", "scheme", "reverse", "bounds", "polygon", "rate", "T",
                              "repeats", "schedule", "start"},
                        "simulate");
    const DesignParams params = read_design(cfg, read_drag(cfg));
    const int steps = steps_flag(flags, int_or(cfg, "steps", 1000, "simulate"));
    IntegrateOptions iopts;
    iopts.scheme = read_scheme(cfg);
    bool reverse = false;
    if (cfg.contains("reverse")) {
        if (!cfg.at("reverse").is_boolean()) fail_validation("simulate.reverse must be a boolean");
        reverse = cfg.at("reverse").get<bool>();
    }

    const int sources = int(cfg.contains("bounds")) + int(cfg.contains("polygon")) + int(cfg.contains("schedule"));
    if (sources != 1) fail_validation("simulate needs exactly one of 'bounds', 'polygon' or 'schedule'");

    ControlSchedule schedule;
    PhasePoint start;
    int repeats = 1;
    json stroke;
    if (cfg.contains("bounds")) {
        for (const char* k : {"rate", "T", "repeats", "start"}) {
            if (cfg.contains(k)) fail_validation(std::string("simulate.") + k + " does not combine with 'bounds'");
        }
        const Bounds bd = read_bounds(cfg.at("bounds"), "simulate.bounds");
        StrokePlan plan = plan_for_bounds(bd.a, bd.b, bd.T);
        if (reverse) plan.polygon = reversed(plan.polygon);
        schedule = plan_schedule(plan, bd.b);
        start = plan.polygon.vertices.front();
        repeats = plan.repeats;
        stroke = {{"family", plan.family}, {"repeats", plan.repeats}, {"polygon", plan.polygon}};
    } else if (cfg.contains("polygon")) {
        if (cfg.contains("start")) fail_validation("simulate.start does not combine with 'polygon'");
        StrokePolygon poly = cfg.at("polygon").get<StrokePolygon>();
        if (reverse) poly = reversed(poly);
        const double rate = require_number(cfg, "rate", "simulate");
        const double T = number_or(cfg, "T", 1.0, "simulate");
        repeats = int_or(cfg, "repeats", 1, "simulate");
        if (repeats < 1) fail_validation("simulate.repeats must be >= 1");
        schedule = repeat(schedule_from_polygon(poly, T, rate), repeats);
        start = poly.vertices.front();
        stroke = {{"family", "polygon"}, {"repeats", repeats}, {"polygon", poly}};
    } else {
        for (const char* k : {"rate", "T", "repeats"}) {
            if (cfg.contains(k)) fail_validation(std::string("simulate.") + k + " does not combine with 'schedule'");
        }
        schedule = cfg.at("schedule").get<ControlSchedule>();
        if (cfg.contains("start")) start = read_point(cfg.at("start"), "simulate.start");
        if (reverse) {
            const PhasePoint d = schedule.net_shape_change();
            start = {start.b1 + d.b1, start.b3 + d.b3};
            schedule = reversed_schedule(schedule);
        }
        stroke = {{"family", "schedule"}, {"segments", schedule.segments.size()}};
    }

    SwimmerState z0;
    z0.beta1 = start.b1;
    z0.beta3 = start.b3;
    const Trajectory traj = integrate(params, z0, schedule, steps * repeats, iopts);
    const SwimmerState& zf = traj.final_state();
    json summary = {{"command", "simulate"},
                    {"design", design_json(params)},
                    {"stroke", stroke},
                    {"reverse", reverse},
                    {"steps", steps * repeats},
                    {"scheme", iopts.scheme == Scheme::RungeKutta4 ? "rk4" : "midpoint"},
                    {"duration", rounded(schedule.total_duration())},
                    {"dx", rounded(zf.x - z0.x)},
                    {"dy", rounded(zf.y - z0.y)},
                    {"dtheta", rounded(zf.theta - z0.theta)}};
    if (!flags.out.empty()) {
        const fs::path dir = output_dir(flags);
        write_file(dir / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, traj); });
        write_json(dir / "summary.json", summary);
    }
    return summary;
}

json cmd_bracket(const json& cfg, const Flags& flags) {
    reject_unknown_keys(cfg, {"design", "drag", "state", "h"}, "bracket");
    const DesignParams params = read_design(cfg, read_drag(cfg));
    SwimmerState state;
    if (cfg.contains("state")) {
        const json& s = cfg.at("state");
        reject_unknown_keys(s, {"beta1", "beta3", "x", "y", "theta"}, "bracket.state");
        state.beta1 = number_or(s, "beta1", 0.0, "bracket.state");
        state.beta3 = number_or(s, "beta3", 0.0, "bracket.state");
        state.x = number_or(s, "x", 0.0, "bracket.state");
        state.y = number_or(s, "y", 0.0, "bracket.state");
        state.theta = number_or(s, "theta", 0.0, "bracket.state");
    }
    const double h = number_or(cfg, "h", 1e-5, "bracket");
    if (!(h > 0.0)) fail_validation("bracket.h must be positive");

    const BracketValue numeric = lie_bracket_numeric(params, state, h);
    json vec = json::array();
    for (int i = 0; i < 5; ++i) vec.push_back(rounded(numeric.vec[i], 10));
    const bool aligned = state.beta1 == 0.0 && state.beta3 == 0.0 && state.theta == 0.0;
    json result = {{"command", "bracket"},
                   {"design", design_json(params)},
                   {"state", {{"beta1", state.beta1}, {"beta3", state.beta3}, {"x", state.x}, {"y", state.y},
                              {"theta", state.theta}}},
                   {"numeric", vec},
                   {"analytic_x", nullptr},
                   {"rel_error", nullptr}};
    if (aligned) {
        const double analytic = bracket_x_aligned(params);
        result["analytic_x"] = rounded(analytic);
        const double scale = std::max(std::abs(analytic), 1e-300);
        result["rel_error"] = analytic == 0.0 ? json(rounded(std::abs(numeric.vec[2]), 3))
                                              : json(rounded(std::abs(numeric.vec[2] - analytic) / scale, 3));
    }
    const double c = params.total_length();
    const OptimalDesign best = optimal_design(c);
    DesignParams bp = params;
    bp.L = best.L;
    bp.L2 = best.L2;
    result["optimal"] = {{"c", c},
                         {"L", rounded(best.L)},
                         {"L2", rounded(best.L2)},
                         {"ratio", rounded(best.ratio)},
                         {"bracket_x", rounded(bracket_x_aligned(bp))}};
    if (!flags.out.empty()) write_json(output_dir(flags) / "bracket.json", result);
    return result;
}

json cmd_sweep(const json& cfg, const Flags& flags) {
    reject_unknown_keys(cfg, {"c", "drag", "bounds", "sweep"}, "sweep");
    const double c = number_or(cfg, "c", 4.0, "sweep");
    const DragModel drag = read_drag(cfg);
    if (!cfg.contains("bounds")) fail_validation("sweep requires 'bounds': {a, b, T}");
    const Bounds bd = read_bounds(cfg.at("bounds"), "sweep.bounds");
    SweepOptions opts;
    if (cfg.contains("sweep")) from_json(cfg.at("sweep"), opts);
    opts.steps = steps_flag(flags, opts.steps);
    const StrokePlan plan = plan_for_bounds(bd.a, bd.b, bd.T);
    const SweepResult res = ratio_sweep(c, drag, plan, bd.b, opts);
    json grid = json::array();
    for (std::size_t i = 0; i < res.ratios.size(); ++i) {
        grid.push_back({rounded(res.ratios[i]), rounded(res.displacements[i])});
    }
    json summary = {{"command", "sweep"},
                    {"c", c},
                    {"drag", drag},
                    {"bounds", {{"a", bd.a}, {"b", bd.b}, {"T", bd.T}}},
                    {"stroke", {{"family", plan.family}, {"repeats", plan.repeats}}},
                    {"steps", opts.steps},
                    {"best_ratio", rounded(res.best_ratio, 8)},
                    {"best_dx", rounded(res.best_dx)},
                    {"grid", grid}};
    if (!flags.out.empty()) {
        const fs::path dir = output_dir(flags);
        write_file(dir / "sweep.csv", [&](std::ostream& o) {
            o << "ratio,dx\n";
            o.precision(17);
            for (std::size_t i = 0; i < res.ratios.size(); ++i) o << res.ratios[i] << ',' << res.displacements[i] << '\n';
        });
        write_json(dir / "summary.json", summary);
    }
    return summary;
}

void apply_seed(OcpSolveOptions& opts, const Flags& flags) {
    if (!flags.seed) return;
    if (*flags.seed < 0 || *flags.seed > 0xFFFFFFFFLL - 1024) fail_validation("--seed must be a non-negative 32-bit integer");
    // consecutive seeds from the given base, one per start
    opts.seeds.clear();
    for (int i = 0; i < opts.multistart; ++i) opts.seeds.push_back(static_cast<unsigned>(*flags.seed + i));
}

json cmd_ocp(const json& cfg, const Flags& flags) {
    reject_unknown_keys(cfg, {"problem", "solver"}, "ocp config");
    if (!cfg.contains("problem")) fail_validation("ocp config requires 'problem'");
    OcpSpec spec = cfg.at("problem").get<OcpSpec>();
    if (flags.steps) {
        spec.N = *flags.steps;
        spec.validate();
    }
    OcpSolveOptions opts;
    if (cfg.contains("solver")) from_json(cfg.at("solver"), opts);
    apply_seed(opts, flags);

    const OcpSolution sol = solve(transcribe(spec), opts);
    json full = sol;
    full["command"] = "ocp";
    json summary = full;
    summary.erase("variables");
    if (!flags.out.empty()) {
        const fs::path dir = output_dir(flags);
        write_json(dir / "solution.json", full);
        write_file(dir / "trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, sol.trajectory); });
        write_file(dir / "phase_portrait.csv", [&](std::ostream& o) {
            o << "t,beta1,beta3,u1,u3\n";
            o.precision(17);
            const auto& st = sol.trajectory.states;
            for (std::size_t k = 0; k < st.size(); ++k) {
                o << sol.trajectory.times[k] << ',' << st[k].beta1 << ',' << st[k].beta3 << ',';
                // controls act on [t_k, t_k+1); the last sample repeats the final control
                const Vec2& u = sol.controls[std::min(k, sol.controls.size() - 1)];
                o << u[0] << ',' << u[1] << '\n';
            }
        });
    }
    return summary;
}

json cmd_table(int which, const json& cfg, const Flags& flags) {
    json table;
    if (which == 1) {
        Table1Config tc;
        if (!cfg.empty()) from_json(cfg, tc);
        tc.sweep.steps = steps_flag(flags, tc.sweep.steps);
        table = run_table1(tc);
    } else if (which == 2) {
        Table2Config tc;
        if (!cfg.empty()) from_json(cfg, tc);
        tc.sweep.steps = steps_flag(flags, tc.sweep.steps);
        table = run_table2(tc);
    } else {
        Table3Config tc;
        if (!cfg.empty()) from_json(cfg, tc);
        if (flags.steps) tc.N = *flags.steps;
        apply_seed(tc.solve, flags);
        table = run_table3(tc);
    }
    if (!flags.out.empty()) write_json(output_dir(flags) / ("table" + std::to_string(which) + ".json"), table);
    return table;
}

void report(std::ostream& err, const char* kind, const std::string& message) {
    err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return 2;
        case ErrorKind::Solver:
        case ErrorKind::Numerical: return 3;
        case ErrorKind::Io: return 4;
    }
    return 3;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Purcell three-link swimmer: simulation, small-amplitude analysis and optimal strokes"};
    app.require_subcommand(1);
    Flags flags;
    long long seed = 0;
    int steps = 0;

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"simulate", "integrate a stroke and report the net displacement"},
        {"bracket", "numeric Lie bracket against the closed form"},
        {"sweep", "displacement over a grid of link ratios"},
        {"ocp", "solve the stroke/design optimal control problem"},
        {"table1", "small-amplitude table (a = pi/20)"},
        {"table2", "optimal design vs the classical swimmer (a = pi/6)"},
        {"table3", "large-amplitude optimal control runs"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config, "JSON configuration file");
        sub->add_option("--out", flags.out, "directory for CSV/JSON outputs");
        sub->add_option("--seed", seed, "base random seed for multistart solves");
        sub->add_option("--steps", steps, "integration steps (simulate, sweep, tables 1-2) or time steps N (ocp, table3)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        report(err, "validation", e.what());
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed") > 0) flags.seed = seed;
    if (sub->count("--steps") > 0) flags.steps = steps;
    const std::string name = sub->get_name();

    try {
        const json cfg = load_config(flags);
        json result;
        if (name == "simulate") {
            result = cmd_simulate(cfg, flags);
        } else if (name == "bracket") {
            result = cmd_bracket(cfg, flags);
        } else if (name == "sweep") {
            result = cmd_sweep(cfg, flags);
        } else if (name == "ocp") {
            result = cmd_ocp(cfg, flags);
        } else {
            result = cmd_table(name.back() - '0', cfg, flags);
        }
        out << result.dump(2) << '\n';
        return 0;
    } catch (const Error& e) {
        report(err, to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const json::exception& e) {
        report(err, "validation", std::string("bad configuration value: ") + e.what());
        return 2;
    } catch (const std::exception& e) {
        report(err, "numerical", e.what());
        return 3;
    }
}

}  // namespace swimmer
