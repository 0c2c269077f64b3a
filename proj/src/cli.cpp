#include "ptw/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ptw/asymptotics.hpp"
#include "ptw/errors.hpp"
#include "ptw/io.hpp"
#include "ptw/kpp_reference.hpp"

namespace ptw::cli {

namespace {

/// Raised for bad arguments discovered after CLI11 parsing; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used == value.size()) return x;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config key '" + key + "' expects a number, got '" + value + "'");
}

/// Flags shared by all subcommands. Optional values stay empty unless given
/// on the command line, so config-file settings survive.
struct CommonFlags {
    std::string reaction;
    std::optional<double> tol_ode;
    std::optional<double> tol_shoot;
    std::optional<double> epsilon_manifold;
    std::string output;
    std::string format;
    std::string config_path;
    bool seedless = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--reaction", f.reaction, "Reaction: fisher | cubic");
    cmd->add_option("--tol-ode", f.tol_ode, "ODE absolute and relative tolerance (default 1e-12)");
    cmd->add_option("--tol-shoot", f.tol_shoot, "Shooting residual tolerance (default 1e-8)");
    cmd->add_option("--epsilon-manifold", f.epsilon_manifold,
                    "Unstable-manifold offset (default 1e-10)");
    cmd->add_option("--output", f.output, "Write to this file instead of stdout");
    cmd->add_option("--format", f.format, "Output format: csv | json | svg");
    cmd->add_option("--config", f.config_path, "key=value config file (overrides PTW_CONFIG)");
    cmd->add_flag("--seedless", f.seedless, "Accepted for scripting; output is always deterministic");
}

RunConfig resolve(const CommonFlags& f, const std::string& default_format) {
    RunConfig cfg;
    cfg.output_format = default_format;
    std::string path = f.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("PTW_CONFIG")) path = env;
    }
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read config file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            apply_config(parse_config_text(buf.str()), cfg);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (!f.reaction.empty()) cfg.reaction = f.reaction;
    if (f.tol_ode) {
        cfg.shooting.control.abs_tol = *f.tol_ode;
        cfg.shooting.control.rel_tol = *f.tol_ode;
    }
    if (f.tol_shoot) cfg.shooting.residual_tol = *f.tol_shoot;
    if (f.epsilon_manifold) cfg.shooting.epsilon_manifold = *f.epsilon_manifold;
    if (!f.output.empty()) cfg.output_path = f.output;
    if (!f.format.empty()) cfg.output_format = f.format;

    if (!reaction_by_name(cfg.reaction)) {
        throw UsageError("unknown reaction '" + cfg.reaction + "' (expected fisher or cubic)");
    }
    try {
        cfg.shooting.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
        if (cfg.output_format == a) return;
    }
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : " | ") + std::string(a);
    throw UsageError("unsupported --format '" + cfg.output_format + "' (expected " + list + ")");
}

void require_open_unit(double uc, const char* flag) {
    if (!(uc > 0.0 && uc < 1.0)) {
        std::ostringstream msg;
        msg << flag << " must lie in the open interval (0,1), got " << uc;
        throw UsageError(msg.str());
    }
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (!file) throw UsageError("cannot write output file '" + cfg.output_path + "'");
    file << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write file '" + path + "'");
    file << text;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// --- solve -----------------------------------------------------------------

struct SolveArgs {
    double uc = std::numeric_limits<double>::quiet_NaN();
};

int cmd_solve(const CommonFlags& flags, const SolveArgs& a, std::ostream& out) {
    const RunConfig cfg = resolve(flags, "json");
    require_format(cfg, {"json", "csv"});
    require_open_unit(a.uc, "--uc");
    const CutoffReaction cutoff = make_cutoff(*reaction_by_name(cfg.reaction), a.uc);
    const WaveSolution sol = solve_speed(cutoff, std::nullopt, cfg.shooting);
    if (cfg.output_format == "csv") {
        io::CsvTable t{{"u_c", "v_star", "residual", "n_iterations"},
                       {{sol.u_c, sol.v_star, sol.residual, static_cast<double>(sol.n_iterations)}}};
        emit(cfg, io::to_csv(t), out);
    } else {
        emit(cfg, dump(io::to_json(sol)), out);
    }
    return kSuccess;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
    double uc_min = 1e-10;
    double uc_max = 0.99;
    int count = 50;
    std::string spacing = "log";
    bool no_continuation = false;
    unsigned jobs = 1;
};

io::CsvTable curve_table(const SpeedCurve& curve) {
    io::CsvTable t{{"u_c", "v_star", "residual", "n_iterations"}, {}};
    for (const auto& r : curve.rows) {
        t.rows.push_back({r.u_c, r.v_star, r.residual, static_cast<double>(r.n_iterations)});
    }
    return t;
}

int report_failures(const SpeedCurve& curve, std::ostream& err) {
    for (const auto& r : curve.rows) {
        if (r.error) err << "error: " << *r.error << "\n";
    }
    return curve.ok() ? kSuccess : kNumerical;
}

int cmd_sweep(const CommonFlags& flags, const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve(flags, "csv");
    require_format(cfg, {"csv", "json", "svg"});
    require_open_unit(a.uc_min, "--uc-min");
    require_open_unit(a.uc_max, "--uc-max");
    if (!(a.uc_min < a.uc_max)) throw UsageError("--uc-min must be below --uc-max");
    if (a.count < 2) throw UsageError("--count must be at least 2");
    if (a.jobs > 1 && !a.no_continuation) {
        throw UsageError("--jobs > 1 requires --no-continuation");
    }

    const std::vector<double> grid = make_grid(a.uc_min, a.uc_max, a.count, a.spacing);
    SweepOptions opts;
    opts.continuation = !a.no_continuation;
    opts.jobs = std::max(1u, a.jobs);
    const SpeedCurve curve = sweep(*reaction_by_name(cfg.reaction), grid, cfg.shooting, opts);

    if (cfg.output_format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : curve.rows) {
            nlohmann::ordered_json j;
            j["u_c"] = r.u_c;
            if (r.error) j["v_star"] = nullptr; else j["v_star"] = r.v_star;
            if (r.error) j["residual"] = nullptr; else j["residual"] = r.residual;
            j["n_iterations"] = r.n_iterations;
            if (r.error) j["error"] = *r.error;
            rows.push_back(j);
        }
        emit(cfg, dump(rows), out);
    } else if (cfg.output_format == "svg") {
        io::Series s{"v*(u_c)", {}, {}};
        for (const auto& r : curve.rows) {
            s.x.push_back(r.u_c);
            s.y.push_back(r.v_star);
        }
        emit(cfg, io::render_line_chart({"Wave speed, " + cfg.reaction + " reaction", "u_c", "v*",
                                         a.spacing == "log", {s}}),
             out);
    } else {
        emit(cfg, io::to_csv(curve_table(curve)), out);
    }
    return report_failures(curve, err);
}

// --- profile ---------------------------------------------------------------

struct ProfileArgs {
    double uc = std::numeric_limits<double>::quiet_NaN();
    double y_min = -20.0;
    double y_max = 10.0;
    int samples = 1001;
    std::string frame = "origin-at-uc";
};

int cmd_profile(const CommonFlags& flags, const ProfileArgs& a, std::ostream& out) {
    const RunConfig cfg = resolve(flags, "csv");
    require_format(cfg, {"csv", "svg"});
    require_open_unit(a.uc, "--uc");
    if (!(a.y_min < a.y_max)) throw UsageError("--y-min must be below --y-max");
    if (a.samples < 2) throw UsageError("--samples must be at least 2");
    if (a.frame != "origin-at-uc" && a.frame != "origin-at-half") {
        throw UsageError("--frame must be origin-at-uc or origin-at-half");
    }

    const CutoffReaction cutoff = make_cutoff(*reaction_by_name(cfg.reaction), a.uc);
    const WaveSolution sol = solve_speed(cutoff, std::nullopt, cfg.shooting);
    const double shift = a.frame == "origin-at-half" ? sol.y_half : 0.0;
    const auto prof = assemble_profile(cutoff, sol.v_star, cfg.shooting, a.y_min + shift,
                                       a.y_max + shift, a.samples);

    if (cfg.output_format == "svg") {
        io::Series s{"U(y), u_c = " + io::format_double(a.uc), {}, {}};
        for (const auto& p : prof) {
            s.x.push_back(p.y - shift);
            s.y.push_back(p.u);
        }
        emit(cfg, io::render_line_chart({"Travelling wave profile", "y", "U", false, {s}}), out);
        return kSuccess;
    }
    io::CsvTable t{{"y", "U", "Uprime"}, {}};
    for (std::size_t i = 0; i < prof.size(); ++i) {
        // Report the requested grid exactly rather than the shifted sum.
        const double y = i + 1 == prof.size()
                             ? a.y_max
                             : a.y_min + (a.y_max - a.y_min) * static_cast<double>(i) /
                                             static_cast<double>(a.samples - 1);
        t.rows.push_back({y, prof[i].u, prof[i].du});
    }
    emit(cfg, io::to_csv(t), out);
    return kSuccess;
}

// --- reference -------------------------------------------------------------

struct ReferenceArgs {
    double window_lo = 10.0;
    double window_hi = 25.0;
    double spacing = 0.01;
};

AsymptoticConstants fit_constants(const std::string& reaction, const RunConfig& cfg,
                                  std::pair<double, double> window, double spacing) {
    ReferenceOptions opts;
    opts.epsilon = cfg.shooting.epsilon_manifold;
    opts.spacing = spacing;
    const ReferenceWave wave = solve_reference(*reaction_by_name(reaction), cfg.shooting.control, opts);
    return fit_edge_constants(wave, window);
}

int cmd_reference(const CommonFlags& flags, const ReferenceArgs& a, std::ostream& out) {
    const RunConfig cfg = resolve(flags, "json");
    require_format(cfg, {"json"});
    if (!(a.window_lo < a.window_hi)) throw UsageError("malformed window: lo must be below hi");
    if (!(a.spacing > 0.0)) throw UsageError("--spacing must be positive");
    const AsymptoticConstants c = fit_constants(cfg.reaction, cfg, {a.window_lo, a.window_hi}, a.spacing);
    emit(cfg, dump(io::to_json(c)), out);
    return kSuccess;
}

// --- compare ---------------------------------------------------------------

struct CompareArgs {
    std::vector<double> ucs;
    std::optional<double> uc_min;
    std::optional<double> uc_max;
    int count = 30;
    std::string spacing = "log";
    std::string constants;
    std::string svg_path;
};

int cmd_compare(const CommonFlags& flags, const CompareArgs& a, std::ostream& out, std::ostream& err) {
    RunConfig cfg = resolve(flags, "csv");
    require_format(cfg, {"csv", "svg"});
    if (!a.constants.empty()) cfg.constants_source = a.constants;

    std::vector<double> grid = a.ucs;
    if (grid.empty()) {
        if (!a.uc_min || !a.uc_max) throw UsageError("compare needs --uc values or --uc-min/--uc-max");
        require_open_unit(*a.uc_min, "--uc-min");
        require_open_unit(*a.uc_max, "--uc-max");
        if (*a.uc_min > *a.uc_max) throw UsageError("--uc-min must not exceed --uc-max");
        if (*a.uc_min == *a.uc_max) {
            grid = {*a.uc_min};
        } else {
            if (a.count < 2) throw UsageError("--count must be at least 2 for a range");
            grid = make_grid(*a.uc_min, *a.uc_max, a.count, a.spacing);
        }
    }
    for (double uc : grid) require_open_unit(uc, "--uc");
    std::sort(grid.begin(), grid.end(), std::greater<>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    AsymptoticConstants constants;
    if (cfg.constants_source == "fit") {
        constants = fit_constants(cfg.reaction, cfg, {10.0, 25.0}, 0.01);
    } else {
        std::ifstream in(cfg.constants_source);
        if (!in) throw UsageError("cannot read constants file '" + cfg.constants_source + "'");
        try {
            constants = io::constants_from_json(nlohmann::json::parse(in));
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }

    const ReactionSpec reaction = *reaction_by_name(cfg.reaction);
    const SpeedCurve curve = sweep(reaction, grid, cfg.shooting);

    io::CsvTable t{{"u_c", "v_numeric", "v_two_term_small", "v_three_term_small", "v_one_term_large",
                    "v_two_term_large", "err_two_small", "err_three_small", "err_two_large"},
                   {}};
    std::vector<io::Series> series{{"numeric", {}, {}},
                                   {"two-term small u_c", {}, {}},
                                   {"three-term small u_c", {}, {}},
                                   {"one-term large u_c", {}, {}},
                                   {"two-term large u_c", {}, {}}};
    for (const auto& r : curve.rows) {
        const SmallUcPrediction s = small_uc_speed(r.u_c, constants);
        const LargeUcPrediction l = large_uc_speed(r.u_c, reaction);
        t.rows.push_back({r.u_c, r.v_star, s.two_term, s.three_term, l.one_term, l.two_term,
                          r.v_star - s.two_term, r.v_star - s.three_term, r.v_star - l.two_term});
        const double ys[] = {r.v_star, s.two_term, s.three_term, l.one_term, l.two_term};
        for (std::size_t k = 0; k < series.size(); ++k) {
            // Expansions far outside their range of validity would swamp the axis.
            const bool shown = ys[k] >= -0.1 && ys[k] <= 2.2;
            series[k].x.push_back(r.u_c);
            series[k].y.push_back(shown ? ys[k] : std::numeric_limits<double>::quiet_NaN());
        }
    }
    io::ChartSpec chart{"Wave speed vs cut-off, " + cfg.reaction + " reaction", "u_c", "v", true, series};
    if (!a.svg_path.empty()) write_file(a.svg_path, io::render_line_chart(chart));
    if (cfg.output_format == "svg") {
        emit(cfg, io::render_line_chart(chart), out);
    } else {
        emit(cfg, io::to_csv(t), out);
    }
    return report_failures(curve, err);
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    static const char* known[] = {"reaction",       "tol_ode",     "tol_shoot", "epsilon_manifold",
                                  "max_bisections", "bracket_pad", "max_span",  "constants"};
    std::map<std::string, std::string> entries;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        entries[key] = value;
    }
    return entries;
}

void apply_config(const std::map<std::string, std::string>& entries, RunConfig& config) {
    for (const auto& [key, value] : entries) {
        if (key == "reaction") {
            config.reaction = value;
        } else if (key == "constants") {
            config.constants_source = value;
        } else if (key == "tol_ode") {
            config.shooting.control.abs_tol = config.shooting.control.rel_tol = to_number(key, value);
        } else if (key == "tol_shoot") {
            config.shooting.residual_tol = to_number(key, value);
        } else if (key == "epsilon_manifold") {
            config.shooting.epsilon_manifold = to_number(key, value);
        } else if (key == "max_bisections") {
            config.shooting.max_bisections = static_cast<int>(to_number(key, value));
        } else if (key == "bracket_pad") {
            config.shooting.bracket_pad = to_number(key, value);
        } else if (key == "max_span") {
            config.shooting.control.max_span = to_number(key, value);
        }
    }
}

std::vector<double> make_grid(double lo, double hi, int count, const std::string& spacing) {
    if (count < 1) throw std::invalid_argument("grid count must be positive");
    if (spacing != "linear" && spacing != "log") {
        throw std::invalid_argument("spacing must be linear or log");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        if (count == 1) {
            grid.push_back(hi);
            break;
        }
        const double t = static_cast<double>(i) / (count - 1);
        double x = spacing == "log" ? std::exp(std::log(hi) + t * (std::log(lo) - std::log(hi)))
                                    : hi + t * (lo - hi);
        if (i == 0) x = hi;
        if (i + 1 == count) x = lo;
        grid.push_back(x);
    }
    return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Permanent-form travelling waves of the cut-off KPP equation", "ptw"};
    app.require_subcommand(1);

    CommonFlags flags;

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Compute v*(u_c) for one cut-off");
    add_common(solve_cmd, flags);
    solve_cmd->add_option("--uc", solve_args.uc, "Cut-off u_c in (0,1)")->required();

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Continuation sweep of v*(u_c), descending u_c");
    add_common(sweep_cmd, flags);
    sweep_cmd->add_option("--uc-min", sweep_args.uc_min, "Smallest u_c");
    sweep_cmd->add_option("--uc-max", sweep_args.uc_max, "Largest u_c");
    sweep_cmd->add_option("--count", sweep_args.count, "Number of u_c values (>= 2)");
    sweep_cmd->add_option("--spacing", sweep_args.spacing, "linear | log");
    sweep_cmd->add_flag("--no-continuation", sweep_args.no_continuation,
                        "Solve each u_c from the full bracket");
    sweep_cmd->add_option("--jobs", sweep_args.jobs, "Concurrent solves (needs --no-continuation)");

    ProfileArgs profile_args;
    auto* profile_cmd = app.add_subcommand("profile", "Sample the wave profile U(y)");
    add_common(profile_cmd, flags);
    profile_cmd->add_option("--uc", profile_args.uc, "Cut-off u_c in (0,1)")->required();
    profile_cmd->add_option("--y-min", profile_args.y_min, "Lower end of the y range");
    profile_cmd->add_option("--y-max", profile_args.y_max, "Upper end of the y range");
    profile_cmd->add_option("--samples", profile_args.samples, "Number of samples");
    profile_cmd->add_option("--frame", profile_args.frame, "origin-at-uc | origin-at-half");

    ReferenceArgs ref_args;
    auto* ref_cmd = app.add_subcommand("reference", "Fit A_inf, B_inf from the v = 2 wave");
    add_common(ref_cmd, flags);
    ref_cmd->add_option("--window-lo", ref_args.window_lo, "Fit window start in ybar");
    ref_cmd->add_option("--window-hi", ref_args.window_hi, "Fit window end in ybar");
    ref_cmd->add_option("--spacing", ref_args.spacing, "Sample spacing in ybar");

    CompareArgs cmp_args;
    auto* cmp_cmd = app.add_subcommand("compare", "Numerical speeds against the asymptotic expansions");
    add_common(cmp_cmd, flags);
    cmp_cmd->add_option("--uc", cmp_args.ucs, "u_c values (repeat or comma-separate)")->delimiter(',');
    cmp_cmd->add_option("--uc-min", cmp_args.uc_min, "Smallest u_c of a range");
    cmp_cmd->add_option("--uc-max", cmp_args.uc_max, "Largest u_c of a range");
    cmp_cmd->add_option("--count", cmp_args.count, "Points in the range");
    cmp_cmd->add_option("--spacing", cmp_args.spacing, "linear | log");
    cmp_cmd->add_option("--constants", cmp_args.constants, "fit | path to constants JSON");
    cmp_cmd->add_option("--svg", cmp_args.svg_path, "Also write an SVG chart here");

    std::vector<std::string> argv_store{"ptw"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(flags, solve_args, out);
        if (*sweep_cmd) return cmd_sweep(flags, sweep_args, out, err);
        if (*profile_cmd) return cmd_profile(flags, profile_args, out);
        if (*ref_cmd) return cmd_reference(flags, ref_args, out);
        if (*cmp_cmd) return cmd_compare(flags, cmp_args, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}

}  // namespace ptw::cli
