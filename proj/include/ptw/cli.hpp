#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptw/ptw_solver.hpp"

namespace ptw::cli {

/// Stable exit codes for scripting.
enum ExitCode : int {
    kSuccess = 0,
    kUsage = 2,
    kNumerical = 3,
};

/// Settings shared by every subcommand after merging defaults, the optional
/// key=value config file and command-line flags (flags win).
struct RunConfig {
    std::string reaction = "fisher";
    ShootingConfig shooting;
    std::string output_format;
    std::string output_path;
    /// "fit" or a path to a constants JSON file.
    std::string constants_source = "fit";
};

/// Parses `key = value` lines ('#' starts a comment). Recognised keys:
/// reaction, tol_ode, tol_shoot, epsilon_manifold, max_bisections,
/// bracket_pad, max_span, constants. Throws std::invalid_argument on
/// unknown keys or malformed values.
std::map<std::string, std::string> parse_config_text(const std::string& text);
void apply_config(const std::map<std::string, std::string>& entries, RunConfig& config);

/// u_c grid between lo and hi (inclusive), "linear" or "log" spacing,
/// returned in descending order.
std::vector<double> make_grid(double lo, double hi, int count, const std::string& spacing);

/// Entry point; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptw::cli
