#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptw/integrator.hpp"
#include "ptw/reaction.hpp"

namespace ptw {

struct ShootingConfig {
    /// Stopping tolerance on |U'(y_c) + v u_c|. For u_c < 1 it is applied
    /// relative to u_c (see solve_speed).
    double residual_tol = 1e-8;
    double epsilon_manifold = 1e-10;
    IntegrationControl control;
    int max_bisections = 200;
    /// Half-width of the warm-start bracket around a guess.
    double bracket_pad = 0.25;

    /// Throws DomainError on out-of-range settings.
    void validate() const;
};

struct ProfileSample {
    double y = 0.0;
    double u = 0.0;
    double du = 0.0;
};

struct WaveSolution {
    double u_c = 0.0;
    double v_star = 0.0;
    /// Final |U'(y_c) + v* u_c| at the threshold event.
    double residual = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    int n_iterations = 0;
    /// Ascending in y, with y = 0 at U = u_c.
    std::vector<ProfileSample> profile;
    /// Location (negative) of U = 1/2; zero when u_c = 1/2.
    double y_half = 0.0;
    /// Length of the integrated segment from the manifold start to U = u_c.
    double rear_length = 0.0;
    /// lambda_plus(v*), the rate of the rear approach to U = 1.
    double rear_rate = 0.0;
};

/// One row of a continuation sweep. Failed rows carry NaN speed and the
/// error kind and message.
struct SpeedRow {
    double u_c = 0.0;
    double v_star = 0.0;
    double residual = 0.0;
    int n_iterations = 0;
    std::optional<std::string> error;
};

struct SpeedCurve {
    std::vector<SpeedRow> rows;

    bool ok() const;
};

/// Signed shooting residual r(v) = U'(y_c) + v u_c, where y_c is the first
/// point with U = u_c on the trajectory leaving the saddle. r < 0 means the
/// path falls below the stable line beta = -v alpha; a path that turns
/// or stalls (SpanExceeded) before reaching u_c returns the positive sentinel +1.
double shoot_residual(const CutoffReaction& cutoff, double v, const ShootingConfig& config);

/// Trajectory from the manifold start to U = u_c at speed v, re-indexed so
/// the threshold sits at y = 0.
struct ShotTrajectory {
    DenseTrajectory dense;
    double y_start = 0.0;  // negative
    PhaseState start;
    EventRecord event;
};
ShotTrajectory shoot_trajectory(const CutoffReaction& cutoff, double v,
                                const ShootingConfig& config);

/// Finds v*(u_c) by bisection on shoot_residual.
///
/// The bracket starts at [guess - pad, guess + pad] clipped to
/// [0, v_upper_bound] and is widened geometrically until the residual changes
/// sign. Iteration stops at the first midpoint whose residual magnitude is
/// below residual_tol * min(1, u_c). Throws NoSignChange or MaxIterations.
WaveSolution solve_speed(const CutoffReaction& cutoff, std::optional<double> guess,
                         const ShootingConfig& config);

/// Samples the converged wave on n_samples uniform points of [y_min, y_max].
/// For y <= 0 the integrated trajectory is used (extended by the linearised
/// manifold behind the start point); for y >= 0 the exact tail
/// u_c exp(-v* y). The range need not contain 0.
std::vector<ProfileSample> assemble_profile(const CutoffReaction& cutoff, double v_star,
                                            const ShootingConfig& config, double y_min,
                                            double y_max, int n_samples);

struct SweepOptions {
    /// Warm-start each solve from the previous speed.
    bool continuation = true;
    /// Worker threads; only honoured when continuation is off.
    unsigned jobs = 1;
    /// Skip profile assembly for each row.
    bool speeds_only = true;
};

/// Solves for each u_c in `u_c_values` (must be sorted descending). The first
/// solve is seeded with v = 2. Row failures are recorded, not thrown.
SpeedCurve sweep(const ReactionSpec& reaction, const std::vector<double>& u_c_values,
                 const ShootingConfig& config, const SweepOptions& options = {});

struct RearFit {
    /// A_{-inf} in 1 - U ~ A exp(lambda y).
    double amplitude = 0.0;
    /// Fitted log-slope; compare against lambda_plus(v*).
    double slope = 0.0;
    int n_samples = 0;
};

/// Least-squares fit of log(1 - U) = log A + rear_rate * y over the rear
/// window; `slope` is the unconstrained fit of the same data. Window is
/// y in [y_min, y at which 1 - U = 1e-2]. Throws InsufficientTail if the
/// window holds fewer than 50 samples.
RearFit fit_rear_constant(const WaveSolution& solution);

}  // namespace ptw
