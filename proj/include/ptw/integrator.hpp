#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ptw/reaction.hpp"

namespace ptw {

/// Point (alpha, beta) = (U, U') of the travelling-wave phase plane.
struct PhaseState {
    double alpha = 0.0;
    double beta = 0.0;
};

struct IntegrationControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    /// Largest admissible integration length in y.
    double max_span = 1e4;
    double initial_step = 1e-4;

    /// Throws DomainError on non-positive tolerances or span.
    void validate() const;
    /// Copy with abs_tol multiplied by `factor`.
    IntegrationControl with_abs_scale(double factor) const;
};

enum class EventKind {
    /// alpha reached the requested target.
    threshold,
    /// beta reached zero while alpha was still above the target; the phase
    /// path turned back before the threshold.
    turned,
};

struct EventRecord {
    double y_event = 0.0;
    PhaseState state;
    long n_steps = 0;
    long n_rejects = 0;
    EventKind kind = EventKind::threshold;
};

/// Piecewise quartic dense output of an integrated trajectory.
class DenseTrajectory {
public:
    bool empty() const { return steps_.empty(); }
    std::size_t size() const { return steps_.size(); }
    double y_begin() const;
    double y_end() const;

    /// State at y, clamped to [y_begin, y_end].
    PhaseState operator()(double y) const;

    /// First y at which alpha falls to `target`; alpha is assumed monotone
    /// decreasing along the trajectory. Throws DomainError if not bracketed.
    double locate_alpha(double target) const;

    void clear() { steps_.clear(); }

    struct Step {
        double y0 = 0.0;
        double h = 0.0;
        // Dense output coefficients, one set per component.
        std::array<std::array<double, 5>, 2> c{};
    };
    void append(const Step& step) { steps_.push_back(step); }

private:
    std::vector<Step> steps_;
};

/// Integrates alpha' = beta, beta' = -v beta - f_c(alpha) forward in y from
/// `start` until alpha first equals `alpha_target` (|error| <= 1e-13).
///
/// Uses the embedded Dormand-Prince 5(4) pair. When the target lies below
/// u_c the integration is split at alpha = u_c and restarted on the linear
/// sub-threshold field, so no step straddles the discontinuity. Stops early
/// with EventKind::turned if beta reaches zero first.
///
/// Throws SpanExceeded, StepFailure, or DomainError on bad arguments.
/// If `record` is non-null the dense output is appended to it.
EventRecord integrate_until_alpha(const CutoffReaction& cutoff, double v,
                                  PhaseState start, double alpha_target,
                                  const IntegrationControl& control,
                                  DenseTrajectory* record = nullptr);

/// Same, for the reaction without cut-off.
EventRecord integrate_until_alpha(const ReactionSpec& reaction, double v,
                                  PhaseState start, double alpha_target,
                                  const IntegrationControl& control,
                                  DenseTrajectory* record = nullptr);

/// (1 - eps, -lambda_plus(v) eps): linearised unstable manifold of (1, 0)
/// pointing into 0 < alpha < 1, beta < 0.
PhaseState unstable_manifold_start(const ReactionSpec& reaction, double v,
                                   double epsilon = 1e-10);
PhaseState unstable_manifold_start(const CutoffReaction& cutoff, double v,
                                   double epsilon = 1e-10);

}  // namespace ptw
