#include "ptw/ptw_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "ptw/errors.hpp"

namespace ptw {

namespace {

constexpr double kTurnedSentinel = 1.0;
constexpr int kDefaultProfileSamples = 4001;
constexpr double kDefaultTailLength = 10.0;

// Scales the absolute ODE tolerance down to the size of the threshold so
// the endgame near U = u_c is resolved in relative terms for small u_c.
IntegrationControl shooting_control(const CutoffReaction& cutoff, const ShootingConfig& config) {
    return config.control.with_abs_scale(std::min(1.0, cutoff.u_c()));
}

}  // namespace

void ShootingConfig::validate() const {
    if (!(residual_tol > 0.0)) throw DomainError("residual_tol must be positive");
    if (!(epsilon_manifold > 0.0 && epsilon_manifold < 1e-6)) {
        throw DomainError("epsilon_manifold must lie in (0, 1e-6)");
    }
    if (max_bisections <= 0) throw DomainError("max_bisections must be positive");
    if (!(bracket_pad > 0.0)) throw DomainError("bracket_pad must be positive");
    control.validate();
}

bool SpeedCurve::ok() const {
    return std::none_of(rows.begin(), rows.end(), [](const SpeedRow& r) { return r.error.has_value(); });
}

ShotTrajectory shoot_trajectory(const CutoffReaction& cutoff, double v,
                                const ShootingConfig& config) {
    ShotTrajectory shot;
    shot.start = unstable_manifold_start(cutoff, v, config.epsilon_manifold);
    shot.event = integrate_until_alpha(cutoff, v, shot.start, cutoff.u_c(),
                                       shooting_control(cutoff, config), &shot.dense);
    shot.y_start = -shot.event.y_event;
    return shot;
}

double shoot_residual(const CutoffReaction& cutoff, double v, const ShootingConfig& config) {
    const PhaseState start = unstable_manifold_start(cutoff, v, config.epsilon_manifold);
    EventRecord ev;
    try {
        ev = integrate_until_alpha(cutoff, v, start, cutoff.u_c(), shooting_control(cutoff, config));
    } catch (const SpanExceeded&) {
        // Stalled above u_c (e.g. captured by an interior zero of f): never reaches the threshold.
        return kTurnedSentinel;
    }
    if (ev.kind == EventKind::turned) return kTurnedSentinel;
    return ev.state.beta + v * cutoff.u_c();
}

std::vector<ProfileSample> assemble_profile(const CutoffReaction& cutoff, double v_star,
                                            const ShootingConfig& config, double y_min,
                                            double y_max, int n_samples) {
    if (!(y_min < y_max)) throw DomainError("profile range must satisfy y_min < y_max");
    if (n_samples < 2) throw DomainError("profile needs at least two samples");

    const ShotTrajectory shot = shoot_trajectory(cutoff, v_star, config);
    if (shot.event.kind != EventKind::threshold) {
        throw DomainError("trajectory turns before the threshold at this speed");
    }
    const double u_c = cutoff.u_c();
    const double eps = config.epsilon_manifold;
    const double lam = lambda_plus(cutoff.base(), v_star);

    std::vector<ProfileSample> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double y = i + 1 == n_samples ? y_max
                                            : y_min + (y_max - y_min) * i / (n_samples - 1);
        ProfileSample s{y, 0.0, 0.0};
        if (y >= 0.0) {
            s.u = u_c * std::exp(-v_star * y);
            s.du = -v_star * s.u;
        } else if (y >= shot.y_start) {
            const PhaseState st = shot.dense(y - shot.y_start);
            s.u = st.alpha;
            s.du = st.beta;
        } else {
            const double decay = eps * std::exp(lam * (y - shot.y_start));
            s.u = 1.0 - decay;
            s.du = -lam * decay;
        }
        out.push_back(s);
    }
    return out;
}

namespace {

WaveSolution bisect_speed(const CutoffReaction& cutoff, std::optional<double> guess,
                          const ShootingConfig& config) {
    config.validate();
    const double u_c = cutoff.u_c();
    const double tol = config.residual_tol * std::min(1.0, u_c);
    const double v_ub = v_upper_bound(cutoff);
    // v* < 2 for every KPP reaction, so the cheaper of the two bounds seeds the bracket.
    double v_max = std::min(v_ub, 2.0);

    auto r = [&](double v) { return shoot_residual(cutoff, v, config); };

    double lo = 0.0, hi = v_max;
    double r_lo = 0.0, r_hi = 0.0;
    if (guess) {
        const double g = std::clamp(*guess, 0.0, v_max);
        lo = std::max(0.0, g - config.bracket_pad);
        hi = std::min(v_max, g + config.bracket_pad);
        if (hi <= lo) lo = std::max(0.0, hi - config.bracket_pad);
        double width = config.bracket_pad;
        r_lo = r(lo);
        while (r_lo >= 0.0 && lo > 0.0) {
            hi = lo;
            width *= 2.0;
            lo = std::max(0.0, g - width);
            r_lo = r(lo);
        }
        r_hi = hi == lo ? r_lo : r(hi);
        width = config.bracket_pad;
        while (r_hi <= 0.0 && hi < v_max) {
            lo = hi;
            r_lo = r_hi;
            width *= 2.0;
            hi = std::min(v_max, g + width);
            r_hi = r(hi);
        }
    } else {
        r_lo = r(lo);
        r_hi = r(hi);
    }
    if (r_hi <= 0.0 && hi < v_ub) {
        lo = hi;
        r_lo = r_hi;
        hi = v_ub;
        r_hi = r(hi);
    }
    if (r_lo >= 0.0 || r_hi <= 0.0) {
        std::ostringstream msg;
        msg << "shooting residual has no sign change on [" << lo << ", " << hi
            << "] (r = " << r_lo << ", " << r_hi << ") for u_c = " << u_c;
        throw NoSignChange(msg.str());
    }

    WaveSolution sol;
    sol.u_c = u_c;
    bool converged = false;
    for (int it = 1; it <= config.max_bisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double r_mid = r(mid);
        sol.n_iterations = it;
        if (std::abs(r_mid) < tol) {
            sol.v_star = mid;
            sol.residual = std::abs(r_mid);
            converged = true;
            break;
        }
        if (r_mid < 0.0) lo = mid; else hi = mid;
    }
    sol.bracket = {lo, hi};
    if (!converged) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "bisection stopped without meeting |r| < " << tol << " for u_c = " << u_c
            << "; bracket [" << lo << ", " << hi << "]";
        throw MaxIterations(msg.str());
    }
    sol.rear_rate = lambda_plus(cutoff.base(), sol.v_star);
    return sol;
}

}  // namespace

WaveSolution solve_speed(const CutoffReaction& cutoff, std::optional<double> guess,
                         const ShootingConfig& config) {
    WaveSolution sol = bisect_speed(cutoff, guess, config);
    const double u_c = cutoff.u_c();
    const ShotTrajectory shot = shoot_trajectory(cutoff, sol.v_star, config);
    sol.rear_length = -shot.y_start;
    // Split at the threshold so y = 0, where U'' jumps, is a sample.
    const double span = sol.rear_length + kDefaultTailLength;
    const int n_rear = std::max(2, static_cast<int>(std::lround(
                                       (kDefaultProfileSamples - 1) * sol.rear_length / span)) + 1);
    const int n_tail = std::max(2, kDefaultProfileSamples - n_rear + 1);
    sol.profile = assemble_profile(cutoff, sol.v_star, config, shot.y_start, 0.0, n_rear);
    const auto tail = assemble_profile(cutoff, sol.v_star, config, 0.0, kDefaultTailLength, n_tail);
    sol.profile.insert(sol.profile.end(), tail.begin() + 1, tail.end());
    if (u_c < 0.5) {
        sol.y_half = shot.dense.locate_alpha(0.5) + shot.y_start;
    } else {
        sol.y_half = std::log(2.0 * u_c) / sol.v_star;
    }
    return sol;
}

SpeedCurve sweep(const ReactionSpec& reaction, const std::vector<double>& u_c_values,
                 const ShootingConfig& config, const SweepOptions& options) {
    for (std::size_t i = 1; i < u_c_values.size(); ++i) {
        if (!(u_c_values[i] < u_c_values[i - 1])) {
            throw DomainError("sweep values must be strictly descending");
        }
    }
    SpeedCurve curve;
    curve.rows.resize(u_c_values.size());

    auto solve_row = [&](std::size_t i, std::optional<double> guess) {
        SpeedRow& row = curve.rows[i];
        row.u_c = u_c_values[i];
        try {
            const CutoffReaction cutoff = make_cutoff(reaction, row.u_c);
            const WaveSolution sol = options.speeds_only ? bisect_speed(cutoff, guess, config)
                                                         : solve_speed(cutoff, guess, config);
            row.v_star = sol.v_star;
            row.residual = sol.residual;
            row.n_iterations = sol.n_iterations;
        } catch (const Error& e) {
            row.v_star = std::numeric_limits<double>::quiet_NaN();
            row.residual = std::numeric_limits<double>::quiet_NaN();
            std::ostringstream msg;
            msg << e.kind() << " at u_c = " << row.u_c << ": " << e.what();
            row.error = msg.str();
        }
    };

    if (options.continuation || options.jobs <= 1) {
        std::optional<double> guess;
        if (options.continuation) guess = 2.0;
        for (std::size_t i = 0; i < u_c_values.size(); ++i) {
            solve_row(i, guess);
            if (options.continuation && !curve.rows[i].error) guess = curve.rows[i].v_star;
        }
        return curve;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned n_threads = std::min<unsigned>(options.jobs, static_cast<unsigned>(u_c_values.size()));
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < u_c_values.size(); i = next++) solve_row(i, std::nullopt);
        });
    }
    for (auto& th : pool) th.join();
    return curve;
}

RearFit fit_rear_constant(const WaveSolution& solution) {
    const auto& prof = solution.profile;
    if (prof.empty() || !(1.0 - prof.front().u < 1e-4)) {
        throw InsufficientTail("profile does not reach 1 - U < 1e-4 at its rear end");
    }
    std::vector<double> ys, logs;
    for (const auto& s : prof) {
        const double gap = 1.0 - s.u;
        if (gap >= 1e-2) break;
        if (gap <= 0.0) continue;
        ys.push_back(s.y);
        logs.push_back(std::log(gap));
    }
    if (ys.size() < 50) {
        std::ostringstream msg;
        msg << "rear window holds " << ys.size() << " samples; need at least 50";
        throw InsufficientTail(msg.str());
    }
    const double n = static_cast<double>(ys.size());
    double my = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        my += ys[i];
        ml += logs[i];
    }
    my /= n;
    ml /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        sxy += (ys[i] - my) * (logs[i] - ml);
        sxx += (ys[i] - my) * (ys[i] - my);
    }

    // Rate fixed at the saddle eigenvalue; only log A is fitted.
    double intercept = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) intercept += logs[i] - solution.rear_rate * ys[i];
    intercept /= n;

    RearFit fit;
    fit.amplitude = std::exp(intercept);
    fit.slope = sxy / sxx;
    fit.n_samples = static_cast<int>(ys.size());
    return fit;
}

}  // namespace ptw
