#include "ptw/kpp_reference.hpp"

#include <cmath>
#include <sstream>

#include "ptw/errors.hpp"

namespace ptw {

ReferenceWave solve_reference(const ReactionSpec& reaction, const IntegrationControl& control,
                              const ReferenceOptions& options) {
    constexpr double v = 2.0;
    if (!(options.floor > 0.0 && options.floor < 0.5)) {
        throw DomainError("reference floor must lie in (0, 1/2)");
    }
    if (!(options.spacing > 0.0)) throw DomainError("reference spacing must be positive");

    // Manifold start uses beta = -lambda_plus(2) eps < 0 so the path enters
    // 0 < alpha < 1, beta < 0.
    const PhaseState start = unstable_manifold_start(reaction, v, options.epsilon);
    DenseTrajectory traj;
    // Relative accuracy all the way down to the floor.
    const IntegrationControl ctl = control.with_abs_scale(options.floor);
    integrate_until_alpha(reaction, v, start, options.floor, ctl, &traj);

    ReferenceWave wave;
    wave.reaction = reaction;
    wave.y_shift = traj.locate_alpha(0.5);

    const double lo = traj.y_begin() - wave.y_shift;
    const double hi = traj.y_end() - wave.y_shift;
    const long k_lo = static_cast<long>(std::ceil(lo / options.spacing));
    const long k_hi = static_cast<long>(std::floor(hi / options.spacing));
    wave.profile.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (long k = k_lo; k <= k_hi; ++k) {
        const double ybar = static_cast<double>(k) * options.spacing;
        const PhaseState s = traj(ybar + wave.y_shift);
        wave.profile.push_back({ybar, s.alpha, s.beta});
    }
    return wave;
}

AsymptoticConstants fit_edge_constants(const ReferenceWave& wave,
                                       std::pair<double, double> window) {
    const auto [lo, hi] = window;
    if (!(lo < hi)) throw DomainError("fit window must satisfy lo < hi");
    if (wave.profile.empty() || lo < wave.profile.front().y || hi > wave.profile.back().y) {
        std::ostringstream msg;
        msg << "fit window [" << lo << ", " << hi << "] leaves the sampled range";
        throw DomainError(msg.str());
    }

    std::vector<double> xs, zs;
    for (const auto& s : wave.profile) {
        if (s.y < lo || s.y > hi) continue;
        if (!(s.u > 0.0)) throw DomainError("U_m underflows inside the fit window");
        xs.push_back(s.y);
        zs.push_back(s.u * std::exp(s.y));
    }
    if (xs.size() < 100) {
        std::ostringstream msg;
        msg << "fit window holds " << xs.size() << " samples; need at least 100";
        throw WindowTooNarrow(msg.str());
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, mz = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        mz += zs[i];
    }
    mx /= n;
    mz /= n;
    double sxz = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxz += (xs[i] - mx) * (zs[i] - mz);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }

    AsymptoticConstants c;
    c.a_inf = sxz / sxx;
    c.b_inf = mz - c.a_inf * mx;
    c.gamma = gamma_rate(wave.reaction);
    c.fit_window = window;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = zs[i] - (c.a_inf * xs[i] + c.b_inf);
        ss += e * e;
    }
    c.fit_residual = std::sqrt(ss / n);
    return c;
}

}  // namespace ptw
