#include "ptw/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "ptw/errors.hpp"

namespace ptw {

namespace {

void require_open_unit(double u_c) {
    if (!(u_c > 0.0 && u_c < 1.0)) {
        std::ostringstream msg;
        msg << "u_c must lie in the open interval (0,1), got " << u_c;
        throw DomainError(msg.str());
    }
}

}  // namespace

SmallUcPrediction small_uc_speed(double u_c, const AsymptoticConstants& constants,
                                 std::optional<double> measured_speed) {
    require_open_unit(u_c);
    if (!(constants.a_inf > 0.0)) throw DomainError("A_inf must be positive");

    constexpr double pi = std::numbers::pi;
    const double a = constants.a_inf;
    const double b = constants.b_inf;
    const double ln_eps = std::log(u_c);
    const double k = (a + b) / a + std::log(a);

    SmallUcPrediction p;
    p.u_c = u_c;
    p.two_term = 2.0 - pi * pi / (ln_eps * ln_eps);
    p.three_term = p.two_term - 2.0 * pi * pi * k / (ln_eps * ln_eps * ln_eps);
    p.vbar = 2.0 - p.three_term;
    p.y_hat_c1 = -(a + b) / a;
    p.y_hat_c = pi + (a + b) * pi / (a * ln_eps);
    p.y_bar_c = p.y_hat_c / std::sqrt(p.vbar);
    if (measured_speed) {
        p.y_bar_c_measured = p.y_hat_c / std::sqrt(2.0 - *measured_speed);
    }
    return p;
}

double LargeUcPrediction::phase_path(double x) const {
    const double root = std::sqrt(abs_fprime);
    const double y0 = -root * x;
    const double y1 = root * x * (3.0 - fdoubleprime / abs_fprime * x) / 6.0;
    return y0 + delta * y1;
}

LargeUcPrediction large_uc_speed(double u_c, const ReactionSpec& reaction) {
    require_open_unit(u_c);
    LargeUcPrediction p;
    p.u_c = u_c;
    p.delta = 1.0 - u_c;
    p.abs_fprime = reaction.abs_fprime_at_1();
    p.fdoubleprime = reaction.fdoubleprime_at_1;
    const double root = std::sqrt(p.abs_fprime);
    p.v0 = root;
    p.v1 = root * (3.0 + p.fdoubleprime / p.abs_fprime) / 6.0;
    p.one_term = p.delta * p.v0;
    p.two_term = p.one_term + p.delta * p.delta * p.v1;
    return p;
}

double large_uc_phase_path(double alpha, double u_c, const ReactionSpec& reaction) {
    if (!(alpha >= u_c && alpha <= 1.0)) {
        throw DomainError("phase path is defined for u_c <= alpha <= 1");
    }
    const double a = reaction.abs_fprime_at_1();
    const double d = 1.0 - alpha;
    return -0.5 * std::sqrt(a) * (1.0 + u_c) * d -
           reaction.fdoubleprime_at_1 / std::sqrt(a) * d * d / 6.0;
}

double measure_front_location(const WaveSolution& solution) {
    const auto& prof = solution.profile;
    for (std::size_t i = 1; i < prof.size(); ++i) {
        const ProfileSample& p0 = prof[i - 1];
        const ProfileSample& p1 = prof[i];
        if (!(p0.u >= 0.5 && p1.u <= 0.5)) continue;
        // Cubic Hermite interpolant on the bracketing interval, solved by bisection.
        const double h = p1.y - p0.y;
        auto hermite = [&](double t) {
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * p0.u + (t3 - 2 * t2 + t) * h * p0.du +
                   (-2 * t3 + 3 * t2) * p1.u + (t3 - t2) * h * p1.du;
        };
        double lo = 0.0, hi = 1.0;
        for (int k = 0; k < 100; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (hermite(mid) > 0.5) lo = mid; else hi = mid;
        }
        const double y_half = p0.y + 0.5 * (lo + hi) * h;
        return -y_half;
    }
    throw ProfileTooShort("profile samples do not bracket U = 1/2");
}

}  // namespace ptw
