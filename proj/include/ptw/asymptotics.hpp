#pragma once

#include <numbers>
#include <optional>

#include "ptw/kpp_reference.hpp"
#include "ptw/ptw_solver.hpp"
#include "ptw/reaction.hpp"

namespace ptw {

/// Speed and front-location expansion as u_c -> 0+.
struct SmallUcPrediction {
    double u_c = 0.0;
    /// 2 - pi^2 / (ln u_c)^2.
    double two_term = 0.0;
    /// two_term - 2 pi^2 ((A+B)/A + ln A) / (ln u_c)^3.
    double three_term = 0.0;
    /// 2 - three_term.
    double vbar = 0.0;
    /// Scaled front location pi + (A+B) pi / (A ln u_c).
    double y_hat_c = 0.0;
    /// Unscaled front location vbar^(-1/2) y_hat_c.
    double y_bar_c = 0.0;
    /// Same, with vbar = 2 - v_measured when a measured speed was supplied.
    std::optional<double> y_bar_c_measured;

    static constexpr double y_hat_c0 = std::numbers::pi;
    /// Coefficient of vbar^(1/2) in y_hat_c: -(A+B)/A.
    double y_hat_c1 = 0.0;
};

/// Speed expansion as u_c -> 1-, with delta = 1 - u_c.
struct LargeUcPrediction {
    double u_c = 0.0;
    double delta = 0.0;
    /// delta V0.
    double one_term = 0.0;
    /// delta V0 + delta^2 V1.
    double two_term = 0.0;
    double v0 = 0.0;
    double v1 = 0.0;
    double abs_fprime = 0.0;
    double fdoubleprime = 0.0;

    /// Rescaled phase path Y(X; delta) = Y0(X) + delta Y1(X), where
    /// alpha = 1 - delta X and beta = delta Y.
    double phase_path(double x) const;
};

/// Throws DomainError unless 0 < u_c < 1 and A > 0.
SmallUcPrediction small_uc_speed(double u_c, const AsymptoticConstants& constants,
                                 std::optional<double> measured_speed = std::nullopt);

/// Throws DomainError unless 0 < u_c < 1.
LargeUcPrediction large_uc_speed(double u_c, const ReactionSpec& reaction);

/// beta(alpha) ~ -1/2 |f'(1)|^(1/2) (1 + u_c)(1 - alpha)
///               - 1/6 f''(1) |f'(1)|^(-1/2) (1 - alpha)^2
/// for u_c <= alpha <= 1.
double large_uc_phase_path(double alpha, double u_c, const ReactionSpec& reaction);

/// Distance from the point with U = 1/2 to the point with U = u_c, measured
/// on the sampled profile. Throws ProfileTooShort if 1/2 is not bracketed.
double measure_front_location(const WaveSolution& solution);

}  // namespace ptw
