#pragma once

#include <utility>
#include <vector>

#include "ptw/integrator.hpp"
#include "ptw/ptw_solver.hpp"
#include "ptw/reaction.hpp"

namespace ptw {

struct ReferenceOptions {
    double epsilon = 1e-10;
    /// Integration stops once U_m falls to this level.
    double floor = 1e-14;
    /// Sample spacing in ybar; ybar = 0 is always a sample.
    double spacing = 0.01;
};

/// Minimum-speed (v = 2) wave of the reaction without cut-off, shifted so
/// that U_m(0) = 1/2. Profile is ascending in ybar.
struct ReferenceWave {
    std::vector<ProfileSample> profile;
    /// Distance from the manifold start to the half-height point.
    double y_shift = 0.0;
    ReactionSpec reaction;
};

/// Leading-edge constants of U_m ~ (A ybar + B) exp(-ybar).
struct AsymptoticConstants {
    double a_inf = 0.0;
    double b_inf = 0.0;
    /// Rear decay rate -1 + sqrt(1 + |f'(1)|).
    double gamma = 0.0;
    std::pair<double, double> fit_window{10.0, 25.0};
    /// RMS misfit of the linear fit to U_m exp(ybar).
    double fit_residual = 0.0;
};

ReferenceWave solve_reference(const ReactionSpec& reaction,
                              const IntegrationControl& control = {},
                              const ReferenceOptions& options = {});

/// Linear least squares of U_m(ybar) exp(ybar) against ybar on `window`.
/// Throws DomainError if the window is malformed or leaves the sampled
/// range, WindowTooNarrow if it holds fewer than 100 samples.
AsymptoticConstants fit_edge_constants(const ReferenceWave& wave,
                                       std::pair<double, double> window = {10.0, 25.0});

}  // namespace ptw
