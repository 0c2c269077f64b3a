// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "ptw/asymptotics.hpp"
#include "ptw/errors.hpp"
#include "ptw/integrator.hpp"
#include "ptw/kpp_reference.hpp"
#include "ptw/ptw_solver.hpp"
#include "ptw/reaction.hpp"

using namespace ptw;
using std::numbers::pi;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Run {
    std::vector<Verdict> verdicts;  // criteria 1..7
    std::vector<double> speeds;     // every speed computed, in a fixed order
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        g[i] = std::exp(std::log(hi) + t * (std::log(lo) - std::log(hi)));
    }
    g.front() = hi;
    g.back() = lo;
    return g;
}

Verdict monotone_curve(const ShootingConfig& cfg, std::vector<double>& speeds) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpeedCurve curve = sweep(fisher(), log_grid(1e-10, 0.99, 60), cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = curve.ok() && curve.rows.size() == 60;
    for (std::size_t i = 0; ok && i < curve.rows.size(); ++i) {
        const double v = curve.rows[i].v_star;
        if (!(v > 0.0 && v < 2.0)) ok = false;
        if (i > 0 && !(v > curve.rows[i - 1].v_star)) ok = false;
    }
    for (const auto& r : curve.rows) speeds.push_back(r.v_star);
    return {ok && secs < 60.0,
            fmt("60 points, v*(0.99) = %.6g, v*(1e-10) = %.10g, %.2f s", curve.rows.front().v_star,
                curve.rows.back().v_star, secs)};
}

Verdict large_uc(const ShootingConfig& cfg, std::vector<double>& speeds) {
    bool ok = true;
    std::string detail;
    for (double u_c : {0.9, 0.95, 0.99}) {
        const double v = solve_speed(make_cutoff(fisher(), u_c), std::nullopt, cfg).v_star;
        speeds.push_back(v);
        const double d = 1.0 - u_c;
        const double err = std::abs(v - large_uc_speed(u_c, fisher()).two_term);
        ok = ok && err < 0.5 * d * d;
        detail += fmt("%s|err|/delta^2 = %.4f at %.2f", detail.empty() ? "" : ", ", err / (d * d), u_c);
    }
    return {ok, detail + " (limit 0.5)"};
}

Verdict small_uc(const ShootingConfig& cfg, const AsymptoticConstants& k, std::vector<double>& speeds) {
    const double v10 = solve_speed(make_cutoff(fisher(), 1e-10), std::nullopt, cfg).v_star;
    const double v8 = solve_speed(make_cutoff(fisher(), 1e-8), std::nullopt, cfg).v_star;
    speeds.push_back(v10);
    speeds.push_back(v8);

    const double L10 = std::log(1e-10);
    const auto p10 = small_uc_speed(1e-10, k);
    const double gap10 = std::abs(v10 - p10.two_term);
    const double limit10 = 5.0 / std::abs(L10 * L10 * L10);
    const bool first = gap10 < limit10;

    const auto p8 = small_uc_speed(1e-8, k);
    const double resid8 = v8 - p8.two_term;
    const double corr8 = p8.three_term - p8.two_term;
    const double ratio = resid8 / corr8;
    const bool second = ratio > 0.1 && ratio < 10.0;

    return {first && second,
            fmt("u_c=1e-10: |v - two_term| = %.4g vs limit %.4g (%s); u_c=1e-8: residual %.4g, "
                "three-term correction %.4g, ratio %.3f (%s)",
                gap10, limit10, first ? "ok" : "exceeds", resid8, corr8, ratio, second ? "ok" : "off")};
}

Verdict constants(const AsymptoticConstants& k) {
    const bool ok = k.a_inf >= 3.3 && k.a_inf <= 3.7 && k.b_inf >= -11.8 && k.b_inf <= -10.8;
    return {ok, fmt("A = %.5f, B = %.5f on [%g, %g]", k.a_inf, k.b_inf, k.fit_window.first,
                    k.fit_window.second)};
}

Verdict quadrature(const IntegrationControl& control) {
    double worst_all = 0.0;
    for (double u_c : {0.1, 0.5, 0.9}) {
        const auto c = make_cutoff(fisher(), u_c);
        DenseTrajectory traj;
        const EventRecord ev =
            integrate_until_alpha(c, 0.0, unstable_manifold_start(c, 0.0), u_c, control, &traj);
        auto oracle = [](double a) {
            return -std::sqrt(2.0 * (1.0 / 6.0 - a * a / 2.0 + a * a * a / 3.0));
        };
        double worst = std::abs(ev.state.beta - oracle(u_c));
        const int n = 50000;
        for (int i = 0; i <= n; ++i) {
            const PhaseState s = traj(traj.y_begin() + (traj.y_end() - traj.y_begin()) * i / n);
            if (s.alpha < u_c || s.alpha > 1.0 - 1e-6) continue;
            worst = std::max(worst, std::abs(s.beta - oracle(s.alpha)));
        }
        worst_all = std::max(worst_all, worst);
    }
    return {worst_all < 1e-8, fmt("max |beta - oracle| = %.3g over u_c in {0.1, 0.5, 0.9}", worst_all)};
}

Verdict front_identities(const ShootingConfig& cfg, std::vector<double>& speeds) {
    bool ok = true;
    double worst_c1 = 0.0, worst_jump = 0.0, worst_slope = 0.0;
    bool tail_exact = true;
    for (double u_c : {0.1, 0.5, 0.9}) {
        const auto c = make_cutoff(fisher(), u_c);
        const WaveSolution sol = solve_speed(c, std::nullopt, cfg);
        speeds.push_back(sol.v_star);
        const double v = sol.v_star;
        const double du_minus = shoot_trajectory(c, v, cfg).event.state.beta;
        worst_c1 = std::max(worst_c1, std::abs(du_minus + v * u_c));

        // U'' = -v U' - f_c(U) on each side of y = 0, with the common U'(0).
        const double upp_plus = -v * du_minus;
        const double upp_minus = -v * du_minus - c.f_c_plus();
        const double jump = upp_minus - upp_plus;
        const double f_uc = fisher()(u_c);
        worst_jump = std::max(worst_jump, std::abs(jump + f_uc) / f_uc);

        for (const auto& s : sol.profile) {
            if (s.y >= 0.0 && s.u != u_c * std::exp(-v * s.y)) tail_exact = false;
        }
        const RearFit fit = fit_rear_constant(sol);
        worst_slope = std::max(worst_slope, std::abs(fit.slope - sol.rear_rate) / sol.rear_rate);
    }
    ok = worst_c1 <= 1e-8 && worst_jump <= 4 * 2.220446049250313e-16 && tail_exact && worst_slope < 0.01;
    return {ok, fmt("|U'(0-) + v u_c| <= %.3g; U''(0-) - U''(0+) = -f(u_c) to rel %.2g; tail %s; "
                    "rear slope off lambda_+ by %.3g%%",
                    worst_c1, worst_jump, tail_exact ? "exact" : "NOT exact", 100 * worst_slope)};
}

Verdict front_location(const ShootingConfig& cfg, const AsymptoticConstants& k,
                       std::vector<double>& speeds) {
    auto measure = [&](double u_c, double& scaled, double& predicted) {
        const WaveSolution sol = solve_speed(make_cutoff(fisher(), u_c), std::nullopt, cfg);
        speeds.push_back(sol.v_star);
        scaled = measure_front_location(sol) * std::sqrt(2.0 - sol.v_star);
        predicted = small_uc_speed(u_c, k, sol.v_star).y_hat_c;
    };
    double s8 = 0, p8 = 0, s10 = 0, p10 = 0;
    measure(1e-8, s8, p8);
    measure(1e-10, s10, p10);
    const double rel = std::abs(s8 - pi) / pi;
    const bool toward = std::abs(s10 - p10) < std::abs(s8 - p8);
    return {rel < 0.15 && toward,
            fmt("scaled ybar_c = %.4f at 1e-8 (%.1f%% from pi), %.4f at 1e-10; prediction %.4f, %.4f",
                s8, 100 * rel, s10, p8, p10)};
}

Run run_all(double ode_tol) {
    ShootingConfig cfg;
    cfg.control.abs_tol = ode_tol;
    cfg.control.rel_tol = ode_tol;
    Run run;
    auto guarded = [&](auto&& fn) -> Verdict {
        try {
            return fn();
        } catch (const Error& e) {
            return {false, std::string(e.kind()) + ": " + e.what()};
        }
    };
    AsymptoticConstants k;
    const Verdict c4 = guarded([&] {
        k = fit_edge_constants(solve_reference(fisher(), cfg.control));
        return constants(k);
    });
    run.verdicts.push_back(guarded([&] { return monotone_curve(cfg, run.speeds); }));
    run.verdicts.push_back(guarded([&] { return large_uc(cfg, run.speeds); }));
    run.verdicts.push_back(guarded([&] { return small_uc(cfg, k, run.speeds); }));
    run.verdicts.push_back(c4);
    run.verdicts.push_back(guarded([&] { return quadrature(cfg.control); }));
    run.verdicts.push_back(guarded([&] { return front_identities(cfg, run.speeds); }));
    run.verdicts.push_back(guarded([&] { return front_location(cfg, k, run.speeds); }));
    return run;
}

}  // namespace

int main() {
    const char* names[] = {"monotone speed curve", "large-u_c expansion", "small-u_c expansion",
                           "edge constants", "v=0 quadrature", "front identities", "front location"};
    const Run base = run_all(1e-12);
    bool all = true;
    for (std::size_t i = 0; i < base.verdicts.size(); ++i) {
        const auto& v = base.verdicts[i];
        all = all && v.pass;
        std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, names[i], v.detail.c_str());
    }

    const Run tight = run_all(1e-13);
    bool same = tight.speeds.size() == base.speeds.size();
    double moved = 0.0;
    for (std::size_t i = 0; same && i < base.speeds.size(); ++i) {
        moved = std::max(moved, std::abs(tight.speeds[i] - base.speeds[i]));
    }
    std::string changed;
    bool tight_all = true;
    for (std::size_t i = 0; i < tight.verdicts.size(); ++i) {
        tight_all = tight_all && tight.verdicts[i].pass;
        if (tight.verdicts[i].pass != base.verdicts[i].pass) changed += " " + std::to_string(i + 1);
    }
    const bool c8 = same && moved < 1e-7 && tight_all;
    all = all && c8;
    std::printf("[%s] 8 tolerance robustness: ODE tol 1e-13, max speed change %.3g; criteria 1-7 %s%s\n",
                c8 ? "PASS" : "FAIL", moved, tight_all ? "all pass" : "do not all pass",
                changed.empty() ? ", verdicts unchanged" : (", verdict changed for" + changed).c_str());
    return all ? 0 : 1;
}
