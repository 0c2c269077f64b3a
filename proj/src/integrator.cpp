#include "ptw/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ptw/errors.hpp"

namespace ptw {

void IntegrationControl::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw DomainError("integration tolerances must be positive");
    }
    if (!(max_span > 0.0)) throw DomainError("max_span must be positive");
    if (!(initial_step > 0.0)) throw DomainError("initial_step must be positive");
}

IntegrationControl IntegrationControl::with_abs_scale(double factor) const {
    IntegrationControl c = *this;
    c.abs_tol *= factor;
    return c;
}

double DenseTrajectory::y_begin() const {
    return steps_.empty() ? 0.0 : steps_.front().y0;
}

double DenseTrajectory::y_end() const {
    return steps_.empty() ? 0.0 : steps_.back().y0 + steps_.back().h;
}

PhaseState DenseTrajectory::operator()(double y) const {
    if (steps_.empty()) throw DomainError("empty trajectory");
    y = std::clamp(y, y_begin(), y_end());
    auto it = std::upper_bound(steps_.begin(), steps_.end(), y,
                               [](double value, const Step& s) { return value < s.y0; });
    const Step& s = (it == steps_.begin()) ? steps_.front() : *std::prev(it);
    const double th = s.h > 0.0 ? std::clamp((y - s.y0) / s.h, 0.0, 1.0) : 0.0;
    const double th1 = 1.0 - th;
    std::array<double, 2> out{};
    for (int i = 0; i < 2; ++i) {
        const auto& c = s.c[i];
        out[i] = c[0] + th * (c[1] + th1 * (c[2] + th * (c[3] + th1 * c[4])));
    }
    return {out[0], out[1]};
}

double DenseTrajectory::locate_alpha(double target) const {
    if (steps_.empty()) throw DomainError("empty trajectory");
    const double a0 = (*this)(y_begin()).alpha;
    const double a1 = (*this)(y_end()).alpha;
    if (!(a0 >= target && a1 <= target)) {
        std::ostringstream msg;
        msg << "alpha = " << target << " not bracketed by trajectory range ["
            << a1 << ", " << a0 << "]";
        throw DomainError(msg.str());
    }
    // Coarse scan over step endpoints, then bisection inside the step.
    auto it = std::find_if(steps_.begin(), steps_.end(), [&](const Step& s) {
        return (*this)(s.y0 + s.h).alpha <= target;
    });
    double lo = it->y0;
    double hi = it->y0 + it->h;
    for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((*this)(mid).alpha > target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

using Vec2 = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

/// Planar field (beta, -v beta - g(alpha)); g is either the smooth reaction
/// or identically zero on the sub-threshold segment.
struct Field {
    const std::function<double(double)>* reaction;  // null => linear segment
    double v;

    Vec2 operator()(const Vec2& s) const {
        const double g = reaction ? (*reaction)(s[0]) : 0.0;
        return {s[1], -v * s[1] - g};
    }
};

struct StepResult {
    Vec2 y1;
    Vec2 k7;
    double err;
    DenseTrajectory::Step dense;
};

StepResult dopri_step(const Field& field, double y0, const Vec2& s0, const Vec2& k1,
                      double h, const IntegrationControl& ctl) {
    auto axpy = [](const Vec2& base, std::initializer_list<std::pair<double, const Vec2*>> terms,
                   double hh) {
        Vec2 out = base;
        for (const auto& [coef, k] : terms) {
            out[0] += hh * coef * (*k)[0];
            out[1] += hh * coef * (*k)[1];
        }
        return out;
    };
    const Vec2 k2 = field(axpy(s0, {{a21, &k1}}, h));
    const Vec2 k3 = field(axpy(s0, {{a31, &k1}, {a32, &k2}}, h));
    const Vec2 k4 = field(axpy(s0, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    const Vec2 k5 = field(axpy(s0, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    const Vec2 k6 =
        field(axpy(s0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
    const Vec2 y1 =
        axpy(s0, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}}, h);
    const Vec2 k7 = field(y1);

    StepResult r;
    r.y1 = y1;
    r.k7 = k7;
    // One scale for both components: rounding in alpha ~ 1 feeds the beta
    // stages, so beta cannot be held to a tighter absolute error than that.
    double mag = 0.0;
    for (int i = 0; i < 2; ++i) mag = std::max({mag, std::abs(s0[i]), std::abs(y1[i])});
    const double sc = ctl.abs_tol + ctl.rel_tol * mag;
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
        sum += (e / sc) * (e / sc);
    }
    r.err = std::sqrt(sum / 2.0);

    r.dense.y0 = y0;
    r.dense.h = h;
    for (int i = 0; i < 2; ++i) {
        auto& c = r.dense.c[i];
        c[0] = s0[i];
        c[1] = y1[i] - s0[i];
        c[2] = h * k1[i] - c[1];
        c[3] = c[1] - h * k7[i] - c[2];
        c[4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                    d7 * k7[i]);
    }
    return r;
}

Vec2 dense_eval(const DenseTrajectory::Step& s, double th) {
    const double th1 = 1.0 - th;
    Vec2 out{};
    for (int i = 0; i < 2; ++i) {
        const auto& c = s.c[i];
        out[i] = c[0] + th * (c[1] + th1 * (c[2] + th * (c[3] + th1 * c[4])));
    }
    return out;
}

/// Smallest theta in (0,1] at which component `comp` of the dense output
/// crosses `level` moving in direction `sign` (+1 upward, -1 downward).
double localize(const DenseTrajectory::Step& s, int comp, double level, double sign) {
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double g = sign * (dense_eval(s, mid)[comp] - level);
        if (g >= 0.0) hi = mid; else lo = mid;
    }
    return hi;
}

struct SegmentOutcome {
    double y;
    Vec2 state;
    EventKind kind;
};

class Stepper {
public:
    Stepper(const IntegrationControl& ctl, double y_origin, EventRecord& counters,
            DenseTrajectory* record)
        : ctl_(ctl), y_origin_(y_origin), counters_(counters), record_(record),
          h_(ctl.initial_step) {}

    SegmentOutcome run(const Field& field, double y, Vec2 s, double target) {
        Vec2 k1 = field(s);
        bool last_rejected = false;
        while (true) {
            if (y - y_origin_ > ctl_.max_span) {
                std::ostringstream msg;
                msg << "integration exceeded max_span = " << ctl_.max_span
                    << " at alpha = " << s[0] << ", beta = " << s[1];
                throw SpanExceeded(msg.str());
            }
            const double h_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                                   std::max(1.0, std::abs(y));
            if (h_ < h_floor) {
                std::ostringstream msg;
                msg << "step size underflow at y = " << y << " (h = " << h_ << ")";
                throw StepFailure(msg.str());
            }
            StepResult step = dopri_step(field, y, s, k1, h_, ctl_);
            if (!std::isfinite(step.err) || step.err > 1.0) {
                ++counters_.n_rejects;
                const double fac = std::isfinite(step.err)
                                       ? std::max(0.2, 0.9 * std::pow(step.err, -0.2))
                                       : 0.2;
                h_ *= fac;
                last_rejected = true;
                continue;
            }
            ++counters_.n_steps;

            const bool hit = step.y1[0] <= target;
            const bool turned = step.y1[1] >= 0.0;
            if (hit || turned) {
                const double th_hit = hit ? localize(step.dense, 0, target, -1.0) : 2.0;
                const double th_turn = turned ? localize(step.dense, 1, 0.0, +1.0) : 2.0;
                const bool is_hit = th_hit <= th_turn;
                return finish(field, y, s, k1, is_hit ? th_hit : th_turn,
                              is_hit ? EventKind::threshold : EventKind::turned, target);
            }

            if (record_) record_->append(step.dense);
            y += h_;
            s = step.y1;
            k1 = step.k7;
            double fac = step.err > 0.0 ? 0.9 * std::pow(step.err, -0.2) : 5.0;
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
            h_ *= fac;
            last_rejected = false;
        }
    }

private:
    // Re-steps to the localized event with a full 5th-order step, then removes
    // the remaining offset with one Newton correction along the field.
    SegmentOutcome finish(const Field& field, double y, const Vec2& s, const Vec2& k1,
                          double theta, EventKind kind, double target) {
        const double h_event = theta * h_;
        StepResult step = dopri_step(field, y, s, k1, h_event, ctl_);
        Vec2 st = step.y1;
        double y_event = y + h_event;
        const Vec2 rate = field(st);
        const int comp = kind == EventKind::threshold ? 0 : 1;
        const double level = kind == EventKind::threshold ? target : 0.0;
        if (rate[comp] != 0.0) {
            const double dy = (level - st[comp]) / rate[comp];
            if (std::abs(dy) < 0.5 * std::abs(h_event) + 1e-300) {
                st[0] += dy * rate[0];
                st[1] += dy * rate[1];
                y_event += dy;
            }
        }
        st[comp] = level;
        if (record_) record_->append(step.dense);
        return {y_event, st, kind};
    }

    const IntegrationControl& ctl_;
    double y_origin_;
    EventRecord& counters_;
    DenseTrajectory* record_;
    double h_;
};

EventRecord integrate_impl(const std::function<double(double)>& reaction,
                           double gate, double v, PhaseState start, double alpha_target,
                           const IntegrationControl& control, DenseTrajectory* record) {
    control.validate();
    if (!(v >= 0.0)) throw DomainError("speed v must be non-negative");
    if (!(alpha_target >= 0.0)) throw DomainError("alpha_target must be non-negative");
    if (start.alpha < alpha_target) {
        throw DomainError("start.alpha must not lie below alpha_target");
    }

    EventRecord rec;
    rec.state = start;
    if (start.alpha == alpha_target) return rec;

    Stepper stepper(control, 0.0, rec, record);
    const Field smooth{&reaction, v};

    // Above the gate the field is the smooth reaction; the first segment ends
    // exactly at the gate so the jump is never inside a step.
    const double first_target = std::max(alpha_target, gate);
    SegmentOutcome out{0.0, {start.alpha, start.beta}, EventKind::threshold};
    if (start.alpha > first_target) {
        out = stepper.run(smooth, 0.0, out.state, first_target);
    }
    if (out.kind == EventKind::threshold && first_target > alpha_target) {
        const Field linear{nullptr, v};
        out = stepper.run(linear, out.y, out.state, alpha_target);
    }
    rec.y_event = out.y;
    rec.state = {out.state[0], out.state[1]};
    rec.kind = out.kind;
    return rec;
}

}  // namespace

EventRecord integrate_until_alpha(const CutoffReaction& cutoff, double v,
                                  PhaseState start, double alpha_target,
                                  const IntegrationControl& control,
                                  DenseTrajectory* record) {
    return integrate_impl(cutoff.base().f, cutoff.u_c(), v, start, alpha_target, control,
                          record);
}

EventRecord integrate_until_alpha(const ReactionSpec& reaction, double v,
                                  PhaseState start, double alpha_target,
                                  const IntegrationControl& control,
                                  DenseTrajectory* record) {
    return integrate_impl(reaction.f, -std::numeric_limits<double>::infinity(), v, start,
                          alpha_target, control, record);
}

PhaseState unstable_manifold_start(const ReactionSpec& reaction, double v, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("manifold offset epsilon must lie in (0,1)");
    }
    return {1.0 - epsilon, -lambda_plus(reaction, v) * epsilon};
}

PhaseState unstable_manifold_start(const CutoffReaction& cutoff, double v, double epsilon) {
    return unstable_manifold_start(cutoff.base(), v, epsilon);
}

}  // namespace ptw
