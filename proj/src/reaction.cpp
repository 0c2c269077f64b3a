#include "ptw/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptw/errors.hpp"

namespace ptw {

ReactionSpec fisher() {
    ReactionSpec r;
    r.name = "fisher";
    r.f = [](double u) { return u * (1.0 - u); };
    r.fprime_at_1 = -1.0;
    r.fdoubleprime_at_1 = -2.0;
    r.sup_f = [](double u_c) { return u_c <= 0.5 ? 0.25 : u_c * (1.0 - u_c); };
    return r;
}

ReactionSpec cubic_kpp() {
    ReactionSpec r;
    r.name = "cubic";
    r.f = [](double u) { return u * (1.0 - u * u); };
    r.fprime_at_1 = -2.0;
    r.fdoubleprime_at_1 = -6.0;
    // Maximum of u - u^3 sits at u = 1/sqrt(3).
    r.sup_f = [](double u_c) {
        const double u_max = 1.0 / std::sqrt(3.0);
        const double u = std::max(u_c, u_max);
        return u * (1.0 - u * u);
    };
    return r;
}

ReactionSpec make_reaction(std::string name,
                           std::function<double(double)> f,
                           double fprime_at_1,
                           double fdoubleprime_at_1,
                           std::function<double(double)> sup_f) {
    if (!(fprime_at_1 < 0.0)) {
        throw DomainError("reaction '" + name + "': f'(1) must be negative");
    }
    ReactionSpec r;
    r.name = std::move(name);
    r.f = std::move(f);
    r.fprime_at_1 = fprime_at_1;
    r.fdoubleprime_at_1 = fdoubleprime_at_1;
    if (sup_f) {
        r.sup_f = std::move(sup_f);
    } else {
        r.sup_f = [g = r.f](double u_c) {
            constexpr int n = 10000;
            double best = g(1.0);
            for (int i = 0; i <= n; ++i) {
                best = std::max(best, g(u_c + (1.0 - u_c) * i / n));
            }
            return best;
        };
    }
    return r;
}

std::optional<ReactionSpec> reaction_by_name(const std::string& name) {
    if (name == "fisher") return fisher();
    if (name == "cubic") return cubic_kpp();
    return std::nullopt;
}

std::optional<std::string> check_kpp_conditions(const ReactionSpec& reaction,
                                                int n_grid) {
    std::ostringstream msg;
    if (std::abs(reaction.f(0.0)) > 1e-15 || std::abs(reaction.f(1.0)) > 1e-15) {
        msg << "f(0) and f(1) must vanish";
        return msg.str();
    }
    if (!(reaction.fprime_at_1 < 0.0)) return "f'(1) must be negative";
    for (int i = 1; i <= n_grid; ++i) {
        const double u = static_cast<double>(i) / (n_grid + 1);
        const double fu = reaction.f(u);
        if (!(fu > 0.0) || fu > u) {
            msg << "0 < f(u) <= u violated at u = " << u << " (f = " << fu << ")";
            return msg.str();
        }
    }
    return std::nullopt;
}

CutoffReaction::CutoffReaction(ReactionSpec base, double u_c)
    : base_(std::move(base)), u_c_(u_c), f_c_plus_(0.0) {
    if (!(u_c > 0.0 && u_c < 1.0)) {
        std::ostringstream msg;
        msg << "cut-off u_c must lie in the open interval (0,1), got " << u_c;
        throw DomainError(msg.str());
    }
    f_c_plus_ = base_.f(u_c_);
}

CutoffReaction make_cutoff(ReactionSpec base, double u_c) {
    return CutoffReaction(std::move(base), u_c);
}

double lambda_plus(const ReactionSpec& reaction, double v) {
    const double a = reaction.abs_fprime_at_1();
    // Rationalised form of (-v + sqrt(v^2 + 4a)) / 2; no cancellation at large v.
    return 2.0 * a / (v + std::sqrt(v * v + 4.0 * a));
}

double gamma_rate(const ReactionSpec& reaction) {
    return -1.0 + std::sqrt(1.0 + reaction.abs_fprime_at_1());
}

double v_upper_bound(const CutoffReaction& cutoff) {
    return std::sqrt(cutoff.base().sup_f(cutoff.u_c()) / cutoff.u_c());
}

}  // namespace ptw
