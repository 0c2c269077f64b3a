#pragma once

#include <functional>
#include <optional>
#include <string>

namespace ptw {

/// KPP-type reaction function f with f(0) = f(1) = 0, 0 < f(u) <= u on
/// (0,1) and f'(1) < 0.
///
/// Derivative data at u = 1 is carried analytically because the large-u_c
/// expansion needs it to machine precision.
struct ReactionSpec {
    std::string name;
    std::function<double(double)> f;
    double fprime_at_1 = 0.0;
    double fdoubleprime_at_1 = 0.0;
    /// u_c -> sup of f over (u_c, 1].
    std::function<double(double)> sup_f;

    double operator()(double u) const { return f(u); }
    double abs_fprime_at_1() const { return -fprime_at_1; }
};

/// f(u) = u(1 - u).
ReactionSpec fisher();

/// f(u) = u(1 - u^2).
ReactionSpec cubic_kpp();

/// Library extension point for user reactions. When `sup_f` is omitted the
/// supremum is approximated by the maximum over a 10^4-point grid on
/// [u_c, 1], which can underestimate the true supremum slightly.
///
/// Throws DomainError if fprime_at_1 >= 0.
ReactionSpec make_reaction(std::string name,
                           std::function<double(double)> f,
                           double fprime_at_1,
                           double fdoubleprime_at_1,
                           std::function<double(double)> sup_f = {});

/// Looks up a built-in reaction by CLI identifier ("fisher" or "cubic").
std::optional<ReactionSpec> reaction_by_name(const std::string& name);

/// Checks the KPP conditions on an n-point interior grid of (0,1). Returns
/// a description of the first violation, or nullopt.
std::optional<std::string> check_kpp_conditions(const ReactionSpec& reaction,
                                                int n_grid = 10000);

/// f gated at the threshold u_c: zero on (-inf, u_c], f on (u_c, inf).
class CutoffReaction {
public:
    CutoffReaction(ReactionSpec base, double u_c);

    double operator()(double u) const { return u <= u_c_ ? 0.0 : base_.f(u); }

    const ReactionSpec& base() const { return base_; }
    double u_c() const { return u_c_; }
    /// f(u_c+), the size of the jump at the threshold.
    double f_c_plus() const { return f_c_plus_; }

private:
    ReactionSpec base_;
    double u_c_;
    double f_c_plus_;
};

/// Throws DomainError unless 0 < u_c < 1.
CutoffReaction make_cutoff(ReactionSpec base, double u_c);

/// Positive eigenvalue of the saddle (1, 0): (-v + sqrt(v^2 + 4|f'(1)|)) / 2.
double lambda_plus(const ReactionSpec& reaction, double v);

/// Rear decay rate -1 + sqrt(1 + |f'(1)|) of the minimum-speed wave.
double gamma_rate(const ReactionSpec& reaction);

/// (sup_f(u_c) / u_c)^(1/2); every speed above it has a positive shooting
/// residual, so it bounds v*(u_c) from above.
double v_upper_bound(const CutoffReaction& cutoff);

}  // namespace ptw
