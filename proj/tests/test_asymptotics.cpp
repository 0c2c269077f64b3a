#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ptw/asymptotics.hpp"
#include "ptw/errors.hpp"

using namespace ptw;
using std::numbers::pi;

namespace {

AsymptoticConstants fisher_constants() {
    AsymptoticConstants k;
    k.a_inf = 3.5;
    k.b_inf = -11.3;
    k.gamma = std::sqrt(2.0) - 1.0;
    return k;
}

}  // namespace

TEST_CASE("small u_c two-term law") {
    const auto p = small_uc_speed(std::exp(-10.0), fisher_constants());
    CHECK(p.two_term == doctest::Approx(2.0 - pi * pi / 100.0).epsilon(1e-15));
    CHECK(p.two_term == doctest::Approx(1.9013).epsilon(1e-5));
    CHECK(SmallUcPrediction::y_hat_c0 == pi);
}

TEST_CASE("small u_c three-term law") {
    const auto k = fisher_constants();
    const double u_c = 1e-12;
    const auto p = small_uc_speed(u_c, k);
    const double L = std::log(u_c);
    const double K = (k.a_inf + k.b_inf) / k.a_inf + std::log(k.a_inf);
    CHECK(K == doctest::Approx(-0.9758).epsilon(1e-4));
    CHECK(p.two_term == doctest::Approx(1.98707).epsilon(1e-5));
    CHECK(p.three_term == doctest::Approx(p.two_term - 2 * pi * pi * K / (L * L * L)).epsilon(1e-15));
    CHECK(p.three_term == doctest::Approx(1.98616).epsilon(2e-6));
    CHECK(p.vbar == doctest::Approx(2.0 - p.three_term));
    CHECK(p.three_term < 2.0);
    CHECK(p.vbar > 0.0);
}

TEST_CASE("sign of the third term") {
    for (double a : {0.5, 1.0, 3.5, 10.0}) {
        for (double b : {-20.0, -11.3, 0.0, 4.0}) {
            AsymptoticConstants k;
            k.a_inf = a;
            k.b_inf = b;
            const double K = (a + b) / a + std::log(a);
            if (K == 0.0) continue;
            for (double u_c : {1e-3, 1e-8, 1e-14}) {
                const auto p = small_uc_speed(u_c, k);
                const double L = std::log(u_c);
                const double expected = -(K > 0 ? 1.0 : -1.0) * (L * L * L > 0 ? 1.0 : -1.0);
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(u_c);
                CHECK((p.three_term - p.two_term) * expected > 0.0);
            }
        }
    }
}

TEST_CASE("front location prediction") {
    const auto k = fisher_constants();
    const double u_c = 1e-8;
    const double L = std::log(u_c);
    const auto p = small_uc_speed(u_c, k, 1.99);
    CHECK(p.y_hat_c1 == doctest::Approx(-(k.a_inf + k.b_inf) / k.a_inf));
    CHECK(p.y_hat_c == doctest::Approx(pi + (k.a_inf + k.b_inf) * pi / (k.a_inf * L)));
    CHECK(p.y_bar_c == doctest::Approx(p.y_hat_c / std::sqrt(p.vbar)));
    REQUIRE(p.y_bar_c_measured.has_value());
    CHECK(*p.y_bar_c_measured == doctest::Approx(p.y_hat_c / std::sqrt(0.01)));
    CHECK_FALSE(small_uc_speed(u_c, k).y_bar_c_measured.has_value());
}

TEST_CASE("two-term law increases as u_c decreases") {
    const auto k = fisher_constants();
    double prev = small_uc_speed(std::exp(-4.0), k).two_term;
    for (double e = 4.5; e <= 60.0; e += 0.5) {
        const double cur = small_uc_speed(std::exp(-e), k).two_term;
        REQUIRE(cur > prev);
        prev = cur;
    }
}

TEST_CASE("small_uc_speed preconditions") {
    auto k = fisher_constants();
    CHECK_THROWS_AS(small_uc_speed(1.0, k), DomainError);
    CHECK_THROWS_AS(small_uc_speed(0.0, k), DomainError);
    CHECK_THROWS_AS(small_uc_speed(1.5, k), DomainError);
    k.a_inf = 0.0;
    CHECK_THROWS_AS(small_uc_speed(0.1, k), DomainError);
}

TEST_CASE("large u_c expansion") {
    SUBCASE("Fisher") {
        const auto p = large_uc_speed(0.9, fisher());
        CHECK(p.v0 == doctest::Approx(1.0));
        CHECK(p.v1 == doctest::Approx(1.0 / 6.0));
        CHECK(p.delta == doctest::Approx(0.1));
        CHECK(p.one_term == doctest::Approx(0.1));
        CHECK(p.two_term == doctest::Approx(0.1 + 0.01 / 6.0).epsilon(1e-14));
        CHECK(p.two_term == doctest::Approx(p.delta * p.v0 + p.delta * p.delta * p.v1).epsilon(1e-15));
    }
    SUBCASE("cubic") {
        const auto p = large_uc_speed(0.9, cubic_kpp());
        CHECK(p.v0 == doctest::Approx(std::sqrt(2.0)));
        CHECK(p.v1 == doctest::Approx(0.0).scale(1.0));
        CHECK(p.two_term == doctest::Approx(0.1 * std::sqrt(2.0)));
    }
    SUBCASE("vanishes as u_c -> 1") {
        double prev = large_uc_speed(0.9, fisher()).two_term;
        for (double d : {0.05, 0.01, 1e-3, 1e-6}) {
            const auto p = large_uc_speed(1.0 - d, fisher());
            CHECK(p.one_term > 0.0);
            CHECK(p.two_term < prev);
            prev = p.two_term;
        }
        CHECK(prev < 2e-6);
    }
    CHECK_THROWS_AS(large_uc_speed(1.0, fisher()), DomainError);
    CHECK_THROWS_AS(large_uc_speed(0.0, fisher()), DomainError);
}

TEST_CASE("large u_c phase path") {
    CHECK(large_uc_phase_path(1.0, 0.95, fisher()) == 0.0);
    CHECK(large_uc_phase_path(0.95, 0.95, fisher()) ==
          doctest::Approx(-0.5 * 1.95 * 0.05 + 0.0025 / 3.0).epsilon(1e-14));
    CHECK(large_uc_phase_path(0.95, 0.95, fisher()) == doctest::Approx(-0.047917).epsilon(1e-5));
    CHECK_THROWS_AS(large_uc_phase_path(0.5, 0.95, fisher()), DomainError);
    CHECK_THROWS_AS(large_uc_phase_path(1.1, 0.95, fisher()), DomainError);

    SUBCASE("rescaled form agrees") {
        const auto p = large_uc_speed(0.95, fisher());
        for (double x : {0.0, 0.3, 1.0}) {
            CHECK(p.delta * p.phase_path(x) ==
                  doctest::Approx(large_uc_phase_path(1.0 - p.delta * x, 0.95, fisher())).epsilon(1e-12));
        }
    }

    SUBCASE("meets the tail slope -v u_c at alpha = u_c to third order") {
        for (const auto& r : {fisher(), cubic_kpp()}) {
            for (double d : {0.1, 0.05, 0.01}) {
                const double u_c = 1.0 - d;
                const auto p = large_uc_speed(u_c, r);
                const double diff = large_uc_phase_path(u_c, u_c, r) + p.two_term * u_c;
                CAPTURE(r.name);
                CAPTURE(d);
                CHECK(std::abs(diff) <= std::abs(p.v1) * d * d * d * (1 + 1e-9) + 1e-15);
            }
        }
    }

    SUBCASE("matches the shooting trajectory") {
        for (double d : {0.1, 0.05}) {
            const double u_c = 1.0 - d;
            const auto c = make_cutoff(fisher(), u_c);
            const auto sol = solve_speed(c, std::nullopt, {});
            double worst = 0.0;
            for (const auto& s : sol.profile) {
                if (s.y > 0.0 || s.u < u_c) continue;
                worst = std::max(worst, std::abs(s.du - large_uc_phase_path(s.u, u_c, fisher())));
            }
            CAPTURE(d);
            CHECK(worst < 3 * d * d * d);
        }
    }
}

TEST_CASE("measured front location") {
    const auto half = solve_speed(make_cutoff(fisher(), 0.5), std::nullopt, {});
    CHECK(measure_front_location(half) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    double prev = measure_front_location(solve_speed(make_cutoff(fisher(), 0.4), std::nullopt, {}));
    CHECK(prev > 0.0);
    for (double u_c : {0.1, 1e-2, 1e-4, 1e-6, 1e-8}) {
        const auto sol = solve_speed(make_cutoff(fisher(), u_c), std::nullopt, {});
        const double y = measure_front_location(sol);
        CAPTURE(u_c);
        CHECK(y > prev);
        CHECK(y == doctest::Approx(-sol.y_half).epsilon(1e-6));
        prev = y;
    }

    SUBCASE("u_c = 1e-8 sits near pi on the scaled axis") {
        const auto sol = solve_speed(make_cutoff(fisher(), 1e-8), std::nullopt, {});
        const double scaled = measure_front_location(sol) * std::sqrt(2.0 - sol.v_star);
        CHECK(std::abs(scaled - pi) / pi < 0.15);
    }

    SUBCASE("profile that never reaches 1/2") {
        const auto sol = solve_speed(make_cutoff(fisher(), 0.99), std::nullopt, {});
        CHECK_THROWS_AS(measure_front_location(sol), ProfileTooShort);
    }
}
