#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "stoprule/asymptotics.hpp"
#include "stoprule/exact.hpp"

using namespace stoprule;
using namespace stoprule::asym;

namespace {

// Independent oracle for W-1: bisection of w e^w = x over [-40, -1], where
// w e^w decreases from 0- to -1/e.
double wm1_bisect(double x) {
    double lo = -40.0, hi = -1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::exp(mid) < x ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Interior maximizer of a smooth profile: bisection on the central-difference
// derivative, which stays accurate where the function itself flattens out.
double maximize_profile(const std::function<double(double)>& f, double lo, double hi) {
    const double h = 1e-5;
    const auto slope = [&](double x) { return (f(x + h) - f(x - h)) / (2.0 * h); };
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        (slope(mid) > 0.0 ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

} // namespace

TEST_CASE("lambert w0 reference points") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lambert_w0(2.0) == doctest::Approx(0.8526055020137254).epsilon(1e-13));
    CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK_THROWS_AS(lambert_w0(-0.3679), StopruleError);
}

TEST_CASE("lambert wm1 reference points") {
    CHECK(lambert_wm1(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-9));
    const double at_theta_arg = lambert_wm1(-0.5 * std::exp(-0.5));
    CHECK(at_theta_arg == doctest::Approx(-1.0 / (2.0 * theta())).epsilon(1e-12));
    CHECK(at_theta_arg == doctest::Approx(wm1_bisect(-0.5 * std::exp(-0.5))).epsilon(1e-12));
    const double w = lambert_wm1(-0.1);
    CHECK(w <= -1.0);
    CHECK(w * std::exp(w) == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(w == doctest::Approx(wm1_bisect(-0.1)).epsilon(1e-12));
    CHECK_THROWS_AS(lambert_wm1(0.0), StopruleError);
    CHECK_THROWS_AS(lambert_wm1(0.5), StopruleError);
    CHECK_THROWS_AS(lambert_wm1(-0.3679), StopruleError);
}

TEST_CASE("lambert w round trips") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> w0_range(-1.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double w = w0_range(rng);
        const double x = w * std::exp(w);
        CHECK(std::abs(lambert_w0(x) - w) < 1e-10 * std::max(1.0, std::abs(w)));
    }
    std::uniform_real_distribution<double> wm1_range(-20.0, -1.0);
    for (int i = 0; i < 1000; ++i) {
        const double w = wm1_range(rng);
        const double x = w * std::exp(w);
        CHECK(std::abs(lambert_wm1(x) - w) < 1e-10 * std::max(1.0, std::abs(w)));
    }
}

TEST_CASE("digamma reference points") {
    const double gamma = 0.5772156649015328606;
    CHECK(digamma(1.0) == doctest::Approx(-gamma).epsilon(1e-12));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - gamma).epsilon(1e-12));
    CHECK(digamma(0.5) == doctest::Approx(-gamma - 2.0 * std::log(2.0)).epsilon(1e-12));
    double h39 = 0.0; // sum_{k=3}^{9} 1/k
    for (int k = 3; k <= 9; ++k) h39 += 1.0 / k;
    CHECK(digamma(10.0) - digamma(3.0) == doctest::Approx(h39).epsilon(1e-12));
    CHECK_THROWS_AS(digamma(0.0), StopruleError);
    CHECK_THROWS_AS(digamma(-1.5), StopruleError);
}

TEST_CASE("digamma equals harmonic numbers at integers") {
    const double gamma = 0.5772156649015328606;
    double harmonic = 0.0;
    for (int n = 1; n <= 60; ++n) {
        CHECK(std::abs(digamma(n) - (harmonic - gamma)) < 1e-10);
        harmonic += 1.0 / n;
    }
}

TEST_CASE("digamma recurrence on non-integer arguments") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(0.05, 50.0);
    for (int i = 0; i < 500; ++i) {
        const double x = xs(rng);
        CHECK(digamma(x + 1.0) - digamma(x) == doctest::Approx(1.0 / x).epsilon(1e-9));
    }
}

TEST_CASE("constants match the reported decimals") {
    CHECK(std::abs(rho() - 0.20318786) < 1e-5);
    CHECK(std::abs(mu() - 0.42630) < 1e-5);
    CHECK(std::abs(theta() - 0.284668) < 1e-5);
    CHECK(std::abs(vartheta() - 0.552001) < 1e-5);
    CHECK(std::abs(pd_perq_acv() - 0.53518) < 1e-5);
    const auto [alpha, beta] = solve_pd_cost_constants();
    CHECK(std::abs(alpha - 0.1724844) < 1e-5);
    CHECK(std::abs(beta - 0.39422) < 1e-5);
    CHECK(std::abs(scaled_profile2(Variant::Postdoc, PayoffKind::Cost, alpha, beta) - 0.11811) <
          1e-4);
}

TEST_CASE("closed-form and root-solved routes agree") {
    for (const auto& c : constants()) {
        CAPTURE(c.name);
        CHECK(std::abs(c.value - c.root_value) < 1e-10);
        CHECK(c.residual < 1e-12);
    }
}

TEST_CASE("limit payoffs") {
    const auto cs = constants();
    const auto find = [&](const char* name) {
        for (const auto& c : cs)
            if (c.name == name) return c;
        FAIL("missing constant");
        return cs.front();
    };
    CHECK(std::abs(find("rho").limit_payoff - 0.16190) < 1e-4);
    CHECK(std::abs(find("mu").limit_payoff - 0.60803) < 1e-4);
    CHECK(std::abs(find("theta").limit_payoff - 0.2036321) < 1e-4);
    CHECK(std::abs(find("vartheta").limit_payoff - 0.8567) < 1e-4);
    CHECK(std::abs(find("alpha").limit_payoff - 0.11811) < 1e-4);
    CHECK(std::abs(find("pd_perq_acv").limit_payoff - 0.4397) < 1e-4);
}

TEST_CASE("profile reference points") {
    const double inv_e = std::exp(-1.0);
    CHECK(scaled_profile(Variant::Classic, PayoffKind::Binary, inv_e) ==
          doctest::Approx(inv_e).epsilon(1e-14));
    CHECK(scaled_profile(Variant::BestOrWorst, PayoffKind::Binary, 0.5) == doctest::Approx(0.5));
    CHECK(scaled_profile(Variant::Postdoc, PayoffKind::Binary, 0.5) == doctest::Approx(0.25));
    CHECK(scaled_profile(Variant::Classic, PayoffKind::Binary, 0.0) == 0.0);
    CHECK_THROWS_AS(scaled_profile(Variant::Classic, PayoffKind::Binary, 1.5), StopruleError);
    CHECK_THROWS_AS(scaled_profile(Variant::Postdoc, PayoffKind::Cost, 0.5), StopruleError);
    CHECK_THROWS_AS(scaled_profile2(Variant::Postdoc, PayoffKind::Cost, 0.6, 0.4), StopruleError);
}

TEST_CASE("unbalanced profile maximum at its closed-form point") {
    // at (e^{-1+m/M} M/(M+m), M/(M+m)) the profile equals e^{-1+m/M} M^2/(M+m)
    const double m = 1.0, M = 2.0;
    const double x = std::exp(-1.0 + m / M) * M / (M + m);
    const double y = M / (M + m);
    const double expected = std::exp(-1.0 + m / M) * M * M / (M + m);
    CHECK(scaled_profile2(Variant::BestOrWorst, PayoffKind::Unbalanced, x, y, m, M) ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("profile maximizers coincide with the constants") {
    struct Case {
        Variant v;
        PayoffKind p;
        double constant;
    };
    const Case cases[] = {
        {Variant::Classic, PayoffKind::Binary, std::exp(-1.0)},
        {Variant::Classic, PayoffKind::Cost, rho()},
        {Variant::Classic, PayoffKind::Perquisite, mu()},
        {Variant::BestOrWorst, PayoffKind::Binary, 0.5},
        {Variant::BestOrWorst, PayoffKind::Cost, theta()},
        {Variant::BestOrWorst, PayoffKind::Perquisite, vartheta()},
        {Variant::Postdoc, PayoffKind::Binary, 0.5},
        {Variant::Postdoc, PayoffKind::Perquisite, pd_perq_acv()},
    };
    for (const auto& c : cases) {
        const double max_at = maximize_profile(
            [&](double x) { return scaled_profile(c.v, c.p, x); }, 0.01, 0.99);
        CHECK(std::abs(max_at - c.constant) < 1e-8);
    }
}

TEST_CASE("two-variable maximizers coincide with the constants") {
    // Alternating coordinate maximization on the concave limit profiles.
    const auto maximize2 = [](const std::function<double(double, double)>& f, double x0,
                              double y0) {
        double x = x0, y = y0;
        for (int round = 0; round < 60; ++round) {
            x = maximize_profile([&](double xx) { return f(xx, y); }, 1e-4, y);
            y = maximize_profile([&](double yy) { return f(x, yy); }, x, 1.0 - 1e-12);
        }
        return std::pair{x, y};
    };

    const double m = 1.0, M = 2.0;
    auto [ux, uy] = maximize2(
        [&](double x, double y) {
            return scaled_profile2(Variant::BestOrWorst, PayoffKind::Unbalanced, x, y, m, M);
        },
        0.3, 0.7);
    CHECK(std::abs(ux - std::exp(-0.5) * M / (M + m)) < 1e-8);
    CHECK(std::abs(uy - M / (M + m)) < 1e-8);

    const auto [alpha, beta] = solve_pd_cost_constants();
    auto [px, py] = maximize2(
        [&](double x, double y) {
            return scaled_profile2(Variant::Postdoc, PayoffKind::Cost, x, y);
        },
        0.2, 0.4);
    CHECK(std::abs(px - alpha) < 1e-8);
    CHECK(std::abs(py - beta) < 1e-8);
}

TEST_CASE("asymptotic table carries all nine cells") {
    const auto table = asymptotic_table();
    REQUIRE(table.size() == 9);
    for (const auto& cell : table) {
        if (cell.variant == Variant::Postdoc && cell.payoff == PayoffKind::Cost) {
            CHECK(cell.acv.size() == 2);
        } else {
            CHECK(cell.acv.size() == 1);
        }
        CHECK(cell.amp > 0.0);
        CHECK(cell.amp < 1.0);
    }
    // postdoc binary AMP is exactly 1/4 in the limit
    for (const auto& cell : table)
        if (cell.variant == Variant::Postdoc && cell.payoff == PayoffKind::Binary)
            CHECK(cell.amp == doctest::Approx(0.25).epsilon(1e-12));
}

// Numerical embodiment of the uniform-convergence propositions: the scaled
// curves approach their limit profiles in sup norm, and the argmax ratios
// approach the constants.
TEST_CASE("scaled payoff curves converge uniformly to the limit profiles") {
    struct Case {
        Variant v;
        PayoffKind p;
        double constant;
    };
    const Case cases[] = {
        {Variant::Classic, PayoffKind::Binary, std::exp(-1.0)},
        {Variant::Classic, PayoffKind::Cost, rho()},
        {Variant::Classic, PayoffKind::Perquisite, mu()},
        {Variant::BestOrWorst, PayoffKind::Binary, 0.5},
        {Variant::BestOrWorst, PayoffKind::Cost, theta()},
        {Variant::BestOrWorst, PayoffKind::Perquisite, vartheta()},
        {Variant::Postdoc, PayoffKind::Binary, 0.5},
        {Variant::Postdoc, PayoffKind::Perquisite, pd_perq_acv()},
    };
    for (const auto& c : cases) {
        CAPTURE(to_string(c.v));
        CAPTURE(to_string(c.p));
        double previous_err = 1e9;
        for (int n : {100, 1000, 10000}) {
            const ProblemSpec spec{c.v, {c.p, 0.0, 1.0}, n};
            const auto curve = one_threshold_curve(spec);
            const int r_min = min_threshold(c.v, c.p);
            double sup_err = 0.0;
            for (int i = 1; i <= 99; ++i) {
                const double x = i / 100.0;
                const int r = std::max(r_min, static_cast<int>(n * x));
                const double gn = curve[static_cast<size_t>(r - r_min)];
                sup_err = std::max(sup_err, std::abs(gn - scaled_profile(c.v, c.p, x)));
            }
            CHECK(sup_err < previous_err);
            previous_err = sup_err;

            const auto best = argmax_one(spec);
            CHECK(std::abs(best.best_strategy.r / static_cast<double>(n) - c.constant) <=
                  10.0 / n + 1e-2);
        }
        CHECK(previous_err < 2e-3); // value at n = 10^4
    }
}
