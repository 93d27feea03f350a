#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>

#include "stoprule/model.hpp"

using namespace stoprule;

TEST_CASE("validate accepts in-range specs") {
    CHECK_FALSE(check({Variant::Classic, PayoffRegime::binary(), 10}, Strategy::one(3)));
    CHECK_FALSE(check({Variant::BestOrWorst, PayoffRegime::unbalanced(1, 2), 10},
                      Strategy::two(3, 5)));
    CHECK_FALSE(check({Variant::Postdoc, PayoffRegime::cost(), 10}, Strategy::two(2, 4)));
}

TEST_CASE("validate rejects m > M") {
    const auto v = check({Variant::BestOrWorst, PayoffRegime::unbalanced(2, 1), 10},
                         Strategy::two(3, 5));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidParameters);
}

TEST_CASE("m = M is a permitted relaxation") {
    CHECK_FALSE(check({Variant::BestOrWorst, PayoffRegime::unbalanced(1, 1), 10},
                      Strategy::two(3, 5)));
}

TEST_CASE("postdoc needs a second-best candidate") {
    const auto v = check({Variant::Postdoc, PayoffRegime::binary(), 1}, Strategy::one(0));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidCombination);
}

TEST_CASE("unbalanced is only valid with best-or-worst") {
    const auto v = check({Variant::Postdoc, PayoffRegime::unbalanced(1, 2), 10},
                         Strategy::two(3, 5));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidCombination);
}

TEST_CASE("threshold range violations") {
    auto v = check({Variant::Classic, PayoffRegime::binary(), 10}, Strategy::one(10));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidThreshold);
    v = check({Variant::Classic, PayoffRegime::binary(), 10}, Strategy::one(-1));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidThreshold);
    v = check({Variant::BestOrWorst, PayoffRegime::unbalanced(0, 1), 10}, Strategy::two(5, 3));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidThreshold);
}

TEST_CASE("strategy shape must match the family") {
    auto v = check({Variant::Postdoc, PayoffRegime::cost(), 10}, Strategy::one(3));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidCombination);
    v = check({Variant::Classic, PayoffRegime::binary(), 10}, Strategy::two(3, 5));
    REQUIRE(v);
    CHECK(v->code == ErrorCode::InvalidCombination);
}

TEST_CASE("validate throws the reported violation") {
    CHECK_THROWS_AS(validate({Variant::Postdoc, PayoffRegime::binary(), 1}, Strategy::one(0)),
                    StopruleError);
    try {
        validate({Variant::Classic, PayoffRegime::binary(), 5}, Strategy::one(7));
        FAIL("expected a throw");
    } catch (const StopruleError& err) {
        CHECK(err.code() == ErrorCode::InvalidThreshold);
    }
}

TEST_CASE("strategy textual form round-trips") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 2000; ++trial) {
        Strategy strat;
        if (rng() % 2 == 0) {
            strat = Strategy::one(static_cast<int>(rng() % 10000));
        } else {
            const int r = static_cast<int>(rng() % 10000);
            strat = Strategy::two(r, r + static_cast<int>(rng() % 1000));
        }
        const auto parsed = parse_strategy(to_string(strat));
        REQUIRE(parsed);
        CHECK(*parsed == strat);
    }
    CHECK(to_string(Strategy::one(3)) == "r=3");
    CHECK(to_string(Strategy::two(3, 5)) == "r=3,s=5");
}

TEST_CASE("malformed strategy strings are rejected") {
    CHECK_FALSE(parse_strategy(""));
    CHECK_FALSE(parse_strategy("r="));
    CHECK_FALSE(parse_strategy("s=3"));
    CHECK_FALSE(parse_strategy("r=3,s="));
    CHECK_FALSE(parse_strategy("r=3;s=5"));
    CHECK_FALSE(parse_strategy("r=3,s=5x"));
}

// validate must reject exactly the complement of the invariant set.
TEST_CASE("validation fuzz against the invariant predicate") {
    std::mt19937_64 rng(987654);
    const Variant variants[] = {Variant::Classic, Variant::BestOrWorst, Variant::Postdoc};
    const PayoffKind kinds[] = {PayoffKind::Binary, PayoffKind::Cost, PayoffKind::Perquisite,
                                PayoffKind::Unbalanced};
    for (int trial = 0; trial < 20000; ++trial) {
        ProblemSpec spec;
        spec.variant = variants[rng() % 3];
        const PayoffKind kind = kinds[rng() % 4];
        const double m = static_cast<double>(static_cast<int>(rng() % 7) - 1); // -1..5
        const double M = static_cast<double>(static_cast<int>(rng() % 6));     // 0..5
        spec.payoff = kind == PayoffKind::Unbalanced ? PayoffRegime::unbalanced(m, M)
                                                     : PayoffRegime{kind, 0.0, 1.0};
        spec.n = static_cast<int>(rng() % 12); // 0..11
        Strategy strat;
        const bool two = rng() % 2 == 0;
        const int r = static_cast<int>(rng() % 14) - 1;
        const int s = static_cast<int>(rng() % 14) - 1;
        strat = two ? Strategy::two(r, s) : Strategy::one(r);

        bool expect_ok = spec.n >= 1;
        if (spec.variant == Variant::Postdoc && spec.n < 2) expect_ok = false;
        if (kind == PayoffKind::Unbalanced) {
            if (spec.variant != Variant::BestOrWorst) expect_ok = false;
            if (!(M > 0.0) || m < 0.0 || m > M) expect_ok = false;
        }
        if (expect_ok) {
            const bool want_two = needs_two_thresholds(spec.variant, kind);
            if (want_two != two) expect_ok = false;
        }
        if (expect_ok) {
            if (r < 0 || r > spec.n - 1) expect_ok = false;
            if (two && (s < r || s > spec.n - 1)) expect_ok = false;
        }
        CHECK(static_cast<bool>(check(spec, strat)) == !expect_ok);
    }
}

TEST_CASE("eval_result keeps the rational and its double in sync") {
    const auto res = eval_result(rat(3, 7), Method::ClosedForm);
    REQUIRE(res.exact);
    CHECK(res.value == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    CHECK(to_string(*res.exact) == "3/7");
}
