#include <doctest.h>

#include <cmath>
#include <random>

#include "portfolio.hpp"
#include "support/fixtures.hpp"
#include "util.hpp"

using namespace ctp;
using namespace ctp::portfolio;
using testsupport::holdings_oracle;

TEST_CASE("normalize: all-cash, single-asset and mixed holdings") {
    auto s = normalize({1000.0, 0.0, 0.0}, 1300.0, 600.0);
    CHECK(s.c == 1.0);
    CHECK(s.g == 0.0);
    CHECK(s.b == 0.0);
    CHECK(s.value == 1000.0);

    auto s2 = normalize({0.0, 2.0, 0.0}, 1300.0, 600.0);
    CHECK(s2.g == 1.0);
    CHECK(s2.value == 2600.0);

    auto s3 = normalize({500.0, 1.0, 0.1}, 1300.0, 600.0);
    CHECK(s3.value == doctest::Approx(1860.0));
    CHECK(s3.c == doctest::Approx(500.0 / 1860.0));
    CHECK(s3.g == doctest::Approx(1300.0 / 1860.0));
    CHECK(s3.b == doctest::Approx(60.0 / 1860.0));
    CHECK(s3.c + s3.g + s3.b == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(normalize({0.0, 0.0, 0.0}, 1300.0, 600.0), util::NumericError);
}

TEST_CASE("value_step identities") {
    CommissionRates rates;
    PortfolioState s{1.0, 0.0, 0.0, 1000.0};

    CHECK(value_step(s, {0.0, 0.0}, {0.0, 0.0}, rates) == 1000.0);

    // All-in gold purchase at flat prices loses exactly the commission.
    const double x = 1.0 / (1.0 + rates.alpha);
    double v = value_step(s, {x, 0.0}, {0.0, 0.0}, rates);
    CHECK(v == doctest::Approx(1000.0 * (1.0 - rates.alpha / (1.0 + rates.alpha))).epsilon(1e-12));
}

TEST_CASE("zero-decision neutrality and drift re-weighting") {
    CommissionRates rates;
    PortfolioState s{0.5, 0.2, 0.3, 2000.0};
    DayReturns r{0.0, 0.04};

    double v = value_step(s, {0.0, 0.0}, r, rates);
    CHECK(v == doctest::Approx(2000.0 * (1.0 + 0.04 * 0.3)).epsilon(1e-12));

    auto s2 = state_step(s, {0.0, 0.0}, r, rates);
    CHECK(s2.b > s.b);
    CHECK(s2.c < s.c);
    CHECK(s2.c + s2.g + s2.b == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle equivalence on 10000 random feasible transitions") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ret(-0.2, 0.25);
    std::uniform_real_distribution<double> rate(0.0, 0.05);
    std::uniform_int_distribution<int> coin(0, 1);

    for (int trial = 0; trial < 10000; ++trial) {
        CommissionRates rates{rate(rng), rate(rng), coin(rng) == 1};
        auto s = testsupport::random_state(rng);
        auto d = testsupport::random_feasible_decision(s, rates, rng);
        DayReturns r{ret(rng), ret(rng)};

        auto oracle = holdings_oracle(s, d, r, rates);
        double v = value_step(s, d, r, rates);
        auto next = state_step(s, d, r, rates);

        CHECK(std::abs(v - oracle.value) <= 1e-9 * std::abs(oracle.value));
        CHECK(std::abs(next.c - oracle.c) <= 1e-9);
        CHECK(std::abs(next.g - oracle.g) <= 1e-9);
        CHECK(std::abs(next.b - oracle.b) <= 1e-9);
        CHECK(std::abs(next.c + next.g + next.b - 1.0) < 1e-9);
        CHECK(next.c >= -1e-12);
        CHECK(next.g >= -1e-12);
        CHECK(next.b >= -1e-12);
    }
}

TEST_CASE("buys are never free; symmetric mode extends this to sells") {
    CommissionRates literal;
    PortfolioState s{0.4, 0.3, 0.3, 1000.0};
    DayReturns flat{0.0, 0.0};

    CHECK(value_step(s, {0.1, 0.0}, flat, literal) < 1000.0);
    CHECK(value_step(s, {0.1, 0.2}, flat, literal) < 1000.0);
    // The literal cost model credits the commission factor on sells.
    CHECK(value_step(s, {-0.1, 0.0}, flat, literal) > 1000.0);

    CommissionRates symmetric{0.01, 0.02, true};
    for (auto d : {TradeDecision{-0.2, 0.0}, TradeDecision{0.0, -0.25},
                   TradeDecision{0.15, -0.1}, TradeDecision{-0.05, 0.2}}) {
        CHECK(value_step(s, d, flat, symmetric) < 1000.0);
    }
}

TEST_CASE("a buy-then-unwind round trip at flat prices is value neutral (literal model)") {
    CommissionRates rates;
    PortfolioState s{1.0, 0.0, 0.0, 1000.0};
    DayReturns flat{0.0, 0.0};
    auto mid = state_step(s, {0.5, 0.0}, flat, rates);
    auto back = state_step(mid, {-mid.g, 0.0}, flat, rates);
    CHECK(back.value == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(back.c == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("feasible evaluates the cash floor, short bounds and gold halt") {
    CommissionRates rates;
    PortfolioState cash_only{1.0, 0.0, 0.0, 1000.0};
    CHECK(feasible(cash_only, {0.5, 0.2}, rates, true, 0.0));

    PortfolioState all_gold{0.0, 1.0, 0.0, 1000.0};
    CHECK_FALSE(feasible(all_gold, {-1.5, 0.0}, rates, true, 0.0));

    CHECK_FALSE(feasible(cash_only, {0.1, 0.0}, rates, false, 0.0));  // halted gold day
    CHECK(feasible(cash_only, {0.0, 0.2}, rates, false, 0.0));

    // Cash floor delta carves out a reserve.
    CHECK(feasible(cash_only, {0.5, 0.0}, rates, true, 0.4));
    CHECK_FALSE(feasible(cash_only, {0.7, 0.0}, rates, true, 0.4));
}

TEST_CASE("state_step rejects infeasible decisions via the negative-fraction guard") {
    CommissionRates rates;
    PortfolioState s{0.1, 0.5, 0.4, 1000.0};
    CHECK_THROWS_AS(state_step(s, {0.5, 0.0}, {0.0, 0.0}, rates), util::NumericError);
}

TEST_CASE("clamp_to_feasible projects onto the constraint polytope") {
    CommissionRates rates;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> wild(-3.0, 3.0);
    std::uniform_real_distribution<double> floor_dist(0.0, 0.5);

    for (int trial = 0; trial < 2000; ++trial) {
        auto s = testsupport::random_state(rng);
        bool gold_ok = trial % 3 != 0;
        double delta = (trial % 5 == 0) ? floor_dist(rng) * s.c : 0.0;
        TradeDecision raw{wild(rng), wild(rng)};
        auto d = clamp_to_feasible(s, raw, rates, gold_ok, delta);
        CHECK(feasible(s, d, rates, gold_ok, delta));
        // Projection leaves already-feasible decisions alone.
        if (feasible(s, raw, rates, gold_ok, delta)) {
            CHECK(d.x == doctest::Approx(raw.x).epsilon(1e-12));
            CHECK(d.y == doctest::Approx(raw.y).epsilon(1e-12));
        }
    }
}
