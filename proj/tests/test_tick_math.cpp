#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "clmm/errors.hpp"
#include "clmm/tick_math.hpp"

using namespace clmm;

TEST_CASE("price_to_tick examples") {
    CHECK(price_to_tick(1) == 0);
    CHECK(price_to_tick(1.0001) == 1);
    CHECK(price_to_tick(std::pow(1.0001L, 100)) == 100);
    CHECK(price_to_tick(std::pow(1.0001L, -100)) == -100);
    CHECK(price_to_tick(1.00005) == 0);
    CHECK(price_to_tick(0.99995) == -1);
    CHECK_THROWS_AS(price_to_tick(0), InvalidArgument);
    CHECK_THROWS_AS(price_to_tick(-3), InvalidArgument);
}

TEST_CASE("tick_to_price examples") {
    CHECK(tick_to_price(0) == 1);
    CHECK(tick_to_price(-100) == doctest::Approx(1 / std::pow(1.0001, 100)).epsilon(1e-14));
    CHECK(tick_to_price(100) * tick_to_price(-100) == doctest::Approx(1).epsilon(1e-14));
    CHECK(tick_to_sqrt_price(200) == doctest::Approx(std::sqrt(tick_to_price(200))).epsilon(1e-14));
    CHECK_THROWS_AS(tick_to_price(kMaxTick + 1), InvalidArgument);
    CHECK_THROWS_AS(tick_to_price(kMinTick - 1), InvalidArgument);
    CHECK(std::isfinite(tick_to_price(kMaxTick)));
    CHECK(tick_to_price(kMinTick) > 0);
}

TEST_CASE("round trip on random ticks") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> d(kMinTick, kMaxTick);
    for (int i = 0; i < 1000; ++i) {
        const int t = d(rng);
        CHECK(price_to_tick(tick_to_price(t)) == t);
    }
    for (int t : {kMinTick, kMinTick + 1, -1, 0, 1, kMaxTick - 1, kMaxTick}) {
        CHECK(price_to_tick(tick_to_price(t)) == t);
    }
}

TEST_CASE("price_to_tick is monotone") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-30, 30);
    std::vector<double> ps;
    for (int i = 0; i < 20000; ++i) ps.push_back(std::exp(u(rng)));
    std::sort(ps.begin(), ps.end());
    for (std::size_t i = 1; i < ps.size(); ++i) CHECK(price_to_tick(ps[i - 1]) <= price_to_tick(ps[i]));
}

TEST_CASE("consecutive tick ratio") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> d(kMinTick, kMaxTick - 1);
    for (int i = 0; i < 10000; ++i) {
        const int t = d(rng);
        const double r = tick_to_price(t + 1) / tick_to_price(t);
        CHECK(std::abs(r / 1.0001 - 1) <= 1e-12);
    }
}

TEST_CASE("fee tiers") {
    CHECK(FeeTier::from_code(500).rate == 0.0005);
    CHECK(FeeTier::from_code(500).spacing == 10);
    CHECK(FeeTier::from_code(3000).rate == 0.003);
    CHECK(FeeTier::from_code(3000).spacing == 60);
    CHECK(FeeTier::from_code(10000).rate == 0.01);
    CHECK(FeeTier::from_code(10000).spacing == 200);
    CHECK(FeeTier::from_code(3000, 1).spacing == 1);
    CHECK_THROWS_AS(FeeTier::from_code(100), InvalidArgument);
    CHECK_THROWS_AS(FeeTier::from_code(3000, 0), InvalidArgument);
}

TEST_CASE("range validation") {
    CHECK_NOTHROW(validate_range({-60, 60}, 60));
    CHECK_THROWS_AS(validate_range({60, -60}, 60), InvalidArgument);
    CHECK_THROWS_AS(validate_range({60, 60}, 60), InvalidArgument);
    CHECK_THROWS_AS(validate_range({-50, 60}, 60), InvalidArgument);
    const TickRange f = full_range(60);
    CHECK(f.upper == 887220);
    CHECK(f.lower == -887220);
    CHECK_NOTHROW(validate_range(f, 60));
}

// ============================================================================
// fee growth
// ============================================================================

namespace {

// Walks the current tick one step at a time, crossing initialized ticks like
// the pool does, and accrues random amounts between moves. The oracle
// credits each accrual to every range holding the current tick.
template <class V>
struct Walk {
    FeeGrowthAccumulator<V> acc;
    int current = 0;

    void step_to(int target) {
        while (current < target) {
            ++current;
            acc.cross(current);
        }
        while (current > target) {
            acc.cross(current);
            --current;
        }
    }
};

bool in_range(const TickRange& r, int t) { return r.lower <= t && t < r.upper; }

}  // namespace

TEST_CASE("fee_growth_inside trivial cases") {
    FeeGrowthAccumulator<double> acc;
    acc.initialize_tick(-10, 0);
    acc.initialize_tick(10, 0);
    auto g = fee_growth_inside(TickRange{-10, 10}, 0, acc, 10);
    CHECK(g.token0 == 0);
    CHECK(g.token1 == 0);

    acc.accrue(Token::Zero, 0.5);
    acc.accrue(Token::One, 2.25);
    g = fee_growth_inside(TickRange{-10, 10}, 3, acc, 1);
    CHECK(g.token0 == acc.global().token0);
    CHECK(g.token1 == acc.global().token1);

    CHECK_THROWS_AS(fee_growth_inside(TickRange{10, -10}, 0, acc, 10), InvalidArgument);
    CHECK_THROWS_AS(fee_growth_inside(TickRange{-10, 15}, 0, acc, 10), InvalidArgument);
}

TEST_CASE("fee_growth_inside matches an event replay") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> tick(-40, 40);
    std::uniform_real_distribution<double> amt(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
        Walk<double> w;
        w.current = tick(rng);
        // ranges opened at the start
        std::vector<TickRange> ranges;
        for (int k = 0; k < 5; ++k) {
            int a = tick(rng), b = tick(rng);
            if (a == b) continue;
            ranges.push_back({std::min(a, b), std::max(a, b)});
        }
        for (const TickRange& r : ranges) {
            w.acc.initialize_tick(r.lower, w.current);
            w.acc.initialize_tick(r.upper, w.current);
        }
        const double L = 1 + amt(rng);
        std::vector<double> credited0(ranges.size(), 0), credited1(ranges.size(), 0);
        for (int step = 0; step < 60; ++step) {
            w.step_to(tick(rng));
            const double f0 = amt(rng) * L, f1 = amt(rng) * L;
            w.acc.accrue(Token::Zero, f0 / L);
            w.acc.accrue(Token::One, f1 / L);
            for (std::size_t i = 0; i < ranges.size(); ++i) {
                if (in_range(ranges[i], w.current)) {
                    credited0[i] += f0;
                    credited1[i] += f1;
                }
            }
        }
        for (std::size_t i = 0; i < ranges.size(); ++i) {
            const auto g = w.acc.inside(ranges[i], w.current);
            CHECK(g.token0 >= 0);
            CHECK(g.token1 >= 0);
            CHECK(std::abs(g.token0 * L - credited0[i]) <= 1e-9 * std::max(1.0, credited0[i]));
            CHECK(std::abs(g.token1 * L - credited1[i]) <= 1e-9 * std::max(1.0, credited1[i]));
        }
    }
}

TEST_CASE("tiling ranges sum to global growth") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> amt(0, 2);
    const std::vector<int> edges = {-50, -20, -3, 0, 7, 30, 50};
    Walk<double> w;
    for (int e : edges) w.acc.initialize_tick(e, w.current);
    std::uniform_int_distribution<int> tick(-50, 49);
    for (int step = 0; step < 300; ++step) {
        w.step_to(tick(rng));
        w.acc.accrue(Token::Zero, amt(rng));
        w.acc.accrue(Token::One, amt(rng));
    }
    double s0 = 0, s1 = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto g = w.acc.inside({edges[i], edges[i + 1]}, w.current);
        s0 += g.token0;
        s1 += g.token1;
    }
    CHECK(s0 == doctest::Approx(w.acc.global().token0).epsilon(1e-12));
    CHECK(s1 == doctest::Approx(w.acc.global().token1).epsilon(1e-12));
}

TEST_CASE("global accumulators never decrease") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> amt(0, 1);
    FeeGrowthAccumulator<double> acc;
    double prev0 = 0, prev1 = 0;
    for (int i = 0; i < 1000; ++i) {
        acc.accrue(Token::Zero, amt(rng));
        acc.accrue(Token::One, amt(rng));
        CHECK(acc.global().token0 >= prev0);
        CHECK(acc.global().token1 >= prev1);
        prev0 = acc.global().token0;
        prev1 = acc.global().token1;
    }
}

TEST_CASE("fixed-point mode agrees with the real-valued accumulator") {
    CHECK(from_x128(to_x128(0)) == 0);
    CHECK(from_x128(to_x128(1.5)) == 1.5);
    CHECK(from_x128(to_x128(0.1)) == 0.1);
    CHECK(from_x128(to_x128(12345.678)) == 12345.678);
    CHECK_THROWS_AS(to_x128(-1), InvalidArgument);

    // outside snapshots taken above the current tick start at zero, so the
    // differences go through modular wrap-around before landing back
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> amt(0, 1);
    std::uniform_int_distribution<int> tick(-20, 20);
    Walk<double> wd;
    Walk<FixedX128> wx;
    const TickRange r{-5, 8};
    for (int step = 0; step < 100; ++step) {
        const int t = tick(rng);
        wd.step_to(t);
        wx.step_to(t);
        if (step == 10) {
            wd.acc.initialize_tick(r.lower, wd.current);
            wd.acc.initialize_tick(r.upper, wd.current);
            wx.acc.initialize_tick(r.lower, wx.current);
            wx.acc.initialize_tick(r.upper, wx.current);
        }
        // dyadic amounts so both representations are exact
        const double a = std::ldexp(std::floor(amt(rng) * 1024), -10);
        wd.acc.accrue(Token::Zero, a);
        wx.acc.accrue(Token::Zero, to_x128(a));
    }
    const auto gd = wd.acc.inside(r, wd.current);
    const auto gx = wx.acc.inside(r, wx.current);
    CHECK(from_x128(gx.token0) == gd.token0);

    // explicit wrap: outside larger than global by construction
    GrowthPair<FixedX128> global{to_x128(1), to_x128(1)};
    GrowthPair<FixedX128> lower{to_x128(3), to_x128(0)};
    GrowthPair<FixedX128> upper{to_x128(0), to_x128(0)};
    const auto g = fee_growth_inside(TickRange{0, 10}, 20, global, lower, upper);
    // below = lower outside (3), above = global - upper (1): 1 - 3 - 1 wraps
    const FixedX128 expect = FixedX128(0) - to_x128(3);
    CHECK(g.token0 == expect);
    CHECK(g.token0 + to_x128(3) == FixedX128(0));
}
