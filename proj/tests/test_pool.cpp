#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "clmm/curves.hpp"
#include "clmm/pool.hpp"

using namespace clmm;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// v2-like pool: one full-range position, 1 risk unit against 100 numeraire
// at price 100 (L = 10).
PoolState full_range_pool(FeeTier tier, double price = 100, double L = 10) {
    PoolState p(tier, price);
    p.mint("lp", full_range(tier.spacing), L);
    return p;
}

PoolState layered_pool(FeeTier tier) {
    PoolState p(tier, 1.05);
    p.mint("a", {-1200, 1200}, 1000);
    p.mint("b", {0, 600}, 500);
    p.mint("c", {-3000, -600}, 300);
    return p;
}

double net_liquidity_below(const PoolState& p) {
    double s = 0;
    for (const auto& [t, info] : p.ticks()) {
        if (t <= p.current_tick()) s += info.liquidity_net;
    }
    return s;
}

}  // namespace

TEST_CASE("zero swap is the identity") {
    PoolState p = layered_pool(FeeTier::from_code(3000));
    const double price = p.price(), r0 = p.reserve0(), r1 = p.reserve1();
    const SwapResult r = p.swap(0, Direction::ZeroForOne);
    CHECK(r.empty());
    CHECK(r.fee_paid == 0);
    CHECK(p.price() == price);
    CHECK(p.reserve0() == r0);
    CHECK(p.reserve1() == r1);
    CHECK(p.fee_growth().global().token0 == 0);
}

TEST_CASE("small swap inside one tick matches constant product on virtual reserves") {
    for (Direction d : {Direction::ZeroForOne, Direction::OneForZero}) {
        const FeeTier tier = FeeTier::from_code(3000, 1);
        PoolState p(tier, 1.0);
        const double L = 1e6;
        p.mint("lp", {-10, 10}, L);
        // within tick 0
        // long double keeps the reserve difference clear of cancellation
        const long double sp = p.sqrt_price();
        const long double x = L / sp, y = L * sp, k = x * y;
        const double amount = 1.0;
        const long double net = amount * (1 - static_cast<long double>(tier.rate));
        const SwapResult r = p.swap(amount, d);
        const double expected =
            static_cast<double>(d == Direction::ZeroForOne ? y - k / (x + net) : x - k / (y + net));
        CHECK(rel(r.amount_out, expected) < 1e-12);
        CHECK(r.ticks_crossed.empty());
        CHECK(rel(r.fee_paid, tier.rate * amount) < 1e-12);
        const double vx = L / p.sqrt_price(), vy = L * p.sqrt_price();
        CHECK(rel(vx * vy, static_cast<double>(k)) < 1e-12);
    }
}

TEST_CASE("swap across one tick equals two sub-swaps split at the tick") {
    for (int code : {500, 3000, 10000}) {
        FeeTier tier = FeeTier::from_code(code, 60);
        PoolState whole = layered_pool(tier);
        PoolState split = layered_pool(tier);
        const double amount = 50;
        const SwapResult w = whole.swap(amount, Direction::ZeroForOne);
        REQUIRE(w.ticks_crossed.size() == 1);
        CHECK(w.ticks_crossed[0] == 0);

        const SwapResult a = split.swap(amount, Direction::ZeroForOne, tick_to_price(0));
        CHECK(a.end_price == doctest::Approx(tick_to_price(0)).epsilon(1e-15));
        const SwapResult b = split.swap(amount - a.amount_in, Direction::ZeroForOne);
        CHECK(rel(a.amount_out + b.amount_out, w.amount_out) < 1e-9);
        CHECK(rel(a.fee_paid + b.fee_paid, w.fee_paid) < 1e-9);
        CHECK(rel(split.price(), whole.price()) < 1e-9);
        CHECK(rel(split.active_liquidity(), whole.active_liquidity()) < 1e-12);
    }
}

TEST_CASE("arbitrage 100 to 110 on a zero-fee full-range pool") {
    PoolState p = full_range_pool(FeeTier::zero_fee());
    const SwapResult r = p.arbitrage_to(110);
    CHECK(r.direction == Direction::OneForZero);
    CHECK(p.price() == doctest::Approx(110).epsilon(1e-12));
    CHECK(r.execution_price() == doctest::Approx(geometric_mean_price(100, 110)).epsilon(1e-9));
    CHECK(r.execution_price() == doctest::Approx(104.8809).epsilon(1e-6));
    // per unit of risk asset bought at the average price and sold at 110
    const double profit = 110 - r.execution_price();
    CHECK(profit == doctest::Approx(5.12).epsilon(1e-3));
    CHECK(std::abs(profit - 5.2) < 0.1);
    // v2 amounts
    CHECK(rel(r.amount_in, 10 * (std::sqrt(110.0) - 10)) < 1e-9);
    CHECK(rel(r.amount_out, 10 * (0.1 - 1 / std::sqrt(110.0))) < 1e-9);
}

TEST_CASE("arbitrage to the current price is a zero-size trade") {
    PoolState p = full_range_pool(FeeTier::from_code(3000));
    const SwapResult r = p.arbitrage_to(p.price());
    CHECK(r.empty());
    CHECK(p.price() == doctest::Approx(100).epsilon(1e-15));
}

TEST_CASE("zero-fee round trip restores the reserves") {
    PoolState p = full_range_pool(FeeTier::zero_fee());
    const double r0 = p.reserve0(), r1 = p.reserve1();
    p.arbitrage_to(110);
    p.arbitrage_to(100);
    CHECK(rel(p.reserve0(), r0) < 1e-12);
    CHECK(rel(p.reserve1(), r1) < 1e-12);
    CHECK(p.price() == doctest::Approx(100).epsilon(1e-12));
}

TEST_CASE("zero-fee reserves depend only on the final price") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.7, 1.4);
    for (int trial = 0; trial < 50; ++trial) {
        PoolState a = layered_pool(FeeTier::zero_fee(60));
        PoolState b = layered_pool(FeeTier::zero_fee(60));
        std::vector<double> times, prices;
        for (int i = 0; i < 30; ++i) {
            times.push_back(i);
            prices.push_back(u(rng));
        }
        replay(a, PricePath::make(times, prices));
        b.arbitrage_to(prices.back());
        CHECK(std::abs(a.reserve0() - b.reserve0()) < 1e-8 * std::max(1.0, b.reserve0()));
        CHECK(std::abs(a.reserve1() - b.reserve1()) < 1e-8 * std::max(1.0, b.reserve1()));
        CHECK(a.current_tick() == b.current_tick());
    }
}

TEST_CASE("replay basics") {
    PoolState p = full_range_pool(FeeTier::from_code(3000));
    CHECK(replay(p, PricePath::make({0}, {100})).trades.empty());

    PoolState q = full_range_pool(FeeTier::from_code(3000));
    PoolState r = full_range_pool(FeeTier::from_code(3000));
    const auto log = replay(q, PricePath::make({0, 3600}, {100, 93}));
    const SwapResult direct = r.arbitrage_to(93);
    REQUIRE(log.trades.size() == 1);
    CHECK(log.trades[0].swap.amount_in == direct.amount_in);
    CHECK(log.trades[0].swap.amount_out == direct.amount_out);
    CHECK(q.price() == r.price());
}

TEST_CASE("replay fees equal rate times arbitrage volume") {
    std::mt19937_64 rng(47);
    std::normal_distribution<double> z(0, 0.03);
    const FeeTier tier = FeeTier::from_code(3000, 60);
    PoolState p = layered_pool(tier);
    std::vector<double> times, prices;
    double x = 1.05;
    for (int i = 0; i < 200; ++i) {
        times.push_back(3600.0 * i);
        prices.push_back(x);
        x *= std::exp(z(rng));
        x = std::min(std::max(x, 0.8), 1.3);
    }
    const auto log = replay(p, PricePath::make(times, prices));
    double vol0 = 0, vol1 = 0;
    for (const auto& t : log.trades) {
        (t.swap.direction == Direction::ZeroForOne ? vol0 : vol1) += t.swap.amount_in;
        CHECK(rel(t.swap.fee_paid, tier.rate * t.swap.amount_in) < 1e-9);
    }
    CHECK(rel(p.total_fees0(), tier.rate * vol0) < 1e-9);
    CHECK(rel(p.total_fees1(), tier.rate * vol1) < 1e-9);
}

TEST_CASE("round trips with fees increase fee growth") {
    PoolState p = layered_pool(FeeTier::from_code(3000, 60));
    double g0 = 0, g1 = 0;
    for (int i = 0; i < 5; ++i) {
        p.arbitrage_to(1.2);
        p.arbitrage_to(1.05);
        CHECK(p.price() == doctest::Approx(1.05).epsilon(1e-12));
        CHECK(p.fee_growth().global().token0 > g0);
        CHECK(p.fee_growth().global().token1 > g1);
        g0 = p.fee_growth().global().token0;
        g1 = p.fee_growth().global().token1;
    }
}

TEST_CASE("exhausting liquidity raises a partial fill and leaves the pool untouched") {
    PoolState p(FeeTier::from_code(3000), 1.0);
    p.mint("lp", {-600, 600}, 100);
    const double price = p.price(), r0 = p.reserve0(), r1 = p.reserve1();
    try {
        p.swap(1e6, Direction::ZeroForOne);
        FAIL("expected a partial fill");
    } catch (const PartialFill& e) {
        CHECK(e.filled().amount_in > 0);
        CHECK(e.filled().amount_in < 1e6);
        CHECK(e.filled().amount_out == doctest::Approx(r1).epsilon(1e-9));
    }
    CHECK(p.price() == price);
    CHECK(p.reserve0() == r0);
    CHECK(p.reserve1() == r1);
    // an arbitrage beyond the liquidity still moves the price
    p.arbitrage_to(0.5);
    CHECK(p.price() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.reserve1() == doctest::Approx(0).scale(1));
}

TEST_CASE("token conservation and liquidity bookkeeping") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> amt(0.1, 40);
    std::bernoulli_distribution coin(0.5);
    PoolState p = layered_pool(FeeTier::from_code(3000, 60));
    for (int i = 0; i < 500; ++i) {
        const Direction d = coin(rng) ? Direction::ZeroForOne : Direction::OneForZero;
        const double r0 = p.reserve0(), r1 = p.reserve1();
        const double f0 = p.total_fees0(), f1 = p.total_fees1();
        SwapResult r;
        try {
            r = p.swap(amt(rng), d);
        } catch (const PartialFill&) {
            continue;
        }
        if (d == Direction::ZeroForOne) {
            CHECK(rel(p.reserve0() - r0 + p.total_fees0() - f0, r.amount_in) < 1e-9);
            CHECK(std::abs((r1 - p.reserve1()) - r.amount_out) <= 1e-9 * std::max(1.0, r.amount_out));
        } else {
            CHECK(rel(p.reserve1() - r1 + p.total_fees1() - f1, r.amount_in) < 1e-9);
            CHECK(std::abs((r0 - p.reserve0()) - r.amount_out) <= 1e-9 * std::max(1.0, r.amount_out));
        }
        CHECK(p.reserve0() >= -1e-9);
        CHECK(p.reserve1() >= -1e-9);
        CHECK(std::abs(p.active_liquidity() - net_liquidity_below(p)) < 1e-9);
        // a price sitting exactly on a tick crossed downward keeps the tick below
        const int pt = price_to_tick(p.price());
        CHECK((p.current_tick() == pt || p.current_tick() == pt - 1));
    }
}

TEST_CASE("mint, burn and collect") {
    PoolState p(FeeTier::from_code(3000, 60), 1.0);
    const TokenAmounts in = p.mint("lp", {-600, 600}, 1000);
    const TokenAmounts expect = amounts_for_liquidity(1000, {-600, 600}, 1.0, 0);
    CHECK(in.amount0 == expect.amount0);
    CHECK(in.amount1 == expect.amount1);
    p.arbitrage_to(1.03);
    p.arbitrage_to(1.0);
    const TokenAmounts fees = p.uncollected_fees("lp");
    CHECK(fees.amount0 > 0);
    CHECK(fees.amount1 > 0);
    CHECK(fees.amount0 == doctest::Approx(p.total_fees0()).epsilon(1e-12));
    const TokenAmounts out = p.burn("lp", 1000);
    CHECK(out.amount0 == doctest::Approx(in.amount0).epsilon(1e-9));
    const auto [paid, fee_part] = p.collect("lp");
    CHECK(paid.amount0 == doctest::Approx(out.amount0 + fees.amount0).epsilon(1e-12));
    CHECK(fee_part.amount1 == doctest::Approx(fees.amount1).epsilon(1e-12));
    CHECK_THROWS_AS(p.burn("lp", 1), InvalidArgument);
    CHECK_THROWS_AS(p.mint("x", {-50, 600}, 1), InvalidArgument);
}
