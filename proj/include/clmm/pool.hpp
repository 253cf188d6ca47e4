#pragma once

// Tick-level concentrated-liquidity pool simulator.
//
// Prices are token1 per token0. Token0 plays the risk asset and token1 the
// numeraire throughout the library. All amounts are real-valued; fee growth
// uses the real-valued accumulator.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clmm/errors.hpp"
#include "clmm/price_path.hpp"
#include "clmm/tick_math.hpp"

namespace clmm {

enum class Direction {
    ZeroForOne,  // token0 in, price falls
    OneForZero,  // token1 in, price rises
};

inline Token input_token(Direction d) { return d == Direction::ZeroForOne ? Token::Zero : Token::One; }

struct SwapResult {
    Direction direction = Direction::ZeroForOne;
    double amount_in = 0;   // gross input, fee included
    double amount_out = 0;
    double fee_paid = 0;    // in the input token, always rate * amount_in
    std::vector<int> ticks_crossed;
    double start_price = 0;
    double end_price = 0;
    bool clamped = false;   // target price lay beyond the tick bounds

    bool empty() const { return amount_in == 0 && amount_out == 0; }

    // Token1 paid or received per token0, from the trader's side.
    double execution_price() const;
};

// A swap ran out of initialized liquidity. The pool is left untouched;
// `filled` describes what could have been executed.
class PartialFill : public Error {
public:
    explicit PartialFill(SwapResult filled)
        : Error("swap exhausted all initialized liquidity"), filled_(std::move(filled)) {}

    const SwapResult& filled() const noexcept { return filled_; }

private:
    SwapResult filled_;
};

struct TokenAmounts {
    double amount0 = 0;
    double amount1 = 0;
};

// Token amounts backing `liquidity` over [lower, upper) when the pool sits at
// `sqrt_price` with current tick `tick`.
TokenAmounts amounts_for_liquidity(double liquidity, const TickRange& range, double sqrt_price,
                                   int tick);

struct TickInfo {
    double liquidity_gross = 0;
    double liquidity_net = 0;
    int references = 0;  // positions using this tick as a boundary
};

struct PoolPosition {
    TickRange range;
    double liquidity = 0;
    GrowthPair<double> growth_inside_last;
    double owed0 = 0;  // principal released by burns plus accrued fees
    double owed1 = 0;
    double fees0 = 0;  // fee part of owed, for attribution
    double fees1 = 0;
};

class PoolState {
public:
    PoolState(FeeTier tier, double initial_price);

    double price() const { return sqrt_price_ * sqrt_price_; }
    double sqrt_price() const { return sqrt_price_; }
    int current_tick() const { return tick_; }
    double active_liquidity() const { return liquidity_; }
    const FeeTier& fee_tier() const { return tier_; }
    const FeeGrowthAccumulator<double>& fee_growth() const { return growth_; }
    const std::map<int, TickInfo>& ticks() const { return ticks_; }
    const std::map<std::string, PoolPosition>& positions() const { return positions_; }

    // Principal held by the pool (fees excluded).
    double reserve0() const { return reserve0_; }
    double reserve1() const { return reserve1_; }
    // Fees collected into the accumulators so far, per token.
    double total_fees0() const { return fees0_; }
    double total_fees1() const { return fees1_; }

    // Adds liquidity to position `id` (created on first use) and returns the
    // tokens deposited. The range must be aligned to the tier spacing.
    TokenAmounts mint(const std::string& id, const TickRange& range, double liquidity);

    // Removes liquidity; released tokens join the position's owed balance.
    TokenAmounts burn(const std::string& id, double liquidity);

    // Pays out everything owed (principal released by burns plus fees).
    // Returns {amounts paid, fee part}.
    std::pair<TokenAmounts, TokenAmounts> collect(const std::string& id);

    // Fees the position has earned but not collected, including growth since
    // its last update.
    TokenAmounts uncollected_fees(const std::string& id) const;

    GrowthPair<double> fee_growth_inside(const TickRange& range) const;

    // Exact-input swap. Zero input is a no-op. With `price_limit` the swap
    // stops at that price; otherwise exhausting initialized liquidity throws
    // PartialFill.
    SwapResult swap(double amount_in, Direction direction,
                    std::optional<double> price_limit = std::nullopt);

    // Moves the internal price to `external_price` with the unique swap that
    // does so; frictionless infinitely-funded arbitrageur.
    SwapResult arbitrage_to(double external_price);

private:
    void update_position_fees(PoolPosition& p);
    void update_tick(int tick, double liquidity_delta, bool upper);

    FeeTier tier_;
    double sqrt_price_;
    int tick_;
    double liquidity_ = 0;
    std::map<int, TickInfo> ticks_;
    FeeGrowthAccumulator<double> growth_;
    std::map<std::string, PoolPosition> positions_;
    double reserve0_ = 0;
    double reserve1_ = 0;
    double fees0_ = 0;
    double fees1_ = 0;
};

// ============================================================================
// Replay
// ============================================================================

enum class TradeKind { Arbitrage, Noise };

struct TradeRecord {
    std::size_t step = 0;
    double time = 0;
    TradeKind kind = TradeKind::Arbitrage;
    SwapResult swap;
};

struct ReplayOptions {
    bool arbitrage = true;
    // Constant-volume model: token1 bought in then sold back at every step.
    double noise_volume = 0;
    // Called after the arbitrage of each step and before the noise volume,
    // e.g. to apply position events at the external price.
    std::function<void(std::size_t step, double time, PoolState&)> on_step;
};

struct ReplayResult {
    std::vector<TradeRecord> trades;
};

// Walks the path; at every point optionally arbitrages the pool to the
// external price, then applies the noise volume. Zero-size trades are not
// logged.
ReplayResult replay(PoolState& pool, const PricePath& path, const ReplayOptions& options = {});

}  // namespace clmm
