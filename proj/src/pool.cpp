#include "clmm/pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clmm {

namespace {

const double kMinSqrtPrice = tick_to_sqrt_price(kMinTick);
const double kMaxSqrtPrice = tick_to_sqrt_price(kMaxTick);

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + " must be positive and finite");
    }
}

int tick_for_sqrt_price(double sqrt_price, int lo, int hi) {
    const int t = price_to_tick(sqrt_price * sqrt_price);
    return std::clamp(t, lo, hi);
}

}  // namespace

double SwapResult::execution_price() const {
    if (direction == Direction::ZeroForOne) {
        return amount_in > 0 ? amount_out / amount_in : 0.0;
    }
    return amount_out > 0 ? amount_in / amount_out : 0.0;
}

TokenAmounts amounts_for_liquidity(double liquidity, const TickRange& range, double sqrt_price,
                                   int tick) {
    const double sl = tick_to_sqrt_price(range.lower);
    const double su = tick_to_sqrt_price(range.upper);
    if (tick < range.lower) {
        return {liquidity * (1.0 / sl - 1.0 / su), 0.0};
    }
    if (tick < range.upper) {
        const double s = std::clamp(sqrt_price, sl, su);
        return {liquidity * (1.0 / s - 1.0 / su), liquidity * (s - sl)};
    }
    return {0.0, liquidity * (su - sl)};
}

// ============================================================================
// PoolState
// ============================================================================

PoolState::PoolState(FeeTier tier, double initial_price) : tier_(tier) {
    require_positive(initial_price, "initial price");
    if (tier_.rate < 0 || tier_.rate >= 1) throw InvalidArgument("fee rate must lie in [0, 1)");
    tick_ = price_to_tick(initial_price);
    sqrt_price_ = std::sqrt(initial_price);
}

GrowthPair<double> PoolState::fee_growth_inside(const TickRange& range) const {
    return growth_.inside(range, tick_);
}

void PoolState::update_position_fees(PoolPosition& p) {
    // inside growth is monotone in exact arithmetic; the double subtraction
    // can dip by rounding, so never credit a negative delta
    const GrowthPair<double> inside = fee_growth_inside(p.range);
    GrowthPair<double>& last = p.growth_inside_last;
    const double f0 = std::max(0.0, inside.token0 - last.token0) * p.liquidity;
    const double f1 = std::max(0.0, inside.token1 - last.token1) * p.liquidity;
    p.owed0 += f0;
    p.owed1 += f1;
    p.fees0 += f0;
    p.fees1 += f1;
    last.token0 = std::max(last.token0, inside.token0);
    last.token1 = std::max(last.token1, inside.token1);
}

void PoolState::update_tick(int tick, double liquidity_delta, bool upper) {
    auto [it, inserted] = ticks_.try_emplace(tick);
    if (inserted) growth_.initialize_tick(tick, tick_);
    TickInfo& info = it->second;
    info.liquidity_gross += liquidity_delta;
    info.liquidity_net += upper ? -liquidity_delta : liquidity_delta;
}

TokenAmounts PoolState::mint(const std::string& id, const TickRange& range, double liquidity) {
    validate_range(range, tier_.spacing);
    require_positive(liquidity, "liquidity");

    auto [it, created] = positions_.try_emplace(id);
    PoolPosition& pos = it->second;
    if (created) {
        pos.range = range;
    } else if (pos.range.lower != range.lower || pos.range.upper != range.upper) {
        throw InvalidArgument("position " + id + " already exists with a different range");
    }

    const bool was_empty = pos.liquidity == 0;
    update_tick(range.lower, liquidity, false);
    update_tick(range.upper, liquidity, true);
    if (was_empty) {
        ++ticks_[range.lower].references;
        ++ticks_[range.upper].references;
        pos.growth_inside_last = fee_growth_inside(range);
    } else {
        update_position_fees(pos);
    }
    pos.liquidity += liquidity;
    if (range.lower <= tick_ && tick_ < range.upper) liquidity_ += liquidity;

    const TokenAmounts amounts = amounts_for_liquidity(liquidity, range, sqrt_price_, tick_);
    reserve0_ += amounts.amount0;
    reserve1_ += amounts.amount1;
    return amounts;
}

TokenAmounts PoolState::burn(const std::string& id, double liquidity) {
    auto it = positions_.find(id);
    if (it == positions_.end()) throw InvalidArgument("unknown position " + id);
    PoolPosition& pos = it->second;
    if (!(liquidity >= 0)) throw InvalidArgument("burn liquidity must be nonnegative");
    if (liquidity > pos.liquidity * (1 + 1e-12)) {
        throw InvalidArgument("burn exceeds the liquidity of position " + id);
    }
    liquidity = std::min(liquidity, pos.liquidity);
    if (liquidity == 0) return {};

    update_position_fees(pos);
    const TickRange range = pos.range;
    const TokenAmounts amounts = amounts_for_liquidity(liquidity, range, sqrt_price_, tick_);
    if (range.lower <= tick_ && tick_ < range.upper) liquidity_ -= liquidity;
    pos.liquidity -= liquidity;
    update_tick(range.lower, -liquidity, false);
    update_tick(range.upper, -liquidity, true);
    if (pos.liquidity <= 0) {
        pos.liquidity = 0;
        for (int t : {range.lower, range.upper}) {
            auto tick_it = ticks_.find(t);
            if (--tick_it->second.references == 0) {
                ticks_.erase(tick_it);
                growth_.clear_tick(t);
            }
        }
    }
    if (liquidity_ < 0 && liquidity_ > -1e-9) liquidity_ = 0;

    reserve0_ -= amounts.amount0;
    reserve1_ -= amounts.amount1;
    pos.owed0 += amounts.amount0;
    pos.owed1 += amounts.amount1;
    return amounts;
}

std::pair<TokenAmounts, TokenAmounts> PoolState::collect(const std::string& id) {
    auto it = positions_.find(id);
    if (it == positions_.end()) throw InvalidArgument("unknown position " + id);
    PoolPosition& pos = it->second;
    if (pos.liquidity > 0) update_position_fees(pos);
    const TokenAmounts paid{pos.owed0, pos.owed1};
    const TokenAmounts fees{pos.fees0, pos.fees1};
    pos.owed0 = pos.owed1 = pos.fees0 = pos.fees1 = 0;
    return {paid, fees};
}

TokenAmounts PoolState::uncollected_fees(const std::string& id) const {
    auto it = positions_.find(id);
    if (it == positions_.end()) throw InvalidArgument("unknown position " + id);
    const PoolPosition& pos = it->second;
    TokenAmounts out{pos.fees0, pos.fees1};
    if (pos.liquidity > 0) {
        const GrowthPair<double> inside = fee_growth_inside(pos.range);
        out.amount0 += std::max(0.0, inside.token0 - pos.growth_inside_last.token0) * pos.liquidity;
        out.amount1 += std::max(0.0, inside.token1 - pos.growth_inside_last.token1) * pos.liquidity;
    }
    return out;
}

SwapResult PoolState::swap(double amount_in, Direction direction,
                           std::optional<double> price_limit) {
    if (!(amount_in >= 0)) throw InvalidArgument("swap amount must be nonnegative");
    const bool down = direction == Direction::ZeroForOne;

    SwapResult res;
    res.direction = direction;
    res.start_price = price();
    res.end_price = res.start_price;
    if (amount_in == 0) return res;

    double limit = 0;
    if (price_limit) {
        require_positive(*price_limit, "price limit");
        limit = std::sqrt(*price_limit);
        if (limit < kMinSqrtPrice) { limit = kMinSqrtPrice; res.clamped = true; }
        if (limit > kMaxSqrtPrice) { limit = kMaxSqrtPrice; res.clamped = true; }
        if (down ? limit >= sqrt_price_ : limit <= sqrt_price_) return res;
    } else if (std::isinf(amount_in)) {
        throw InvalidArgument("an unbounded swap needs a price limit");
    }

    // Only exact-input swaps can fail half way; work on a copy for those.
    std::optional<PoolState> scratch;
    if (!price_limit) scratch.emplace(*this);
    PoolState& s = scratch ? *scratch : *this;

    const double keep = 1.0 - tier_.rate;
    const Token in_token = input_token(direction);
    double remaining = amount_in;

    while (remaining > 0) {
        if (price_limit && s.sqrt_price_ == limit) break;

        std::optional<int> next;
        if (down) {
            auto it = s.ticks_.upper_bound(s.tick_);
            if (it != s.ticks_.begin()) next = std::prev(it)->first;
        } else {
            auto it = s.ticks_.upper_bound(s.tick_);
            if (it != s.ticks_.end()) next = it->first;
        }
        if (!next && !price_limit) throw PartialFill(res);

        double target = next ? tick_to_sqrt_price(*next) : limit;
        bool at_tick = next.has_value();
        if (price_limit) {
            if (down ? limit > target : limit < target) {
                target = limit;
                at_tick = false;
            }
        }

        const double L = s.liquidity_;
        if (L > 0) {
            const double max_net = down ? L * (1.0 / target - 1.0 / s.sqrt_price_)
                                        : L * (target - s.sqrt_price_);
            const double available = remaining * keep;
            double gross, fee, out, new_sqrt;
            if (available >= max_net) {
                new_sqrt = target;
                gross = tier_.rate > 0 ? max_net / keep : max_net;
                fee = gross - max_net;
                remaining = std::max(0.0, remaining - gross);
            } else {
                new_sqrt = down ? 1.0 / (1.0 / s.sqrt_price_ + available / L)
                                : s.sqrt_price_ + available / L;
                gross = remaining;
                fee = gross - available;
                remaining = 0;
                at_tick = false;
            }
            if (new_sqrt == target) {
                out = down ? L * (s.sqrt_price_ - new_sqrt) : L * (1.0 / s.sqrt_price_ - 1.0 / new_sqrt);
            } else {
                // same amounts rearranged so small trades avoid cancellation
                out = down ? s.sqrt_price_ * available * new_sqrt
                           : available / (s.sqrt_price_ * new_sqrt);
            }
            s.sqrt_price_ = new_sqrt;
            if (fee > 0) s.growth_.accrue(in_token, fee / L);
            res.amount_in += gross;
            res.amount_out += out;
            res.fee_paid += fee;
            if (down) {
                s.reserve0_ += gross - fee;
                s.reserve1_ -= out;
                s.fees0_ += fee;
            } else {
                s.reserve1_ += gross - fee;
                s.reserve0_ -= out;
                s.fees1_ += fee;
            }
        } else {
            // Nothing to trade against: the price moves freely.
            s.sqrt_price_ = target;
        }

        if (at_tick) {
            const int t = *next;
            s.growth_.cross(t);
            const double net = s.ticks_.at(t).liquidity_net;
            s.liquidity_ += down ? -net : net;
            if (s.liquidity_ < 0 && s.liquidity_ > -1e-9) s.liquidity_ = 0;
            s.tick_ = down ? t - 1 : t;
            res.ticks_crossed.push_back(t);
        } else {
            const int lo = down ? (next ? *next : kMinTick) : s.tick_;
            const int hi = down ? s.tick_ : (next ? *next - 1 : kMaxTick);
            s.tick_ = tick_for_sqrt_price(s.sqrt_price_, lo, hi);
        }
    }

    res.end_price = s.price();
    if (scratch) *this = std::move(*scratch);
    return res;
}

SwapResult PoolState::arbitrage_to(double external_price) {
    require_positive(external_price, "external price");
    const double target = std::sqrt(external_price);
    if (target == sqrt_price_) {
        SwapResult res;
        res.start_price = res.end_price = price();
        return res;
    }
    const Direction d = target < sqrt_price_ ? Direction::ZeroForOne : Direction::OneForZero;
    return swap(std::numeric_limits<double>::infinity(), d, external_price);
}

// ============================================================================
// Replay
// ============================================================================

ReplayResult replay(PoolState& pool, const PricePath& path, const ReplayOptions& options) {
    ReplayResult out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double t = path.times[i];
        if (options.arbitrage) {
            SwapResult r = pool.arbitrage_to(path.prices[i]);
            if (!r.empty()) out.trades.push_back({i, t, TradeKind::Arbitrage, std::move(r)});
        }
        if (options.on_step) options.on_step(i, t, pool);
        if (options.noise_volume > 0) {
            SwapResult buy = pool.swap(options.noise_volume, Direction::OneForZero);
            const double back = buy.amount_out;
            out.trades.push_back({i, t, TradeKind::Noise, std::move(buy)});
            SwapResult sell = pool.swap(back, Direction::ZeroForOne);
            out.trades.push_back({i, t, TradeKind::Noise, std::move(sell)});
        }
    }
    return out;
}

}  // namespace clmm
