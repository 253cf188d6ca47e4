#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <type_traits>

namespace clmm {

// ============================================================================
// Ticks and fee tiers
// ============================================================================

inline constexpr int kMaxTick = 887272;
inline constexpr int kMinTick = -kMaxTick;
inline constexpr double kTickBase = 1.0001;

// floor(log(p) / log(1.0001)); exact powers of the base map onto their tick.
int price_to_tick(double price);

// 1.0001^tick. Throws InvalidArgument when |tick| exceeds kMaxTick.
double tick_to_price(int tick);
double tick_to_sqrt_price(int tick);

enum class Token { Zero, One };

struct FeeTier {
    int code = 3000;     // 500, 3000 or 10000
    double rate = 0.003; // fraction of the input amount
    int spacing = 60;

    // Default spacings 10 / 60 / 200; `spacing` overrides when given.
    static FeeTier from_code(int code, std::optional<int> spacing = std::nullopt);
    // A fee-free tier for analytic tests. Not a protocol tier.
    static FeeTier zero_fee(int spacing = 1);
};

struct TickRange {
    int lower = 0;
    int upper = 0;
};

// Throws InvalidArgument on inverted, out-of-bound or misaligned ranges.
void validate_range(const TickRange& range, int spacing);

// Widest range whose ticks are multiples of `spacing`.
TickRange full_range(int spacing);

// ============================================================================
// Fee-growth accounting
// ============================================================================

// 256-bit unsigned fixed point with 128 fractional bits. Arithmetic wraps
// modulo 2^256 so differences behave like the on-chain two's-complement ones.
using FixedX128 = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<
    256, 256, boost::multiprecision::unsigned_magnitude, boost::multiprecision::unchecked, void>>;

FixedX128 to_x128(double value);
double from_x128(const FixedX128& value);

template <class V>
struct GrowthPair {
    V token0{};
    V token1{};

    V& operator[](Token t) { return t == Token::Zero ? token0 : token1; }
    const V& operator[](Token t) const { return t == Token::Zero ? token0 : token1; }
};

// Fee growth per unit of liquidity inside [lower, upper) given the current
// tick and the outside snapshots of both boundary ticks.
template <class V>
GrowthPair<V> fee_growth_inside(const TickRange& range, int current, const GrowthPair<V>& global,
                                const GrowthPair<V>& lower_outside,
                                const GrowthPair<V>& upper_outside) {
    GrowthPair<V> out;
    for (Token t : {Token::Zero, Token::One}) {
        const V below = current >= range.lower ? lower_outside[t] : V(global[t] - lower_outside[t]);
        const V above = current < range.upper ? upper_outside[t] : V(global[t] - upper_outside[t]);
        V inside = global[t] - below - above;
        if constexpr (std::is_floating_point_v<V>) {
            // rounding residue of an exact zero
            if (inside < V(0)) inside = V(0);
        }
        out[t] = inside;
    }
    return out;
}

// Global accumulators plus the per-tick "outside" snapshots. Mutated only by
// the pool that owns it.
template <class V>
class FeeGrowthAccumulator {
public:
    const GrowthPair<V>& global() const { return global_; }

    // Credits `per_liquidity` of token `t` to every unit of active liquidity.
    void accrue(Token t, const V& per_liquidity) { global_[t] += per_liquidity; }

    bool initialized(int tick) const { return outside_.count(tick) != 0; }

    // Growth below a tick at or under the current tick is attributed to the
    // outside snapshot, matching the protocol's initialization rule.
    void initialize_tick(int tick, int current) {
        if (initialized(tick)) return;
        outside_[tick] = tick <= current ? global_ : GrowthPair<V>{};
    }

    void clear_tick(int tick) { outside_.erase(tick); }

    void cross(int tick) {
        auto it = outside_.find(tick);
        if (it == outside_.end()) return;
        it->second.token0 = global_.token0 - it->second.token0;
        it->second.token1 = global_.token1 - it->second.token1;
    }

    GrowthPair<V> outside(int tick) const {
        auto it = outside_.find(tick);
        return it == outside_.end() ? GrowthPair<V>{} : it->second;
    }

    GrowthPair<V> inside(const TickRange& range, int current) const {
        return fee_growth_inside(range, current, global_, outside(range.lower), outside(range.upper));
    }

private:
    GrowthPair<V> global_{};
    std::map<int, GrowthPair<V>> outside_;
};

// Validating entry point: the range must be aligned to `spacing`.
template <class V>
GrowthPair<V> fee_growth_inside(const TickRange& range, int current,
                                const FeeGrowthAccumulator<V>& acc, int spacing) {
    validate_range(range, spacing);
    return acc.inside(range, current);
}

}  // namespace clmm
