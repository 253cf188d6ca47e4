#pragma once

// Recovers a position's token balances, internal price and tick from the
// liquidity constant, its boundary prices and the token ratio observed in a
// liquidity adjustment. Adjustments move both tokens in the same proportion
// as the position holds them, so the ratio pins down the in-range state.

#include <array>

namespace clmm {

enum class RatioConvention {
    Token1Share,  // r = y / (x + y)  (default)
    Token0Share,  // r = x / (x + y)
};

struct ObservedAdjustment {
    double liquidity = 0;  // L
    double price_a = 0;    // lower boundary price
    double price_b = 0;    // upper boundary price
    double ratio = 0;      // r, in [0, 1]
    RatioConvention convention = RatioConvention::Token1Share;

    // Throws InvalidArgument unless L > 0, 0 < price_a < price_b and
    // 0 <= ratio <= 1.
    void validate() const;
    // The ratio expressed as y / (x + y).
    double token1_share() const;
};

enum class BoundaryKind {
    InRange,
    AllToken0,  // y = 0: price sits at price_a
    AllToken1,  // x = 0: price sits at price_b
};

struct ReconstructedState {
    double x = 0;      // token0 amount
    double y = 0;      // token1 amount
    double price = 0;  // internal price, token1 per token0
    int tick = 0;
    BoundaryKind boundary = BoundaryKind::InRange;
};

// The nonnegative token0 root. Throws InconsistentObservation when no root
// (or more than one) is compatible with an in-range state.
double solve_token0(const ObservedAdjustment& obs);

// Token1 amount implied by the token0 amount on the same liquidity curve.
double solve_token1(double x, const ObservedAdjustment& obs);

// Internal price implied by the token0 amount.
double internal_price(double x, const ObservedAdjustment& obs);

// solve_token0 -> solve_token1 -> internal_price -> price_to_tick, then
// checks the result against the forward relations at `tolerance` relative.
ReconstructedState reconstruct(const ObservedAdjustment& obs, double tolerance = 1e-9);

namespace detail {

// Both roots of the token0 quadratic for a token1 share r in (0, 1), without
// any validation of price orientation. The "+" root comes first.
// Throws InconsistentObservation on a negative discriminant.
std::array<double, 2> token0_roots(double liquidity, double price_a, double price_b, double r);

}  // namespace detail

}  // namespace clmm
