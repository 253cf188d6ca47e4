#include "clmm/tick_math.hpp"

#include <cmath>
#include <string>

#include "clmm/errors.hpp"

namespace clmm {

namespace {

const double kLogBase = std::log(kTickBase);

// Tolerance in tick units; one tick is a 1e-4 relative price step, so this
// forgives ~1e-12 relative error in the supplied price.
constexpr double kTickSlack = 1e-8;

}  // namespace

int price_to_tick(double price) {
    if (!(price > 0) || !std::isfinite(price)) {
        throw InvalidArgument("price must be positive and finite");
    }
    const double ticks = std::log(price) / kLogBase;
    const double t = std::floor(ticks + kTickSlack);
    if (t < kMinTick || t > kMaxTick) {
        throw InvalidArgument("price " + std::to_string(price) + " lies outside the tick bounds");
    }
    return static_cast<int>(t);
}

double tick_to_price(int tick) {
    if (tick < kMinTick || tick > kMaxTick) {
        throw InvalidArgument("tick " + std::to_string(tick) + " outside [-887272, 887272]");
    }
    return std::pow(kTickBase, tick);
}

double tick_to_sqrt_price(int tick) {
    if (tick < kMinTick || tick > kMaxTick) {
        throw InvalidArgument("tick " + std::to_string(tick) + " outside [-887272, 887272]");
    }
    return std::pow(kTickBase, 0.5 * tick);
}

FeeTier FeeTier::from_code(int code, std::optional<int> spacing) {
    FeeTier tier;
    tier.code = code;
    switch (code) {
        case 500: tier.rate = 0.0005; tier.spacing = 10; break;
        case 3000: tier.rate = 0.003; tier.spacing = 60; break;
        case 10000: tier.rate = 0.01; tier.spacing = 200; break;
        default: throw InvalidArgument("unknown fee tier " + std::to_string(code));
    }
    if (spacing) {
        if (*spacing <= 0) throw InvalidArgument("tick spacing must be positive");
        tier.spacing = *spacing;
    }
    return tier;
}

FeeTier FeeTier::zero_fee(int spacing) {
    if (spacing <= 0) throw InvalidArgument("tick spacing must be positive");
    return FeeTier{0, 0.0, spacing};
}

void validate_range(const TickRange& range, int spacing) {
    if (spacing <= 0) throw InvalidArgument("tick spacing must be positive");
    if (range.lower >= range.upper) {
        throw InvalidArgument("tick range is empty or inverted");
    }
    if (range.lower < kMinTick || range.upper > kMaxTick) {
        throw InvalidArgument("tick range exceeds the tick bounds");
    }
    if (range.lower % spacing != 0 || range.upper % spacing != 0) {
        throw InvalidArgument("tick range [" + std::to_string(range.lower) + ", " +
                              std::to_string(range.upper) + "] is not aligned to spacing " +
                              std::to_string(spacing));
    }
}

TickRange full_range(int spacing) {
    if (spacing <= 0) throw InvalidArgument("tick spacing must be positive");
    const int edge = (kMaxTick / spacing) * spacing;
    return TickRange{-edge, edge};
}

FixedX128 to_x128(double value) {
    if (!(value >= 0) || !std::isfinite(value)) {
        throw InvalidArgument("fixed-point growth must be a finite nonnegative value");
    }
    // Split into integer and fractional parts so 128 fractional bits survive.
    double whole = 0;
    const double frac = std::modf(value, &whole);
    if (whole >= std::ldexp(1.0, 64)) {
        throw InvalidArgument("fixed-point growth exceeds 2^64 per unit of liquidity");
    }
    FixedX128 out = FixedX128(static_cast<unsigned long long>(whole));
    out <<= 128;
    // 2^64 twice keeps every representable fractional bit.
    const double hi = std::floor(std::ldexp(frac, 64));
    const double lo = std::floor(std::ldexp(std::ldexp(frac, 64) - hi, 64));
    out += FixedX128(static_cast<unsigned long long>(hi)) << 64;
    out += FixedX128(static_cast<unsigned long long>(lo));
    return out;
}

double from_x128(const FixedX128& value) {
    const FixedX128 mask64 = (FixedX128(1) << 64) - 1;
    double out = 0;
    double scale = std::ldexp(1.0, 192 - 128);
    for (int shift = 192; shift >= 0; shift -= 64) {
        const auto limb = static_cast<unsigned long long>((value >> shift) & mask64);
        out += static_cast<double>(limb) * scale;
        scale = std::ldexp(scale, -64);
    }
    return out;
}

}  // namespace clmm
