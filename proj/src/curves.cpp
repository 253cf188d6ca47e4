#include "clmm/curves.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "clmm/errors.hpp"

namespace clmm {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + " must be positive and finite, got " +
                              std::to_string(v));
    }
}

}  // namespace

RangeBounds RangeBounds::make(double lower, double upper) {
    require_positive(lower, "range lower bound");
    require_positive(upper, "range upper bound");
    if (!(lower < upper)) {
        throw InvalidArgument("range lower bound must be below the upper bound");
    }
    return RangeBounds{lower, upper};
}

double RangeBounds::conversion_ratio() const { return std::sqrt(lower) * std::sqrt(upper); }

double hodl_value(double x, const Holdings& at_entry) {
    require_positive(x, "exchange ratio");
    return at_entry.value_at(x);
}

double cpamm_value(double x) {
    require_positive(x, "exchange ratio");
    return 2.0 * std::sqrt(x);
}

double cpamm_il(double x) {
    require_positive(x, "exchange ratio");
    // 2*sqrt(x) - x - 1 = -(sqrt(x) - 1)^2, which keeps the sign exact.
    const double d = std::sqrt(x) - 1.0;
    return -0.5 * d * d;
}

double clamm_value(double x, const RangeBounds& r, double n0) {
    require_positive(x, "exchange ratio");
    require_positive(n0, "notional factor");
    RangeBounds::make(r.lower, r.upper);
    if (x < r.lower) return n0 * x;
    if (x > r.upper) return n0 * r.conversion_ratio();

    const double s0 = std::sqrt(r.lower);
    const double s1 = std::sqrt(r.upper);
    const double sx = std::sqrt(x);
    const double width = s1 - s0;
    return n0 * (s0 * s1 * (sx - s0) / width + s0 * sx * (s1 - sx) / width);
}

Holdings clamm_holdings(double x, const RangeBounds& r, double n0) {
    require_positive(x, "exchange ratio");
    require_positive(n0, "notional factor");
    RangeBounds::make(r.lower, r.upper);
    if (x < r.lower) return Holdings{n0, 0.0};
    if (x > r.upper) return Holdings{0.0, n0 * r.conversion_ratio()};

    const double s0 = std::sqrt(r.lower);
    const double s1 = std::sqrt(r.upper);
    const double sx = std::sqrt(x);
    const double width = s1 - s0;
    return Holdings{
        n0 * (s0 / sx) * (s1 - sx) / width,
        n0 * s0 * s1 * (sx - s0) / width,
    };
}

double clamm_il(double x, const RangeBounds& range, double entry) {
    require_positive(entry, "entry ratio");
    const Holdings h = clamm_holdings(entry, range, 1.0);
    const double value = clamm_value(x, range, 1.0);
    return (value - h.value_at(x)) / h.value_at(entry);
}

double notional_from_liquidity(double liquidity, const RangeBounds& r) {
    if (!(liquidity >= 0)) throw InvalidArgument("liquidity must be nonnegative");
    RangeBounds::make(r.lower, r.upper);
    return liquidity * (std::sqrt(r.upper) - std::sqrt(r.lower)) / r.conversion_ratio();
}

double liquidity_from_notional(double n0, const RangeBounds& r) {
    if (!(n0 >= 0)) throw InvalidArgument("notional factor must be nonnegative");
    RangeBounds::make(r.lower, r.upper);
    return n0 * r.conversion_ratio() / (std::sqrt(r.upper) - std::sqrt(r.lower));
}

LeverageRequirements leverage_requirements(const RangeBounds& range, double entry) {
    RangeBounds::make(range.lower, range.upper);
    require_positive(entry, "entry ratio");
    if (!range.contains(entry)) {
        throw InvalidArgument("entry ratio must lie inside the range");
    }
    LeverageRequirements out;
    // A full-range pool entered at `entry` holds sqrt(entry*x) numeraire and
    // sqrt(entry/x) risk per unit; the range position never goes below the
    // holdings the full-range pool would have at the opposite boundary.
    out.lower_boundary_numeraire = std::sqrt(range.lower / entry);
    out.upper_boundary_risk = std::sqrt(entry / range.upper);
    out.numeraire_collateral = 1.0 - out.lower_boundary_numeraire;
    out.risk_collateral = 1.0 - out.upper_boundary_risk;
    constexpr double inf = std::numeric_limits<double>::infinity();
    out.down_leverage = out.numeraire_collateral > 0 ? 1.0 / out.numeraire_collateral : inf;
    out.up_leverage = out.risk_collateral > 0 ? 1.0 / out.risk_collateral : inf;
    return out;
}

double geometric_mean_price(double before, double after) {
    require_positive(before, "price");
    require_positive(after, "price");
    return std::sqrt(before) * std::sqrt(after);
}

}  // namespace clmm
