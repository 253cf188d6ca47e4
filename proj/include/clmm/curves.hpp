#pragma once

// Closed-form value and holdings curves for constant-product and
// range-bounded (concentrated) AMM positions.
//
// Conventions: x is the exchange ratio of the risk asset expressed in the
// numeraire. Functions accept any positive scale for x; the classic unit
// normalization is x = 1 at entry.

namespace clmm {

struct RangeBounds {
    double lower = 0;
    double upper = 0;

    // Throws InvalidArgument unless 0 < lower < upper (finite).
    static RangeBounds make(double lower, double upper);

    // Geometric mid-point sqrt(lower*upper): the ratio at which a range
    // position converts its risk asset into numeraire when crossed.
    double conversion_ratio() const;
    bool contains(double x) const { return lower <= x && x <= upper; }
};

struct Holdings {
    double risk = 0;       // units of the risk asset
    double numeraire = 0;  // units of the numeraire

    double value_at(double x) const { return numeraire + risk * x; }
};

// HODL value of fixed holdings at ratio x.
double hodl_value(double x, const Holdings& at_entry);

// Full-range constant-product value per unit normalization: 2*sqrt(x).
double cpamm_value(double x);

// (AMM - HODL)/HODL_0 for the full-range pool entered at x = 1.
double cpamm_il(double x);

// Three-branch value of a range position with notional factor n0.
// Boundary points use the in-range branch.
double clamm_value(double x, const RangeBounds& range, double n0);

Holdings clamm_holdings(double x, const RangeBounds& range, double n0);

// IL of a range position entered at `entry` against HODL of its entry
// composition, as a fraction of the entry value.
double clamm_il(double x, const RangeBounds& range, double entry);

// Conversions between the notional factor n0 and the protocol liquidity
// constant L for the same range.
double notional_from_liquidity(double liquidity, const RangeBounds& range);
double liquidity_from_notional(double n0, const RangeBounds& range);

struct LeverageRequirements {
    // Fraction of the virtual full-range numeraire holdings that must be
    // posted: 1 - sqrt(lower/entry).
    double numeraire_collateral = 0;
    // Fraction of the virtual full-range risk holdings that must be posted:
    // 1 - sqrt(entry/upper).
    double risk_collateral = 0;
    double down_leverage = 0;  // 1 / numeraire_collateral
    double up_leverage = 0;    // 1 / risk_collateral
    // Guaranteed residual holdings at the boundaries, as fractions of the
    // virtual holdings at entry.
    double lower_boundary_numeraire = 0;
    double upper_boundary_risk = 0;
};

// Requires lower <= entry <= upper. A boundary entry gives infinite leverage
// on that side.
LeverageRequirements leverage_requirements(const RangeBounds& range, double entry);

// sqrt(before*after): the average execution price of an arbitrage that
// moves a fee-free constant-product pool from `before` to `after`.
double geometric_mean_price(double before, double after);

}  // namespace clmm
