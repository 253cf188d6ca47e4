#pragma once

// Monte Carlo scaling study: a full-range pool under drift-free GBM with
// arbitrage at every step and a constant noise volume per step. Measures
// the LP's IL and accrued fees at a set of horizons and fits power laws
// against the horizon.

#include <cstdint>
#include <ostream>
#include <vector>

#include "clmm/tick_math.hpp"

namespace clmm {

struct McSpec {
    double volatility = 0.8;  // per year
    double drift = 0.0;
    double step_days = 1.0;
    std::vector<int> horizons_days{7, 30, 91, 182, 365};
    std::size_t paths = 10000;
    std::uint64_t seed = 42;
    int fee_tier = 3000;
    double s0 = 1.0;
    double liquidity = 1000.0;
    // Token1 bought and sold back each step, as a fraction of the entry
    // value 2 L sqrt(s0).
    double noise_fraction = 0.01;

    void validate() const;  // throws InvalidArgument
};

struct HorizonStats {
    int horizon_days = 0;
    double median_abs_il = 0;  // fraction of HODL value
    double mean_il = 0;
    double median_fees = 0;    // fee value over entry value
    double mean_fees = 0;
};

struct McResult {
    std::vector<HorizonStats> horizons;
    // Least-squares slopes of log(median) against log(horizon); NaN when a
    // median is zero.
    double il_exponent = 0;
    double fee_exponent = 0;
};

McResult run_mc(const McSpec& spec);

// Slope of the ordinary least-squares line through (log x, log y).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_mc_csv(std::ostream& out, const McResult& result);
void write_mc_fit_csv(std::ostream& out, const McResult& result);

}  // namespace clmm
