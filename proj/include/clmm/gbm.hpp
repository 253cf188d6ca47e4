#pragma once

#include <cstdint>
#include <vector>

#include "clmm/price_path.hpp"

namespace clmm {

inline constexpr double kSecondsPerYear = 365.0 * 86400.0;

// Geometric Brownian motion: log-increments are i.i.d. normal with mean
// (drift - volatility^2/2)*step and variance volatility^2*step. Drift and
// volatility are per year; horizon and step are in years.
struct GbmSpec {
    double s0 = 1.0;
    double drift = 0.0;
    double volatility = 0.8;
    double horizon = 1.0;
    double step = 1.0 / 365.0;
    std::size_t count = 1;
    std::uint64_t seed = 42;
    double start_time = 0.0;  // seconds of the first sample

    // Throws InvalidArgument on non-positive s0/step/horizon, negative
    // volatility, zero count or a horizon that is not a whole number of steps.
    void validate() const;
    std::size_t steps() const;
};

// Path `index` of the family described by `spec`. Each path draws from its
// own engine seeded with (seed, index), so a path does not depend on how
// many siblings are generated. Timestamps are whole seconds.
PricePath gbm_path(const GbmSpec& spec, std::size_t index);

std::vector<PricePath> generate_gbm_paths(const GbmSpec& spec);

}  // namespace clmm
