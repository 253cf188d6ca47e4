#pragma once

#include <cstddef>
#include <vector>

namespace clmm {

// Timestamped positive prices with strictly increasing timestamps (seconds).
// Carries both simulated paths and the pool exchange ratio derived from
// hourly USD feeds.
struct PricePath {
    std::vector<double> times;
    std::vector<double> prices;

    // Throws InvalidArgument on size mismatch, non-increasing time or a
    // non-positive price.
    static PricePath make(std::vector<double> times, std::vector<double> prices);

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    double front_time() const { return times.front(); }
    double back_time() const { return times.back(); }

    // Index of the sample nearest to t (ties toward the earlier sample), or
    // npos when the nearest sample lies more than `max_gap` away.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t nearest_index(double t, double max_gap) const;
};

}  // namespace clmm
