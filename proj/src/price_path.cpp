#include "clmm/price_path.hpp"

#include <algorithm>
#include <cmath>

#include "clmm/errors.hpp"

namespace clmm {

PricePath PricePath::make(std::vector<double> times, std::vector<double> prices) {
    if (times.size() != prices.size()) {
        throw InvalidArgument("price path needs one price per timestamp");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(prices[i] > 0) || !std::isfinite(prices[i])) {
            throw InvalidArgument("price path contains a non-positive price");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw InvalidArgument("price path timestamps must be strictly increasing");
        }
    }
    return PricePath{std::move(times), std::move(prices)};
}

std::size_t PricePath::nearest_index(double t, double max_gap) const {
    if (times.empty()) return npos;
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    std::size_t best;
    if (it == times.end()) {
        best = times.size() - 1;
    } else if (it == times.begin()) {
        best = 0;
    } else {
        const auto hi = static_cast<std::size_t>(it - times.begin());
        const std::size_t lo = hi - 1;
        best = (t - times[lo]) <= (times[hi] - t) ? lo : hi;
    }
    return std::abs(times[best] - t) <= max_gap ? best : npos;
}

}  // namespace clmm
