#include "clmm/gbm.hpp"

#include <cmath>
#include <random>

#include "clmm/errors.hpp"

namespace clmm {

void GbmSpec::validate() const {
    if (!(s0 > 0) || !std::isfinite(s0)) throw InvalidArgument("gbm s0 must be positive");
    if (!(volatility >= 0) || !std::isfinite(volatility)) {
        throw InvalidArgument("gbm volatility must be nonnegative");
    }
    if (!std::isfinite(drift)) throw InvalidArgument("gbm drift must be finite");
    if (!(step > 0)) throw InvalidArgument("gbm step must be positive");
    if (!(horizon > 0)) throw InvalidArgument("gbm horizon must be positive");
    if (count == 0) throw InvalidArgument("gbm path count must be positive");
    const double n = horizon / step;
    if (std::abs(n - std::round(n)) > 1e-6 * std::max(1.0, n)) {
        throw InvalidArgument("gbm horizon must be a whole number of steps");
    }
}

std::size_t GbmSpec::steps() const { return static_cast<std::size_t>(std::llround(horizon / step)); }

PricePath gbm_path(const GbmSpec& spec, std::size_t index) {
    spec.validate();
    const std::size_t n = spec.steps();
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal(0.0, 1.0);

    const double mean = (spec.drift - 0.5 * spec.volatility * spec.volatility) * spec.step;
    const double sd = spec.volatility * std::sqrt(spec.step);

    PricePath path;
    path.times.resize(n + 1);
    path.prices.resize(n + 1);
    double log_return = 0;
    path.times[0] = spec.start_time;
    path.prices[0] = spec.s0;
    for (std::size_t k = 1; k <= n; ++k) {
        log_return += mean + sd * normal(engine);
        path.times[k] = spec.start_time + std::round(static_cast<double>(k) * spec.step * kSecondsPerYear);
        path.prices[k] = spec.s0 * std::exp(log_return);
    }
    return path;
}

std::vector<PricePath> generate_gbm_paths(const GbmSpec& spec) {
    spec.validate();
    std::vector<PricePath> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) out.push_back(gbm_path(spec, i));
    return out;
}

}  // namespace clmm
