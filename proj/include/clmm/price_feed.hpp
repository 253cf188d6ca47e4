#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clmm/price_path.hpp"

namespace clmm {

inline constexpr double kSecondsPerHour = 3600.0;

struct PricePoint {
    std::int64_t hour = 0;  // UNIX seconds, a multiple of 3600
    std::string token_id;
    double usd_price = 0;
};

// Hourly USD rates per token.
class PriceFeed {
public:
    PriceFeed() = default;

    // Validates (positive price, hour aligned) and rejects duplicate
    // (hour, token) rows. `rows` are the 1-based data row numbers used in
    // diagnostics; pass empty to number points in order.
    static PriceFeed from_points(std::vector<PricePoint> points, std::vector<long> rows = {});

    // Rate at the hour nearest to `time`; ties go to the earlier hour.
    // Throws MissingPrice when that hour lies more than `max_gap` away.
    double match_price(double time, const std::string& token,
                       double max_gap = kSecondsPerHour) const;

    // Last rate at or before `time`, falling back to the earliest one.
    double latest_price(const std::string& token, double time) const;

    bool has_token(const std::string& token) const { return series_.count(token) != 0; }
    double last_hour() const;
    const std::vector<PricePoint>& points() const { return points_; }

    // token1-per-token0 exchange ratio at every hour both tokens are quoted.
    PricePath pool_path(const std::string& token0, const std::string& token1) const;

private:
    const PricePath& series(const std::string& token) const;

    std::vector<PricePoint> points_;  // sorted by (hour, token)
    std::map<std::string, PricePath> series_;
};

}  // namespace clmm
