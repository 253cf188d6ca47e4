#include "clmm/price_feed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clmm/errors.hpp"

namespace clmm {

PriceFeed PriceFeed::from_points(std::vector<PricePoint> points, std::vector<long> rows) {
    if (rows.empty()) {
        rows.resize(points.size());
        std::iota(rows.begin(), rows.end(), 1L);
    }
    if (rows.size() != points.size()) throw InvalidArgument("row numbers must match points");

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PricePoint& p = points[i];
        if (!(p.usd_price > 0) || !std::isfinite(p.usd_price)) {
            throw DataError("usd_price must be positive", rows[i]);
        }
        if (p.hour % 3600 != 0) throw DataError("hour must be truncated to 3600 seconds", rows[i]);
        if (p.token_id.empty()) throw DataError("empty token_id", rows[i]);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].hour != points[b].hour) return points[a].hour < points[b].hour;
        return points[a].token_id < points[b].token_id;
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const PricePoint& a = points[order[k - 1]];
        const PricePoint& b = points[order[k]];
        if (a.hour == b.hour && a.token_id == b.token_id) {
            throw DataError("duplicate price for " + b.token_id + " at hour " + std::to_string(b.hour),
                            std::max(rows[order[k - 1]], rows[order[k]]));
        }
    }

    PriceFeed feed;
    feed.points_.reserve(points.size());
    for (std::size_t i : order) feed.points_.push_back(std::move(points[i]));
    for (const PricePoint& p : feed.points_) {
        PricePath& s = feed.series_[p.token_id];
        s.times.push_back(static_cast<double>(p.hour));
        s.prices.push_back(p.usd_price);
    }
    return feed;
}

const PricePath& PriceFeed::series(const std::string& token) const {
    auto it = series_.find(token);
    if (it == series_.end()) throw MissingPrice(token, 0);
    return it->second;
}

double PriceFeed::match_price(double time, const std::string& token, double max_gap) const {
    auto it = series_.find(token);
    if (it == series_.end()) throw MissingPrice(token, time);
    const std::size_t i = it->second.nearest_index(time, max_gap);
    if (i == PricePath::npos) throw MissingPrice(token, time);
    return it->second.prices[i];
}

double PriceFeed::latest_price(const std::string& token, double time) const {
    const PricePath& s = series(token);
    auto it = std::upper_bound(s.times.begin(), s.times.end(), time);
    if (it == s.times.begin()) return s.prices.front();
    return s.prices[static_cast<std::size_t>(it - s.times.begin()) - 1];
}

double PriceFeed::last_hour() const {
    if (points_.empty()) throw MissingPrice("<any>", 0);
    return static_cast<double>(points_.back().hour);
}

PricePath PriceFeed::pool_path(const std::string& token0, const std::string& token1) const {
    const PricePath& a = series(token0);
    const PricePath& b = series(token1);
    PricePath out;
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (j < b.size() && b.times[j] < a.times[i]) ++j;
        if (j < b.size() && b.times[j] == a.times[i]) {
            out.times.push_back(a.times[i]);
            out.prices.push_back(a.prices[i] / b.prices[j]);
        }
    }
    return out;
}

}  // namespace clmm
