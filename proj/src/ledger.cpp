#include "clmm/ledger.hpp"

#include <algorithm>
#include <cmath>

#include "clmm/errors.hpp"
#include "clmm/tick_math.hpp"

namespace clmm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool changes_liquidity(const LiquidityEvent& e) {
    return e.kind != EventKind::Collect && e.liquidity_delta != 0;
}

double clamp_to(const RangeBounds& r, double x) { return std::clamp(x, r.lower, r.upper); }

// Loss (value minus HODL) in token1 of a sub-position opened at `from` and
// closed at `to`, both inside the range.
double sub_position_loss(const ImputedPosition& seg, double n0, double from, double to) {
    const Holdings h = clamm_holdings(from, seg.range, n0);
    return clamm_value(to, seg.range, n0) - h.value_at(to);
}

double to_numeraire(double token1_amount, double price, Numeraire n) {
    return n == Numeraire::Token0 ? token1_amount / price : token1_amount;
}

double usd_factor(const ImputedPosition& seg) {
    if (!seg.close_spot_usd) {
        throw MissingPrice("token1", seg.close_time);
    }
    return *seg.close_spot_usd;
}

}  // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Mint: return "mint";
        case EventKind::Increase: return "increase";
        case EventKind::Decrease: return "decrease";
        case EventKind::Collect: return "collect";
        case EventKind::Burn: return "burn";
    }
    return "?";
}

EventKind parse_event_kind(const std::string& name) {
    if (name == "mint") return EventKind::Mint;
    if (name == "increase") return EventKind::Increase;
    if (name == "decrease") return EventKind::Decrease;
    if (name == "collect") return EventKind::Collect;
    if (name == "burn") return EventKind::Burn;
    throw InvalidArgument("unknown event kind '" + name + "'");
}

// ============================================================================
// RangePosition
// ============================================================================

void RangePosition::validate() const {
    if (tick_lower >= tick_upper) {
        throw InvalidArgument("position " + position_id + ": tick_lower must be below tick_upper");
    }
    double liquidity = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const LiquidityEvent& e = events[i];
        if (i > 0) {
            const LiquidityEvent& prev = events[i - 1];
            if (e.block < prev.block || e.timestamp < prev.timestamp) {
                throw InvalidArgument("position " + position_id + ": events are not chronological");
            }
        }
        if (e.kind == EventKind::Collect && (e.amount0 < 0 || e.amount1 < 0)) {
            throw InvalidArgument("position " + position_id + ": negative collect amount");
        }
        liquidity += e.liquidity_delta;
        const double tol = 1e-9 * std::max(1.0, std::abs(liquidity));
        if (liquidity < -tol) {
            throw InvalidArgument("position " + position_id + ": liquidity goes negative");
        }
    }
}

RangeBounds RangePosition::bounds() const {
    return RangeBounds::make(tick_to_price(tick_lower), tick_to_price(tick_upper));
}

double RangePosition::liquidity() const {
    double l = 0;
    for (const auto& e : events) l += e.liquidity_delta;
    return std::max(0.0, l);
}

// ============================================================================
// Novation
// ============================================================================

std::vector<ImputedPosition> novate(const RangePosition& position, const PricePath& prices,
                                    const NovationOptions& options) {
    position.validate();
    const RangeBounds range = position.bounds();
    std::vector<ImputedPosition> out;
    std::vector<TimeInterval> gaps;

    auto price_at = [&](double t, bool& ok) {
        const std::size_t i = prices.nearest_index(t, options.max_gap);
        if (i == PricePath::npos) {
            ok = false;
            return 1.0;
        }
        return prices.prices[i];
    };

    auto close_segment = [&](ImputedPosition seg, double t, std::int64_t block, bool at_eval) {
        seg.close_time = t;
        seg.close_block = block;
        seg.closed_at_evaluation = at_eval;
        bool ok = true;
        const double x_open = price_at(seg.open_time, ok);
        const double x_close = price_at(t, ok);
        if (!ok) {
            gaps.push_back({seg.open_time, t});
            return;
        }
        const double n0 = notional_from_liquidity(seg.liquidity, range);
        seg.x_open = x_open;
        seg.x_close = x_close;
        seg.open = clamm_holdings(x_open, range, n0);
        seg.close = clamm_holdings(x_close, range, n0);
        seg.flash = !at_eval && seg.open_block == seg.close_block;
        out.push_back(std::move(seg));
    };

    double liquidity = 0;
    std::optional<ImputedPosition> open;
    for (const LiquidityEvent& e : position.events) {
        if (!changes_liquidity(e)) continue;
        if (open) {
            close_segment(std::move(*open), e.timestamp, e.block, false);
            open.reset();
        }
        liquidity += e.liquidity_delta;
        if (liquidity > 1e-12) {
            ImputedPosition seg;
            seg.position_id = position.position_id;
            seg.open_time = e.timestamp;
            seg.open_block = e.block;
            seg.range = range;
            seg.liquidity = liquidity;
            open = std::move(seg);
        } else {
            liquidity = 0;
        }
    }
    if (open) {
        if (prices.empty() && !options.evaluation_time) {
            gaps.push_back({open->open_time, open->open_time});
        } else {
            const double eval = options.evaluation_time.value_or(prices.back_time());
            const double t = std::max(eval, open->open_time);
            close_segment(std::move(*open), t, open->open_block, true);
        }
    }
    if (!gaps.empty()) throw PriceGap(std::move(gaps));
    return out;
}

// ============================================================================
// IL measures
// ============================================================================

double actual_il(const ImputedPosition& seg, Numeraire numeraire) {
    const double p1 = seg.x_close;
    if (!(p1 > 0)) throw InvalidArgument("segment has no close price");
    const double hodl = p1 * seg.open.risk + seg.open.numeraire;
    if (!(hodl > 0)) throw InvalidArgument("segment opened with an empty portfolio");
    switch (numeraire) {
        case Numeraire::Token1:
            return (p1 * seg.close.risk + seg.close.numeraire) / hodl - 1.0;
        case Numeraire::Token0:
            return (seg.close.risk + seg.close.numeraire / p1) /
                       (seg.open.risk + seg.open.numeraire / p1) -
                   1.0;
        case Numeraire::Usd: {
            if (!seg.open_value_usd || !(*seg.open_value_usd > 0)) {
                throw MissingPrice("usd opening value", seg.open_time);
            }
            const double loss = seg.value_at_close() - seg.hodl_at_close();
            return loss * usd_factor(seg) / *seg.open_value_usd;
        }
    }
    return 0;
}

double minimal_il(const ImputedPosition& seg, const PricePath& prices, Numeraire numeraire) {
    const RangeBounds& r = seg.range;
    const double n0 = notional_from_liquidity(seg.liquidity, r);

    // Samples over the segment: the open and close ratios bracket the path
    // points strictly inside (open, close).
    std::vector<double> xs{seg.x_open};
    const auto first = std::upper_bound(prices.times.begin(), prices.times.end(), seg.open_time);
    for (auto it = first; it != prices.times.end() && *it < seg.close_time; ++it) {
        xs.push_back(prices.prices[static_cast<std::size_t>(it - prices.times.begin())]);
    }
    if (seg.close_time > seg.open_time) xs.push_back(seg.x_close);

    // Each maximal in-range stretch is a virtual sub-position. It opens at
    // the first in-range sample (or the boundary it re-entered through) and
    // closes at the boundary of the first sample beyond the range.
    double loss = 0;  // in the chosen numeraire
    auto book = [&](double from, double to) {
        if (from == to) return;
        loss += to_numeraire(sub_position_loss(seg, n0, from, to), to, numeraire);
    };
    bool active = r.contains(xs.front());
    double opened_at = xs.front();
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const double prev = xs[k - 1];
        const double cur = xs[k];
        if (active) {
            if (!r.contains(cur)) {
                book(opened_at, clamp_to(r, cur));
                active = false;
            }
        } else if (r.contains(cur)) {
            active = true;
            opened_at = clamp_to(r, prev);
        } else if ((prev < r.lower && cur > r.upper) || (prev > r.upper && cur < r.lower)) {
            // Jumped across the whole range between two samples.
            book(clamp_to(r, prev), clamp_to(r, cur));
        }
    }
    if (active) book(opened_at, xs.back());

    if (numeraire == Numeraire::Usd) {
        if (!seg.open_value_usd || !(*seg.open_value_usd > 0)) {
            throw MissingPrice("usd opening value", seg.open_time);
        }
        return loss * usd_factor(seg) / *seg.open_value_usd;
    }
    const double base = to_numeraire(seg.hodl_at_close(), seg.x_close, numeraire);
    if (!(base > 0)) throw InvalidArgument("segment opened with an empty portfolio");
    return loss / base;
}

double out_of_range_il(const ImputedPosition& seg, const PricePath& prices, Numeraire numeraire) {
    return actual_il(seg, numeraire) - minimal_il(seg, prices, numeraire);
}

double pct_to_usd(const ImputedPosition& seg, double pct) {
    return pct * seg.hodl_at_close() * usd_factor(seg);
}

double il_usd(const ImputedPosition& seg) { return pct_to_usd(seg, actual_il(seg, Numeraire::Token1)); }

ILBreakdown decompose(const ImputedPosition& seg, const PricePath& prices, Numeraire numeraire) {
    ILBreakdown b;
    b.actual_pct = actual_il(seg, numeraire);
    b.minimal_pct = minimal_il(seg, prices, numeraire);
    b.out_of_range_pct = b.actual_pct - b.minimal_pct;
    // USD amounts do not depend on the numeraire used for percentages.
    const double actual1 = numeraire == Numeraire::Token1 ? b.actual_pct : actual_il(seg);
    const double minimal1 =
        numeraire == Numeraire::Token1 ? b.minimal_pct : minimal_il(seg, prices, Numeraire::Token1);
    b.actual_usd = pct_to_usd(seg, actual1);
    b.minimal_usd = pct_to_usd(seg, minimal1);
    b.out_of_range_usd = b.actual_usd - b.minimal_usd;
    return b;
}

// ============================================================================
// Fees
// ============================================================================

FeeValuation fees_usd(const RangePosition& position, const PriceFeed& feed, const TokenPair& tokens,
                      double uncollected0, double uncollected1,
                      std::optional<double> evaluation_time, double max_gap) {
    FeeValuation out;
    double owed0 = 0;
    double owed1 = 0;
    for (const LiquidityEvent& e : position.events) {
        if (e.kind == EventKind::Decrease || (e.kind == EventKind::Burn && e.liquidity_delta != 0)) {
            owed0 += std::abs(e.amount0);
            owed1 += std::abs(e.amount1);
        } else if (e.kind == EventKind::Collect) {
            const double f0 = std::max(0.0, e.amount0 - owed0);
            const double f1 = std::max(0.0, e.amount1 - owed1);
            owed0 = std::max(0.0, owed0 - e.amount0);
            owed1 = std::max(0.0, owed1 - e.amount1);
            if (f0 > 0) out.usd += f0 * feed.match_price(e.timestamp, tokens.token0, max_gap);
            if (f1 > 0) out.usd += f1 * feed.match_price(e.timestamp, tokens.token1, max_gap);
            out.fees0 += f0;
            out.fees1 += f1;
        }
    }
    if (uncollected0 > 0 || uncollected1 > 0) {
        const double eval = evaluation_time.value_or(feed.last_hour());
        if (uncollected0 > 0) out.usd += uncollected0 * feed.latest_price(tokens.token0, eval);
        if (uncollected1 > 0) out.usd += uncollected1 * feed.latest_price(tokens.token1, eval);
        out.fees0 += uncollected0;
        out.fees1 += uncollected1;
    }
    return out;
}

// ============================================================================
// Ledger
// ============================================================================

double time_weighted_average(const std::vector<std::pair<double, double>>& samples, double begin,
                             double end) {
    if (!(end > begin) || samples.empty()) return kNaN;
    double integral = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double a = std::max(begin, samples[k].first);
        const double b = std::min(end, k + 1 < samples.size() ? samples[k + 1].first : end);
        if (b > a) integral += samples[k].second * (b - a);
    }
    return integral / (end - begin);
}

LedgerEntry evaluate_position(const RangePosition& position, const PriceFeed& feed,
                              const TokenPair& tokens, const LedgerOptions& options,
                              UncollectedFees uncollected) {
    LedgerEntry entry;
    entry.position_id = position.position_id;
    entry.wallet_id = position.wallet_id;
    entry.pool_id = position.pool_id;

    const PricePath path = feed.pool_path(tokens.token0, tokens.token1);
    const double eval = options.evaluation_time.value_or(path.empty() ? 0.0 : path.back_time());

    NovationOptions nov;
    nov.max_gap = options.max_gap;
    nov.evaluation_time = eval;
    entry.segments = novate(position, path, nov);

    const bool at_end = options.timing == ConversionTiming::AtEnd;
    for (ImputedPosition& seg : entry.segments) {
        if (at_end || seg.closed_at_evaluation) {
            seg.close_spot_usd = feed.latest_price(tokens.token1, at_end ? eval : seg.close_time);
        } else {
            seg.close_spot_usd = feed.match_price(seg.close_time, tokens.token1, options.max_gap);
        }
        const double u0 = at_end ? feed.latest_price(tokens.token0, eval)
                                 : feed.match_price(seg.open_time, tokens.token0, options.max_gap);
        const double u1 = at_end ? feed.latest_price(tokens.token1, eval)
                                 : feed.match_price(seg.open_time, tokens.token1, options.max_gap);
        seg.open_value_usd = seg.open.risk * u0 + seg.open.numeraire * u1;
    }

    // Position-level percentages weight each segment by its base in USD.
    double base_usd = 0;
    double weighted_minimal = 0;
    double weighted_actual = 0;
    double loss_token1 = 0;
    for (const ImputedPosition& seg : entry.segments) {
        const ILBreakdown b = decompose(seg, path, options.numeraire);
        entry.il.actual_usd += b.actual_usd;
        entry.il.minimal_usd += b.minimal_usd;
        const double base = options.numeraire == Numeraire::Usd
                                ? *seg.open_value_usd
                                : seg.hodl_at_close() * *seg.close_spot_usd;
        base_usd += base;
        weighted_actual += b.actual_pct * base;
        weighted_minimal += b.minimal_pct * base;
        loss_token1 += seg.value_at_close() - seg.hodl_at_close();
    }
    entry.il.out_of_range_usd = entry.il.actual_usd - entry.il.minimal_usd;
    if (base_usd > 0) {
        entry.il.actual_pct = weighted_actual / base_usd;
        entry.il.minimal_pct = weighted_minimal / base_usd;
        entry.il.out_of_range_pct = entry.il.actual_pct - entry.il.minimal_pct;
    }

    const FeeValuation fees =
        fees_usd(position, feed, tokens, uncollected.amount0, uncollected.amount1,
                 at_end ? std::optional<double>(eval) : std::optional<double>(eval), options.max_gap);
    if (at_end) {
        entry.il.fees_usd = fees.fees0 * feed.latest_price(tokens.token0, eval) +
                            fees.fees1 * feed.latest_price(tokens.token1, eval);
    } else {
        entry.il.fees_usd = fees.usd;
    }

    // Lifetime and flags.
    if (!position.events.empty()) {
        entry.open_time = position.events.front().timestamp;
        entry.open_block = position.events.front().block;
        entry.close_time = position.events.back().timestamp;
        entry.close_block = position.events.back().block;
    }
    if (!entry.segments.empty()) {
        const ImputedPosition& first = entry.segments.front();
        const ImputedPosition& last = entry.segments.back();
        entry.open_time = first.open_time;
        entry.open_block = first.open_block;
        entry.still_open = last.closed_at_evaluation;
        if (last.close_time > entry.close_time || entry.still_open) {
            entry.close_time = last.close_time;
            entry.close_block = last.close_block;
        }
        entry.open_value_usd = *first.open_value_usd;
        entry.virtual_il_pct = loss_token1 / (2.0 * first.liquidity * std::sqrt(first.x_open));
    }
    entry.flash = !entry.still_open && !entry.segments.empty() &&
                  entry.open_block == entry.close_block;
    entry.below_min_liquidity = entry.open_value_usd < options.min_liquidity_usd;

    // Time-weighted average USD value over the active stretches.
    double integral = 0;
    for (const ImputedPosition& seg : entry.segments) {
        const double span = seg.close_time - seg.open_time;
        if (!(span > 0)) continue;
        const double n0 = notional_from_liquidity(seg.liquidity, seg.range);
        std::vector<std::pair<double, double>> track;
        auto usd1 = [&](double t) {
            return at_end ? feed.latest_price(tokens.token1, eval) : feed.latest_price(tokens.token1, t);
        };
        track.emplace_back(seg.open_time, clamm_value(seg.x_open, seg.range, n0) * usd1(seg.open_time));
        const auto first =
            std::upper_bound(path.times.begin(), path.times.end(), seg.open_time);
        for (auto it = first; it != path.times.end() && *it < seg.close_time; ++it) {
            const double x = path.prices[static_cast<std::size_t>(it - path.times.begin())];
            track.emplace_back(*it, clamm_value(x, seg.range, n0) * usd1(*it));
        }
        integral += time_weighted_average(track, seg.open_time, seg.close_time) * span;
        entry.active_seconds += span;
    }
    entry.twal_usd = entry.active_seconds > 0 ? integral / entry.active_seconds : kNaN;
    return entry;
}

double roi(const LedgerEntry& entry) {
    if (!(entry.twal_usd > 0) || !std::isfinite(entry.twal_usd)) return kNaN;
    return entry.net_usd() / entry.twal_usd;
}

}  // namespace clmm
