#include "clmm/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "clmm/errors.hpp"

namespace clmm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

const std::string& pool_key(const LedgerEntry& e) { return e.pool_id; }

std::vector<std::string> pools_of(const std::vector<LedgerEntry>& entries) {
    std::vector<std::string> ids;
    for (const auto& e : entries) ids.push_back(pool_key(e));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::string num(double v) { return format_number(v); }

}  // namespace

std::vector<LedgerEntry> evaluate_positions(const std::vector<RangePosition>& positions,
                                            const PriceFeed& feed, const AnalysisOptions& options) {
    std::vector<const RangePosition*> order;
    for (const auto& p : positions) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const RangePosition* a, const RangePosition* b) {
        return std::tie(a->pool_id, a->position_id) < std::tie(b->pool_id, b->position_id);
    });
    std::vector<LedgerEntry> out;
    out.reserve(order.size());
    for (const RangePosition* p : order) {
        const TokenPair tokens = resolve_pool_tokens(p->pool_id, options.pool_tokens);
        out.push_back(evaluate_position(*p, feed, tokens, options.ledger));
    }
    return out;
}

// ============================================================================
// Duration buckets
// ============================================================================

const char* label(DurationBucket b) {
    switch (b) {
        case DurationBucket::Flash: return "flash";
        case DurationBucket::UpToHour: return "<=1h";
        case DurationBucket::HourToDay: return "1h-1d";
        case DurationBucket::DayToWeek: return "1d-1w";
        case DurationBucket::WeekToMonth: return "1w-1m";
        case DurationBucket::OverMonth: return ">1m";
    }
    return "?";
}

DurationBucket classify_lifetime(double seconds, bool same_block) {
    if (same_block) return DurationBucket::Flash;
    if (seconds <= kSecondsPerHour) return DurationBucket::UpToHour;
    if (seconds <= kSecondsPerDay) return DurationBucket::HourToDay;
    if (seconds <= kSecondsPerWeek) return DurationBucket::DayToWeek;
    if (seconds <= kSecondsPerMonth) return DurationBucket::WeekToMonth;
    return DurationBucket::OverMonth;
}

DurationBucket classify(const LedgerEntry& entry) {
    return classify_lifetime(entry.close_time - entry.open_time, entry.flash);
}

std::map<DurationBucket, BucketAggregate> segment_durations(const std::vector<LedgerEntry>& entries) {
    std::map<DurationBucket, BucketAggregate> out;
    for (DurationBucket b : kAllBuckets) out[b];
    for (const LedgerEntry& e : entries) {
        BucketAggregate& a = out[classify(e)];
        ++a.count;
        a.fees_usd += e.il.fees_usd;
        a.il_usd += e.il.actual_usd;
        a.minimal_il_usd += e.il.minimal_usd;
    }
    return out;
}

double il_fee_ratio(double fees_usd, double il_usd) {
    if (!(fees_usd > 0)) return kNaN;
    return std::abs(il_usd) / fees_usd;
}

double il_fee_ratio(const BucketAggregate& b) { return il_fee_ratio(b.fees_usd, b.il_usd); }

double rorac(double fees_usd, double il_usd) {
    if (il_usd == 0) return kInf;
    return fees_usd / std::abs(il_usd) - 1.0;
}

double rorac(const BucketAggregate& b) { return rorac(b.fees_usd, b.il_usd); }

// ============================================================================
// Wallets
// ============================================================================

WalletReport wallet_returns(const std::vector<LedgerEntry>& entries, double filter_below_usd) {
    std::map<std::pair<std::string, std::string>, WalletAggregate> acc;
    for (const LedgerEntry& e : entries) {
        if (e.open_value_usd < filter_below_usd) continue;
        WalletAggregate& w = acc[{e.pool_id, e.wallet_id}];
        w.pool_id = e.pool_id;
        w.wallet_id = e.wallet_id;
        ++w.positions;
        w.fees_usd += e.il.fees_usd;
        w.il_usd += e.il.actual_usd;
        if (std::isfinite(e.twal_usd) && e.twal_usd > 0) w.twal_usd += e.twal_usd;
    }

    WalletReport report;
    for (auto& [key, w] : acc) {
        w.net_usd = w.fees_usd + w.il_usd;
        w.positive = w.net_usd >= 0;
        w.roi = w.twal_usd > 0 ? w.net_usd / w.twal_usd : kNaN;
        report.wallets.push_back(w);
    }

    for (std::size_t i = 0; i < report.wallets.size();) {
        PoolWalletSummary s;
        s.pool_id = report.wallets[i].pool_id;
        double pos_sum = 0;
        double neg_sum = 0;
        for (; i < report.wallets.size() && report.wallets[i].pool_id == s.pool_id; ++i) {
            const WalletAggregate& w = report.wallets[i];
            ++s.wallets;
            if (w.positive) {
                ++s.positive;
                pos_sum += w.net_usd;
            } else {
                ++s.negative;
                neg_sum += w.net_usd;
            }
        }
        s.negative_share = static_cast<double>(s.negative) / static_cast<double>(s.wallets);
        if (s.positive > 0) s.mean_positive_net = pos_sum / static_cast<double>(s.positive);
        if (s.negative > 0) s.mean_negative_net = neg_sum / static_cast<double>(s.negative);
        report.pools.push_back(s);
    }
    return report;
}

// ============================================================================
// Pools
// ============================================================================

std::vector<PoolTotals> pool_report(const std::vector<LedgerEntry>& entries) {
    std::map<std::string, PoolTotals> acc;
    for (const LedgerEntry& e : entries) {
        PoolTotals& t = acc[e.pool_id];
        t.pool_id = e.pool_id;
        ++t.positions;
        t.fees_usd += e.il.fees_usd;
        t.minimal_il_usd += e.il.minimal_usd;
        t.actual_il_usd += e.il.actual_usd;
    }
    std::vector<PoolTotals> out;
    for (auto& [id, t] : acc) {
        t.net_usd = t.fees_usd + t.actual_il_usd;
        out.push_back(t);
    }
    return out;
}

std::vector<CapitalCohort> capital_cohorts(const std::vector<LedgerEntry>& entries,
                                           const std::vector<double>& edges,
                                           double filter_below_usd) {
    if (edges.empty()) return {};
    if (!std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw InvalidArgument("capital bucket edges must be strictly increasing");
    }
    std::vector<CapitalCohort> out(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out[i].lower = edges[i];
        out[i].upper = i + 1 < edges.size() ? edges[i + 1] : kInf;
    }
    std::map<std::pair<std::string, std::string>, std::pair<double, double>> capital_net;
    for (const LedgerEntry& e : entries) {
        if (e.open_value_usd < filter_below_usd) continue;
        auto& [capital, net] = capital_net[{e.pool_id, e.wallet_id}];
        capital += e.open_value_usd;
        net += e.net_usd();
    }
    for (const auto& [key, cn] : capital_net) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), cn.first);
        if (it == edges.begin()) continue;
        CapitalCohort& c = out[static_cast<std::size_t>(it - edges.begin()) - 1];
        ++c.wallets;
        if (cn.second < 0) ++c.negative;
        c.net_usd += cn.second;
    }
    return out;
}

// ============================================================================
// Reports
// ============================================================================

void write_positions_csv(std::ostream& out, const std::vector<LedgerEntry>& entries) {
    out << "pool_id,position_id,wallet_id,open_time,close_time,open_block,close_block,bucket,"
           "flash,still_open,below_min_liquidity,segments,open_value_usd,fees_usd,minimal_il_usd,"
           "out_of_range_il_usd,actual_il_usd,net_usd,minimal_il_pct,out_of_range_il_pct,"
           "actual_il_pct,virtual_il_pct,twal_usd,roi\n";
    std::vector<const LedgerEntry*> order;
    for (const auto& e : entries) order.push_back(&e);
    std::stable_sort(order.begin(), order.end(), [](const LedgerEntry* a, const LedgerEntry* b) {
        return std::tie(a->pool_id, a->position_id) < std::tie(b->pool_id, b->position_id);
    });
    for (const LedgerEntry* e : order) {
        out << csv_escape(e->pool_id) << ',' << csv_escape(e->position_id) << ','
            << csv_escape(e->wallet_id) << ',' << num(e->open_time) << ',' << num(e->close_time)
            << ',' << e->open_block << ',' << e->close_block << ',' << label(classify(*e)) << ','
            << e->flash << ',' << e->still_open << ',' << e->below_min_liquidity << ','
            << e->segments.size() << ',' << num(e->open_value_usd) << ',' << num(e->il.fees_usd)
            << ',' << num(e->il.minimal_usd) << ',' << num(e->il.out_of_range_usd) << ','
            << num(e->il.actual_usd) << ',' << num(e->net_usd()) << ',' << num(e->il.minimal_pct)
            << ',' << num(e->il.out_of_range_pct) << ',' << num(e->il.actual_pct) << ','
            << num(e->virtual_il_pct) << ',' << num(e->twal_usd) << ',' << num(roi(*e)) << '\n';
    }
}

void write_segments_csv(std::ostream& out, const std::vector<LedgerEntry>& entries) {
    out << "pool_id,position_id,segment,open_time,close_time,open_block,close_block,liquidity,"
           "x_open,x_close,open_token0,open_token1,close_token0,close_token1,close_spot_usd,"
           "flash,closed_at_evaluation\n";
    for (const LedgerEntry& e : entries) {
        for (std::size_t k = 0; k < e.segments.size(); ++k) {
            const ImputedPosition& s = e.segments[k];
            out << csv_escape(e.pool_id) << ',' << csv_escape(e.position_id) << ',' << k << ','
                << num(s.open_time) << ',' << num(s.close_time) << ',' << s.open_block << ','
                << s.close_block << ',' << num(s.liquidity) << ',' << num(s.x_open) << ','
                << num(s.x_close) << ',' << num(s.open.risk) << ',' << num(s.open.numeraire) << ','
                << num(s.close.risk) << ',' << num(s.close.numeraire) << ','
                << num(s.close_spot_usd.value_or(kNaN)) << ',' << s.flash << ','
                << s.closed_at_evaluation << '\n';
        }
    }
}

void write_durations_csv(std::ostream& out, const std::vector<LedgerEntry>& entries) {
    out << "pool_id,bucket,count,fees_usd,il_usd,minimal_il_usd,net_usd,il_fee_ratio,rorac\n";
    auto emit = [&](const std::string& pool, const std::vector<LedgerEntry>& subset) {
        for (const auto& [b, a] : segment_durations(subset)) {
            out << csv_escape(pool) << ',' << label(b) << ',' << a.count << ',' << num(a.fees_usd)
                << ',' << num(a.il_usd) << ',' << num(a.minimal_il_usd) << ','
                << num(a.fees_usd + a.il_usd) << ',' << num(il_fee_ratio(a)) << ','
                << num(rorac(a)) << '\n';
        }
    };
    for (const std::string& pool : pools_of(entries)) {
        std::vector<LedgerEntry> subset;
        for (const auto& e : entries) {
            if (e.pool_id == pool) subset.push_back(e);
        }
        emit(pool, subset);
    }
    emit("*", entries);
}

void write_wallets_csv(std::ostream& out, const WalletReport& report) {
    out << "pool_id,wallet_id,positions,fees_usd,il_usd,net_usd,twal_usd,roi,sign\n";
    for (const WalletAggregate& w : report.wallets) {
        out << csv_escape(w.pool_id) << ',' << csv_escape(w.wallet_id) << ',' << w.positions << ','
            << num(w.fees_usd) << ',' << num(w.il_usd) << ',' << num(w.net_usd) << ','
            << num(w.twal_usd) << ',' << num(w.roi) << ',' << (w.positive ? "positive" : "negative")
            << '\n';
    }
}

void write_wallet_summary_csv(std::ostream& out, const WalletReport& report) {
    out << "pool_id,wallets,positive,negative,negative_share,mean_positive_net_usd,"
           "mean_negative_net_usd\n";
    for (const PoolWalletSummary& s : report.pools) {
        out << csv_escape(s.pool_id) << ',' << s.wallets << ',' << s.positive << ',' << s.negative
            << ',' << num(s.negative_share) << ',' << num(s.mean_positive_net) << ','
            << num(s.mean_negative_net) << '\n';
    }
}

void write_pools_csv(std::ostream& out, const std::vector<PoolTotals>& totals) {
    out << "pool_id,positions,fees_usd,minimal_il_usd,actual_il_usd,net_usd\n";
    for (const PoolTotals& t : totals) {
        out << csv_escape(t.pool_id) << ',' << t.positions << ',' << num(t.fees_usd) << ','
            << num(t.minimal_il_usd) << ',' << num(t.actual_il_usd) << ',' << num(t.net_usd) << '\n';
    }
}

void write_cohorts_csv(std::ostream& out, const std::vector<CapitalCohort>& cohorts) {
    out << "capital_lower_usd,capital_upper_usd,wallets,negative,net_usd\n";
    for (const CapitalCohort& c : cohorts) {
        out << num(c.lower) << ',' << num(c.upper) << ',' << c.wallets << ',' << c.negative << ','
            << num(c.net_usd) << '\n';
    }
}

}  // namespace clmm
