#pragma once

// Cohort analytics over ledger entries: duration buckets, IL/fee ratios,
// wallet-level returns and per-pool totals, plus their CSV report writers.

#include <array>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "clmm/ingest.hpp"
#include "clmm/ledger.hpp"

namespace clmm {

// ============================================================================
// Running the ledger over ingested data
// ============================================================================

struct AnalysisOptions {
    LedgerOptions ledger;
    std::map<std::string, TokenPair> pool_tokens;
};

// One ledger entry per position, in (pool_id, position_id) order.
std::vector<LedgerEntry> evaluate_positions(const std::vector<RangePosition>& positions,
                                            const PriceFeed& feed,
                                            const AnalysisOptions& options = {});

// ============================================================================
// Duration buckets
// ============================================================================

enum class DurationBucket { Flash, UpToHour, HourToDay, DayToWeek, WeekToMonth, OverMonth };

inline constexpr std::array<DurationBucket, 6> kAllBuckets{
    DurationBucket::Flash,     DurationBucket::UpToHour,    DurationBucket::HourToDay,
    DurationBucket::DayToWeek, DurationBucket::WeekToMonth, DurationBucket::OverMonth};

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kSecondsPerWeek = 7 * kSecondsPerDay;
inline constexpr double kSecondsPerMonth = 30 * kSecondsPerDay;

const char* label(DurationBucket b);

// Flash when opened and finally closed in one block; otherwise by lifetime
// with upper bounds inclusive (1h, 1d, 7d, 30d).
DurationBucket classify_lifetime(double seconds, bool same_block);
DurationBucket classify(const LedgerEntry& entry);

struct BucketAggregate {
    long count = 0;
    double fees_usd = 0;
    double il_usd = 0;          // actual, signed
    double minimal_il_usd = 0;  // signed
};

// Every bucket is present, empty ones with zero counts.
std::map<DurationBucket, BucketAggregate> segment_durations(const std::vector<LedgerEntry>& entries);

// |IL| / fees; NaN (undefined) when fees <= 0.
double il_fee_ratio(double fees_usd, double il_usd);
double il_fee_ratio(const BucketAggregate& b);

// fees / |IL| - 1; +inf when IL = 0.
double rorac(double fees_usd, double il_usd);
double rorac(const BucketAggregate& b);

// ============================================================================
// Wallets
// ============================================================================

struct WalletAggregate {
    std::string wallet_id;
    std::string pool_id;
    long positions = 0;
    double fees_usd = 0;
    double il_usd = 0;
    double net_usd = 0;
    double twal_usd = 0;  // sum of position TWALs with a defined value
    double roi = std::numeric_limits<double>::quiet_NaN();
    bool positive = true;  // net >= 0
};

struct PoolWalletSummary {
    std::string pool_id;
    long wallets = 0;
    long positive = 0;
    long negative = 0;
    double negative_share = 0;
    double mean_positive_net = std::numeric_limits<double>::quiet_NaN();
    double mean_negative_net = std::numeric_limits<double>::quiet_NaN();
};

struct WalletReport {
    std::vector<WalletAggregate> wallets;  // by (pool_id, wallet_id)
    std::vector<PoolWalletSummary> pools;  // by pool_id
};

// Positions whose opening value is below `filter_below_usd` are dropped
// before aggregation.
WalletReport wallet_returns(const std::vector<LedgerEntry>& entries, double filter_below_usd = 1.0);

// ============================================================================
// Pools
// ============================================================================

struct PoolTotals {
    std::string pool_id;
    long positions = 0;
    double fees_usd = 0;
    double minimal_il_usd = 0;
    double actual_il_usd = 0;
    double net_usd = 0;
};

std::vector<PoolTotals> pool_report(const std::vector<LedgerEntry>& entries);

// Wallets grouped by contributed capital (sum of opening USD values) into
// user-supplied buckets [edges[i], edges[i+1]); the last one is open-ended.
struct CapitalCohort {
    double lower = 0;
    double upper = std::numeric_limits<double>::infinity();
    long wallets = 0;
    long negative = 0;
    double net_usd = 0;
};

std::vector<CapitalCohort> capital_cohorts(const std::vector<LedgerEntry>& entries,
                                           const std::vector<double>& edges,
                                           double filter_below_usd = 1.0);

// ============================================================================
// Reports
// ============================================================================

void write_positions_csv(std::ostream& out, const std::vector<LedgerEntry>& entries);
void write_segments_csv(std::ostream& out, const std::vector<LedgerEntry>& entries);
void write_durations_csv(std::ostream& out, const std::vector<LedgerEntry>& entries);
void write_wallets_csv(std::ostream& out, const WalletReport& report);
void write_wallet_summary_csv(std::ostream& out, const WalletReport& report);
void write_pools_csv(std::ostream& out, const std::vector<PoolTotals>& totals);
void write_cohorts_csv(std::ostream& out, const std::vector<CapitalCohort>& cohorts);

}  // namespace clmm
