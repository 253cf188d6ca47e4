#pragma once

// Position lifecycle and impermanent-loss accounting.
//
// Every liquidity change closes the running position and opens a new one at
// the post-change holdings (novation). Each resulting imputed position is
// measured against HODL of its opening composition, split into the loss
// incurred while the price sat inside the range (minimal) and the residual
// incurred outside it (out-of-range).

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "clmm/curves.hpp"
#include "clmm/price_feed.hpp"
#include "clmm/price_path.hpp"

namespace clmm {

enum class EventKind { Mint, Increase, Decrease, Collect, Burn };

const char* to_string(EventKind kind);
// Throws InvalidArgument on an unknown name.
EventKind parse_event_kind(const std::string& name);

struct LiquidityEvent {
    EventKind kind = EventKind::Mint;
    std::int64_t block = 0;
    double timestamp = 0;  // UNIX seconds
    double amount0 = 0;
    double amount1 = 0;
    double liquidity_delta = 0;  // negative for decreases
};

struct RangePosition {
    std::string position_id;
    std::string wallet_id;
    std::string pool_id;
    int tick_lower = 0;
    int tick_upper = 0;
    std::vector<LiquidityEvent> events;  // chronological

    // Throws InvalidArgument on an inverted range, out-of-order events,
    // negative collects or liquidity going negative after any prefix.
    void validate() const;
    RangeBounds bounds() const;
    double liquidity() const;  // after all events
};

enum class Numeraire { Token0, Token1, Usd };

struct ImputedPosition {
    std::string position_id;
    double open_time = 0;
    double close_time = 0;
    std::int64_t open_block = 0;
    std::int64_t close_block = 0;
    RangeBounds range;
    double liquidity = 0;
    double x_open = 0;   // token1 per token0 at open
    double x_close = 0;  // at close
    Holdings open;       // risk = token0, numeraire = token1
    Holdings close;
    // USD per token1 at close; absent until priced.
    std::optional<double> close_spot_usd;
    // Opening HODL value in USD at open-time rates (Usd numeraire only).
    std::optional<double> open_value_usd;
    bool flash = false;           // opened and closed in the same block
    bool closed_at_evaluation = false;

    double hodl_at_close() const { return open.value_at(x_close); }
    double value_at_close() const { return close.value_at(x_close); }
};

struct NovationOptions {
    double max_gap = kSecondsPerHour;  // nearest price sample must lie this close
    // Closing instant of segments still open after the last event; defaults
    // to the last price point.
    std::optional<double> evaluation_time;
};

// Throws PriceGap listing every segment whose endpoints cannot be priced.
std::vector<ImputedPosition> novate(const RangePosition& position, const PricePath& prices,
                                    const NovationOptions& options = {});

// (P1 x1 + y1) / (P1 x0 + y0) - 1 in the chosen numeraire. Throws
// InvalidArgument on an empty opening portfolio.
double actual_il(const ImputedPosition& seg, Numeraire numeraire = Numeraire::Token1);

// Loss accrued while the price path stayed inside the range, as a fraction
// of the segment's HODL value at close.
double minimal_il(const ImputedPosition& seg, const PricePath& prices,
                  Numeraire numeraire = Numeraire::Token1);

// actual_il - minimal_il.
double out_of_range_il(const ImputedPosition& seg, const PricePath& prices,
                       Numeraire numeraire = Numeraire::Token1);

// Percentage IL times the opening HODL value (at close) times the USD spot
// at close. Throws MissingPrice when the segment has no close spot.
double il_usd(const ImputedPosition& seg);
double pct_to_usd(const ImputedPosition& seg, double pct);

struct ILBreakdown {
    double minimal_pct = 0;
    double out_of_range_pct = 0;
    double actual_pct = 0;
    double minimal_usd = 0;
    double out_of_range_usd = 0;
    double actual_usd = 0;
    double fees_usd = 0;
};

ILBreakdown decompose(const ImputedPosition& seg, const PricePath& prices,
                      Numeraire numeraire = Numeraire::Token1);

// ============================================================================
// Fees
// ============================================================================

struct TokenPair {
    std::string token0;
    std::string token1;
};

struct FeeValuation {
    double usd = 0;
    double fees0 = 0;  // token amounts identified as fees
    double fees1 = 0;
};

// Collected fees at the withdrawal hour plus uncollected fees at the latest
// rate available at `evaluation_time`. Collected amounts first repay the
// principal released by earlier decreases (or burns that remove liquidity);
// only the excess counts as fees.
FeeValuation fees_usd(const RangePosition& position, const PriceFeed& feed, const TokenPair& tokens,
                      double uncollected0 = 0, double uncollected1 = 0,
                      std::optional<double> evaluation_time = std::nullopt,
                      double max_gap = kSecondsPerHour);

// ============================================================================
// Ledger
// ============================================================================

enum class ConversionTiming {
    AtAccrual,  // fees at withdrawal, IL at novation close
    AtEnd,      // everything at the evaluation time
};

struct LedgerOptions {
    Numeraire numeraire = Numeraire::Token1;
    ConversionTiming timing = ConversionTiming::AtAccrual;
    double max_gap = kSecondsPerHour;
    double min_liquidity_usd = 1.0;
    std::optional<double> evaluation_time;
};

struct LedgerEntry {
    std::string position_id;
    std::string wallet_id;
    std::string pool_id;
    double open_time = 0;
    double close_time = 0;
    std::int64_t open_block = 0;
    std::int64_t close_block = 0;
    bool flash = false;
    bool still_open = false;
    double open_value_usd = 0;
    bool below_min_liquidity = false;
    std::vector<ImputedPosition> segments;
    ILBreakdown il;
    // Loss relative to the unlevered full-range notional 2 L sqrt(x_open) of
    // the first segment.
    double virtual_il_pct = 0;
    double active_seconds = 0;
    double twal_usd = 0;  // time-weighted average USD value while active
    double net_usd() const { return il.fees_usd + il.actual_usd; }
};

struct UncollectedFees {
    double amount0 = 0;
    double amount1 = 0;
};

LedgerEntry evaluate_position(const RangePosition& position, const PriceFeed& feed,
                              const TokenPair& tokens, const LedgerOptions& options = {},
                              UncollectedFees uncollected = {});

// Step-hold average of (time, value) samples over [begin, end]. Each value
// holds until the next sample. NaN when end <= begin.
double time_weighted_average(const std::vector<std::pair<double, double>>& samples, double begin,
                             double end);

// Net USD over time-weighted average liquidity; NaN when undefined.
double roi(const LedgerEntry& entry);

}  // namespace clmm
