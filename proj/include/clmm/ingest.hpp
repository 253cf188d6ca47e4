#pragma once

// CSV ingestion of liquidity events and hourly USD prices.
//
// events:  pool_id,position_id,wallet_id,kind,block,timestamp,amount0,amount1,
//          liquidity_delta,tick_lower,tick_upper
// prices:  hour,token_id,usd_price
//
// Row numbers in diagnostics count data rows from 1 (the header is row 0).

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "clmm/ledger.hpp"
#include "clmm/price_feed.hpp"

namespace clmm {

// ============================================================================
// CSV
// ============================================================================

// RFC-4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks; CRLF and LF line ends are both accepted. Blank lines are skipped.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Next record, false at end of input. Throws DataError on an
    // unterminated quote.
    bool next(std::vector<std::string>& fields);
    long records_read() const { return records_; }

private:
    std::istream& in_;
    long records_ = 0;
};

// Reads the header and checks it names exactly `expected` in order.
// Returns false for a completely empty input.
bool read_header(CsvReader& reader, const std::vector<std::string>& expected);

// Strict numeric field parsers; throw DataError naming the column and row.
double parse_real(const std::string& field, const char* column, long row);
std::int64_t parse_integer(const std::string& field, const char* column, long row);

std::string csv_escape(const std::string& field);

// Shortest decimal that reads back to the same double, so reports re-ingest
// losslessly. Non-finite values print as "nan", "inf" and "-inf".
std::string format_number(double value);

// ============================================================================
// Events and prices
// ============================================================================

struct EventRecord {
    std::string pool_id;
    std::string position_id;
    std::string wallet_id;
    LiquidityEvent event;
    int tick_lower = 0;
    int tick_upper = 0;
    long row = 0;  // source data row
};

extern const std::vector<std::string> kEventColumns;
extern const std::vector<std::string> kPriceColumns;

// Validated records sorted by (pool, position, block, timestamp, kind, row).
std::vector<EventRecord> load_events(std::istream& in);
std::vector<EventRecord> load_events(const std::string& path);

PriceFeed load_prices(std::istream& in);
PriceFeed load_prices(const std::string& path);

// Sorts by (pool, position, block, timestamp, kind, row); within a block
// the kinds order as mint, increase, decrease, collect, burn, except that a
// burn removing liquidity ranks with the decreases.
void sort_events(std::vector<EventRecord>& records);

// Groups records into positions (sorting a copy first). Throws DataError when rows of one
// position disagree on pool, wallet or ticks, or the event sequence is
// invalid (negative liquidity, out-of-order times).
std::vector<RangePosition> group_positions(std::vector<EventRecord> records);

// Token pair of a pool: from `known` when listed, else parsed from an id of
// the form TOKEN0-TOKEN1[-FEE]. Throws DataError otherwise.
TokenPair resolve_pool_tokens(const std::string& pool_id,
                              const std::map<std::string, TokenPair>& known = {});

}  // namespace clmm
