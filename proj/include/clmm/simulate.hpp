#pragma once

// Scenario runner: replays a price path through a simulated pool, turns the
// LP actions into liquidity events and feeds them through the same ledger
// and analytics used for ingested data.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clmm/analytics.hpp"
#include "clmm/pool.hpp"

namespace clmm {

struct PositionSpec {
    std::string id;
    std::string wallet = "wallet";
    // Either explicit ticks, explicit prices (widened outward to the tick
    // spacing) or the full range.
    std::optional<int> tick_lower;
    std::optional<int> tick_upper;
    std::optional<double> price_lower;
    std::optional<double> price_upper;
    bool full_range = false;
    double liquidity = 0;
    std::optional<double> entry_time;  // defaults to the first path point
    std::optional<double> exit_time;   // open until the end when absent
};

struct Scenario {
    FeeTier tier = FeeTier::from_code(3000);
    std::optional<double> initial_price;  // defaults to the first path price
    PricePath path;                       // hour-aligned timestamps
    std::vector<PositionSpec> positions;
    double noise_volume = 0;  // token1 per step, bought then sold back
    std::string pool_id = "TOKEN0-TOKEN1";
    TokenPair tokens{"TOKEN0", "TOKEN1"};
    LedgerOptions ledger;
    double wallet_filter_usd = 1.0;
};

struct SimulationResult {
    std::vector<TradeRecord> trades;
    std::vector<EventRecord> events;  // in the ingest schema
    PriceFeed feed;                   // token0 = path price, token1 = 1 USD
    std::vector<LedgerEntry> entries;
    double final_price = 0;
    double total_fees0 = 0;
    double total_fees1 = 0;
};

// Tick range a spec resolves to under `spacing`.
TickRange resolve_range(const PositionSpec& spec, int spacing);

// Throws InvalidArgument on an inconsistent scenario, PartialFill when the
// noise volume exhausts liquidity.
SimulationResult run_scenario(const Scenario& scenario);

void write_trades_csv(std::ostream& out, const std::vector<TradeRecord>& trades);
void write_events_csv(std::ostream& out, const std::vector<EventRecord>& events);
void write_path_csv(std::ostream& out, const PricePath& path);

// time,price with strictly increasing times. Throws DataError with the row.
PricePath load_path(std::istream& in);
PricePath load_path(const std::string& file);

}  // namespace clmm
