#include "clmm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "clmm/errors.hpp"
#include "clmm/ingest.hpp"

namespace clmm {

namespace {

int floor_to(int tick, int spacing) {
    int q = tick / spacing;
    if (tick % spacing != 0 && tick < 0) --q;
    return q * spacing;
}

int ceil_to(int tick, int spacing) {
    int q = tick / spacing;
    if (tick % spacing != 0 && tick > 0) ++q;
    return q * spacing;
}

std::size_t step_at_or_after(const PricePath& path, double t) {
    const auto it = std::lower_bound(path.times.begin(), path.times.end(), t);
    return static_cast<std::size_t>(it - path.times.begin());
}

const char* to_string(Direction d) { return d == Direction::ZeroForOne ? "0for1" : "1for0"; }
const char* to_string(TradeKind k) { return k == TradeKind::Arbitrage ? "arbitrage" : "noise"; }

}  // namespace

TickRange resolve_range(const PositionSpec& spec, int spacing) {
    TickRange r;
    if (spec.full_range) {
        r = full_range(spacing);
    } else if (spec.tick_lower && spec.tick_upper) {
        r = {*spec.tick_lower, *spec.tick_upper};
    } else if (spec.price_lower && spec.price_upper) {
        r.lower = floor_to(price_to_tick(*spec.price_lower), spacing);
        int upper = price_to_tick(*spec.price_upper);
        if (tick_to_price(upper) < *spec.price_upper * (1 - 1e-12)) ++upper;
        r.upper = ceil_to(upper, spacing);
        const TickRange widest = full_range(spacing);
        r.lower = std::max(r.lower, widest.lower);
        r.upper = std::min(r.upper, widest.upper);
    } else {
        throw InvalidArgument("position " + spec.id + " needs ticks, prices or full_range");
    }
    validate_range(r, spacing);
    return r;
}

SimulationResult run_scenario(const Scenario& sc) {
    const PricePath path = PricePath::make(sc.path.times, sc.path.prices);
    if (path.empty()) throw InvalidArgument("scenario price path is empty");
    for (double t : path.times) {
        if (std::fmod(t, kSecondsPerHour) != 0) {
            throw InvalidArgument("scenario path times must be whole hours (UNIX seconds)");
        }
    }
    if (sc.noise_volume < 0) throw InvalidArgument("noise volume must be nonnegative");

    struct Plan {
        const PositionSpec* spec;
        TickRange range;
        std::size_t entry;
        std::optional<std::size_t> exit;
    };
    std::vector<Plan> plans;
    std::map<std::string, bool> ids;
    for (const PositionSpec& p : sc.positions) {
        if (p.id.empty()) throw InvalidArgument("position id must not be empty");
        if (!ids.emplace(p.id, true).second) throw InvalidArgument("duplicate position id " + p.id);
        if (!(p.liquidity > 0)) throw InvalidArgument("position " + p.id + ": liquidity must be positive");
        Plan plan{&p, resolve_range(p, sc.tier.spacing), 0, std::nullopt};
        plan.entry = step_at_or_after(path, p.entry_time.value_or(path.front_time()));
        if (plan.entry >= path.size()) throw InvalidArgument("position " + p.id + " enters after the path ends");
        if (p.exit_time) {
            if (*p.exit_time < p.entry_time.value_or(path.front_time())) {
                throw InvalidArgument("position " + p.id + " exits before it enters");
            }
            const std::size_t e = step_at_or_after(path, *p.exit_time);
            if (e < path.size()) plan.exit = e;
        }
        plans.push_back(plan);
    }

    SimulationResult out;
    PoolState pool(sc.tier, sc.initial_price.value_or(path.prices.front()));

    auto record = [&](const Plan& plan, EventKind kind, std::size_t step, double time, double a0,
                      double a1, double dl) {
        EventRecord r;
        r.pool_id = sc.pool_id;
        r.position_id = plan.spec->id;
        r.wallet_id = plan.spec->wallet;
        r.event = {kind, static_cast<std::int64_t>(step) + 1, time, a0, a1, dl};
        r.tick_lower = plan.range.lower;
        r.tick_upper = plan.range.upper;
        r.row = static_cast<long>(out.events.size()) + 1;
        out.events.push_back(std::move(r));
    };

    ReplayOptions opts;
    opts.noise_volume = sc.noise_volume;
    opts.on_step = [&](std::size_t step, double time, PoolState& p) {
        for (const Plan& plan : plans) {
            if (plan.entry != step) continue;
            const TokenAmounts in = p.mint(plan.spec->id, plan.range, plan.spec->liquidity);
            record(plan, EventKind::Mint, step, time, in.amount0, in.amount1, plan.spec->liquidity);
        }
        for (const Plan& plan : plans) {
            if (!plan.exit || *plan.exit != step) continue;
            const TokenAmounts released = p.burn(plan.spec->id, plan.spec->liquidity);
            record(plan, EventKind::Decrease, step, time, released.amount0, released.amount1,
                   -plan.spec->liquidity);
            const auto [paid, fees] = p.collect(plan.spec->id);
            record(plan, EventKind::Collect, step, time, paid.amount0, paid.amount1, 0);
            record(plan, EventKind::Burn, step, time, 0, 0, 0);
        }
    };
    out.trades = replay(pool, path, opts).trades;
    out.final_price = pool.price();
    out.total_fees0 = pool.total_fees0();
    out.total_fees1 = pool.total_fees1();

    std::vector<PricePoint> points;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto hour = static_cast<std::int64_t>(path.times[i]);
        points.push_back({hour, sc.tokens.token0, path.prices[i]});
        points.push_back({hour, sc.tokens.token1, 1.0});
    }
    out.feed = PriceFeed::from_points(std::move(points));

    LedgerOptions lopt = sc.ledger;
    if (!lopt.evaluation_time) lopt.evaluation_time = path.back_time();
    for (const RangePosition& pos : group_positions(out.events)) {
        UncollectedFees unc;
        if (pool.positions().count(pos.position_id) && pool.positions().at(pos.position_id).liquidity > 0) {
            const TokenAmounts f = pool.uncollected_fees(pos.position_id);
            unc = {f.amount0, f.amount1};
        }
        out.entries.push_back(evaluate_position(pos, out.feed, sc.tokens, lopt, unc));
    }
    return out;
}

// ============================================================================
// I/O
// ============================================================================

void write_trades_csv(std::ostream& out, const std::vector<TradeRecord>& trades) {
    out << "step,time,kind,direction,amount_in,amount_out,fee_paid,start_price,end_price,"
           "ticks_crossed\n";
    for (const TradeRecord& t : trades) {
        out << t.step << ',' << format_number(t.time) << ',' << to_string(t.kind) << ','
            << to_string(t.swap.direction) << ',' << format_number(t.swap.amount_in) << ','
            << format_number(t.swap.amount_out) << ',' << format_number(t.swap.fee_paid) << ','
            << format_number(t.swap.start_price) << ',' << format_number(t.swap.end_price) << ','
            << t.swap.ticks_crossed.size() << '\n';
    }
}

void write_events_csv(std::ostream& out, const std::vector<EventRecord>& events) {
    for (std::size_t i = 0; i < kEventColumns.size(); ++i) {
        out << (i ? "," : "") << kEventColumns[i];
    }
    out << '\n';
    for (const EventRecord& r : events) {
        const LiquidityEvent& e = r.event;
        out << csv_escape(r.pool_id) << ',' << csv_escape(r.position_id) << ','
            << csv_escape(r.wallet_id) << ',' << to_string(e.kind) << ',' << e.block << ','
            << static_cast<std::int64_t>(e.timestamp) << ',' << format_number(e.amount0) << ','
            << format_number(e.amount1) << ',' << format_number(e.liquidity_delta) << ','
            << r.tick_lower << ',' << r.tick_upper << '\n';
    }
}

void write_path_csv(std::ostream& out, const PricePath& path) {
    out << "time,price\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
        out << format_number(path.times[i]) << ',' << format_number(path.prices[i]) << '\n';
    }
}

PricePath load_path(std::istream& in) {
    CsvReader reader(in);
    PricePath p;
    if (!read_header(reader, {"time", "price"})) return p;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const long row = reader.records_read() - 1;
        if (f.size() != 2) throw DataError("expected 2 fields", row);
        const double t = parse_real(f[0], "time", row);
        const double x = parse_real(f[1], "price", row);
        if (!(x > 0)) throw DataError("price must be positive", row);
        if (!p.times.empty() && !(t > p.times.back())) throw DataError("times must increase", row);
        p.times.push_back(t);
        p.prices.push_back(x);
    }
    return p;
}

PricePath load_path(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open " + file);
    return load_path(in);
}

}  // namespace clmm
