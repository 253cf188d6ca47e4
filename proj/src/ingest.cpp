#include "clmm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "clmm/errors.hpp"
#include "clmm/tick_math.hpp"

namespace clmm {

const std::vector<std::string> kEventColumns{"pool_id",   "position_id", "wallet_id",
                                             "kind",      "block",       "timestamp",
                                             "amount0",   "amount1",     "liquidity_delta",
                                             "tick_lower", "tick_upper"};
const std::vector<std::string> kPriceColumns{"hour", "token_id", "usd_price"};

// ============================================================================
// CSV
// ============================================================================

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;       // saw at least one character of this record
    bool was_quoted = false;
    int c;
    while ((c = in_.get()) != EOF) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && in_.peek() == '\n') in_.get();
            if (fields.empty() && field.empty() && !was_quoted) {
                any = false;  // blank line
                continue;
            }
            fields.push_back(std::move(field));
            ++records_;
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
    if (in_quotes) throw DataError("unterminated quoted field", records_);
    if (!any) return false;
    fields.push_back(std::move(field));
    ++records_;
    return true;
}

bool read_header(CsvReader& reader, const std::vector<std::string>& expected) {
    std::vector<std::string> header;
    if (!reader.next(header)) return false;
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
    if (header != expected) {
        std::string want;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        throw DataError("unexpected header, expected " + want, 0);
    }
    return true;
}

double parse_real(const std::string& field, const char* column, long row) {
    double v = 0;
    const char* b = field.data();
    const char* e = b + field.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (field.empty() || ec != std::errc() || p != e || !std::isfinite(v)) {
        throw DataError(std::string("invalid number in column ") + column + ": '" + field + "'", row);
    }
    return v;
}

std::int64_t parse_integer(const std::string& field, const char* column, long row) {
    std::int64_t v = 0;
    const char* b = field.data();
    const char* e = b + field.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (field.empty() || ec != std::errc() || p != e) {
        throw DataError(std::string("invalid integer in column ") + column + ": '" + field + "'", row);
    }
    return v;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0) return "0";  // folds -0
    char buf[64];
    const double mag = std::abs(value);
    const auto res = mag >= 1e-5 && mag < 1e16
                         ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

// ============================================================================
// Events
// ============================================================================

namespace {

// A burn that still removes liquidity releases principal like a decrease, so
// it must precede the collect that pays it out.
int kind_rank(const LiquidityEvent& e) {
    if (e.kind == EventKind::Burn && e.liquidity_delta != 0) return 2;
    switch (e.kind) {
        case EventKind::Mint: return 0;
        case EventKind::Increase: return 1;
        case EventKind::Decrease: return 2;
        case EventKind::Collect: return 3;
        case EventKind::Burn: return 4;
    }
    return 5;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

}  // namespace

void sort_events(std::vector<EventRecord>& records) {
    std::sort(records.begin(), records.end(), [](const EventRecord& a, const EventRecord& b) {
        if (a.pool_id != b.pool_id) return a.pool_id < b.pool_id;
        if (a.position_id != b.position_id) return a.position_id < b.position_id;
        if (a.event.block != b.event.block) return a.event.block < b.event.block;
        if (a.event.timestamp != b.event.timestamp) return a.event.timestamp < b.event.timestamp;
        if (kind_rank(a.event) != kind_rank(b.event)) {
            return kind_rank(a.event) < kind_rank(b.event);
        }
        return a.row < b.row;
    });
}

std::vector<EventRecord> load_events(std::istream& in) {
    CsvReader reader(in);
    std::vector<EventRecord> out;
    if (!read_header(reader, kEventColumns)) return out;

    std::vector<std::string> f;
    while (reader.next(f)) {
        const long row = reader.records_read() - 1;
        if (f.size() != kEventColumns.size()) {
            throw DataError("expected " + std::to_string(kEventColumns.size()) + " fields, got " +
                                std::to_string(f.size()),
                            row);
        }
        EventRecord r;
        r.row = row;
        r.pool_id = f[0];
        r.position_id = f[1];
        r.wallet_id = f[2];
        if (r.pool_id.empty() || r.position_id.empty()) throw DataError("empty identifier", row);
        try {
            r.event.kind = parse_event_kind(f[3]);
        } catch (const InvalidArgument& e) {
            throw DataError(e.what(), row);
        }
        r.event.block = parse_integer(f[4], "block", row);
        r.event.timestamp = static_cast<double>(parse_integer(f[5], "timestamp", row));
        r.event.amount0 = parse_real(f[6], "amount0", row);
        r.event.amount1 = parse_real(f[7], "amount1", row);
        r.event.liquidity_delta = parse_real(f[8], "liquidity_delta", row);
        const auto lo = parse_integer(f[9], "tick_lower", row);
        const auto hi = parse_integer(f[10], "tick_upper", row);
        if (lo < kMinTick || hi > kMaxTick || lo >= hi) throw DataError("invalid tick range", row);
        r.tick_lower = static_cast<int>(lo);
        r.tick_upper = static_cast<int>(hi);

        const double d = r.event.liquidity_delta;
        switch (r.event.kind) {
            case EventKind::Mint:
            case EventKind::Increase:
                if (d < 0) throw DataError("negative liquidity_delta on " + f[3], row);
                break;
            case EventKind::Decrease:
            case EventKind::Burn:
                if (d > 0) throw DataError("positive liquidity_delta on " + f[3], row);
                break;
            case EventKind::Collect:
                if (d != 0) throw DataError("collect must not change liquidity", row);
                if (r.event.amount0 < 0 || r.event.amount1 < 0) {
                    throw DataError("negative collect amount", row);
                }
                break;
        }
        out.push_back(std::move(r));
    }

    sort_events(out);
    return out;
}

std::vector<EventRecord> load_events(const std::string& path) {
    auto in = open_input(path);
    return load_events(in);
}

PriceFeed load_prices(std::istream& in) {
    CsvReader reader(in);
    std::vector<PricePoint> points;
    std::vector<long> rows;
    if (!read_header(reader, kPriceColumns)) return PriceFeed{};
    std::vector<std::string> f;
    while (reader.next(f)) {
        const long row = reader.records_read() - 1;
        if (f.size() != kPriceColumns.size()) {
            throw DataError("expected 3 fields, got " + std::to_string(f.size()), row);
        }
        PricePoint p;
        p.hour = parse_integer(f[0], "hour", row);
        p.token_id = f[1];
        p.usd_price = parse_real(f[2], "usd_price", row);
        points.push_back(std::move(p));
        rows.push_back(row);
    }
    return PriceFeed::from_points(std::move(points), std::move(rows));
}

PriceFeed load_prices(const std::string& path) {
    auto in = open_input(path);
    return load_prices(in);
}

std::vector<RangePosition> group_positions(std::vector<EventRecord> records) {
    sort_events(records);
    std::vector<RangePosition> out;
    for (const EventRecord& r : records) {
        if (out.empty() || out.back().pool_id != r.pool_id ||
            out.back().position_id != r.position_id) {
            RangePosition p;
            p.position_id = r.position_id;
            p.wallet_id = r.wallet_id;
            p.pool_id = r.pool_id;
            p.tick_lower = r.tick_lower;
            p.tick_upper = r.tick_upper;
            out.push_back(std::move(p));
        }
        RangePosition& p = out.back();
        if (p.wallet_id != r.wallet_id) throw DataError("position changes wallet", r.row);
        if (p.tick_lower != r.tick_lower || p.tick_upper != r.tick_upper) {
            throw DataError("position changes tick range", r.row);
        }
        p.events.push_back(r.event);
        try {
            p.validate();
        } catch (const InvalidArgument& e) {
            throw DataError(e.what(), r.row);
        }
    }
    // Position ids are unique per pool; a repeat across pools is an error.
    std::map<std::string, std::string> seen;
    for (const RangePosition& p : out) {
        auto [it, fresh] = seen.emplace(p.position_id, p.pool_id);
        if (!fresh) throw DataError("position " + p.position_id + " appears in two pools");
    }
    return out;
}

TokenPair resolve_pool_tokens(const std::string& pool_id,
                              const std::map<std::string, TokenPair>& known) {
    if (auto it = known.find(pool_id); it != known.end()) return it->second;
    const auto a = pool_id.find('-');
    if (a != std::string::npos && a > 0) {
        const auto b = pool_id.find('-', a + 1);
        TokenPair t{pool_id.substr(0, a),
                    pool_id.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1)};
        if (!t.token1.empty()) return t;
    }
    throw DataError("cannot determine the tokens of pool " + pool_id);
}

}  // namespace clmm
