#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "clmm/gbm.hpp"

namespace clmm::cli {

namespace {

// Objects whose default is empty take arbitrary keys (user-named maps).
void merge_into(Json& base, const Json& user, const std::string& where) {
    if (!user.is_object()) throw ConfigError(where + " must be an object");
    const bool open_map = base.empty();
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = where.empty() ? it.key() : where + "." + it.key();
        if (!open_map && !base.contains(it.key())) throw ConfigError("unknown config key " + key);
        Json& slot = base[it.key()];
        if (!open_map && slot.is_object() && !slot.empty()) {
            merge_into(slot, it.value(), key);
        } else {
            slot = it.value();
        }
    }
}

[[noreturn]] void type_error(const std::string& where, const char* want) {
    throw ConfigError(where + " must be " + want);
}

double real(const Json& j, const std::string& where) {
    if (!j.is_number()) type_error(where, "a number");
    return j.get<double>();
}

std::optional<double> opt_real(const Json& j, const std::string& where) {
    if (j.is_null()) return std::nullopt;
    return real(j, where);
}

long long integer(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) type_error(where, "an integer");
    return j.get<long long>();
}

std::optional<int> opt_int(const Json& j, const std::string& where) {
    if (j.is_null()) return std::nullopt;
    return static_cast<int>(integer(j, where));
}

std::string text(const Json& j, const std::string& where) {
    if (!j.is_string()) type_error(where, "a string");
    return j.get<std::string>();
}

bool boolean(const Json& j, const std::string& where) {
    if (!j.is_boolean()) type_error(where, "true or false");
    return j.get<bool>();
}

const Json kPositionDefaults = {
    {"id", nullptr},           {"wallet", "wallet"},      {"tick_lower", nullptr},
    {"tick_upper", nullptr},   {"price_lower", nullptr},  {"price_upper", nullptr},
    {"full_range", false},     {"liquidity", nullptr},    {"entry_time", nullptr},
    {"exit_time", nullptr},
};

PositionSpec position(const Json& user, const std::string& where) {
    Json j = kPositionDefaults;
    merge_into(j, user, where);
    PositionSpec p;
    p.id = text(j["id"], where + ".id");
    p.wallet = text(j["wallet"], where + ".wallet");
    p.tick_lower = opt_int(j["tick_lower"], where + ".tick_lower");
    p.tick_upper = opt_int(j["tick_upper"], where + ".tick_upper");
    p.price_lower = opt_real(j["price_lower"], where + ".price_lower");
    p.price_upper = opt_real(j["price_upper"], where + ".price_upper");
    p.full_range = boolean(j["full_range"], where + ".full_range");
    p.liquidity = real(j["liquidity"], where + ".liquidity");
    p.entry_time = opt_real(j["entry_time"], where + ".entry_time");
    p.exit_time = opt_real(j["exit_time"], where + ".exit_time");
    const int ways = (p.tick_lower || p.tick_upper ? 1 : 0) + (p.price_lower || p.price_upper ? 1 : 0) +
                     (p.full_range ? 1 : 0);
    if (ways != 1) {
        throw ConfigError(where + " needs exactly one of tick_lower/tick_upper, "
                                  "price_lower/price_upper or full_range");
    }
    if ((p.tick_lower && !p.tick_upper) || (!p.tick_lower && p.tick_upper) ||
        (p.price_lower && !p.price_upper) || (!p.price_lower && p.price_upper)) {
        throw ConfigError(where + " needs both range bounds");
    }
    return p;
}

}  // namespace

Json default_config() {
    return Json{
        {"out_dir", "out"},
        {"seed", 42},
        {"numeraire", "token1"},
        {"pool",
         {{"id", "TOKEN0-TOKEN1"},
          {"token0", "TOKEN0"},
          {"token1", "TOKEN1"},
          {"fee_tier", 3000},
          {"tick_spacing", nullptr},
          {"initial_price", nullptr}}},
        {"path",
         {{"file", nullptr},
          {"gbm",
           {{"s0", 100.0},
            {"drift", 0.0},
            {"volatility", 0.8},
            {"horizon_days", 30},
            {"step_hours", 24},
            {"start_time", 0},
            {"path_index", 0}}}}},
        {"noise_volume", 0.0},
        {"positions", Json::array()},
        {"analytics",
         {{"min_liquidity_usd", 1.0},
          {"conversion_timing", "accrual"},
          {"max_gap_seconds", 3600},
          {"evaluation_time", nullptr},
          {"capital_buckets", Json::array()}}},
        {"pools", Json::object()},
        {"reconstruct", {{"ratio_convention", "token1_share"}, {"tolerance", 1e-9}}},
        {"mc",
         {{"volatility", 0.8},
          {"drift", 0.0},
          {"step_days", 1.0},
          {"horizons_days", {7, 30, 91, 182, 365}},
          {"paths", 10000},
          {"fee_tier", 3000},
          {"s0", 1.0},
          {"liquidity", 1000.0},
          {"noise_fraction", 0.01}}},
    };
}

Json merge_config(const Json& user) {
    Json base = default_config();
    if (user.is_null()) return base;
    if (user.is_object() && user.contains("path") && user["path"].is_object()) {
        const Json& path = user["path"];
        if (path.contains("gbm") && path.contains("file") && !path["file"].is_null()) {
            throw ConfigError("path.file and path.gbm are mutually exclusive");
        }
    }
    merge_into(base, user, "");
    return base;
}

Json load_config(const std::string& path) {
    if (path.empty()) return default_config();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    Json user;
    try {
        user = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return merge_config(user);
}

Numeraire parse_numeraire(const std::string& name) {
    if (name == "token0") return Numeraire::Token0;
    if (name == "token1") return Numeraire::Token1;
    if (name == "usd") return Numeraire::Usd;
    throw ConfigError("numeraire must be token0, token1 or usd, got '" + name + "'");
}

Settings interpret(const Json& c, bool need_path) {
    Settings s;
    s.out_dir = text(c["out_dir"], "out_dir");
    const long long seed = integer(c["seed"], "seed");
    if (seed < 0) throw ConfigError("seed must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);

    // Ledger and analytics.
    const Json& a = c["analytics"];
    LedgerOptions& lo = s.analysis.ledger;
    lo.numeraire = parse_numeraire(text(c["numeraire"], "numeraire"));
    lo.min_liquidity_usd = real(a["min_liquidity_usd"], "analytics.min_liquidity_usd");
    const std::string timing = text(a["conversion_timing"], "analytics.conversion_timing");
    if (timing == "accrual") {
        lo.timing = ConversionTiming::AtAccrual;
    } else if (timing == "end") {
        lo.timing = ConversionTiming::AtEnd;
    } else {
        throw ConfigError("analytics.conversion_timing must be accrual or end");
    }
    lo.max_gap = real(a["max_gap_seconds"], "analytics.max_gap_seconds");
    if (!(lo.max_gap >= 0)) throw ConfigError("analytics.max_gap_seconds must be nonnegative");
    lo.evaluation_time = opt_real(a["evaluation_time"], "analytics.evaluation_time");
    if (!a["capital_buckets"].is_array()) type_error("analytics.capital_buckets", "an array");
    for (const Json& e : a["capital_buckets"]) s.capital_buckets.push_back(real(e, "analytics.capital_buckets[]"));
    for (std::size_t i = 1; i < s.capital_buckets.size(); ++i) {
        if (!(s.capital_buckets[i] > s.capital_buckets[i - 1])) {
            throw ConfigError("analytics.capital_buckets must be strictly increasing");
        }
    }
    for (auto it = c["pools"].begin(); it != c["pools"].end(); ++it) {
        const std::string where = "pools." + it.key();
        Json pair = {{"token0", nullptr}, {"token1", nullptr}};
        merge_into(pair, it.value(), where);
        s.analysis.pool_tokens[it.key()] = {text(pair["token0"], where + ".token0"),
                                            text(pair["token1"], where + ".token1")};
    }

    // Reconstruction.
    const std::string conv = text(c["reconstruct"]["ratio_convention"], "reconstruct.ratio_convention");
    if (conv == "token1_share") {
        s.reconstruct.convention = RatioConvention::Token1Share;
    } else if (conv == "token0_share") {
        s.reconstruct.convention = RatioConvention::Token0Share;
    } else {
        throw ConfigError("reconstruct.ratio_convention must be token1_share or token0_share");
    }
    s.reconstruct.tolerance = real(c["reconstruct"]["tolerance"], "reconstruct.tolerance");

    // Monte Carlo.
    const Json& m = c["mc"];
    s.mc.volatility = real(m["volatility"], "mc.volatility");
    s.mc.drift = real(m["drift"], "mc.drift");
    s.mc.step_days = real(m["step_days"], "mc.step_days");
    s.mc.horizons_days.clear();
    if (!m["horizons_days"].is_array()) type_error("mc.horizons_days", "an array");
    for (const Json& h : m["horizons_days"]) s.mc.horizons_days.push_back(static_cast<int>(integer(h, "mc.horizons_days[]")));
    const long long paths = integer(m["paths"], "mc.paths");
    if (paths <= 0) throw ConfigError("mc.paths must be positive");
    s.mc.paths = static_cast<std::size_t>(paths);
    s.mc.fee_tier = static_cast<int>(integer(m["fee_tier"], "mc.fee_tier"));
    s.mc.s0 = real(m["s0"], "mc.s0");
    s.mc.liquidity = real(m["liquidity"], "mc.liquidity");
    s.mc.noise_fraction = real(m["noise_fraction"], "mc.noise_fraction");
    s.mc.seed = s.seed;
    try {
        s.mc.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }

    // Scenario.
    Scenario& sc = s.scenario;
    const Json& p = c["pool"];
    try {
        sc.tier = FeeTier::from_code(static_cast<int>(integer(p["fee_tier"], "pool.fee_tier")),
                                     opt_int(p["tick_spacing"], "pool.tick_spacing"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("pool: ") + e.what());
    }
    sc.pool_id = text(p["id"], "pool.id");
    sc.tokens = {text(p["token0"], "pool.token0"), text(p["token1"], "pool.token1")};
    if (sc.tokens.token0 == sc.tokens.token1) throw ConfigError("pool tokens must differ");
    sc.initial_price = opt_real(p["initial_price"], "pool.initial_price");
    sc.noise_volume = real(c["noise_volume"], "noise_volume");
    sc.ledger = lo;
    sc.wallet_filter_usd = lo.min_liquidity_usd;
    if (!c["positions"].is_array()) type_error("positions", "an array");
    for (std::size_t i = 0; i < c["positions"].size(); ++i) {
        sc.positions.push_back(position(c["positions"][i], "positions[" + std::to_string(i) + "]"));
    }

    const Json& path = c["path"];
    if (!path["file"].is_null()) {
        const std::string file = text(path["file"], "path.file");
        if (!std::filesystem::exists(file)) throw ConfigError("path.file " + file + " does not exist");
        if (need_path) sc.path = load_path(file);
    } else if (need_path) {
        const Json& g = path["gbm"];
        GbmSpec spec;
        spec.s0 = real(g["s0"], "path.gbm.s0");
        spec.drift = real(g["drift"], "path.gbm.drift");
        spec.volatility = real(g["volatility"], "path.gbm.volatility");
        const double step_hours = real(g["step_hours"], "path.gbm.step_hours");
        const double horizon_days = real(g["horizon_days"], "path.gbm.horizon_days");
        if (!(step_hours > 0) || std::fmod(step_hours, 1.0) != 0) {
            throw ConfigError("path.gbm.step_hours must be a positive whole number");
        }
        spec.step = step_hours / (24.0 * 365.0);
        spec.horizon = horizon_days / 365.0;
        spec.start_time = real(g["start_time"], "path.gbm.start_time");
        if (std::fmod(spec.start_time, kSecondsPerHour) != 0) {
            throw ConfigError("path.gbm.start_time must be a whole hour");
        }
        spec.seed = s.seed;
        const long long index = integer(g["path_index"], "path.gbm.path_index");
        if (index < 0) throw ConfigError("path.gbm.path_index must be nonnegative");
        try {
            sc.path = gbm_path(spec, static_cast<std::size_t>(index));
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("path.gbm: ") + e.what());
        }
    }
    return s;
}

}  // namespace clmm::cli
