#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "clmm/analytics.hpp"
#include "clmm/errors.hpp"
#include "clmm/ingest.hpp"
#include "clmm/mc.hpp"
#include "clmm/pool.hpp"
#include "clmm/simulate.hpp"
#include "config.hpp"

namespace clmm::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
    std::string config;
    std::string events;
    std::string prices;
    std::string input;
    std::string out_dir;
    std::string numeraire;
    std::string ratio_convention;
    long long seed = -1;
    bool print_config = false;
};

void write_file(const fs::path& dir, const std::string& name,
                const std::function<void(std::ostream&)>& body) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    body(f);
    if (!f) throw std::runtime_error("failed writing " + (dir / name).string());
}

// Reports shared by simulate and analyze.
void write_analysis(const fs::path& dir, const std::vector<LedgerEntry>& entries,
                    const Settings& s, std::ostream& out) {
    const double filter = s.analysis.ledger.min_liquidity_usd;
    const WalletReport wallets = wallet_returns(entries, filter);
    const std::vector<PoolTotals> pools = pool_report(entries);
    write_file(dir, "positions.csv", [&](std::ostream& o) { write_positions_csv(o, entries); });
    write_file(dir, "segments.csv", [&](std::ostream& o) { write_segments_csv(o, entries); });
    write_file(dir, "durations.csv", [&](std::ostream& o) { write_durations_csv(o, entries); });
    write_file(dir, "wallets.csv", [&](std::ostream& o) { write_wallets_csv(o, wallets); });
    write_file(dir, "wallet_summary.csv", [&](std::ostream& o) { write_wallet_summary_csv(o, wallets); });
    write_file(dir, "pools.csv", [&](std::ostream& o) { write_pools_csv(o, pools); });
    if (!s.capital_buckets.empty()) {
        const auto cohorts = capital_cohorts(entries, s.capital_buckets, filter);
        write_file(dir, "cohorts.csv", [&](std::ostream& o) { write_cohorts_csv(o, cohorts); });
    }
    for (const PoolTotals& t : pools) {
        out << t.pool_id << ": positions " << t.positions << ", fees_usd " << format_number(t.fees_usd)
            << ", actual_il_usd " << format_number(t.actual_il_usd) << ", minimal_il_usd "
            << format_number(t.minimal_il_usd) << ", net_usd " << format_number(t.net_usd) << '\n';
    }
}

int cmd_simulate(const Settings& s, std::ostream& out) {
    if (s.scenario.positions.empty()) throw ConfigError("simulate needs at least one position");
    const SimulationResult r = run_scenario(s.scenario);
    const fs::path dir = s.out_dir;
    write_file(dir, "path.csv", [&](std::ostream& o) { write_path_csv(o, s.scenario.path); });
    write_file(dir, "trades.csv", [&](std::ostream& o) { write_trades_csv(o, r.trades); });
    write_file(dir, "events.csv", [&](std::ostream& o) { write_events_csv(o, r.events); });
    write_file(dir, "prices.csv", [&](std::ostream& o) {
        o << "hour,token_id,usd_price\n";
        for (const PricePoint& p : r.feed.points()) {
            o << p.hour << ',' << csv_escape(p.token_id) << ',' << format_number(p.usd_price) << '\n';
        }
    });
    write_analysis(dir, r.entries, s, out);
    out << "trades " << r.trades.size() << ", final price " << format_number(r.final_price)
        << ", reports in " << dir.string() << '\n';
    return kOk;
}

int cmd_analyze(const Settings& s, const Flags& f, std::ostream& out) {
    if (f.events.empty() || f.prices.empty()) throw ConfigError("analyze needs --events and --prices");
    if (!fs::exists(f.events)) throw ConfigError("events file " + f.events + " does not exist");
    if (!fs::exists(f.prices)) throw ConfigError("prices file " + f.prices + " does not exist");
    const auto records = load_events(f.events);
    const PriceFeed feed = load_prices(f.prices);
    const auto positions = group_positions(records);
    std::vector<LedgerEntry> entries;
    if (!positions.empty()) entries = evaluate_positions(positions, feed, s.analysis);
    write_analysis(s.out_dir, entries, s, out);
    out << "positions " << entries.size() << ", reports in " << s.out_dir << '\n';
    return kOk;
}

int cmd_reconstruct(const Settings& s, const Flags& f, std::ostream& out) {
    if (f.input.empty()) throw ConfigError("reconstruct needs --input");
    std::ifstream in(f.input, std::ios::binary);
    if (!in) throw ConfigError("cannot open input " + f.input);
    RatioConvention conv = s.reconstruct.convention;
    if (f.ratio_convention == "token0_share") conv = RatioConvention::Token0Share;
    else if (f.ratio_convention == "token1_share") conv = RatioConvention::Token1Share;
    else if (!f.ratio_convention.empty()) throw ConfigError("--ratio-convention must be token1_share or token0_share");
    std::ostringstream buf;
    reconstruct_csv(in, buf, conv, s.reconstruct.tolerance);
    write_file(s.out_dir, "reconstructed.csv", [&](std::ostream& o) { o << buf.str(); });
    out << "reconstructed rows in " << (fs::path(s.out_dir) / "reconstructed.csv").string() << '\n';
    return kOk;
}

int cmd_mc(const Settings& s, std::ostream& out) {
    const McResult r = run_mc(s.mc);
    write_file(s.out_dir, "mc.csv", [&](std::ostream& o) { write_mc_csv(o, r); });
    write_file(s.out_dir, "mc_fit.csv", [&](std::ostream& o) { write_mc_fit_csv(o, r); });
    out << "median |IL| exponent " << format_number(r.il_exponent) << ", median fee exponent "
        << format_number(r.fee_exponent) << '\n';
    return kOk;
}

const char* boundary_name(BoundaryKind b) {
    switch (b) {
        case BoundaryKind::InRange: return "in_range";
        case BoundaryKind::AllToken0: return "all_token0";
        case BoundaryKind::AllToken1: return "all_token1";
    }
    return "?";
}

}  // namespace

void reconstruct_csv(std::istream& in, std::ostream& out, RatioConvention convention,
                     double tolerance) {
    CsvReader reader(in);
    out << "liquidity,price_a,price_b,ratio,x,y,price,tick,boundary\n";
    if (!read_header(reader, {"liquidity", "price_a", "price_b", "ratio"})) return;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const long row = reader.records_read() - 1;
        if (f.size() != 4) throw DataError("expected 4 fields, got " + std::to_string(f.size()), row);
        ObservedAdjustment obs;
        obs.liquidity = parse_real(f[0], "liquidity", row);
        obs.price_a = parse_real(f[1], "price_a", row);
        obs.price_b = parse_real(f[2], "price_b", row);
        obs.ratio = parse_real(f[3], "ratio", row);
        obs.convention = convention;
        try {
            obs.validate();
        } catch (const InvalidArgument& e) {
            throw DataError(e.what(), row);
        }
        ReconstructedState st;
        try {
            st = reconstruct(obs, tolerance);
        } catch (const InconsistentObservation& e) {
            throw InconsistentObservation(std::string(e.what()) + " (row " + std::to_string(row) + ")");
        }
        out << f[0] << ',' << f[1] << ',' << f[2] << ',' << f[3] << ',' << format_number(st.x) << ','
            << format_number(st.y) << ',' << format_number(st.price) << ',' << st.tick << ','
            << boundary_name(st.boundary) << '\n';
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Concentrated-liquidity AMM simulator and impermanent-loss analytics", "clmm"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    Flags f;
    app.add_option("--config", f.config, "JSON config file (defaults apply to missing keys)");
    app.add_option("--out-dir", f.out_dir, "Directory for report CSVs");
    app.add_option("--seed", f.seed, "Seed for GBM paths and the Monte Carlo study");
    app.add_option("--numeraire", f.numeraire, "token0, token1 or usd");
    app.add_flag("--print-config", f.print_config, "Print the effective config and exit");

    auto* sim = app.add_subcommand("simulate", "Replay a scenario through the pool simulator");
    auto* ana = app.add_subcommand("analyze", "Run the ledger and analytics over event and price CSVs");
    ana->add_option("--events", f.events, "Events CSV");
    ana->add_option("--prices", f.prices, "Hourly USD prices CSV");
    auto* rec = app.add_subcommand("reconstruct", "Recover balances, price and tick from observations");
    rec->add_option("--input", f.input, "CSV with liquidity,price_a,price_b,ratio");
    rec->add_option("--ratio-convention", f.ratio_convention, "token1_share (default) or token0_share");
    auto* mc = app.add_subcommand("mc", "Monte Carlo study of IL and fee scaling with horizon");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        Json config = load_config(f.config);
        // a relative path file is taken relative to the config file
        if (!f.config.empty() && config["path"]["file"].is_string()) {
            const fs::path file = config["path"]["file"].get<std::string>();
            if (file.is_relative()) {
                config["path"]["file"] = (fs::path(f.config).parent_path() / file).lexically_normal().string();
            }
        }
        if (!f.out_dir.empty()) config["out_dir"] = f.out_dir;
        if (f.seed >= 0) config["seed"] = f.seed;
        if (!f.numeraire.empty()) config["numeraire"] = f.numeraire;
        if (f.print_config) {
            interpret(config, false);  // validate before printing
            out << config.dump(2) << '\n';
            return kOk;
        }
        if (app.get_subcommands().empty()) throw ConfigError("a subcommand is required (simulate, analyze, reconstruct, mc)");
        Settings s;
        try {
            s = interpret(config, sim->parsed());
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
        if (sim->parsed()) {
            try {
                return cmd_simulate(s, out);
            } catch (const InvalidArgument& e) {
                throw ConfigError(e.what());
            }
        }
        if (ana->parsed()) return cmd_analyze(s, f, out);
        if (rec->parsed()) return cmd_reconstruct(s, f, out);
        if (mc->parsed()) return cmd_mc(s, out);
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const PartialFill& e) {
        err << "partial fill: " << e.what() << " (filled " << format_number(e.filled().amount_in)
            << " of the input)\n";
        return kEngineError;
    } catch (const InconsistentObservation& e) {
        err << "inconsistent observation: " << e.what() << "\n";
        return kEngineError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const InvalidArgument& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace clmm::cli
