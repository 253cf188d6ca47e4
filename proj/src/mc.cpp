#include "clmm/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clmm/errors.hpp"
#include "clmm/gbm.hpp"
#include "clmm/ingest.hpp"
#include "clmm/pool.hpp"

namespace clmm {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
}

}  // namespace

void McSpec::validate() const {
    if (!(volatility >= 0) || !std::isfinite(volatility)) {
        throw InvalidArgument("mc volatility must be nonnegative");
    }
    if (!(step_days > 0)) throw InvalidArgument("mc step_days must be positive");
    if (horizons_days.empty()) throw InvalidArgument("mc needs at least one horizon");
    int prev = 0;
    for (int h : horizons_days) {
        if (h <= prev) throw InvalidArgument("mc horizons must be positive and increasing");
        const double n = h / step_days;
        if (std::abs(n - std::round(n)) > 1e-9) {
            throw InvalidArgument("mc horizons must be whole multiples of step_days");
        }
        prev = h;
    }
    if (paths == 0) throw InvalidArgument("mc needs at least one path");
    if (!(s0 > 0) || !(liquidity > 0)) throw InvalidArgument("mc s0 and liquidity must be positive");
    if (!(noise_fraction >= 0)) throw InvalidArgument("mc noise_fraction must be nonnegative");
    FeeTier::from_code(fee_tier);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("need two or more points to fit");
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) return std::numeric_limits<double>::quiet_NaN();
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

McResult run_mc(const McSpec& spec) {
    spec.validate();
    const FeeTier tier = FeeTier::from_code(spec.fee_tier);
    const TickRange range = full_range(tier.spacing);

    GbmSpec g;
    g.s0 = spec.s0;
    g.drift = spec.drift;
    g.volatility = spec.volatility;
    g.step = spec.step_days / 365.0;
    g.horizon = spec.horizons_days.back() / 365.0;
    g.count = spec.paths;
    g.seed = spec.seed;

    std::vector<std::size_t> at_step;
    for (int h : spec.horizons_days) at_step.push_back(static_cast<std::size_t>(std::llround(h / spec.step_days)));

    const std::size_t nh = at_step.size();
    std::vector<std::vector<double>> il(nh), fees(nh);
    for (auto& v : il) v.reserve(spec.paths);
    for (auto& v : fees) v.reserve(spec.paths);

    const double entry_value = 2.0 * spec.liquidity * std::sqrt(spec.s0);
    for (std::size_t p = 0; p < spec.paths; ++p) {
        const PricePath path = gbm_path(g, p);
        PoolState pool(tier, spec.s0);
        TokenAmounts entry{};
        std::size_t next = 0;

        ReplayOptions opts;
        opts.noise_volume = spec.noise_fraction * entry_value;
        opts.on_step = [&](std::size_t step, double, PoolState& s) {
            if (step == 0) entry = s.mint("lp", range, spec.liquidity);
            if (next < nh && step == at_step[next]) {
                const double price = s.price();
                const TokenAmounts now =
                    amounts_for_liquidity(spec.liquidity, range, s.sqrt_price(), s.current_tick());
                const double hodl = entry.amount0 * price + entry.amount1;
                il[next].push_back((now.amount0 * price + now.amount1) / hodl - 1.0);
                const TokenAmounts f = s.uncollected_fees("lp");
                fees[next].push_back((f.amount0 * price + f.amount1) / entry_value);
                ++next;
            }
        };
        replay(pool, path, opts);
    }

    McResult out;
    std::vector<double> hs, med_il, med_fee;
    for (std::size_t k = 0; k < nh; ++k) {
        HorizonStats s;
        s.horizon_days = spec.horizons_days[k];
        std::vector<double> abs_il(il[k].size());
        std::transform(il[k].begin(), il[k].end(), abs_il.begin(), [](double v) { return std::abs(v); });
        s.median_abs_il = median(abs_il);
        s.mean_il = mean(il[k]);
        s.median_fees = median(fees[k]);
        s.mean_fees = mean(fees[k]);
        out.horizons.push_back(s);
        hs.push_back(s.horizon_days);
        med_il.push_back(s.median_abs_il);
        med_fee.push_back(s.median_fees);
    }
    if (nh >= 2) {
        out.il_exponent = fit_loglog_slope(hs, med_il);
        out.fee_exponent = fit_loglog_slope(hs, med_fee);
    } else {
        out.il_exponent = out.fee_exponent = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

void write_mc_csv(std::ostream& out, const McResult& r) {
    out << "horizon_days,median_abs_il,mean_il,median_fees,mean_fees\n";
    for (const HorizonStats& s : r.horizons) {
        out << s.horizon_days << ',' << format_number(s.median_abs_il) << ','
            << format_number(s.mean_il) << ',' << format_number(s.median_fees) << ','
            << format_number(s.mean_fees) << '\n';
    }
}

void write_mc_fit_csv(std::ostream& out, const McResult& r) {
    out << "metric,exponent\n";
    out << "median_abs_il," << format_number(r.il_exponent) << '\n';
    out << "median_fees," << format_number(r.fee_exponent) << '\n';
}

}  // namespace clmm
