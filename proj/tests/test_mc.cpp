#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "clmm/errors.hpp"
#include "clmm/mc.hpp"
#include "oracles.hpp"

using namespace clmm;

TEST_CASE("log-log slope against the normal equations") {
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> u(0.1, 3);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x, y, lx, ly;
        for (int k = 0; k < 6; ++k) {
            x.push_back(std::exp(u(rng)));
            y.push_back(std::exp(u(rng)));
            lx.push_back(std::log(x.back()));
            ly.push_back(std::log(y.back()));
        }
        CHECK(fit_loglog_slope(x, y) == doctest::Approx(oracle::ols_slope(lx, ly)).epsilon(1e-9));
    }
    CHECK(fit_loglog_slope({1, 2, 4}, {3, 6, 12}) == doctest::Approx(1));
    CHECK(fit_loglog_slope({1, 4, 9}, {1, 2, 3}) == doctest::Approx(0.5));
}

TEST_CASE("zero volatility") {
    McSpec s;
    s.volatility = 0;
    s.paths = 50;
    s.horizons_days = {7, 30, 91};
    const McResult r = run_mc(s);
    for (const auto& h : r.horizons) {
        CHECK(h.median_abs_il == 0);
        CHECK(h.mean_il == 0);
        CHECK(h.median_fees > 0);
    }
    CHECK(std::isnan(r.il_exponent));
    CHECK(r.fee_exponent == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("seeded determinism") {
    McSpec s;
    s.paths = 200;
    s.horizons_days = {7, 30};
    std::ostringstream a, b, c;
    write_mc_csv(a, run_mc(s));
    write_mc_csv(b, run_mc(s));
    CHECK(a.str() == b.str());
    s.seed = 43;
    write_mc_csv(c, run_mc(s));
    CHECK(a.str() != c.str());
}

TEST_CASE("il and fees grow with the horizon") {
    McSpec s;
    s.paths = 500;
    const McResult r = run_mc(s);
    for (std::size_t i = 1; i < r.horizons.size(); ++i) {
        CHECK(r.horizons[i].median_abs_il > r.horizons[i - 1].median_abs_il);
        CHECK(r.horizons[i].median_fees > r.horizons[i - 1].median_fees);
        CHECK(r.horizons[i].mean_il <= 0);
    }
    CHECK(r.fee_exponent >= 0.95);
    CHECK(r.fee_exponent <= 1.05);
    // |IL| of a full-range position is quadratic in the log move, so its
    // median tracks the variance and grows about linearly
    CHECK(r.il_exponent > 0.8);
}

TEST_CASE("invalid specs") {
    McSpec s;
    s.paths = 0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = McSpec{};
    s.horizons_days = {30, 7};
    CHECK_THROWS_AS(run_mc(s), InvalidArgument);
    s = McSpec{};
    s.volatility = -1;
    CHECK_THROWS_AS(run_mc(s), InvalidArgument);
}
