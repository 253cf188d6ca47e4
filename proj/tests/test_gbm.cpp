#include <doctest.h>

#include <cmath>

#include "clmm/errors.hpp"
#include "clmm/gbm.hpp"

using namespace clmm;

TEST_CASE("zero volatility and drift give a constant path") {
    GbmSpec s;
    s.s0 = 123.5;
    s.volatility = 0;
    s.horizon = 1;
    s.step = 1.0 / 52;
    const PricePath p = gbm_path(s, 0);
    CHECK(p.size() == 53);
    for (double x : p.prices) CHECK(x == 123.5);
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p.times[i] > p.times[i - 1]);
}

TEST_CASE("log return moments") {
    GbmSpec s;
    s.s0 = 1;
    s.drift = 0.1;
    s.volatility = 0.8;
    s.horizon = 1;
    s.step = 1.0 / 52;
    s.count = 10000;
    s.seed = 2024;
    const auto paths = generate_gbm_paths(s);
    double sum = 0, sq = 0;
    for (const auto& p : paths) {
        const double r = std::log(p.prices.back() / p.prices.front());
        sum += r;
        sq += r * r;
    }
    const double n = static_cast<double>(paths.size());
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double expected = (s.drift - 0.5 * s.volatility * s.volatility) * s.horizon;
    const double se = s.volatility * std::sqrt(s.horizon / n);
    CHECK(std::abs(mean - expected) < 3 * se);
    CHECK(var == doctest::Approx(0.64).epsilon(0.05));
}

TEST_CASE("determinism") {
    GbmSpec s;
    s.count = 5;
    s.horizon = 30.0 / 365;
    s.seed = 7;
    const auto a = generate_gbm_paths(s);
    const auto b = generate_gbm_paths(s);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].prices == b[i].prices);
    CHECK(gbm_path(s, 3).prices == a[3].prices);
    s.seed = 8;
    CHECK(gbm_path(s, 0).prices != a[0].prices);
}

TEST_CASE("invalid specs") {
    GbmSpec s;
    s.s0 = 0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = GbmSpec{};
    s.volatility = -0.1;
    CHECK_THROWS_AS(generate_gbm_paths(s), InvalidArgument);
    s = GbmSpec{};
    s.step = 0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = GbmSpec{};
    s.horizon = 1.5 / 365;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}
