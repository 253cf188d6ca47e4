#pragma once

// Independent reference computations for the test suites. These use the
// protocol's token-amount formulas in long double (or brute force) rather
// than the library's closed-form curves, so agreement is a real check.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

using real = long double;

struct Amounts {
    real token0 = 0;
    real token1 = 0;
};

// Token amounts of liquidity L over [pa, pb] at price p.
inline Amounts uni_amounts(real L, real pa, real pb, real p) {
    const real sa = std::sqrt(pa);
    const real sb = std::sqrt(pb);
    const real sp = std::sqrt(p);
    if (sp <= sa) return {L * (1 / sa - 1 / sb), 0};
    if (sp >= sb) return {0, L * (sb - sa)};
    return {L * (1 / sp - 1 / sb), L * (sp - sa)};
}

inline real value_at(const Amounts& a, real p) { return a.token0 * p + a.token1; }

// Value minus HODL (in token1) of liquidity opened at `from` and closed at
// `to`, both inside [pa, pb].
inline real sub_position_loss(real L, real pa, real pb, real from, real to) {
    const Amounts open = uni_amounts(L, pa, pb, from);
    const Amounts close = uni_amounts(L, pa, pb, to);
    return value_at(close, to) - value_at(open, to);
}

inline real clamp(real x, real lo, real hi) { return x < lo ? lo : (x > hi ? hi : x); }

// Minimal IL in token1 by enumerating maximal index runs whose samples all
// lie in [pa, pb], plus jumps straight across the range between two
// samples. A run opens at the boundary crossed to enter it (or at the
// first sample) and closes at the boundary crossed to leave it (or at the
// last sample).
inline real minimal_loss_by_runs(real L, real pa, real pb, const std::vector<real>& xs) {
    auto inside = [&](real x) { return pa <= x && x <= pb; };
    real total = 0;
    const std::size_t n = xs.size();
    std::size_t i = 0;
    while (i < n) {
        if (!inside(xs[i])) {
            if (i + 1 < n && !inside(xs[i + 1]) &&
                ((xs[i] < pa && xs[i + 1] > pb) || (xs[i] > pb && xs[i + 1] < pa))) {
                total += sub_position_loss(L, pa, pb, clamp(xs[i], pa, pb), clamp(xs[i + 1], pa, pb));
            }
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && inside(xs[j + 1])) ++j;
        const real open = i == 0 ? xs[0] : clamp(xs[i - 1], pa, pb);
        const real close = j + 1 < n ? clamp(xs[j + 1], pa, pb) : xs[j];
        total += sub_position_loss(L, pa, pb, open, close);
        i = j + 1;
    }
    return total;
}

// Index of the nearest time by linear scan, earlier index on ties; -1 when
// farther than max_gap.
inline long nearest_scan(const std::vector<double>& times, double t, double max_gap) {
    long best = -1;
    double best_d = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = std::abs(times[i] - t);
        if (best < 0 || d < best_d) {
            best = static_cast<long>(i);
            best_d = d;
        }
    }
    if (best < 0 || best_d > max_gap) return -1;
    return best;
}

// Least-squares slope by the textbook normal equations on raw sums.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
