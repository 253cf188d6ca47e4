#include "clmm/reconstruction.hpp"

#include <cmath>
#include <string>

#include "clmm/errors.hpp"
#include "clmm/tick_math.hpp"

namespace clmm {

void ObservedAdjustment::validate() const {
    if (!(liquidity > 0) || !std::isfinite(liquidity)) {
        throw InvalidArgument("liquidity constant must be positive");
    }
    if (!(price_a > 0) || !(price_b > 0) || !std::isfinite(price_a) || !std::isfinite(price_b)) {
        throw InvalidArgument("boundary prices must be positive");
    }
    if (!(price_a < price_b)) {
        throw InvalidArgument("price_a must be the lower boundary price");
    }
    if (!(ratio >= 0 && ratio <= 1)) {
        throw InvalidArgument("adjustment ratio must lie in [0, 1], got " + std::to_string(ratio));
    }
}

double ObservedAdjustment::token1_share() const {
    return convention == RatioConvention::Token1Share ? ratio : 1.0 - ratio;
}

namespace detail {

std::array<double, 2> token0_roots(double L, double price_a, double price_b, double r) {
    const double sa = std::sqrt(price_a);
    const double sb = std::sqrt(price_b);
    const double q = sa * sb * (r - 1) - r;
    const double disc =
        price_a * price_b * (r - 1) * (r - 1) + r * r + (2 * r - 2) * (sa * sb * r - 2 * price_b * r);
    if (disc < 0) {
        throw InconsistentObservation("negative discriminant: no in-range state has ratio " +
                                      std::to_string(r));
    }
    const double root = std::sqrt(disc);
    const double denom = 2 * r * sb;
    // q + root cancels badly when r is small; disc - q^2 simplifies to
    // 4 r (1 - r) sb (sb - sa), so use the conjugate form.
    const double conj = root - q;
    const double plus = conj != 0 ? 4 * r * (1 - r) * sb * (sb - sa) / conj : q + root;
    return {L * plus / denom, L * (q - root) / denom};
}

}  // namespace detail

double solve_token1(double x, const ObservedAdjustment& obs) {
    obs.validate();
    if (!(x >= 0)) throw InvalidArgument("token0 amount must be nonnegative");
    const double L = obs.liquidity;
    const double sa = std::sqrt(obs.price_a);
    const double sb = std::sqrt(obs.price_b);
    return L * (-L * sa + L * sb - sa * sb * x) / (L + sb * x);
}

double internal_price(double x, const ObservedAdjustment& obs) {
    obs.validate();
    if (!(x >= 0)) throw InvalidArgument("token0 amount must be nonnegative");
    const double L = obs.liquidity;
    const double sa = std::sqrt(obs.price_a);
    const double sb = std::sqrt(obs.price_b);
    const double d = L + sb * x;
    return L * sa * sb / d + L * sb * (-L * sa + L * sb - sa * sb * x) / (d * d);
}

double solve_token0(const ObservedAdjustment& obs) {
    obs.validate();
    const double r = obs.token1_share();
    const double L = obs.liquidity;
    const double sa = std::sqrt(obs.price_a);
    const double sb = std::sqrt(obs.price_b);
    if (r == 1.0) return 0.0;
    if (r == 0.0) return L * (sb - sa) / (sa * sb);

    // Keep the root that is nonnegative and prices inside the range.
    const auto roots = detail::token0_roots(L, obs.price_a, obs.price_b, r);
    constexpr double slack = 1e-12;
    int found = 0;
    double chosen = 0;
    for (double x : roots) {
        if (!(x >= 0)) continue;
        const double p = internal_price(x, obs);
        if (p < obs.price_a * (1 - slack) || p > obs.price_b * (1 + slack)) continue;
        chosen = x;
        ++found;
    }
    if (found == 0) {
        throw InconsistentObservation("no nonnegative in-range root for ratio " + std::to_string(r));
    }
    if (found > 1) {
        throw InconsistentObservation("ambiguous observation: both roots are admissible");
    }
    return chosen;
}

ReconstructedState reconstruct(const ObservedAdjustment& obs, double tolerance) {
    obs.validate();
    ReconstructedState out;
    out.x = solve_token0(obs);
    out.y = solve_token1(out.x, obs);
    const double scale = obs.liquidity * (std::sqrt(obs.price_b) - std::sqrt(obs.price_a));
    if (out.y < 0) {
        if (out.y < -tolerance * scale) {
            throw InconsistentObservation("reconstructed token1 amount is negative");
        }
        out.y = 0;
    }

    const double r = obs.token1_share();
    if (r == 1.0) {
        out.boundary = BoundaryKind::AllToken1;
        out.price = obs.price_b;
    } else if (r == 0.0) {
        out.boundary = BoundaryKind::AllToken0;
        out.price = obs.price_a;
        out.y = 0;
    } else {
        out.price = internal_price(out.x, obs);
    }
    out.tick = price_to_tick(out.price);

    // Forward relations at the recovered price.
    const double sp = std::sqrt(out.price);
    const double sb = std::sqrt(obs.price_b);
    const double x_fwd = obs.liquidity * (sb - sp) / (sp * sb);
    const double y_fwd = obs.liquidity * (sp - std::sqrt(obs.price_a));
    auto close = [&](double a, double b, double ref) { return std::abs(a - b) <= tolerance * ref; };
    const double x_ref = obs.liquidity * (sb - std::sqrt(obs.price_a)) / (std::sqrt(obs.price_a) * sb);
    if (!close(out.x, x_fwd, x_ref) || !close(out.y, y_fwd, scale)) {
        throw InconsistentObservation("reconstructed balances violate the in-range relations");
    }
    return out;
}

}  // namespace clmm
