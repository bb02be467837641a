#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace cdh {

/// Result of a weighted integral. `truncation_bound` bounds what was left out
/// (tails beyond the integrated range, discarded Gaussian tails); `infinite`
/// marks a divergent integral, in which case `value` is +inf.
struct Integral {
    double value = 0.0;
    double truncation_bound = 0.0;
    bool infinite = false;

    static Integral divergent() {
        return {std::numeric_limits<double>::infinity(), 0.0, true};
    }
};

/// Gauss-Legendre rule on [-1, 1] with `Order` points, computed once by
/// Newton iteration on P_n in long double.
template <int Order>
struct GaussLegendre {
    std::array<double, Order> nodes{};
    std::array<double, Order> weights{};

    GaussLegendre() {
        constexpr long double pi = 3.141592653589793238462643383279502884L;
        for (int i = 0; i < (Order + 1) / 2; ++i) {
            long double x = std::cos(pi * (i + 0.75L) / (Order + 0.5L));
            long double dp = 0.0L;
            for (int iter = 0; iter < 100; ++iter) {
                long double p0 = 1.0L;
                long double p1 = x;
                for (int k = 2; k <= Order; ++k) {
                    const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = Order * (x * p1 - p0) / (x * x - 1.0L);
                const long double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-19L) break;
            }
            // recompute derivative at the converged node
            long double p0 = 1.0L;
            long double p1 = x;
            for (int k = 2; k <= Order; ++k) {
                const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = Order * (x * p1 - p0) / (x * x - 1.0L);
            const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
            nodes[i] = static_cast<double>(-x);
            nodes[Order - 1 - i] = static_cast<double>(x);
            weights[i] = weights[Order - 1 - i] = static_cast<double>(w);
        }
    }

    static const GaussLegendre& instance() {
        static const GaussLegendre rule;
        return rule;
    }

    /// Single-panel integral of f over [a, b].
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (int i = 0; i < Order; ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return half * sum;
    }
};

/// Composite Gauss-Legendre over [a, b]: the interval is cut at every
/// breakpoint inside it, then each piece is split into panels no wider than
/// `max_panel`. Breakpoints must be sorted and mark the kinks and jumps of the
/// integrand.
template <int Order = 20, class F>
double composite_integral(F&& f, double a, double b, double max_panel,
                          std::span<const double> breakpoints = {}) {
    if (!(b > a)) return 0.0;
    const auto& rule = GaussLegendre<Order>::instance();
    auto first = std::upper_bound(breakpoints.begin(), breakpoints.end(), a);
    auto last = std::lower_bound(first, breakpoints.end(), b);
    double total = 0.0;
    double lo = a;
    auto piece = [&](double hi) {
        if (!(hi > lo)) return;
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
        const double w = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double pa = lo + p * w;
            const double pb = (p + 1 == panels) ? hi : pa + w;
            total += rule.integrate(f, pa, pb);
        }
        lo = hi;
    };
    for (auto it = first; it != last; ++it) piece(*it);
    piece(b);
    return total;
}

}  // namespace cdh
