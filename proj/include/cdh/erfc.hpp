#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace cdh {

namespace detail {

/// Complementary error function with the normalisation constant 2/sqrt(pi)
/// passed in explicitly. The public erfc_fn fixes it; tests substitute a
/// perturbed value to check that the accuracy gate catches a broken constant.
///
/// |x| < 2.5 : erf from the positive-term series
///             erf(x) = c e^{-x^2} sum_n 2^n x^{2n+1} / (1*3*...*(2n+1))
///             (no cancellation), then erfc = 1 - erf.
/// |x| >= 2.5: Lentz evaluation of the continued fraction
///             erfc(x) = (c/2) e^{-x^2} / (x + 1/2/(x + 1/(x + 3/2/(x + ...)))).
/// x^2 > 745 : e^{-x^2} is below the smallest subnormal; result is exactly 0.
inline double erfc_with_constant(double x, double two_over_sqrt_pi) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc_with_constant(-x, two_over_sqrt_pi);
    if (x == std::numeric_limits<double>::infinity()) return 0.0;
    const double x2 = x * x;
    if (x2 > 745.0) return 0.0;

    if (x < 2.5) {
        double term = x;
        double sum = x;
        for (int n = 1; n < 200; ++n) {
            term *= 2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return 1.0 - two_over_sqrt_pi * std::exp(-x2) * sum;
    }

    // Modified Lentz for b0 + a1/(b1 + a2/(b2 + ...)), b_k = x, a_k = k/2.
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 500; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return 0.5 * two_over_sqrt_pi * std::exp(-x2) / f;
}

}  // namespace detail

/// erfc(xi) = 2/sqrt(pi) * int_xi^inf e^{-s^2} ds, absolute error below 1e-12
/// on |xi| <= 10; accepts +-infinity.
inline double erfc_fn(double xi) {
    return detail::erfc_with_constant(xi, 2.0 * std::numbers::inv_sqrtpi);
}

}  // namespace cdh
