#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cdh/core.hpp"

namespace cdh {

/// Piecewise cubic Hermite interpolant on strictly increasing nodes.
class CubicHermite {
public:
    CubicHermite() = default;
    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
        : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
        if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
            throw DomainError("CubicHermite: need >= 2 nodes with matching values and slopes");
        for (std::size_t k = 1; k < x_.size(); ++k)
            if (!(x_[k] > x_[k - 1])) throw DomainError("CubicHermite: nodes must be strictly increasing");
    }

    [[nodiscard]] std::span<const double> nodes() const { return x_; }
    [[nodiscard]] std::span<const double> values() const { return y_; }
    [[nodiscard]] double front() const { return x_.front(); }
    [[nodiscard]] double back() const { return x_.back(); }

    /// Index k with x_k <= x < x_{k+1}, clamped to a valid cell.
    [[nodiscard]] std::size_t cell(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        return std::min(k, x_.size() - 2);
    }

    [[nodiscard]] double eval_in_cell(std::size_t k, double x) const {
        const double h = x_[k + 1] - x_[k];
        const double s = (x - x_[k]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
    }

    [[nodiscard]] double derivative_in_cell(std::size_t k, double x) const {
        const double h = x_[k + 1] - x_[k];
        const double s = (x - x_[k]) / h;
        const double s2 = s * s;
        const double d00 = (6 * s2 - 6 * s) / h;
        const double d10 = 3 * s2 - 4 * s + 1;
        const double d01 = (-6 * s2 + 6 * s) / h;
        const double d11 = 3 * s2 - 2 * s;
        return d00 * y_[k] + d10 * d_[k] + d01 * y_[k + 1] + d11 * d_[k + 1];
    }

    [[nodiscard]] double operator()(double x) const { return eval_in_cell(cell(x), x); }
    [[nodiscard]] double derivative(double x) const { return derivative_in_cell(cell(x), x); }

private:
    std::vector<double> x_, y_, d_;
};

/// Fritsch-Carlson monotone cubic: preserves monotonicity of the data
/// between samples (no overshoot of tabulated initial data).
inline CubicHermite monotone_cubic(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("monotone_cubic: need >= 2 samples");
    std::vector<double> secant(n - 1), d(n);
    for (std::size_t k = 0; k + 1 < n; ++k) secant[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    d[0] = secant[0];
    d[n - 1] = secant[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k)
        d[k] = (secant[k - 1] * secant[k] <= 0.0) ? 0.0 : 0.5 * (secant[k - 1] + secant[k]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (secant[k] == 0.0) {
            d[k] = d[k + 1] = 0.0;
            continue;
        }
        const double a = d[k] / secant[k];
        const double b = d[k + 1] / secant[k];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            d[k] = tau * a * secant[k];
            d[k + 1] = tau * b * secant[k];
        }
    }
    return {std::move(x), std::move(y), std::move(d)};
}

/// Cubic Hermite with slopes from five-point Lagrange differentiation, so the
/// interpolant is fourth-order accurate on smooth data (any node spacing).
inline CubicHermite smooth_cubic(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("smooth_cubic: need >= 2 samples");
    std::vector<double> d(n);
    const std::size_t width = std::min<std::size_t>(5, n);
    for (std::size_t k = 0; k < n; ++k) {
        // stencil [lo, lo + width) containing k, centred where possible
        std::size_t lo = k >= width / 2 ? k - width / 2 : 0;
        lo = std::min(lo, n - width);
        double slope = 0.0;
        for (std::size_t j = lo; j < lo + width; ++j) {
            double weight = 0.0;
            if (j == k) {
                for (std::size_t m = lo; m < lo + width; ++m)
                    if (m != k) weight += 1.0 / (x[k] - x[m]);
            } else {
                weight = 1.0 / (x[j] - x[k]);
                for (std::size_t m = lo; m < lo + width; ++m)
                    if (m != j && m != k) weight *= (x[k] - x[m]) / (x[j] - x[m]);
            }
            slope += weight * y[j];
        }
        d[k] = slope;
    }
    return {std::move(x), std::move(y), std::move(d)};
}

}  // namespace cdh
