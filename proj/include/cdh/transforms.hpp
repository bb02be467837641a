#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "cdh/core.hpp"
#include "cdh/datum.hpp"
#include "cdh/fields.hpp"
#include "cdh/interpolation.hpp"
#include "cdh/quadrature.hpp"

namespace cdh {

// ---------------------------------------------------------------------------
// Log-coordinate map y = log r + (N-2) t
// ---------------------------------------------------------------------------

/// v0(y) = u0(e^y) sampled on `grid`; tails from the datum family.
inline LineField to_log_coords(const InitialDatum& u0, std::span<const double> grid) {
    LineField v;
    v.grid.assign(grid.begin(), grid.end());
    v.values.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) v.values[k] = u0.line_value(grid[k]);
    v.time = 0.0;
    v.tail_left = u0.tail_left();
    v.tail_right = u0.tail_right();
    v.validate();
    return v;
}

/// v(y, t) = u(e^{y - (N-2) t}, t). A RadialField carries no limit at
/// infinity, so the right tail is supplied by the caller.
inline LineField to_log_coords(const RadialField& u, double tail_right = 0.0) {
    LineField v;
    v.grid.resize(u.size());
    const double shift = u.dim.drift() * u.time;
    for (std::size_t k = 0; k < u.size(); ++k) v.grid[k] = u.log_radii[k] + shift;
    v.values = u.values;
    v.time = u.time;
    v.tail_left = u.origin_value;
    v.tail_right = tail_right;
    return v;
}

/// u(r, t) = v(log r + (N-2) t, t); the origin is y = -inf.
inline RadialField from_log_coords(const LineField& v, Dimension dim) {
    RadialField u;
    u.log_radii.resize(v.size());
    const double shift = dim.drift() * v.time;
    for (std::size_t k = 0; k < v.size(); ++k) u.log_radii[k] = v.grid[k] - shift;
    u.values = v.values;
    u.time = v.time;
    u.dim = dim;
    u.origin_value = v.tail_left;
    return u;
}

// ---------------------------------------------------------------------------
// Inversion map z = -(N-2)/2 log r
// ---------------------------------------------------------------------------

/// Diffusivity of w in the inversion variable, (N-2)^2 / 4.
inline double inversion_diffusivity(Dimension dim) { return 0.25 * dim.drift() * dim.drift(); }

/// w(z, t) = e^{d t - z} u(r, t) with z = -(N-2)/2 log r and d = (N-2)^2/4.
/// w solves w_t = d w_zz; for N = 4 this is u = e^{z - t} w with the plain
/// heat equation. Tails of w are not tracked (set to 0). Grid sorted by z.
inline LineField inversion_transform(const RadialField& u) {
    if (u.dim.n == 2) throw Unsupported("inversion_transform: degenerate for N = 2");
    const double half = -0.5 * u.dim.drift();
    const double d = inversion_diffusivity(u.dim);
    LineField w;
    w.time = u.time;
    w.grid.resize(u.size());
    w.values.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double z = half * u.log_radii[k];
        w.grid[k] = z;
        w.values[k] = std::exp(d * u.time - z) * u.values[k];
    }
    if (half < 0.0) {
        std::reverse(w.grid.begin(), w.grid.end());
        std::reverse(w.values.begin(), w.values.end());
    }
    return w;
}

inline RadialField inverse_inversion_transform(const LineField& w, Dimension dim) {
    if (dim.n == 2) throw Unsupported("inverse_inversion_transform: degenerate for N = 2");
    const double half = -0.5 * dim.drift();
    const double d = inversion_diffusivity(dim);
    RadialField u;
    u.time = w.time;
    u.dim = dim;
    u.log_radii.resize(w.size());
    u.values.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double z = w.grid[k];
        u.log_radii[k] = z / half;
        u.values[k] = std::exp(z - d * w.time) * w.values[k];
    }
    if (half < 0.0) {
        std::reverse(u.log_radii.begin(), u.log_radii.end());
        std::reverse(u.values.begin(), u.values.end());
    }
    u.origin_value = 0.0;
    return u;
}

// ---------------------------------------------------------------------------
// Dimension self-map |x| = |xbar| e^{(Nbar - N) t}
// ---------------------------------------------------------------------------

inline RadialField self_map(const RadialField& u, Dimension target) {
    RadialField out = u;
    const double shift = (target.drift() - u.dim.drift()) * u.time;
    for (double& lr : out.log_radii) lr -= shift;
    out.dim = target;
    return out;
}

/// Sampler form: ubar(rbar, t) = u(rbar e^{(Nbar - N) t}, t).
template <class Sampler>
auto self_map(Sampler u, Dimension source, Dimension target) {
    const double rate = target.drift() - source.drift();
    return [u = std::move(u), rate](double r, double t) { return u(r * std::exp(rate * t), t); };
}

// ---------------------------------------------------------------------------
// Weighted integrals
// ---------------------------------------------------------------------------

namespace detail {

/// int f(r) dr over [e^{y_lo}, e^{y_hi}] in the r variable, on pieces whose
/// log-width is at most `log_panel`, cut at e^{b} for every breakpoint b.
template <class F>
double integrate_in_r(F&& f, double y_lo, double y_hi, double log_panel, std::span<const double> breakpoints) {
    std::vector<double> cuts{y_lo};
    for (double b : breakpoints)
        if (b > y_lo && b < y_hi) cuts.push_back(b);
    cuts.push_back(y_hi);
    const auto& rule = GaussLegendre<20>::instance();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int panels = std::max(1, static_cast<int>(std::ceil((cuts[i + 1] - cuts[i]) / log_panel)));
        const double w = (cuts[i + 1] - cuts[i]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double a = std::exp(cuts[i] + p * w);
            const double b = std::exp(p + 1 == panels ? cuts[i + 1] : cuts[i] + (p + 1) * w);
            total += rule.integrate(f, a, b);
        }
    }
    return total;
}

inline double panel_width(const InitialDatum::LineDecomposition& d) {
    return std::min(0.25, 0.5 * d.feature_scale);
}

}  // namespace detail

/// M = int |x|^{-N} u0 dx = omega_1 int_0^inf u0(r) dr / r, integrated in r.
/// Infinite when u0 does not vanish at the origin or at infinity.
inline Integral weighted_mass(const InitialDatum& u0) {
    const auto d = u0.decomposition();
    if (d.tail_left != 0.0 || d.tail_right != 0.0) return Integral::divergent();
    const double omega = unit_sphere_area(u0.dim());
    if (d.empty_support) return {};
    const double value = detail::integrate_in_r([&](double r) { return u0.line_value(std::log(r)) / r; },
                                                d.support_lo, d.support_hi, detail::panel_width(d), d.breakpoints);
    return {omega * value, omega * d.outside_bound, false};
}

/// Trapezoid rule in log r; infinite when the origin value is positive.
inline Integral weighted_mass(const RadialField& u) {
    if (u.origin_value > 0.0) return Integral::divergent();
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < u.size(); ++k)
        s += 0.5 * (u.values[k] + u.values[k + 1]) * (u.log_radii[k + 1] - u.log_radii[k]);
    const double edge = std::max(std::fabs(u.values.front()), std::fabs(u.values.back()));
    return {unit_sphere_area(u.dim) * s, edge, false};
}

/// int v0 dy in the log coordinate (no omega_1 factor).
inline Integral line_mass(const InitialDatum& u0) {
    const auto d = u0.decomposition();
    if (d.tail_left != 0.0 || d.tail_right != 0.0) return Integral::divergent();
    if (d.empty_support) return {};
    const double value = composite_integral<20>([&](double y) { return u0.line_value(y); }, d.support_lo,
                                                d.support_hi, detail::panel_width(d), d.breakpoints);
    return {value, d.outside_bound, false};
}

/// Trapezoid rule on the grid; exact-to-rounding for smooth rapidly decaying
/// samples on a uniform grid. Requires zero tails.
inline double line_mass(const LineField& v) {
    if (v.tail_left != 0.0 || v.tail_right != 0.0) throw DomainError("line_mass: field has non-zero tails");
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
        s += 0.5 * (v.values[k] + v.values[k + 1]) * (v.grid[k + 1] - v.grid[k]);
    return s;
}

/// ||u0||_{L^1_2} = omega_1 int_0^inf r^{N-3} |u0(r)| dr, evaluated as
/// omega_1 int e^{(N-2) y} |v0(y)| dy. The constant left tail is integrated in
/// closed form when it is integrable (N >= 3).
inline Integral l12_norm(const InitialDatum& u0) {
    const auto d = u0.decomposition();
    const double drift = u0.dim().drift();
    if (d.tail_right != 0.0 && drift >= 0.0) return Integral::divergent();
    if (d.tail_left != 0.0 && drift <= 0.0) return Integral::divergent();
    const double omega = unit_sphere_area(u0.dim());
    if (d.empty_support) {
        if (d.tail_left == 0.0) return {};
        return Integral::divergent();  // constant datum on all of R^N
    }
    auto f = [&](double y) { return std::exp(drift * y) * std::fabs(u0.line_value(y)); };
    double value = composite_integral<20>(f, d.support_lo, d.support_hi, detail::panel_width(d), d.breakpoints);
    if (d.tail_left != 0.0) value += d.tail_left * std::exp(drift * d.support_lo) / drift;
    return {omega * value, omega * d.outside_bound * std::exp(std::max(0.0, drift * d.support_hi)), false};
}

/// Trapezoid rule in log r of r^{N-2} |u|; the origin value contributes its
/// closed-form integral below the first radius.
inline Integral l12_norm(const RadialField& u) {
    const double drift = u.dim.drift();
    if (u.origin_value > 0.0 && drift <= 0.0) return Integral::divergent();
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
        const double a = std::exp(drift * u.log_radii[k]) * std::fabs(u.values[k]);
        const double b = std::exp(drift * u.log_radii[k + 1]) * std::fabs(u.values[k + 1]);
        s += 0.5 * (a + b) * (u.log_radii[k + 1] - u.log_radii[k]);
    }
    if (u.origin_value > 0.0) s += u.origin_value * std::exp(drift * u.log_radii.front()) / drift;
    return {unit_sphere_area(u.dim) * s, 0.0, false};
}

/// I1 = int_{|x|<1} |x|^{-N} |K - u0| dx + int_{|x|>1} |x|^{-N} |u0| dx, in r.
inline Integral condition_I1(const InitialDatum& u0, double K) {
    if (!(K >= 0.0) || !std::isfinite(K)) throw DomainError("condition_I1: K must be finite and >= 0");
    const auto d = u0.decomposition();
    if (d.tail_left != K || d.tail_right != 0.0) return Integral::divergent();
    const double omega = unit_sphere_area(u0.dim());
    if (d.empty_support) return {};
    std::vector<double> cuts = d.breakpoints;
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double r) {
        const double v = u0.line_value(std::log(r));
        return (r < 1.0 ? std::fabs(K - v) : std::fabs(v)) / r;
    };
    const double lo = std::min(d.support_lo, 0.0), hi = std::max(d.support_hi, 0.0);
    const double value = detail::integrate_in_r(f, lo, hi, detail::panel_width(d), cuts);
    return {omega * value, omega * d.outside_bound, false};
}

/// The same quantity as omega_1 int |K H(y) - v0(y)| dy in the log coordinate.
inline Integral condition_I1_line(const InitialDatum& u0, double K) {
    const auto d = u0.decomposition();
    if (d.tail_left != K || d.tail_right != 0.0) return Integral::divergent();
    if (d.empty_support) return {};
    std::vector<double> cuts = d.breakpoints;
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double y) { return std::fabs((y < 0.0 ? K : 0.0) - u0.line_value(y)); };
    const double lo = std::min(d.support_lo, 0.0), hi = std::max(d.support_hi, 0.0);
    const double omega = unit_sphere_area(u0.dim());
    return {omega * composite_integral<20>(f, lo, hi, detail::panel_width(d), cuts), omega * d.outside_bound, false};
}

/// I2 = int |log|x||^3 |x|^{1-N} |grad u0| dx = omega_1 int |y^3 v0'(y)| dy.
/// A jump in the datum has no classical gradient: reported as infinite.
inline Integral condition_I2(const InitialDatum& u0) {
    if (!u0.jumps().empty()) return Integral::divergent();
    const auto d = u0.decomposition();
    if (d.empty_support) return {};
    auto f = [&](double y) { return std::fabs(y * y * y * *u0.line_derivative(y)); };
    const double omega = unit_sphere_area(u0.dim());
    const double value = composite_integral<20>(f, d.support_lo, d.support_hi, detail::panel_width(d), d.breakpoints);
    const double reach = std::max(std::fabs(d.support_lo), std::fabs(d.support_hi));
    return {omega * value, omega * d.outside_bound * reach * reach * reach, false};
}

/// Moments of psi0 = -v0': M(psi) = int psi0 dy and rho(psi) = int |y^3 psi0| dy.
struct PsiMoments {
    double mass = 0.0;
    double rho = 0.0;
};

/// M(psi) telescopes to tail_left - tail_right whatever the interior values.
/// rho(psi) integrates the derivative of a fourth-order cubic interpolant of
/// the samples; psi is taken as zero outside the grid.
inline PsiMoments psi_moments(const LineField& v0) {
    v0.validate();
    PsiMoments m;
    m.mass = v0.tail_left - v0.tail_right;
    const auto spline = smooth_cubic(v0.grid, v0.values);
    const auto& rule = GaussLegendre<8>::instance();
    for (std::size_t k = 0; k + 1 < v0.size(); ++k) {
        auto f = [&](double y) { return std::fabs(y * y * y * spline.derivative_in_cell(k, y)); };
        m.rho += rule.integrate(f, v0.grid[k], v0.grid[k + 1]);
    }
    return m;
}

}  // namespace cdh
