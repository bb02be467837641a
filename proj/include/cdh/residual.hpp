#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "cdh/core.hpp"

namespace cdh {

/// |x|^{-2} u_t - Laplace u for a radial sampler u(r, t), by central
/// differences: spatial step h in r, time step `dt` (defaults to h).
/// Second order in both for smooth u.
template <class Sampler>
double pde_residual(const Sampler& u, double r, double t, Dimension dim, double h, double dt = 0.0) {
    if (!(h > 0.0)) throw DomainError("pde_residual: h must be > 0");
    if (dt == 0.0) dt = h;
    if (!(r >= 10.0 * h)) throw DomainError("pde_residual: point too close to the origin (need r >= 10 h)");
    if (!(t >= 10.0 * dt)) throw DomainError("pde_residual: time too small (need t >= 10 dt)");
    const double up = u(r + h, t);
    const double mid = u(r, t);
    const double down = u(r - h, t);
    const double u_t = (u(r, t + dt) - u(r, t - dt)) / (2.0 * dt);
    const double u_rr = (up - 2.0 * mid + down) / (h * h);
    const double u_r = (up - down) / (2.0 * h);
    return u_t / (r * r) - (u_rr + (dim.n - 1) / r * u_r);
}

/// Cartesian residual in R^3 with the 7-point Laplacian, for non-radial
/// samplers u(x, t). The sampler may use theta = atan2(x2, x1) in [0, 2 pi),
/// which jumps across the half-plane {x2 = 0, x1 > 0} and is singular on the
/// x3 axis; stencils reaching within `cut_margin` of either are rejected.
template <class Sampler>
double pde_residual_cartesian(const Sampler& u, const std::array<double, 3>& x, double t, double h, double dt = 0.0,
                              double cut_margin = 1e-3) {
    if (!(h > 0.0)) throw DomainError("pde_residual_cartesian: h must be > 0");
    if (dt == 0.0) dt = h;
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double rho = std::hypot(x[0], x[1]);
    if (!(r >= 10.0 * h)) throw DomainError("pde_residual_cartesian: point too close to the origin");
    if (!(rho >= 10.0 * h)) throw DomainError("pde_residual_cartesian: point too close to the axis");
    if (x[0] > -h - cut_margin && std::fabs(x[1]) < h + cut_margin)
        throw DomainError("pde_residual_cartesian: stencil crosses the angular cut");
    if (!(t >= 10.0 * dt)) throw DomainError("pde_residual_cartesian: time too small (need t >= 10 dt)");
    const double centre = u(x, t);
    double lap = -6.0 * centre;
    for (int axis = 0; axis < 3; ++axis) {
        auto p = x, m = x;
        p[axis] += h;
        m[axis] -= h;
        lap += u(p, t) + u(m, t);
    }
    lap /= h * h;
    const double u_t = (u(x, t + dt) - u(x, t - dt)) / (2.0 * dt);
    return u_t / (r * r) - lap;
}

/// theta = atan2(x2, x1) mapped to [0, 2 pi).
inline double azimuth(const std::array<double, 3>& x) {
    const double a = std::atan2(x[1], x[0]);
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace cdh
