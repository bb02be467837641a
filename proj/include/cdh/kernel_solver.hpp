#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "cdh/core.hpp"
#include "cdh/datum.hpp"
#include "cdh/erfc.hpp"
#include "cdh/fields.hpp"
#include "cdh/interpolation.hpp"
#include "cdh/quadrature.hpp"
#include "cdh/transforms.hpp"

namespace cdh {

/// Evaluation grid in the log coordinate at time t: points uniformly spread
/// over y in [-c sqrt(t) - a, c sqrt(t) + a + 2 weight_drift t], a the extent
/// of the datum. The extra right reach follows the peak of e^{(N-2) y} v,
/// which sits near y = 2 (N-2) t (set weight_drift = N - 2 for L1_2 sums).
struct LineGridPolicy {
    std::size_t points = 4096;
    double c = 8.0;
    /// Extra half-width; negative means "use the datum extent".
    double pad = -1.0;
    double weight_drift = 0.0;

    [[nodiscard]] std::vector<double> grid(double t, double extent) const {
        const double a = pad >= 0.0 ? pad : extent;
        const double half = c * std::sqrt(std::max(t, 0.0)) + a;
        return uniform_grid(-half, half + 2.0 * weight_drift * std::max(t, 0.0), points);
    }
};

/// Solution of v_t = v_yy on the whole line by convolution with the Gaussian
/// kernel.
///
/// The datum is split as v0 = tail_left H + tail_right (1 - H) + R with H = 1
/// on y < 0. The steps evolve in closed form through erfc and only the
/// integrable remainder R is convolved numerically with composite
/// Gauss-Legendre rules. The window keeps every s whose kernel weight is within
/// e^{-80} of the nearest support point, so values far out in the tails keep
/// their relative accuracy (they are multiplied by exponential weights later).
class HeatKernelSolver {
public:
    /// Relative kernel cutoff: e^{-window_exponent}.
    static constexpr double window_exponent = 80.0;

    /// Analytic datum: R is evaluated from the family formulas.
    explicit HeatKernelSolver(const InitialDatum& u0)
        : datum_(std::make_shared<InitialDatum>(u0)), dec_(u0.decomposition()) {}

    /// Sampled datum. The samples must approach the declared tails at both
    /// ends of the grid; between samples v0 is a fourth-order cubic and
    /// outside the grid it equals the tails.
    explicit HeatKernelSolver(const LineField& v0, double tail_tolerance = 1e-6) {
        v0.validate();
        const double scale = std::max({1.0, std::fabs(v0.tail_left), std::fabs(v0.tail_right)});
        const double end_gap = std::max(std::fabs(v0.values.front() - v0.tail_left),
                                        std::fabs(v0.values.back() - v0.tail_right));
        if (end_gap > tail_tolerance * scale)
            throw DomainError("heat1d_solve: samples do not reach the declared tails (gap " +
                              std::to_string(end_gap) + ")");
        spline_ = std::make_shared<CubicHermite>(smooth_cubic(v0.grid, v0.values));
        dec_.tail_left = v0.tail_left;
        dec_.tail_right = v0.tail_right;
        dec_.support_lo = v0.grid.front();
        dec_.support_hi = v0.grid.back();
        dec_.empty_support = false;
        double sup = 0.0;
        for (std::size_t k = 0; k < v0.size(); ++k)
            sup = std::max(sup, std::fabs(v0.values[k] - step(v0.grid[k])));
        dec_.remainder_sup = sup;
        // interpolation error of the cubic ~ h^4 |v''''| / 384, estimated by
        // fourth differences of the samples
        double fourth = 0.0;
        for (std::size_t k = 2; k + 2 < v0.size(); ++k) {
            const auto& v = v0.values;
            fourth = std::max(fourth, std::fabs(v[k - 2] - 4 * v[k - 1] + 6 * v[k] - 4 * v[k + 1] + v[k + 2]));
        }
        sample_error_ = end_gap + fourth / 384.0 + v0.error_bound;
    }

    [[nodiscard]] double tail_left() const { return dec_.tail_left; }
    [[nodiscard]] double tail_right() const { return dec_.tail_right; }
    [[nodiscard]] const InitialDatum::LineDecomposition& decomposition() const { return dec_; }

    /// v0(y).
    [[nodiscard]] double initial_value(double y) const {
        if (datum_) return datum_->line_value(y);
        if (y < spline_->front() || y > spline_->back()) return step(y);
        return (*spline_)(y);
    }

    /// v(y, t); t = 0 returns the datum itself.
    [[nodiscard]] double value(double y, double t) const {
        if (t == 0.0) return initial_value(y);
        require_positive_time(t, "HeatKernelSolver::value");
        const double s = 2.0 * std::sqrt(t);
        double v = 0.5 * (dec_.tail_left * erfc_fn(y / s) + dec_.tail_right * erfc_fn(-y / s));
        if (dec_.empty_support) return v;
        const double inv4t = 1.0 / (4.0 * t);
        const double near = std::max({0.0, dec_.support_lo - y, y - dec_.support_hi});
        if (near * near * inv4t > 750.0) return v;  // the kernel underflows on the support
        const double reach = std::sqrt(near * near + 4.0 * window_exponent * t);
        const double lo = std::max(dec_.support_lo, y - reach);
        const double hi = std::min(dec_.support_hi, y + reach);
        if (!(hi > lo)) return v;
        const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
        // at most four e-folds of the kernel per panel
        const double efold_panel = 8.0 * t / reach;
        if (datum_) {
            const double panel = std::min(0.5 * std::min(dec_.feature_scale, std::sqrt(t)), efold_panel);
            auto f = [&](double x) {
                const double d = y - x;
                return (datum_->line_value(x) - step(x)) * std::exp(-d * d * inv4t);
            };
            v += norm * composite_integral<20>(f, lo, hi, panel, dec_.breakpoints);
        } else {
            v += norm * sampled_convolution(y, lo, hi, inv4t, std::min(0.5 * std::sqrt(t), efold_panel));
        }
        return v;
    }

    /// Bound on |computed - exact| for value(., t): kernel mass beyond the
    /// window, remainder mass outside the support, sampling error, rounding.
    [[nodiscard]] double error_bound(double t) const {
        if (t == 0.0) return sample_error_;
        const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
        const double scale = std::fabs(dec_.tail_left) + std::fabs(dec_.tail_right) + dec_.remainder_sup;
        return dec_.remainder_sup * erfc_fn(std::sqrt(window_exponent)) + dec_.outside_bound * norm + sample_error_ +
               64.0 * std::numeric_limits<double>::epsilon() * scale;
    }

    /// Samples of v(., t) on a grid.
    [[nodiscard]] LineField solve(std::span<const double> grid, double t) const {
        LineField out;
        out.grid.assign(grid.begin(), grid.end());
        out.values.resize(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) out.values[k] = value(grid[k], t);
        out.time = t;
        out.tail_left = dec_.tail_left;
        out.tail_right = dec_.tail_right;
        out.error_bound = error_bound(t);
        return out;
    }

private:
    [[nodiscard]] double step(double y) const { return y < 0.0 ? dec_.tail_left : dec_.tail_right; }

    /// Convolution of the cubic remainder, cell by cell with 8-point rules.
    [[nodiscard]] double sampled_convolution(double y, double lo, double hi, double inv4t, double max_panel) const {
        const auto nodes = spline_->nodes();
        const auto& rule = GaussLegendre<8>::instance();
        std::size_t k = spline_->cell(lo);
        double total = 0.0;
        for (; k + 1 < nodes.size() && nodes[k] < hi; ++k) {
            const double a = std::max(lo, nodes[k]);
            const double b = std::min(hi, nodes[k + 1]);
            if (!(b > a)) continue;
            auto f = [&](double x) {
                const double d = y - x;
                return (spline_->eval_in_cell(k, x) - step(x)) * std::exp(-d * d * inv4t);
            };
            // the step jumps at 0: split the cell there
            std::array<double, 3> cuts{a, b, b};
            std::size_t ncut = 2;
            if (a < 0.0 && b > 0.0) {
                cuts = {a, 0.0, b};
                ncut = 3;
            }
            for (std::size_t c = 0; c + 1 < ncut; ++c) {
                const int panels = std::max(1, static_cast<int>(std::ceil((cuts[c + 1] - cuts[c]) / max_panel)));
                const double w = (cuts[c + 1] - cuts[c]) / panels;
                for (int p = 0; p < panels; ++p) {
                    const double pa = cuts[c] + p * w;
                    total += rule.integrate(f, pa, p + 1 == panels ? cuts[c + 1] : pa + w);
                }
            }
        }
        return total;
    }

    std::shared_ptr<const InitialDatum> datum_;
    std::shared_ptr<const CubicHermite> spline_;
    InitialDatum::LineDecomposition dec_;
    double sample_error_ = 0.0;
};

/// Heat flow of sampled data for time t, returned on the same grid at time
/// v0.time + t.
inline LineField heat1d_solve(const LineField& v0, double t) {
    require_positive_time(t, "heat1d_solve");
    const HeatKernelSolver solver(v0);
    LineField out = solver.solve(v0.grid, t);
    out.time = v0.time + t;
    return out;
}

/// Radial solution u(., t) of |x|^{-2} u_t = Laplace u through the log map.
/// N = 2 is accepted (zero drift); N = 1 is handled by solve_two_branch.
inline RadialField solve_radial(const InitialDatum& u0, double t, LineGridPolicy policy = {}) {
    if (u0.dim().n == 1) throw Unsupported("solve_radial: N = 1 disconnects the line, use solve_two_branch");
    if (t < 0.0) throw DomainError("solve_radial: time must be >= 0");
    const HeatKernelSolver solver(u0);
    const auto grid = policy.grid(t, u0.extent());
    LineField v = t == 0.0 ? to_log_coords(u0, grid) : solver.solve(grid, t);
    return from_log_coords(v, u0.dim());
}

/// Radial solution as a point sampler u(r, t), for residuals and envelopes.
class KernelSolution {
public:
    explicit KernelSolution(const InitialDatum& u0) : solver_(std::make_shared<HeatKernelSolver>(u0)), dim_(u0.dim()) {}

    [[nodiscard]] double operator()(double r, double t) const {
        if (r == 0.0) return solver_->tail_left();
        return solver_->value(std::log(r) + dim_.drift() * t, t);
    }
    [[nodiscard]] double at_log_radius(double log_r, double t) const {
        return solver_->value(log_r + dim_.drift() * t, t);
    }
    [[nodiscard]] const HeatKernelSolver& solver() const { return *solver_; }
    [[nodiscard]] Dimension dim() const { return dim_; }

private:
    std::shared_ptr<const HeatKernelSolver> solver_;
    Dimension dim_;
};

/// Snapshots v(., t_k) of the kernel solution on t-adaptive grids.
inline SolutionTrajectory kernel_trajectory(const InitialDatum& u0, std::span<const double> times,
                                            LineGridPolicy policy = {}) {
    SolutionTrajectory traj;
    traj.scheme = Scheme::kernel;
    traj.dim = u0.dim();
    const HeatKernelSolver solver(u0);
    const auto mass = line_mass(u0);
    if (!mass.infinite) traj.initial_line_mass = mass.value;
    for (double t : times) {
        if (t < 0.0) throw DomainError("kernel_trajectory: times must be >= 0");
        const auto grid = policy.grid(t, u0.extent());
        LineField v = t == 0.0 ? to_log_coords(u0, grid) : solver.solve(grid, t);
        traj.residual_bound = std::max(traj.residual_bound, v.error_bound);
        traj.snapshots.push_back({t, std::move(v)});
    }
    traj.validate();
    return traj;
}

/// N = 1: the origin disconnects the line, and each half-line evolves on its
/// own with u(0, t) = 0 for t > 0.
struct TwoBranchField {
    RadialField negative;  // u(-r, t)
    RadialField positive;  // u(r, t)
};

struct TwoBranchSolution {
    KernelSolution negative;
    KernelSolution positive;

    /// u(x, t) for real x.
    [[nodiscard]] double operator()(double x, double t) const {
        if (x == 0.0) return 0.0;
        return x < 0.0 ? negative(-x, t) : positive(x, t);
    }
};

inline TwoBranchSolution two_branch_solution(const InitialDatum& negative_side, const InitialDatum& positive_side) {
    if (negative_side.dim().n != 1 || positive_side.dim().n != 1)
        throw DomainError("two_branch_solution: both branches must be one-dimensional");
    return {KernelSolution(negative_side), KernelSolution(positive_side)};
}

inline TwoBranchField solve_two_branch(const InitialDatum& negative_side, const InitialDatum& positive_side, double t,
                                       LineGridPolicy policy = {}) {
    if (negative_side.dim().n != 1 || positive_side.dim().n != 1)
        throw DomainError("solve_two_branch: both branches must be one-dimensional");
    auto branch = [&](const InitialDatum& u0) {
        const HeatKernelSolver solver(u0);
        const auto grid = policy.grid(t, u0.extent());
        LineField v = t == 0.0 ? to_log_coords(u0, grid) : solver.solve(grid, t);
        return from_log_coords(v, u0.dim());
    };
    return {branch(negative_side), branch(positive_side)};
}

}  // namespace cdh
