#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdh/core.hpp"
#include "cdh/datum.hpp"
#include "cdh/fields.hpp"
#include "cdh/kernel_solver.hpp"
#include "cdh/profiles.hpp"

namespace cdh {

/// Dirichlet problem on the annulus r_inner < |x| < r_outer with u = 0 on
/// both spheres. In s = log r it reads u_t = u_ss + (N-2) u_s.
struct AnnulusProblem {
    double r_inner = std::exp(-4.0);
    double r_outer = std::exp(5.0);
    Dimension dim{3};
    InitialDatum u0;
    int grid_points = 256;
    double dt = 1e-3;

    [[nodiscard]] double log_inner() const { return std::log(r_inner); }
    [[nodiscard]] double log_outer() const { return std::log(r_outer); }
    [[nodiscard]] double spacing() const { return (log_outer() - log_inner()) / (grid_points - 1); }

    void validate() const {
        if (!(r_inner > 0.0 && r_outer > r_inner && std::isfinite(r_outer)))
            throw DomainError("AnnulusProblem: need 0 < r_inner < r_outer < inf");
        if (dim.n < 3) throw DomainError("AnnulusProblem: requires N >= 3");
        if (grid_points < 16) throw DomainError("AnnulusProblem: grid_points must be >= 16");
        if (!(dt > 0.0)) throw DomainError("AnnulusProblem: dt must be > 0");
        const double span = log_outer() - log_inner();
        if (dt > 0.25 * span * span) throw DomainError("AnnulusProblem: dt exceeds (log span)^2 / 4");
        if (u0.tail_left() != 0.0 || u0.tail_right() != 0.0)
            throw DomainError("AnnulusProblem: datum must vanish near the origin and at infinity");
        const auto d = u0.decomposition();
        if (!d.empty_support && (d.support_lo <= log_inner() || d.support_hi >= log_outer()))
            throw DomainError("AnnulusProblem: support of the datum must lie strictly inside the annulus");
        const double h = spacing();
        if (dim.drift() * h > 2.0)
            throw SolverError("AnnulusProblem: cell Peclet number (N-2) h = " + std::to_string(dim.drift() * h) +
                              " exceeds 2");
        if (!d.empty_support) {
            const double nodes_in_support = (d.support_hi - d.support_lo) / h;
            if (nodes_in_support < 4.0)
                throw SolverError("AnnulusProblem: grid too coarse to resolve the datum support (" +
                                  std::to_string(nodes_in_support) + " cells)");
        }
    }
};

namespace detail {

/// Constant tridiagonal system lower/diag/upper, factorised once (Thomas).
class Tridiagonal {
public:
    Tridiagonal(std::size_t n, double lower, double diag, double upper) : lower_(lower), c_(n), inv_(n) {
        double denom = diag;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) denom = diag - lower * c_[i - 1];
            inv_[i] = 1.0 / denom;
            c_[i] = upper * inv_[i];
        }
    }

    /// Solves in place.
    void solve(std::vector<double>& d) const {
        const std::size_t n = d.size();
        d[0] *= inv_[0];
        for (std::size_t i = 1; i < n; ++i) d[i] = (d[i] - lower_ * d[i - 1]) * inv_[i];
        for (std::size_t i = n - 1; i-- > 0;) d[i] -= c_[i] * d[i + 1];
    }

private:
    double lower_;
    std::vector<double> c_, inv_;
};

}  // namespace detail

/// Crank-Nicolson with centred differences on a uniform grid in log r.
///
/// Substeps are shortened to dt_eff <= h^2 so that both halves of the scheme
/// have nonnegative coefficients (with cell Peclet (N-2) h <= 2): the discrete
/// solution then obeys the maximum and comparison principles exactly.
class AnnulusSolver {
public:
    explicit AnnulusSolver(AnnulusProblem p) : p_(std::move(p)) {
        p_.validate();
        h_ = p_.spacing();
        s_.resize(p_.grid_points);
        for (int j = 0; j < p_.grid_points; ++j) s_[j] = p_.log_inner() + j * h_;
        s_.back() = p_.log_outer();
        v_.assign(s_.size(), 0.0);
        const auto jumps = p_.u0.jumps();
        for (std::size_t j = 1; j + 1 < s_.size(); ++j) {
            // a node on a jump takes the mean of the one-sided limits, so that
            // rounding in the node position cannot pick a side
            double at_jump = std::numeric_limits<double>::quiet_NaN();
            for (double y : jumps)
                if (std::fabs(s_[j] - y) <= 1e-9 * h_) at_jump = y;
            if (std::isnan(at_jump)) {
                v_[j] = p_.u0.line_value(s_[j]);
            } else {
                const double eps = 1e-6 * h_;
                v_[j] = 0.5 * (p_.u0.line_value(at_jump - eps) + p_.u0.line_value(at_jump + eps));
            }
        }
    }

    [[nodiscard]] double spacing() const { return h_; }
    [[nodiscard]] double time() const { return time_; }
    [[nodiscard]] const std::vector<double>& log_radii() const { return s_; }
    [[nodiscard]] const std::vector<double>& values() const { return v_; }

    /// Substep actually used to cover an interval of length `span`.
    [[nodiscard]] double effective_step(double span) const {
        const double target = std::min(p_.dt, h_ * h_);
        const double steps = std::max(1.0, std::ceil(span / target - 1e-9));
        return span / steps;
    }

    /// Advances to time `t` (>= current time).
    void advance_to(double t) {
        if (t < time_) throw DomainError("AnnulusSolver: cannot step backwards in time");
        const double span = t - time_;
        if (span == 0.0) return;
        const double dt = effective_step(span);
        const auto steps = static_cast<long>(std::llround(span / dt));
        const double b = p_.dim.drift();
        const double alpha = 1.0 / (h_ * h_) - b / (2.0 * h_);
        const double beta = -2.0 / (h_ * h_);
        const double gamma = 1.0 / (h_ * h_) + b / (2.0 * h_);
        const double k = 0.5 * dt;
        const std::size_t n = s_.size() - 2;
        const detail::Tridiagonal lhs(n, -k * alpha, 1.0 - k * beta, -k * gamma);
        std::vector<double> rhs(n);
        for (long step = 0; step < steps; ++step) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = i + 1;
                rhs[i] = k * alpha * v_[j - 1] + (1.0 + k * beta) * v_[j] + k * gamma * v_[j + 1];
            }
            lhs.solve(rhs);
            std::copy(rhs.begin(), rhs.end(), v_.begin() + 1);
        }
        time_ = t;
    }

    [[nodiscard]] RadialField snapshot() const {
        RadialField u;
        u.log_radii = s_;
        u.values = v_;
        u.time = time_;
        u.dim = p_.dim;
        u.origin_value = 0.0;
        return u;
    }

private:
    AnnulusProblem p_;
    double h_ = 0.0;
    double time_ = 0.0;
    std::vector<double> s_, v_;
};

/// Snapshots at each requested time (strictly increasing, > 0); the initial
/// state is included as the first snapshot.
inline SolutionTrajectory annulus_solve(const AnnulusProblem& p, std::span<const double> times) {
    AnnulusSolver solver(p);
    SolutionTrajectory traj;
    traj.scheme = Scheme::crank_nicolson;
    traj.dim = p.dim;
    const auto mass = line_mass(p.u0);
    if (!mass.infinite) traj.initial_line_mass = mass.value;
    traj.snapshots.push_back({0.0, solver.snapshot()});
    for (double t : times) {
        if (!(t > solver.time())) throw DomainError("annulus_solve: times must be increasing and > 0");
        solver.advance_to(t);
        traj.snapshots.push_back({t, solver.snapshot()});
    }
    traj.validate();
    return traj;
}

inline SolutionTrajectory annulus_solve(const AnnulusProblem& p, double t) {
    const double times[] = {t};
    return annulus_solve(p, times);
}

/// The a priori bound u <= K F(x, t + tau): K = sup v0(y) / F(e^y, tau) over
/// the datum support.
struct UniversalBound {
    double K = 0.0;
    double tau = 1.0;
    Dimension dim{3};

    [[nodiscard]] double at_log_radius(double log_r, double t) const {
        return K * profile_F_log(log_r, t + tau, dim);
    }
};

inline UniversalBound universal_bound(const InitialDatum& u0, double tau = 1.0, std::size_t samples = 4001) {
    require_positive_time(tau, "universal_bound");
    const auto d = u0.decomposition();
    if (d.tail_left != 0.0 || d.tail_right != 0.0)
        throw DomainError("universal_bound: datum must vanish near the origin and at infinity");
    UniversalBound b{0.0, tau, u0.dim()};
    if (d.empty_support) return b;
    // F(e^y, tau) is log-concave in y, so the ratio is maximised on the closed
    // support; sample densely and include the breakpoints and their one-sided
    // limits
    std::vector<double> ys = uniform_grid(d.support_lo, d.support_hi, samples);
    for (double p : d.breakpoints) {
        ys.push_back(p);
        ys.push_back(std::nextafter(p, -INFINITY));
        ys.push_back(std::nextafter(p, INFINITY));
    }
    for (double y : ys) b.K = std::max(b.K, u0.line_value(y) / profile_F_log(y, tau, b.dim));
    // the sampled maximum of a smooth ratio can sit between samples
    b.K *= 1.0 + 1e-6;
    return b;
}

/// Lattice-aligned nested schedule r_k = r0 2^{-k}, R_k = R0 2^k. Grid
/// spacing is log 2 / cells_per_octave so every level contains the nodes of
/// the previous one; r0 and R0 are snapped outward onto that lattice.
struct NestedSchedule {
    std::vector<std::pair<double, double>> log_bounds;  // (log r_k, log R_k)
    double spacing = 0.0;
};

inline NestedSchedule nested_schedule(double r0, double R0, int levels = 4, int cells_per_octave = 16) {
    if (!(r0 > 0.0 && R0 > r0)) throw DomainError("nested_schedule: need 0 < r0 < R0");
    if (levels < 1 || cells_per_octave < 1) throw DomainError("nested_schedule: need levels >= 1 and cells >= 1");
    NestedSchedule s;
    s.spacing = std::numbers::ln2 / cells_per_octave;
    const long lo = static_cast<long>(std::floor(std::log(r0) / s.spacing));
    const long hi = static_cast<long>(std::ceil(std::log(R0) / s.spacing));
    for (int k = 0; k < levels; ++k) {
        const long shift = static_cast<long>(k) * cells_per_octave;
        s.log_bounds.emplace_back((lo - shift) * s.spacing, (hi + shift) * s.spacing);
    }
    return s;
}

struct NestedLimitResult {
    std::vector<RadialField> levels;       // u_{r_k, R_k}(., t)
    std::vector<double> increments;        // sup |u_{k+1} - u_k| on the common nodes
    double worst_decrease = 0.0;           // max (u_k - u_{k+1})_+ on the common nodes
    bool monotone = true;
    double bound_excess = 0.0;             // max (u_k - K F(., t + tau))_+ over all levels
    UniversalBound bound;
    double kernel_gap = 0.0;               // sup |u_last - kernel solution| on the last grid
};

/// Solves the Dirichlet problems of a nested schedule up to time t and checks
/// pointwise monotonicity in the domain (tolerance `tolerance`).
inline NestedLimitResult nested_annulus_limit(const InitialDatum& u0, const NestedSchedule& schedule, double t,
                                              double dt = 1e-3, double tolerance = 1e-8, double tau = 1.0) {
    require_positive_time(t, "nested_annulus_limit");
    if (schedule.log_bounds.empty()) throw DomainError("nested_annulus_limit: empty schedule");
    NestedLimitResult out;
    out.bound = universal_bound(u0, tau);
    const double h = schedule.spacing;
    for (const auto& [lo, hi] : schedule.log_bounds) {
        AnnulusProblem p;
        p.r_inner = std::exp(lo);
        p.r_outer = std::exp(hi);
        p.dim = u0.dim();
        p.u0 = u0;
        p.dt = dt;
        p.grid_points = static_cast<int>(std::llround((hi - lo) / h)) + 1;
        AnnulusSolver solver(p);
        solver.advance_to(t);
        RadialField u = solver.snapshot();
        for (std::size_t j = 0; j < u.size(); ++j)
            out.bound_excess = std::max(out.bound_excess, u.values[j] - out.bound.at_log_radius(u.log_radii[j], t));
        out.levels.push_back(std::move(u));
    }
    for (std::size_t k = 1; k < out.levels.size(); ++k) {
        const auto& coarse = out.levels[k - 1];
        const auto& fine = out.levels[k];
        const auto offset = static_cast<std::size_t>(std::llround((coarse.log_radii.front() - fine.log_radii.front()) / h));
        double inc = 0.0;
        for (std::size_t j = 0; j < coarse.size(); ++j) {
            const double diff = fine.values[j + offset] - coarse.values[j];
            inc = std::max(inc, std::fabs(diff));
            out.worst_decrease = std::max(out.worst_decrease, -diff);
        }
        out.increments.push_back(inc);
    }
    out.monotone = out.worst_decrease <= tolerance;
    const KernelSolution exact(u0);
    const auto& last = out.levels.back();
    for (std::size_t j = 0; j < last.size(); ++j)
        out.kernel_gap = std::max(out.kernel_gap, std::fabs(last.values[j] - exact.at_log_radius(last.log_radii[j], t)));
    return out;
}

}  // namespace cdh
