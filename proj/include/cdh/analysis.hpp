#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "cdh/core.hpp"
#include "cdh/datum.hpp"
#include "cdh/fields.hpp"
#include "cdh/interpolation.hpp"
#include "cdh/kernel_solver.hpp"
#include "cdh/profiles.hpp"
#include "cdh/quadrature.hpp"
#include "cdh/transforms.hpp"

namespace cdh {

// ---------------------------------------------------------------------------
// Error series and rate fits
// ---------------------------------------------------------------------------

/// Samples e(t_k) = t_k^s * (sup-error + tail bound).
struct ErrorSeries {
    std::vector<double> times;
    std::vector<double> errors;
    std::vector<double> sups;         // raw sup over the evaluation grid
    std::vector<double> tail_bounds;  // bound on the error outside the grid
    double scaling_exponent = 0.0;

    void validate() const {
        if (times.size() != errors.size()) throw DomainError("ErrorSeries: times and errors differ in length");
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (!(times[k] > 0.0)) throw DomainError("ErrorSeries: times must be > 0");
            if (k > 0 && !(times[k] > times[k - 1])) throw DomainError("ErrorSeries: times must increase");
            if (!std::isfinite(errors[k]) || errors[k] < 0.0) throw DomainError("ErrorSeries: errors must be finite, >= 0");
        }
    }

    [[nodiscard]] std::size_t size() const { return times.size(); }

    /// Strictly decreasing?
    [[nodiscard]] bool decreasing() const {
        for (std::size_t k = 1; k < errors.size(); ++k)
            if (!(errors[k] < errors[k - 1])) return false;
        return true;
    }
};

struct RateFit {
    double exponent = 0.0;
    double intercept = 0.0;  // log of the prefactor
    double r_squared = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t used = 0;
    std::size_t excluded = 0;  // zero errors left out of the fit
};

/// Ordinary least squares of log e against log t over the positive samples.
inline RateFit fit_rate(const ErrorSeries& series) {
    series.validate();
    std::vector<double> x, y;
    RateFit fit;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (series.errors[k] > 0.0) {
            x.push_back(std::log(series.times[k]));
            y.push_back(std::log(series.errors[k]));
        } else {
            ++fit.excluded;
        }
    }
    if (x.size() < 5)
        throw DomainError("fit_rate: need >= 5 positive samples, have " + std::to_string(x.size()));
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    // a constant series is fitted exactly
    fit.r_squared = syy <= 1e-30 * n ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    fit.t_min = std::exp(x.front());
    fit.t_max = std::exp(x.back());
    fit.used = x.size();
    return fit;
}

/// n geometrically spaced times from t0 to t1 inclusive.
inline std::vector<double> geometric_times(double t0, double t1, std::size_t n) {
    if (!(t0 > 0.0 && t1 > t0) || n < 2) throw DomainError("geometric_times: need 0 < t0 < t1 and n >= 2");
    std::vector<double> out(n);
    const double ratio = std::log(t1 / t0) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) out[k] = t0 * std::exp(ratio * static_cast<double>(k));
    out.back() = t1;
    return out;
}

// ---------------------------------------------------------------------------
// Convergence to the asymptotic profiles
// ---------------------------------------------------------------------------

enum class ProfileKind { F, E };

inline const char* to_string(ProfileKind k) { return k == ProfileKind::F ? "F" : "E"; }

/// e(t) = t^s sup_x |u(x, t) - profile(x, t)|.
///
/// F-type: profile (M_{u0}/omega_1) F, datum must vanish at the origin.
/// E-type: profile (K/2) E with K = u0(0) > 0, datum must vanish at infinity.
/// The sup is taken in the log coordinate over the t-adaptive grid of
/// `policy`; beyond it a Gaussian tail bound is added.
inline ErrorSeries convergence_error(const InitialDatum& u0, ProfileKind profile, std::span<const double> times,
                                     double s, LineGridPolicy policy = {}) {
    const auto d = u0.decomposition();
    double mass = 0.0, level = 0.0, spread = 0.0;
    if (profile == ProfileKind::F) {
        if (d.tail_left != 0.0 || d.tail_right != 0.0)
            throw DomainError("convergence_error: F profile needs a datum vanishing at the origin and at infinity");
        const auto m = line_mass(u0);
        mass = m.value;
        spread = 2.0 * std::fabs(mass) + m.truncation_bound;
    } else {
        if (!(d.tail_left > 0.0) || d.tail_right != 0.0)
            throw DomainError("convergence_error: E profile needs u0(0) = K > 0 and u0 -> 0 at infinity");
        level = d.tail_left;
        const auto i1 = condition_I1_line(u0, level);
        if (i1.infinite) throw DomainError("convergence_error: K H - v0 is not integrable");
        spread = i1.value / unit_sphere_area(u0.dim()) + i1.truncation_bound;
    }
    const HeatKernelSolver solver(u0);
    ErrorSeries series;
    series.scaling_exponent = s;
    for (double t : times) {
        require_positive_time(t, "convergence_error");
        const auto grid = policy.grid(t, u0.extent());
        double sup = 0.0;
        for (double y : grid) {
            const double target = profile == ProfileKind::F ? mass * gaussian_kernel(y, t)
                                                            : 0.5 * level * erfc_fn(y / (2.0 * std::sqrt(t)));
            sup = std::max(sup, std::fabs(solver.value(y, t) - target));
        }
        sup += solver.error_bound(t);
        const double tail = spread * std::exp(-0.25 * policy.c * policy.c) / std::sqrt(4.0 * std::numbers::pi * t);
        series.times.push_back(t);
        series.sups.push_back(sup);
        series.tail_bounds.push_back(tail);
        series.errors.push_back(std::pow(t, s) * (sup + tail));
    }
    series.validate();
    return series;
}

/// N = 1: each half-line converges to its own multiple of F, so the limit is
/// M F_1 with alpha = M_- / (M_- + M_+) (M_+- the branch masses).
struct TwoBranchConvergence {
    ErrorSeries series;
    double alpha = 0.0;
    double total_mass = 0.0;
};

inline TwoBranchConvergence convergence_error_two_branch(const InitialDatum& negative_side,
                                                         const InitialDatum& positive_side,
                                                         std::span<const double> times, double s,
                                                         LineGridPolicy policy = {}) {
    const auto sol = two_branch_solution(negative_side, positive_side);
    const auto mn = line_mass(negative_side), mp = line_mass(positive_side);
    if (mn.infinite || mp.infinite) throw DomainError("convergence_error_two_branch: branch masses must be finite");
    TwoBranchConvergence out;
    out.total_mass = mn.value + mp.value;
    if (!(out.total_mass > 0.0)) throw DomainError("convergence_error_two_branch: total mass must be > 0");
    out.alpha = mn.value / out.total_mass;
    out.series.scaling_exponent = s;
    const double extent = std::max(negative_side.extent(), positive_side.extent());
    const double spread = 2.0 * out.total_mass;
    for (double t : times) {
        require_positive_time(t, "convergence_error_two_branch");
        const auto grid = policy.grid(t, extent);
        double sup = 0.0;
        for (double y : grid) {
            // x = +-e^{y + t}: the N = 1 drift is -1
            const double lx = y + t;
            const double f_neg = out.total_mass * profile_F1_log(lx, true, t, out.alpha);
            const double f_pos = out.total_mass * profile_F1_log(lx, false, t, out.alpha);
            sup = std::max(sup, std::fabs(sol.negative.at_log_radius(lx, t) - f_neg));
            sup = std::max(sup, std::fabs(sol.positive.at_log_radius(lx, t) - f_pos));
        }
        sup += std::max(sol.negative.solver().error_bound(t), sol.positive.solver().error_bound(t));
        const double tail = spread * std::exp(-0.25 * policy.c * policy.c) / std::sqrt(4.0 * std::numbers::pi * t);
        out.series.times.push_back(t);
        out.series.sups.push_back(sup);
        out.series.tail_bounds.push_back(tail);
        out.series.errors.push_back(std::pow(t, s) * (sup + tail));
    }
    out.series.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Conservation
// ---------------------------------------------------------------------------

struct DriftReport {
    double drift = 0.0;
    bool relative = true;  // false when M(0) = 0 and the drift is absolute
    double initial_mass = 0.0;
    std::vector<double> masses;
};

/// max_k |M(t_k) - M(0)| / M(0) with M = int v dy (the weighted mass over
/// omega_1). M(0) is the exact datum mass when the trajectory carries it.
inline DriftReport conservation_drift(const SolutionTrajectory& traj) {
    traj.validate();
    DriftReport r;
    if (traj.snapshots.empty()) return r;
    auto mass_of = [](const SolutionTrajectory::Snapshot& s) {
        if (const auto* v = std::get_if<LineField>(&s.field)) return line_mass(*v);
        const auto& u = std::get<RadialField>(s.field);
        const auto m = weighted_mass(u);
        if (m.infinite) throw DomainError("conservation_drift: snapshot mass is infinite");
        return m.value / unit_sphere_area(u.dim);
    };
    for (const auto& s : traj.snapshots) r.masses.push_back(mass_of(s));
    r.initial_mass = std::isfinite(traj.initial_line_mass) ? traj.initial_line_mass : r.masses.front();
    r.relative = r.initial_mass != 0.0;
    const double scale = r.relative ? std::fabs(r.initial_mass) : 1.0;
    for (double m : r.masses) r.drift = std::max(r.drift, std::fabs(m - r.initial_mass) / scale);
    return r;
}

// ---------------------------------------------------------------------------
// L1_2 contraction and comparison
// ---------------------------------------------------------------------------

/// int |x|^{-2} [u1 - u2]_+ dx at one time, from two samplings of v on the
/// same grid: omega_1 int e^{(N-2)(y - (N-2) t)} [v1 - v2]_+ dy. The weighted
/// difference is interpolated by fourth-order cubics; sign changes are
/// located inside cells so the kink of the positive part costs no accuracy.
inline double l12_positive_part(const LineField& a, const LineField& b, Dimension dim) {
    if (a.grid != b.grid || a.time != b.time) throw DomainError("l12_positive_part: grid or time mismatch");
    const double drift = dim.drift();
    std::vector<double> diff(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        diff[k] = std::exp(drift * (a.grid[k] - drift * a.time)) * (a.values[k] - b.values[k]);
    const auto spline = smooth_cubic(a.grid, diff);
    const auto& rule = GaussLegendre<8>::instance();
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        const double lo = a.grid[k], hi = a.grid[k + 1];
        const double flo = spline.eval_in_cell(k, lo), fhi = spline.eval_in_cell(k, hi);
        auto f = [&](double y) { return spline.eval_in_cell(k, y); };
        if (flo <= 0.0 && fhi <= 0.0 && spline.eval_in_cell(k, 0.5 * (lo + hi)) <= 0.0) continue;
        if ((flo > 0.0) == (fhi > 0.0) || flo == 0.0 || fhi == 0.0) {
            if (flo + fhi > 0.0) total += rule.integrate(f, lo, hi);
            continue;
        }
        double l = lo, h = hi;
        for (int it = 0; it < 80 && h - l > 1e-15 * std::max(1.0, std::fabs(l)); ++it) {
            const double m = 0.5 * (l + h);
            if ((f(m) > 0.0) == (flo > 0.0)) l = m;
            else h = m;
        }
        const double root = 0.5 * (l + h);
        total += flo > 0.0 ? rule.integrate(f, lo, root) : rule.integrate(f, root, hi);
    }
    // the constant left tails contribute below the grid in closed form
    const double tails = a.tail_left - b.tail_left;
    if (tails > 0.0 && drift > 0.0) total += tails * std::exp(drift * (a.grid.front() - drift * a.time)) / drift;
    return unit_sphere_area(dim) * total;
}

/// Same quantity for two initial data, where the positive part has jumps:
/// each quadrature panel is scanned for sign changes, which are bracketed and
/// bisected before integrating.
inline double l12_positive_part(const InitialDatum& a, const InitialDatum& b) {
    if (!(a.dim() == b.dim())) throw DomainError("l12_positive_part: dimension mismatch");
    const double drift = a.dim().drift();
    const auto da = a.decomposition(), db = b.decomposition();
    if (da.tail_right - db.tail_right > 0.0 && drift >= 0.0) return std::numeric_limits<double>::infinity();
    if (da.empty_support && db.empty_support) {
        return (da.tail_left - db.tail_left > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto* d : {&da, &db}) {
        if (d->empty_support) continue;
        lo = std::min(lo, d->support_lo);
        hi = std::max(hi, d->support_hi);
    }
    std::vector<double> cuts = da.breakpoints;
    cuts.insert(cuts.end(), db.breakpoints.begin(), db.breakpoints.end());
    std::sort(cuts.begin(), cuts.end());
    const double panel = 0.5 * std::min({0.5, da.feature_scale, db.feature_scale});
    auto f = [&](double y) { return std::exp(drift * y) * (a.line_value(y) - b.line_value(y)); };
    const auto& rule = GaussLegendre<20>::instance();
    double total = 0.0;
    auto piece = [&](double pa, double pb) {
        constexpr int scan = 32;
        double left = pa, prev = pa;
        double fl = f(std::nextafter(pa, pb));
        for (int i = 1; i <= scan; ++i) {
            const double x = i == scan ? pb : pa + (pb - pa) * i / scan;
            const double fx = f(i == scan ? std::nextafter(pb, pa) : x);
            if ((fx > 0.0) != (fl > 0.0)) {
                double l = prev, h = x;
                for (int it = 0; it < 80; ++it) {
                    const double m = 0.5 * (l + h);
                    if ((f(m) > 0.0) == (fl > 0.0)) l = m;
                    else h = m;
                }
                const double root = 0.5 * (l + h);
                if (fl > 0.0) total += rule.integrate(f, left, root);
                left = root;
                fl = fx;
            }
            prev = x;
        }
        if (fl > 0.0) total += rule.integrate(f, left, pb);
    };
    std::vector<double> edges{lo};
    for (double c : cuts)
        if (c > lo && c < hi) edges.push_back(c);
    edges.push_back(hi);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const int panels = std::max(1, static_cast<int>(std::ceil((edges[i + 1] - edges[i]) / panel)));
        const double w = (edges[i + 1] - edges[i]) / panels;
        for (int p = 0; p < panels; ++p)
            piece(edges[i] + p * w, p + 1 == panels ? edges[i + 1] : edges[i] + (p + 1) * w);
    }
    const double tails = da.tail_left - db.tail_left;
    if (tails > 0.0) {
        if (drift <= 0.0) return std::numeric_limits<double>::infinity();
        total += tails * std::exp(drift * lo) / drift;
    }
    return unit_sphere_area(a.dim()) * total;
}

struct ContractionReport {
    std::vector<double> times;
    std::vector<double> values;
    double worst_increase = 0.0;
    bool nonincreasing = true;
};

/// c(t_k) = int |x|^{-2} [u1 - u2]_+ dx along two kernel trajectories with
/// common times and grids; flags any increase beyond `tolerance`. An exact
/// value at t = 0 (from the data) may be prepended through `initial`.
inline ContractionReport contraction_check(const SolutionTrajectory& a, const SolutionTrajectory& b,
                                           double tolerance = 1e-8,
                                           double initial = std::numeric_limits<double>::quiet_NaN()) {
    if (a.snapshots.size() != b.snapshots.size() || !(a.dim == b.dim))
        throw DomainError("contraction_check: trajectories differ in length or dimension");
    ContractionReport r;
    if (std::isfinite(initial)) {
        r.times.push_back(0.0);
        r.values.push_back(initial);
    }
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        const auto* va = std::get_if<LineField>(&a.snapshots[k].field);
        const auto* vb = std::get_if<LineField>(&b.snapshots[k].field);
        if (!va || !vb) throw DomainError("contraction_check: needs log-coordinate snapshots");
        if (va->grid != vb->grid || a.snapshots[k].time != b.snapshots[k].time)
            throw DomainError("contraction_check: grid mismatch at snapshot " + std::to_string(k));
        r.times.push_back(a.snapshots[k].time);
        r.values.push_back(l12_positive_part(*va, *vb, a.dim));
    }
    for (std::size_t k = 1; k < r.values.size(); ++k)
        r.worst_increase = std::max(r.worst_increase, r.values[k] - r.values[k - 1]);
    r.nonincreasing = r.worst_increase <= tolerance;
    return r;
}

struct ComparisonReport {
    bool ordered = true;
    double worst_violation = 0.0;          // max (u1 - u2)_+ over all snapshots
    std::vector<double> per_snapshot;
};

/// Pointwise ordering u1 <= u2 at every snapshot. The first snapshot must be
/// ordered (the precondition u01 <= u02).
inline ComparisonReport comparison_check(const SolutionTrajectory& a, const SolutionTrajectory& b,
                                         double tolerance = 1e-10) {
    if (a.snapshots.size() != b.snapshots.size() || a.snapshots.empty())
        throw DomainError("comparison_check: trajectories differ in length or are empty");
    ComparisonReport r;
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        const auto* va = std::get_if<LineField>(&a.snapshots[k].field);
        const auto* vb = std::get_if<LineField>(&b.snapshots[k].field);
        if (!va || !vb || va->grid != vb->grid) throw DomainError("comparison_check: grid mismatch");
        double worst = std::max(0.0, va->tail_left - vb->tail_left);
        for (std::size_t j = 0; j < va->size(); ++j) worst = std::max(worst, va->values[j] - vb->values[j]);
        if (k == 0 && worst > tolerance)
            throw DomainError("comparison_check: initial data are not ordered");
        r.per_snapshot.push_back(worst);
        r.worst_violation = std::max(r.worst_violation, worst);
    }
    r.ordered = r.worst_violation <= tolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Non-radial counterexample
// ---------------------------------------------------------------------------

struct GapResult {
    double gap = 0.0;
    double best_c = 0.0;
    double analytic = 0.0;  // (width / 2) / sqrt(4 pi)
};

/// g(t) = min_c t^{1/2} sup_{r, theta} |theta F(r, t) - c F(r, t)|, with the
/// sup over grids in theta (over `range`) and in log r, and the minimum over
/// c found by a grid scan refined by ternary search (the objective is convex
/// in c).
inline GapResult counterexample_gap(double t, Dimension dim, const AngularRange& range, std::size_t theta_points = 257,
                                    std::size_t radial_points = 2001, double c_span = 8.0) {
    require_positive_time(t, "counterexample_gap");
    GapResult out;
    out.analytic = 0.5 * range.width() / std::sqrt(4.0 * std::numbers::pi);
    std::vector<double> thetas(theta_points);
    for (std::size_t i = 0; i < theta_points; ++i)
        thetas[i] = range.theta_min + range.width() * static_cast<double>(i) / static_cast<double>(theta_points - 1);
    // sample F_N on the (theta, log r) grid once; the grid in log r is centred
    // on the hotspot and odd-sized so it contains it
    const double centre = -dim.drift() * t;
    const double half = c_span * std::sqrt(t);
    std::vector<double> fr(radial_points);
    for (std::size_t j = 0; j < radial_points; ++j) {
        const double lr = centre - half + 2.0 * half * static_cast<double>(j) / static_cast<double>(radial_points - 1);
        fr[j] = std::sqrt(t) * profile_F(std::exp(lr), t, dim);
    }
    auto objective = [&](double c) {
        double worst = 0.0;
        for (double th : thetas)
            for (double f : fr) {
                worst = std::max(worst, std::fabs((th - c) * f));
            }
        return worst;
    };
    constexpr int scan = 64;
    double best = std::numeric_limits<double>::infinity();
    double best_c = range.theta_min;
    const double step = range.width() / scan;
    for (int i = 0; i <= scan; ++i) {
        const double c = range.theta_min + step * i;
        const double v = objective(c);
        if (v < best) {
            best = v;
            best_c = c;
        }
    }
    double lo = best_c - step, hi = best_c + step;
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) <= objective(m2)) hi = m2;
        else lo = m1;
    }
    out.best_c = 0.5 * (lo + hi);
    out.gap = std::min(best, objective(out.best_c));
    return out;
}

// ---------------------------------------------------------------------------
// Sup-norm law, hotspot and origin behaviour
// ---------------------------------------------------------------------------

struct SupNormCheck {
    double grid_max = 0.0;
    double exact = 0.0;
    double resolution = 0.0;      // admissible gap for the grid spacing
    double argmax_log_r = 0.0;
    double expected_log_r = 0.0;
    double cell = 0.0;
    bool pass = false;
};

/// Grid maximum of F over a log-radius grid against 1/sqrt(4 pi t), and the
/// argmax against the hotspot radius e^{-(N-2) t}. The grid is deliberately
/// not aligned with the hotspot.
inline SupNormCheck sup_norm_law(double t, Dimension dim, std::size_t points = 4096, double c = 8.0) {
    require_positive_time(t, "sup_norm_law");
    SupNormCheck out;
    out.exact = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
    out.expected_log_r = -dim.drift() * t;
    const double half = c * std::sqrt(t) + 1.0;
    const auto grid = uniform_grid(out.expected_log_r - half, out.expected_log_r + half, points);
    out.cell = grid[1] - grid[0];
    for (double lr : grid) {
        const double f = profile_F_log(lr, t, dim);
        if (f > out.grid_max) {
            out.grid_max = f;
            out.argmax_log_r = lr;
        }
    }
    // |F(y*) - F(y_k)| <= sup|F_yy| (cell/2)^2 / 2 with sup|F_yy| = F(0) / (2t)
    out.resolution = out.exact / (2.0 * t) * 0.125 * out.cell * out.cell;
    out.pass = std::fabs(out.grid_max - out.exact) <= out.resolution &&
               std::fabs(out.argmax_log_r - out.expected_log_r) <= out.cell;
    return out;
}

struct HotspotTrack {
    double time = 0.0;
    double argmax_log_r = 0.0;
    double expected_log_r = 0.0;
    double cell = 0.0;
    double max_value = 0.0;
};

/// Argmax of the kernel solution on the log-radius grid of solve_radial.
inline HotspotTrack hotspot_track(const InitialDatum& u0, double t, LineGridPolicy policy = {}) {
    const auto u = solve_radial(u0, t, policy);
    HotspotTrack h;
    h.time = t;
    h.expected_log_r = -u0.dim().drift() * t;
    h.cell = u.log_radii[1] - u.log_radii[0];
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u.values[k] > h.max_value) {
            h.max_value = u.values[k];
            h.argmax_log_r = u.log_radii[k];
        }
    }
    return h;
}

struct PositivityReport {
    bool vacuous = false;       // zero datum: nothing to certify
    bool pass = true;
    std::vector<double> times;
    std::vector<double> min_values;      // over the interior grid
    std::vector<double> half_r0_values;  // u(r0 / 2, t)
    std::vector<bool> monotone_tails;    // u increasing in r below the datum
    double tail_left = 0.0;              // certified u(0, t) (exact split)
};

/// u > 0 away from the origin and u(0, t) = 0 for a datum vanishing on
/// r < r0.
inline PositivityReport positivity_check(const InitialDatum& u0, double r0, std::span<const double> times,
                                         LineGridPolicy policy = {}) {
    if (!(r0 > 0.0)) throw DomainError("positivity_check: r0 must be > 0");
    const auto d = u0.decomposition();
    if (d.tail_left != 0.0 || (!d.empty_support && d.support_lo < std::log(r0)))
        throw DomainError("positivity_check: datum must vanish on r < r0");
    PositivityReport r;
    bool nonzero = false;
    for (const auto& p : u0.parts()) {
        std::visit([&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, AnnulusIndicator> || std::is_same_v<T, GaussianBumpInY>) {
                nonzero = nonzero || c.height > 0.0;
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                for (double v : c.values) nonzero = nonzero || v > 0.0;
                nonzero = nonzero || c.tail_right > 0.0;
            } else if constexpr (std::is_same_v<T, Constant>) {
                nonzero = nonzero || c.value > 0.0;
            } else {
                nonzero = true;
            }
        }, p);
    }
    if (!nonzero) {
        r.vacuous = true;
        return r;
    }
    const HeatKernelSolver solver(u0);
    r.tail_left = solver.tail_left();
    if (r.tail_left != 0.0) r.pass = false;
    const double drift = u0.dim().drift();
    for (double t : times) {
        require_positive_time(t, "positivity_check");
        const auto grid = policy.grid(t, u0.extent());
        double mn = std::numeric_limits<double>::infinity();
        bool monotone = true;
        double prev = -1.0;
        for (double y : grid) {
            const double v = solver.value(y, t);
            mn = std::min(mn, v);
            if (y <= d.support_lo) {
                if (v < prev) monotone = false;
                prev = v;
            }
        }
        const double half = solver.value(std::log(0.5 * r0) + drift * t, t);
        r.times.push_back(t);
        r.min_values.push_back(mn);
        r.half_r0_values.push_back(half);
        r.monotone_tails.push_back(monotone);
        r.pass = r.pass && mn > 0.0 && half > 0.0 && monotone;
    }
    return r;
}

}  // namespace cdh
