#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cdh/analysis.hpp"
#include "cdh/annulus_solver.hpp"
#include "cdh/cli/config.hpp"
#include "cdh/cli/experiments.hpp"
#include "cdh/erfc.hpp"
#include "cdh/kernel_solver.hpp"
#include "cdh/profiles.hpp"
#include "cdh/quadrature.hpp"
#include "cdh/residual.hpp"
#include "cdh/transforms.hpp"

namespace cdh::cli {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;  // 0: no runtime limit
};

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> check;
};

namespace detail {

inline std::string num(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string join(const std::vector<double>& v, int digits = 4) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + num(v[k], digits);
    return s;
}

inline Outcome decreasing_series(const ErrorSeries& e) {
    const double ratio = e.errors.back() / e.errors.front();
    const bool pass = e.decreasing() && ratio < 0.05;
    return {pass, "e(t)=" + join(e.errors) + " final/initial=" + num(ratio) + (e.decreasing() ? "" : " not decreasing")};
}

inline Outcome rate_band(const InitialDatum& u0, double lo, double hi) {
    const auto times = geometric_times(10.0, 1e4, 10);
    const auto fit = fit_rate(convergence_error(u0, ProfileKind::E, times, 0.0));
    const bool pass = fit.exponent >= lo && fit.exponent <= hi && fit.r_squared >= 0.98 && fit.used >= 8;
    return {pass, "exponent=" + num(fit.exponent) + " band=[" + num(lo) + "," + num(hi) + "] r2=" + num(fit.r_squared) +
                      " samples=" + std::to_string(fit.used)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Independent erfc oracle
// ---------------------------------------------------------------------------

/// erfc by composite 20-point Gauss-Legendre quadrature of
/// (2/sqrt pi) int_xi^inf e^{-s^2} ds, truncated at max(xi, 0) + 7.
inline double erfc_by_quadrature(double xi) {
    const double upper = std::max(xi, 0.0) + 7.0;
    return 2.0 * std::numbers::inv_sqrtpi *
           composite_integral<20>([](double s) { return std::exp(-s * s); }, xi, upper, 0.25);
}

/// max |f(xi) - oracle(xi)| over `points` uniform samples of [-8, 8].
inline double erfc_max_error(const std::function<double(double)>& f, int points = 10000) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double xi = -8.0 + 16.0 * i / (points - 1);
        worst = std::max(worst, std::fabs(f(xi) - erfc_by_quadrature(xi)));
    }
    return worst;
}

inline Outcome erfc_accuracy(const std::function<double(double)>& f) {
    const double worst = erfc_max_error(f);
    return {worst <= 1e-12, "max|erfc - oracle|=" + detail::num(worst) + " tol=1e-12"};
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

inline Outcome check_radial_convergence() {
    const InitialDatum u0(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    const std::vector<double> times{1, 10, 100, 1000};
    return detail::decreasing_series(convergence_error(u0, ProfileKind::F, times, 0.5));
}

inline Outcome check_rate_a() {
    return detail::rate_band(InitialDatum(StepToK{1.0, std::numbers::e, 4.0}, Dimension(3)), -0.65, -0.45);
}

inline Outcome check_rate_b() {
    return detail::rate_band(InitialDatum(SmoothErfcLike{1.0, 0.0}, Dimension(3)), -1.7, -1.3);
}

inline Outcome check_mass_conservation() {
    // kernel-path drift over [0, 100]
    const InitialDatum u0(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    const std::vector<double> times{0, 0.1, 0.5, 1, 5, 10, 50, 100};
    LineGridPolicy policy;
    policy.c = 10.0;
    const auto drift = conservation_drift(kernel_trajectory(u0, times, policy));
    bool pass = drift.drift <= 1e-8;
    std::string note = "drift=" + detail::num(drift.drift);

    // M = omega_1 int v0 dy, through r and through y
    std::vector<InitialDatum> data;
    for (int n : {3, 4, 5}) {
        const Dimension d(n);
        data.emplace_back(AnnulusIndicator{0.5, 2.0, 1.5}, d);
        data.emplace_back(GaussianBumpInY{0.3, 0.5, 2.0}, d);
        data.emplace_back(Tabulated{{0.2, 0.5, 1.0, 2.0, 4.0}, {0.0, 1.0, 0.5, 2.0, 0.0}, 0.0, 0.0}, d);
        data.emplace_back(StepToK{1.0, 1.0, 4.0}, d);
        data.emplace_back(SmoothErfcLike{1.0, 0.0}, d);
    }
    double worst = 0.0;
    int flags = 0;
    for (const auto& u : data) {
        const auto by_r = weighted_mass(u);
        const auto by_y = line_mass(u);
        if (by_r.infinite || by_y.infinite) {
            if (by_r.infinite != by_y.infinite) ++flags;
            continue;
        }
        const double rhs = unit_sphere_area(u.dim()) * by_y.value;
        worst = std::max(worst, std::fabs(by_r.value - rhs) / std::fabs(rhs));
    }
    pass = pass && worst <= 1e-8 && flags == 0;
    note += " identity_rel_err=" + detail::num(worst) + " infinite_flag_mismatches=" + std::to_string(flags);
    return {pass, note};
}

inline Outcome check_contraction_comparison() {
    std::mt19937_64 rng(20240601);
    const Dimension dim(3);
    const std::vector<double> times{0.1, 0.25, 0.5, 1, 2, 4, 8};
    double worst_increase = 0.0;
    for (int pair = 0; pair < 10; ++pair) {
        const auto a = random_datum(rng, dim);
        const auto b = random_datum(rng, dim);
        const auto [ta, tb] = paired_trajectories(a, b, times);
        const auto rep = contraction_check(ta, tb, 1e-8, l12_positive_part(a, b));
        worst_increase = std::max(worst_increase, rep.worst_increase);
    }
    std::vector<double> with_zero{0.0};
    with_zero.insert(with_zero.end(), times.begin(), times.end());
    double worst_violation = 0.0;
    for (int pair = 0; pair < 10; ++pair) {
        const auto a = random_datum(rng, dim);
        auto b = a;
        const auto bump = random_datum(rng, dim);
        for (const auto& p : bump.parts()) b.add(p);
        const auto [ta, tb] = paired_trajectories(a, b, with_zero);
        worst_violation = std::max(worst_violation, comparison_check(ta, tb).worst_violation);
    }
    const bool pass = worst_increase <= 1e-8 && worst_violation <= 1e-10;
    return {pass, "worst_increase=" + detail::num(worst_increase) + " worst_violation=" + detail::num(worst_violation)};
}

inline Outcome check_counterexample_gap() {
    const double target = std::sqrt(std::numbers::pi) / 2.0;
    bool pass = true;
    std::vector<double> gaps;
    for (double t : {1.0, 10.0, 100.0}) {
        const auto g = counterexample_gap(t, Dimension(3), AngularRange{});
        gaps.push_back(g.gap);
        pass = pass && std::fabs(g.gap - target) <= 0.01 * target;
    }
    return {pass, "g(t)=" + detail::join(gaps, 7) + " target=" + detail::num(target, 7)};
}

/// Residual ratios max_k |res(h)| / max_k |res(h/2)| over 20 seeded points.
struct ResidualRatios {
    double F = 0.0, E = 0.0, FN = 0.0;
};

inline ResidualRatios residual_ratios(double h = 1e-2, int points = 20, std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.4, 2.5), time(0.5, 2.0), angle(0.3, 2.0 * std::numbers::pi - 0.3),
        polar(0.5, std::numbers::pi - 0.5);
    const Dimension dim(3);
    const double K = 1.7;
    auto f = [dim](double r, double t) { return profile_F(r, t, dim); };
    auto e = [dim, K](double r, double t) { return profile_E(r, t, dim, K); };
    auto fn = [dim](const std::array<double, 3>& x, double t) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        return azimuth(x) * profile_F(r, t, dim);
    };
    double f1 = 0, f2 = 0, e1 = 0, e2 = 0, n1 = 0, n2 = 0;
    for (int i = 0; i < points; ++i) {
        const double r = radius(rng), t = time(rng), phi = angle(rng), th = polar(rng);
        f1 = std::max(f1, std::fabs(pde_residual(f, r, t, dim, h)));
        f2 = std::max(f2, std::fabs(pde_residual(f, r, t, dim, h / 2)));
        e1 = std::max(e1, std::fabs(pde_residual(e, r, t, dim, h)));
        e2 = std::max(e2, std::fabs(pde_residual(e, r, t, dim, h / 2)));
        const std::array<double, 3> x{r * std::sin(th) * std::cos(phi), r * std::sin(th) * std::sin(phi), r * std::cos(th)};
        n1 = std::max(n1, std::fabs(pde_residual_cartesian(fn, x, t, h)));
        n2 = std::max(n2, std::fabs(pde_residual_cartesian(fn, x, t, h / 2)));
    }
    return {f1 / f2, e1 / e2, n1 / n2};
}

inline Outcome check_pde_residuals() {
    const auto r = residual_ratios();
    auto ok = [](double x) { return x >= 3.5 && x <= 4.5; };
    return {ok(r.F) && ok(r.E) && ok(r.FN),
            "ratio F=" + detail::num(r.F) + " E=" + detail::num(r.E) + " F_N=" + detail::num(r.FN)};
}

inline Outcome check_sup_norm_hotspot() {
    bool pass = true;
    std::string gaps;
    for (int n : {3, 5}) {
        for (double t : {1.0, 10.0, 100.0}) {
            const auto law = sup_norm_law(t, Dimension(n));
            pass = pass && law.pass;
            if (!law.pass)
                gaps += " N=" + std::to_string(n) + ",t=" + detail::num(t) + " gap=" +
                          detail::num(std::fabs(law.grid_max - law.exact));
        }
    }
    const InitialDatum bump(GaussianBumpInY{0.0, 0.5, 1.0}, Dimension(3));
    double worst_cells = 0.0;
    for (double t : {10.0, 100.0}) {
        const auto h = hotspot_track(bump, t);
        worst_cells = std::max(worst_cells, std::fabs(h.argmax_log_r - h.expected_log_r) / h.cell);
    }
    pass = pass && worst_cells <= 1.0;
    return {pass, "sup-norm law " + std::string(gaps.empty() ? "ok" : gaps) +
                      "; kernel hotspot offset (cells)=" + detail::num(worst_cells)};
}

inline Outcome check_annulus_construction() {
    const InitialDatum u0(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    const auto res = nested_annulus_limit(u0, nested_schedule(std::exp(-2.0), std::exp(3.0), 4, 16), 1.0);
    const InitialDatum smooth(GaussianBumpInY{0.5, 0.4, 1.0}, Dimension(3));
    const auto study = annulus_refinement(smooth, 1.0, {8, 16, 32, 64});
    const bool order = study.exponent >= 1.8 && study.exponent <= 2.2;
    return {res.monotone && res.bound_excess <= 0.0 && order,
            "worst_decrease=" + detail::num(res.worst_decrease) + " bound_excess=" + detail::num(res.bound_excess) +
                " order=" + detail::num(study.exponent)};
}

inline Outcome check_origin_positivity() {
    const InitialDatum u0(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    const std::vector<double> times{0.1, 1.0, 10.0};
    const auto rep = positivity_check(u0, 1.0, times);
    double mn = std::numeric_limits<double>::infinity();
    for (double v : rep.min_values) mn = std::min(mn, v);
    return {rep.pass && !rep.vacuous, "min interior value=" + detail::num(mn) + " left tail=" + detail::num(rep.tail_left)};
}

inline Outcome check_n1_two_branch() {
    const InitialDatum neg(AnnulusIndicator{1.0, std::numbers::e, 0.25}, Dimension(1));
    const InitialDatum pos(AnnulusIndicator{1.0, std::numbers::e, 0.75}, Dimension(1));
    const std::vector<double> times{1, 10, 100, 1000};
    const auto res = convergence_error_two_branch(neg, pos, times, 0.5);
    auto out = detail::decreasing_series(res.series);
    out.detail += " alpha=" + detail::num(res.alpha);
    return out;
}

inline const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {1, "radial_F_convergence", 30.0, check_radial_convergence},
        {2, "step_E_rate", 60.0, check_rate_a},
        {3, "erfc_E_rate", 60.0, check_rate_b},
        {4, "mass_conservation", 0.0, check_mass_conservation},
        {5, "contraction_comparison", 0.0, check_contraction_comparison},
        {6, "counterexample_gap", 10.0, check_counterexample_gap},
        {7, "pde_residuals", 10.0, check_pde_residuals},
        {8, "sup_norm_hotspot", 0.0, check_sup_norm_hotspot},
        {9, "annulus_construction", 120.0, check_annulus_construction},
        {10, "origin_positivity", 0.0, check_origin_positivity},
        {11, "erfc_accuracy", 0.0, [] { return erfc_accuracy(erfc_fn); }},
        {12, "n1_two_branch", 0.0, check_n1_two_branch},
    };
    return list;
}

/// Runs one criterion, turning exceptions into failures.
inline CriterionResult run_criterion(const Criterion& c) {
    CriterionResult r{c.id, c.name, false, {}, 0.0, c.limit_seconds};
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto o = c.check();
        r.pass = o.pass;
        r.detail = o.detail;
    } catch (const std::exception& e) {
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && r.seconds >= c.limit_seconds) {
        r.pass = false;
        r.detail += " runtime " + detail::num(r.seconds) + "s over limit " + detail::num(c.limit_seconds) + "s";
    }
    return r;
}

/// Criteria whose name contains `filter`, run on up to `jobs` threads;
/// results come back in criterion order.
inline std::vector<CriterionResult> run_acceptance(const std::string& filter = "", unsigned jobs = 1) {
    std::vector<const Criterion*> selected;
    for (const auto& c : criteria())
        if (c.name.find(filter) != std::string::npos) selected.push_back(&c);
    std::vector<CriterionResult> results(selected.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < selected.size(); i = next++) results[i] = run_criterion(*selected[i]);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(selected.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return results;
}

inline std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "%s [%2d] %-24s %7.2fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    return head + r.detail;
}

}  // namespace cdh::cli
