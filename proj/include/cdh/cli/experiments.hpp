#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cdh/analysis.hpp"
#include "cdh/annulus_solver.hpp"
#include "cdh/cli/config.hpp"
#include "cdh/cli/csv.hpp"
#include "cdh/cli/svg.hpp"
#include "cdh/kernel_solver.hpp"
#include "cdh/profiles.hpp"
#include "cdh/residual.hpp"
#include "cdh/transforms.hpp"

namespace cdh::cli {

struct ExperimentOutput {
    std::vector<SeriesRow> series;
    std::vector<SummaryRow> summary;
    std::optional<std::pair<PlotSpec, std::vector<PlotSeries>>> plot;

    [[nodiscard]] bool all_pass() const {
        for (const auto& r : summary)
            if (!r.pass) return false;
        return true;
    }
};

struct Experiment {
    std::string name;
    std::string description;
    std::function<ExperimentConfig()> defaults;
    std::function<ExperimentOutput(const ExperimentConfig&)> run;
};

// ---------------------------------------------------------------------------
// Shared building blocks (also used by the acceptance suite)
// ---------------------------------------------------------------------------

/// Random compactly varying datum: an annulus indicator or a Gaussian bump
/// in log r, with parameters drawn from `rng`.
inline InitialDatum random_datum(std::mt19937_64& rng, Dimension dim) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < 0.5) {
        const double y1 = -1.5 + 2.0 * unit(rng);
        const double y2 = y1 + 0.3 + 1.5 * unit(rng);
        return {AnnulusIndicator{std::exp(y1), std::exp(y2), 0.2 + 1.8 * unit(rng)}, dim};
    }
    return {GaussianBumpInY{-1.5 + 3.0 * unit(rng), 0.2 + 0.8 * unit(rng), 0.2 + 1.8 * unit(rng)}, dim};
}

/// Kernel trajectories of two data on a common grid that also covers the
/// peak of the |x|^{-2} weight.
inline std::pair<SolutionTrajectory, SolutionTrajectory> paired_trajectories(const InitialDatum& a,
                                                                             const InitialDatum& b,
                                                                             std::span<const double> times,
                                                                             std::size_t points = 4096,
                                                                             double c = 10.0) {
    LineGridPolicy policy;
    policy.points = points;
    policy.c = c;
    policy.pad = std::max(a.extent(), b.extent());
    policy.weight_drift = a.dim().drift();
    return {kernel_trajectory(a, times, policy), kernel_trajectory(b, times, policy)};
}

/// Errors of the Crank-Nicolson annulus solution against the kernel solution
/// for a smooth datum, at grid spacings log 2 / m.
struct RefinementStudy {
    std::vector<double> spacings;
    std::vector<double> errors;
    double exponent = 0.0;
    double r_squared = 0.0;
};

inline RefinementStudy annulus_refinement(const InitialDatum& u0, double t, const std::vector<int>& cells_per_octave,
                                          double half_span = 12.0, double dt = 1e-2) {
    RefinementStudy s;
    const KernelSolution exact(u0);
    for (int m : cells_per_octave) {
        const double h = std::numbers::ln2 / m;
        const long lo = static_cast<long>(std::floor(-half_span / h));
        const long hi = static_cast<long>(std::ceil(half_span / h));
        AnnulusProblem p;
        p.r_inner = std::exp(lo * h);
        p.r_outer = std::exp(hi * h);
        p.dim = u0.dim();
        p.u0 = u0;
        p.dt = dt;
        p.grid_points = static_cast<int>(hi - lo + 1);
        AnnulusSolver solver(p);
        solver.advance_to(t);
        double err = 0.0;
        const auto& s_nodes = solver.log_radii();
        const auto& v = solver.values();
        for (std::size_t j = 0; j < v.size(); ++j)
            err = std::max(err, std::fabs(v[j] - exact.at_log_radius(s_nodes[j], t)));
        s.spacings.push_back(h);
        s.errors.push_back(err);
    }
    // least squares of log err against log h
    const double n = static_cast<double>(s.errors.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < s.errors.size(); ++k) {
        mx += std::log(s.spacings[k]);
        my += std::log(s.errors[k]);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < s.errors.size(); ++k) {
        const double dx = std::log(s.spacings[k]) - mx, dy = std::log(s.errors[k]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    s.exponent = sxy / sxx;
    s.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return s;
}

namespace detail {

inline SummaryRow row(const std::string& exp, const std::string& metric, double value, const std::string& tol,
                      bool pass) {
    return {exp, metric, value, tol, pass};
}

inline ExperimentConfig base_config(const std::string& name, int dim, const std::string& times) {
    ExperimentConfig c;
    c.experiment = name;
    c.dim = dim;
    c.times = TimeSpec::parse(times, "defaults");
    return c;
}

/// Subsampled curves of the kernel solution and a profile at time t.
inline void add_curves(ExperimentOutput& out, const std::string& exp, const HeatKernelSolver& solver,
                       const std::function<double(double, double)>& profile, double t, const LineGridPolicy& policy,
                       double extent, std::size_t stride = 32) {
    const auto grid = policy.grid(t, extent);
    for (std::size_t k = 0; k < grid.size(); k += stride) {
        out.series.push_back({exp, t, grid[k], "solution", solver.value(grid[k], t)});
        out.series.push_back({exp, t, grid[k], "profile", profile(grid[k], t)});
    }
}

inline std::pair<PlotSpec, std::vector<PlotSeries>> error_plot(const std::string& title, const ErrorSeries& e,
                                                               const std::string& y_label) {
    PlotSpec spec{title, "t", y_label, true, true};
    return {spec, {PlotSeries{"error", e.times, e.errors}}};
}

inline ExperimentOutput rate_experiment(const ExperimentConfig& cfg, double lo, double hi) {
    ExperimentOutput out;
    const auto u0 = cfg.build_datum();
    const auto times = cfg.times.values();
    const auto series = convergence_error(u0, ProfileKind::E, times, 0.0, cfg.grid_policy());
    for (std::size_t k = 0; k < times.size(); ++k)
        out.series.push_back({cfg.experiment, times[k], 0.0, "error", series.errors[k]});
    const auto fit = fit_rate(series);
    const bool in_band = fit.exponent >= lo && fit.exponent <= hi;
    out.summary.push_back(row(cfg.experiment, "fitted_exponent", fit.exponent,
                              "[" + format_number(lo) + "," + format_number(hi) + "]", in_band));
    out.summary.push_back(row(cfg.experiment, "r_squared", fit.r_squared, ">=0.98", fit.r_squared >= 0.98));
    out.summary.push_back(row(cfg.experiment, "samples", static_cast<double>(fit.used), ">=8", fit.used >= 8));
    if (cfg.plot) out.plot = error_plot("sup |u - (K/2)E| against t", series, "raw sup-error");
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

inline const std::vector<Experiment>& experiments() {
    static const std::vector<Experiment> registry = [] {
        std::vector<Experiment> r;

        r.push_back({"thm1_radial_F", "t^{1/2} sup|u - (M/omega_1) F| decreases to 0 (annulus datum)",
                     [] {
                         auto c = detail::base_config("thm1_radial_F", 3, "1,10,100,1000");
                         c.set("datum.family", "annulus_indicator", "defaults");
                         return c;
                     },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         const auto u0 = cfg.build_datum();
                         const auto times = cfg.times.values();
                         const auto policy = cfg.grid_policy();
                         const auto e = convergence_error(u0, ProfileKind::F, times, 0.5, policy);
                         const double m = line_mass(u0).value;
                         const HeatKernelSolver solver(u0);
                         for (std::size_t k = 0; k < times.size(); ++k) {
                             out.series.push_back({cfg.experiment, times[k], 0.0, "error", e.errors[k]});
                             detail::add_curves(out, cfg.experiment, solver,
                                                [m](double y, double t) { return m * gaussian_kernel(y, t); },
                                                times[k], policy, u0.extent());
                             out.summary.push_back(detail::row(cfg.experiment, "scaled_error_t=" + format_number(times[k]),
                                                               e.errors[k], "-", true));
                         }
                         out.summary.push_back(detail::row(cfg.experiment, "strictly_decreasing", e.decreasing() ? 1 : 0,
                                                           "=1", e.decreasing()));
                         const double ratio = e.errors.back() / e.errors.front();
                         out.summary.push_back(detail::row(cfg.experiment, "final_over_initial", ratio, "<0.05", ratio < 0.05));
                         if (cfg.plot) out.plot = detail::error_plot("t^{1/2} sup |u - (M/omega_1) F|", e, "scaled error");
                         return out;
                     }});

        r.push_back({"thm3a_rate_E", "raw sup-error to (K/2)E for a logistic step datum, fitted rate",
                     [] {
                         auto c = detail::base_config("thm3a_rate_E", 3, "geom:10:10000:10");
                         c.set("datum.family", "step_to_K", "defaults");
                         return c;
                     },
                     [](const ExperimentConfig& cfg) { return detail::rate_experiment(cfg, -0.65, -0.45); }});

        r.push_back({"thm3b_rate_E", "raw sup-error to (K/2)E for an erfc-shaped datum with I2 < inf, fitted rate",
                     [] {
                         auto c = detail::base_config("thm3b_rate_E", 3, "geom:10:10000:10");
                         c.set("datum.family", "smooth_erfc_like", "defaults");
                         return c;
                     },
                     [](const ExperimentConfig& cfg) { return detail::rate_experiment(cfg, -1.7, -1.3); }});

        r.push_back({"contraction", "L1_2 positive part of u1 - u2 is nonincreasing (seeded random pairs)",
                     [] { return detail::base_config("contraction", 3, "0.1,0.25,0.5,1,2,4,8"); },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         std::mt19937_64 rng(cfg.seed);
                         const auto times = cfg.times.values();
                         double worst = 0.0;
                         for (int pair = 0; pair < 10; ++pair) {
                             const auto a = random_datum(rng, Dimension(cfg.dim));
                             const auto b = random_datum(rng, Dimension(cfg.dim));
                             const auto [ta, tb] = paired_trajectories(a, b, times, cfg.grid_points);
                             const auto rep = contraction_check(ta, tb, 1e-8, l12_positive_part(a, b));
                             for (std::size_t k = 0; k < rep.times.size(); ++k)
                                 out.series.push_back({cfg.experiment, rep.times[k], static_cast<double>(pair), "solution",
                                                       rep.values[k]});
                             worst = std::max(worst, rep.worst_increase);
                             out.summary.push_back(detail::row(cfg.experiment, "pair" + std::to_string(pair) + "_worst_increase",
                                                               rep.worst_increase, "<=1e-8", rep.nonincreasing));
                         }
                         out.summary.push_back(detail::row(cfg.experiment, "worst_increase", worst, "<=1e-8", worst <= 1e-8));
                         return out;
                     }});

        r.push_back({"comparison", "ordered data stay ordered (u01 <= u01 + bump)",
                     [] { return detail::base_config("comparison", 3, "0.1,0.5,1,5,10"); },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         std::mt19937_64 rng(cfg.seed);
                         std::vector<double> times{0.0};
                         for (double t : cfg.times.values()) times.push_back(t);
                         double worst = 0.0;
                         for (int pair = 0; pair < 10; ++pair) {
                             const auto a = random_datum(rng, Dimension(cfg.dim));
                             auto b = a;
                             const auto bump = random_datum(rng, Dimension(cfg.dim));
                             for (const auto& p : bump.parts()) b.add(p);
                             const auto [ta, tb] = paired_trajectories(a, b, times, cfg.grid_points);
                             const auto rep = comparison_check(ta, tb);
                             worst = std::max(worst, rep.worst_violation);
                             for (std::size_t k = 0; k < rep.per_snapshot.size(); ++k)
                                 out.series.push_back({cfg.experiment, times[k], static_cast<double>(pair), "error",
                                                       rep.per_snapshot[k]});
                         }
                         out.summary.push_back(detail::row(cfg.experiment, "worst_violation", worst, "<=1e-10", worst <= 1e-10));
                         return out;
                     }});

        r.push_back({"counterexample_gap", "min_c t^{1/2} sup |theta F - c F| stays at (width/2)/sqrt(4 pi)",
                     [] { return detail::base_config("counterexample_gap", 3, "1,10,100"); },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         const AngularRange range;
                         for (double t : cfg.times.values()) {
                             const auto g = counterexample_gap(t, Dimension(cfg.dim), range);
                             const double rel = std::fabs(g.gap - g.analytic) / g.analytic;
                             out.series.push_back({cfg.experiment, t, g.best_c, "solution", g.gap});
                             out.series.push_back({cfg.experiment, t, g.best_c, "profile", g.analytic});
                             out.summary.push_back(detail::row(cfg.experiment, "relative_gap_error_t=" + format_number(t), rel,
                                                               "<0.01", rel < 0.01));
                         }
                         return out;
                     }});

        r.push_back({"hotspot", "grid max of F is 1/sqrt(4 pi t) at log r = -(N-2) t; kernel argmax follows",
                     [] {
                         auto c = detail::base_config("hotspot", 3, "10,20,50,100");
                         c.set("datum.family", "gaussian_bump_in_y", "defaults");
                         return c;
                     },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         const auto u0 = cfg.build_datum();
                         for (double t : cfg.times.values()) {
                             const auto law = sup_norm_law(t, Dimension(cfg.dim));
                             const auto track = hotspot_track(u0, t, cfg.grid_policy());
                             out.series.push_back({cfg.experiment, t, track.argmax_log_r, "solution", track.max_value});
                             out.series.push_back({cfg.experiment, t, track.expected_log_r, "profile", law.exact});
                             const double off = std::fabs(track.argmax_log_r - track.expected_log_r) / track.cell;
                             out.summary.push_back(detail::row(cfg.experiment, "sup_norm_gap_t=" + format_number(t),
                                                               std::fabs(law.grid_max - law.exact),
                                                               "<=" + format_number(law.resolution), law.pass));
                             out.summary.push_back(detail::row(cfg.experiment, "argmax_offset_cells_t=" + format_number(t),
                                                               off, "<=1", off <= 1.0));
                         }
                         return out;
                     }});

        auto figure = [](const ExperimentConfig& cfg, bool one_dim) {
            ExperimentOutput out;
            const Dimension dim(cfg.dim);
            std::vector<PlotSeries> curves;
            for (double t : cfg.times.values()) {
                PlotSeries f{"F t=" + format_number(t), {}, {}}, e{"E t=" + format_number(t), {}, {}};
                constexpr int n = 301;
                for (int i = 0; i < n; ++i) {
                    const double x = one_dim ? -3.0 + 6.0 * i / (n - 1) : 3.0 * i / (n - 1);
                    const double r = std::fabs(x);
                    const double fv = profile_F(r, t, dim);
                    const double ev = profile_E(r, t, dim, 2.0);
                    f.x.push_back(x);
                    f.y.push_back(fv);
                    e.x.push_back(x);
                    e.y.push_back(ev);
                    out.series.push_back({cfg.experiment, t, x, "profile", fv});
                    out.series.push_back({cfg.experiment, t, x, "profile", ev});
                }
                curves.push_back(std::move(e));
                curves.push_back(std::move(f));
            }
            // E tends to its value 2 at the origin, F vanishes there
            const double e0 = profile_E(0.0, 1.0, dim, 2.0), f0 = profile_F(0.0, 1.0, dim);
            out.summary.push_back(detail::row(cfg.experiment, "E_at_origin", e0, "=2", e0 == 2.0));
            out.summary.push_back(detail::row(cfg.experiment, "F_at_origin", f0, "=0", f0 == 0.0));
            if (cfg.plot)
                out.plot = std::make_pair(PlotSpec{"Profiles E and F, N = " + std::to_string(cfg.dim),
                                                   one_dim ? "x" : "r", "value"},
                                          std::move(curves));
            return out;
        };
        r.push_back({"figure1_profiles", "profiles E and F for N = 3 at several times",
                     [] { return detail::base_config("figure1_profiles", 3, "0.5,1,2,4"); },
                     [figure](const ExperimentConfig& cfg) { return figure(cfg, false); }});
        r.push_back({"figure2_profiles_n1", "profiles E and F for N = 1 on the whole line",
                     [] { return detail::base_config("figure2_profiles_n1", 1, "0.5,1,2,4"); },
                     [figure](const ExperimentConfig& cfg) { return figure(cfg, true); }});

        r.push_back({"annulus_nesting", "nested Dirichlet problems increase monotonically, stay below K F(t + tau), converge at order 2",
                     [] {
                         auto c = detail::base_config("annulus_nesting", 3, "1");
                         c.set("datum.family", "annulus_indicator", "defaults");
                         return c;
                     },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         const auto u0 = cfg.build_datum();
                         const double t = cfg.times.values().back();
                         const auto schedule = nested_schedule(std::exp(-3.0), std::exp(4.0), 4, 16);
                         const auto res = nested_annulus_limit(u0, schedule, t);
                         for (std::size_t k = 0; k < res.increments.size(); ++k)
                             out.series.push_back({cfg.experiment, t, static_cast<double>(k + 1), "error", res.increments[k]});
                         for (std::size_t j = 0; j < res.levels.back().size(); j += 8)
                             out.series.push_back({cfg.experiment, t, res.levels.back().log_radii[j], "solution",
                                                   res.levels.back().values[j]});
                         out.summary.push_back(detail::row(cfg.experiment, "worst_decrease", res.worst_decrease, "<=1e-8",
                                                           res.monotone));
                         out.summary.push_back(detail::row(cfg.experiment, "bound_excess", res.bound_excess, "<=0",
                                                           res.bound_excess <= 0.0));
                         out.summary.push_back(detail::row(cfg.experiment, "kernel_gap", res.kernel_gap, "-", true));
                         const InitialDatum smooth(GaussianBumpInY{0.5, 0.4, 1.0}, Dimension(cfg.dim));
                         const auto study = annulus_refinement(smooth, 1.0, {8, 16, 32, 64});
                         out.summary.push_back(detail::row(cfg.experiment, "order_exponent", study.exponent, "[1.8,2.2]",
                                                           study.exponent >= 1.8 && study.exponent <= 2.2));
                         return out;
                     }});

        r.push_back({"positivity_origin", "datum vanishing near 0: u > 0 away from 0, u(0, t) = 0",
                     [] {
                         auto c = detail::base_config("positivity_origin", 3, "0.1,1,10");
                         c.set("datum.family", "annulus_indicator", "defaults");
                         return c;
                     },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         const auto u0 = cfg.build_datum();
                         const double r0 = std::exp(u0.decomposition().support_lo);
                         const auto times = cfg.times.values();
                         const auto rep = positivity_check(u0, r0, times, cfg.grid_policy());
                         for (std::size_t k = 0; k < rep.times.size(); ++k) {
                             out.series.push_back({cfg.experiment, rep.times[k], 0.5 * r0, "solution", rep.half_r0_values[k]});
                             out.summary.push_back(detail::row(cfg.experiment, "min_value_t=" + format_number(rep.times[k]),
                                                               rep.min_values[k], ">0", rep.min_values[k] > 0.0));
                         }
                         out.summary.push_back(detail::row(cfg.experiment, "origin_value", rep.tail_left, "=0",
                                                           rep.tail_left == 0.0));
                         out.summary.push_back(detail::row(cfg.experiment, "all_checks", rep.pass ? 1 : 0, "=1", rep.pass));
                         return out;
                     }});

        r.push_back({"selfmap_dims", "the map |x| = |xbar| e^{(Nbar - N) t} sends solutions in N to solutions in N + 1",
                     [] {
                         auto c = detail::base_config("selfmap_dims", 3, "1,2");
                         c.set("datum.family", "gaussian_bump_in_y", "defaults");
                         return c;
                     },
                     [](const ExperimentConfig& cfg) {
                         ExperimentOutput out;
                         const Dimension source(cfg.dim), target(cfg.dim + 1);
                         const auto u0 = cfg.build_datum();
                         const KernelSolution u(u0);
                         const auto mapped = self_map(u, source, target);
                         for (double t : cfg.times.values()) {
                             // closed forms: F in N maps onto F in N + 1
                             double worst = 0.0;
                             for (int i = 0; i <= 200; ++i) {
                                 const double lr = -(target.drift()) * t - 6.0 + 12.0 * i / 200.0;
                                 RadialField f;
                                 f.log_radii = {lr + (target.drift() - source.drift()) * t};
                                 f.values = {profile_F_log(f.log_radii[0], t, source)};
                                 f.time = t;
                                 f.dim = source;
                                 const auto g = self_map(f, target);
                                 worst = std::max(worst, std::fabs(g.values[0] - profile_F_log(g.log_radii[0], t, target)));
                             }
                             out.summary.push_back(detail::row(cfg.experiment, "profile_map_gap_t=" + format_number(t), worst,
                                                               "<=1e-12", worst <= 1e-12));
                             // residuals before and after the map, in the dilation-invariant form
                             // r^2 (|x|^{-2} u_t - Laplace u), at matched points r = rbar e^{(Nbar - N) t}
                             // with matched steps
                             const double h = 1e-2, dt = 1e-2;
                             const double scale = std::exp((target.drift() - source.drift()) * t);
                             double src = 0.0, dst = 0.0;
                             for (int i = 0; i < 10; ++i) {
                                 const double r = 0.5 + 0.15 * i;
                                 const double rbar = r / scale;
                                 src = std::max(src, r * r * std::fabs(pde_residual(u, r, t, source, h, dt)));
                                 const double mapped_res =
                                     rbar * rbar * std::fabs(pde_residual(mapped, rbar, t, target, h / scale, dt));
                                 dst = std::max(dst, mapped_res);
                                 out.series.push_back({cfg.experiment, t, rbar, "error", mapped_res});
                             }
                             out.summary.push_back(detail::row(cfg.experiment, "source_residual_t=" + format_number(t), src,
                                                               "-", true));
                             out.summary.push_back(detail::row(cfg.experiment, "mapped_residual_over_source_t=" + format_number(t),
                                                               dst / src, "<=2", dst <= 2.0 * src));
                         }
                         return out;
                     }});
        return r;
    }();
    return registry;
}

inline const Experiment* find_experiment(const std::string& name) {
    for (const auto& e : experiments())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace cdh::cli
