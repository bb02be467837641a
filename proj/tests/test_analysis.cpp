#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cdh/analysis.hpp"
#include "cdh/annulus_solver.hpp"
#include "oracles.hpp"

using namespace cdh;

TEST(Analysis, FitRateRecoversAPowerLaw) {
    ErrorSeries s;
    s.times = geometric_times(1.0, 1000.0, 12);
    for (double t : s.times) s.errors.push_back(3.0 * std::pow(t, -0.75));
    const auto fit = fit_rate(s);
    EXPECT_NEAR(fit.exponent, -0.75, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-11);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_EQ(fit.used, 12u);

    s.errors[3] = 0.0;
    EXPECT_EQ(fit_rate(s).excluded, 1u);
    s.times[4] = s.times[3];
    EXPECT_THROW(fit_rate(s), DomainError);
}

TEST(Analysis, GeometricTimes) {
    const auto t = geometric_times(10.0, 1e4, 10);
    ASSERT_EQ(t.size(), 10u);
    EXPECT_EQ(t.front(), 10.0);
    EXPECT_EQ(t.back(), 1e4);
    for (std::size_t k = 1; k < t.size(); ++k) EXPECT_NEAR(t[k] / t[k - 1], std::pow(1000.0, 1.0 / 9), 1e-12);
    EXPECT_THROW(geometric_times(0.0, 1.0, 5), DomainError);
    EXPECT_THROW(geometric_times(1.0, 2.0, 1), DomainError);
}

TEST(Analysis, ConvergenceToFDecreases) {
    const InitialDatum u0(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    const double times[] = {1.0, 10.0, 100.0};
    const auto e = convergence_error(u0, ProfileKind::F, times, 0.5);
    ASSERT_EQ(e.size(), 3u);
    EXPECT_TRUE(e.decreasing());
    const double tails[] = {1.0};
    EXPECT_THROW(convergence_error(InitialDatum(StepToK{}, Dimension(3)), ProfileKind::F, tails, 0.5), DomainError);
}

TEST(Analysis, ErfcDatumConvergesToE) {
    // the erfc-like datum is an exact E profile shifted in time by 1/4
    const InitialDatum u0(SmoothErfcLike{1.0, 0.0}, Dimension(3));
    const double times[] = {1.0, 100.0};
    const auto e = convergence_error(u0, ProfileKind::E, times, 0.0);
    // the sup is a grid maximum: it cannot exceed the true maximum, and falls
    // short of it by at most |f''| cell^2 / 8
    for (std::size_t k = 0; k < 2; ++k) {
        const double t = times[k];
        auto diff = [t](double y) { return oracle::erfc_like_flow(1, 0, y, t) - 0.5 * std::erfc(y / (2 * std::sqrt(t))); };
        double lo = 0.0, hi = 4 * std::sqrt(t);
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (diff(m1) < diff(m2)) lo = m1;
            else hi = m2;
        }
        const double peak = diff(0.5 * (lo + hi));
        const double cell = 2 * (8 * std::sqrt(t) + u0.extent()) / 4095;
        const double bound = HeatKernelSolver(u0).error_bound(t);
        EXPECT_LE(e.sups[k], peak * (1 + 1e-12) + bound);
        EXPECT_GE(e.sups[k], peak * (1 - cell * cell / t));
        EXPECT_LT(bound, 1e-3 * peak);
    }
}

TEST(Analysis, DriftIsTinyForKernelAndAnnulus) {
    const InitialDatum u0(GaussianBumpInY{0.3, 0.5, 1.0}, Dimension(4));
    LineGridPolicy policy;
    policy.c = 10.0;
    const double times[] = {0.0, 1.0, 10.0};
    const auto traj = kernel_trajectory(u0, times, policy);
    const auto r = conservation_drift(traj);
    EXPECT_TRUE(r.relative);
    EXPECT_NEAR(r.initial_mass, 0.5 * std::sqrt(oracle::pi), 1e-14);
    EXPECT_LE(r.drift, 1e-10);
}

TEST(Analysis, L12PositivePartOfDisjointIndicators) {
    // int |x|^{-2} 1_{A} dx = omega_1 int_A r^{N-3} dr; in N = 4 that is r^2 / 2
    const Dimension dim(4);
    const InitialDatum a(AnnulusIndicator{1.0, 2.0, 1.0}, dim);
    const InitialDatum b(AnnulusIndicator{3.0, 4.0, 1.0}, dim);
    const double omega = oracle::sphere_area(4);
    EXPECT_NEAR(l12_positive_part(a, b), omega * 1.5, 1e-12 * omega);
    EXPECT_NEAR(l12_positive_part(b, a), omega * 3.5, 1e-12 * omega);
    EXPECT_NEAR(l12_positive_part(a, a), 0.0, 1e-15);
}

TEST(Analysis, ContractionAndComparisonOnRandomPairs) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const Dimension dim(3);
    LineGridPolicy policy;
    policy.c = 10.0;
    policy.pad = 3.0;
    policy.weight_drift = 1.0;
    const double times[] = {0.1, 0.5, 2.0};
    for (int i = 0; i < 3; ++i) {
        const InitialDatum a(GaussianBumpInY{-1 + 2 * U(rng), 0.3 + 0.5 * U(rng), 0.5 + U(rng)}, dim);
        InitialDatum b(AnnulusIndicator{std::exp(-U(rng)), std::exp(0.2 + U(rng)), 0.5 + U(rng)}, dim);
        const auto ta = kernel_trajectory(a, times, policy);
        const auto tb = kernel_trajectory(b, times, policy);
        const auto c = contraction_check(ta, tb, 1e-8, l12_positive_part(a, b));
        EXPECT_TRUE(c.nonincreasing) << c.worst_increase;
        EXPECT_EQ(c.values.size(), 4u);

        InitialDatum above = a;
        above.add(AnnulusIndicator{std::exp(-0.5), std::exp(0.5), 0.3});
        const auto tab = kernel_trajectory(above, times, policy);
        EXPECT_TRUE(comparison_check(ta, tab).ordered);
        EXPECT_THROW(comparison_check(tab, ta), DomainError);
    }
}

TEST(Analysis, CounterexampleGapMatchesClosedForm) {
    for (double t : {1.0, 10.0}) {
        const auto g = counterexample_gap(t, Dimension(3), AngularRange{});
        EXPECT_NEAR(g.gap, g.analytic, 0.01 * g.analytic);
        EXPECT_NEAR(g.best_c, std::numbers::pi, 1e-6);
        EXPECT_NEAR(g.analytic, std::numbers::pi / std::sqrt(4 * oracle::pi), 1e-15);
    }
    const auto narrow = counterexample_gap(1.0, Dimension(5), AngularRange{1.0, 2.0});
    EXPECT_NEAR(narrow.gap, 0.5 / std::sqrt(4 * oracle::pi), 0.005);
}

TEST(Analysis, SupNormLawAndHotspot) {
    for (int n : {3, 4, 5})
        for (double t : {0.5, 5.0, 50.0}) {
            const auto s = sup_norm_law(t, Dimension(n));
            EXPECT_TRUE(s.pass) << n << " " << t;
            EXPECT_NEAR(s.exact, oracle::kernel(0.0, t), 1e-15);
        }
    const InitialDatum u0(GaussianBumpInY{0.0, 0.5, 1.0}, Dimension(3));
    const auto h = hotspot_track(u0, 50.0);
    EXPECT_NEAR(h.argmax_log_r, h.expected_log_r, 2 * h.cell);
}

TEST(Analysis, OriginValueVanishesAndInteriorIsPositive) {
    const InitialDatum u0(AnnulusIndicator{1.0, 2.0, 1.0}, Dimension(3));
    const double times[] = {0.1, 1.0, 10.0};
    const auto r = positivity_check(u0, 1.0, times);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.tail_left, 0.0);
    for (double v : r.half_r0_values) EXPECT_GT(v, 0.0);
    EXPECT_TRUE(positivity_check(InitialDatum(AnnulusIndicator{1.0, 2.0, 0.0}, Dimension(3)), 1.0, times).vacuous);
    EXPECT_THROW(positivity_check(u0, 1.5, times), DomainError);
}

TEST(Analysis, TwoBranchConvergence) {
    const InitialDatum neg(AnnulusIndicator{1.0, std::numbers::e, 0.25}, Dimension(1));
    const InitialDatum pos(AnnulusIndicator{1.0, std::numbers::e, 0.75}, Dimension(1));
    const double times[] = {1.0, 10.0, 100.0};
    const auto c = convergence_error_two_branch(neg, pos, times, 0.5);
    EXPECT_NEAR(c.alpha, 0.25, 1e-14);
    EXPECT_NEAR(c.total_mass, 1.0, 1e-14);
    EXPECT_TRUE(c.series.decreasing());
}
