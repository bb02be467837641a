#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cdh/annulus_solver.hpp"
#include "cdh/cli/experiments.hpp"
#include "cdh/kernel_solver.hpp"

using namespace cdh;

namespace {

AnnulusProblem basic_problem() {
    AnnulusProblem p;
    p.u0 = InitialDatum(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    return p;
}

}  // namespace

TEST(Annulus, ValidationRejectsBadProblems) {
    auto p = basic_problem();
    EXPECT_NO_THROW(p.validate());

    auto q = p;
    q.r_inner = 0.0;
    EXPECT_THROW(q.validate(), DomainError);
    q = p;
    q.dim = Dimension(2);
    EXPECT_THROW(q.validate(), DomainError);
    q = p;
    q.grid_points = 8;
    EXPECT_THROW(q.validate(), DomainError);
    q = p;
    q.dt = 0.0;
    EXPECT_THROW(q.validate(), DomainError);
    q = p;
    q.u0 = InitialDatum(StepToK{}, Dimension(3));
    EXPECT_THROW(q.validate(), DomainError);
    q = p;
    q.r_inner = 1.5;
    EXPECT_THROW(q.validate(), DomainError);
    q = p;
    q.dim = Dimension(40);
    q.u0.set_dim(Dimension(40));
    q.grid_points = 32;
    EXPECT_THROW(q.validate(), SolverError);  // cell Peclet number above 2
}

TEST(Annulus, BoundaryValuesStayZeroAndSolutionIsNonnegative) {
    const auto p = basic_problem();
    const double times[] = {0.5, 2.0};
    const auto traj = annulus_solve(p, times);
    ASSERT_EQ(traj.snapshots.size(), 3u);
    EXPECT_DOUBLE_EQ(traj.snapshots.front().time, 0.0);
    for (const auto& s : traj.snapshots) {
        const auto& u = std::get<RadialField>(s.field);
        EXPECT_EQ(u.values.front(), 0.0);
        EXPECT_EQ(u.values.back(), 0.0);
        for (double v : u.values) EXPECT_GE(v, -1e-14);
    }
    const double bad[] = {1.0, 1.0};
    EXPECT_THROW(annulus_solve(p, bad), DomainError);
}

TEST(Annulus, JumpNodesTakeTheMidpointValue) {
    auto p = basic_problem();
    p.r_inner = std::exp(-4.0);
    p.r_outer = std::exp(4.0);
    p.grid_points = 81;  // h = 0.1, nodes at s = 0 and s = 1
    AnnulusSolver solver(p);
    const auto& s = solver.log_radii();
    const auto& v = solver.values();
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (std::fabs(s[j]) < 1e-12 || std::fabs(s[j] - 1.0) < 1e-12) {
            EXPECT_DOUBLE_EQ(v[j], 0.5);
        }
    }
}

TEST(Annulus, SecondOrderAgainstKernelSolution) {
    const InitialDatum u0(GaussianBumpInY{0.5, 0.4, 1.0}, Dimension(3));
    const auto study = cli::annulus_refinement(u0, 0.5, {8, 16, 32}, 12.0, 1e-2);
    ASSERT_EQ(study.errors.size(), 3u);
    EXPECT_GT(study.errors[0], study.errors[1]);
    EXPECT_GT(study.errors[1], study.errors[2]);
    EXPECT_NEAR(study.exponent, 2.0, 0.15);
}

TEST(Annulus, ScheduleLevelsAreNested) {
    const auto s = nested_schedule(std::exp(-2.0), std::exp(3.0), 3, 8);
    ASSERT_EQ(s.log_bounds.size(), 3u);
    EXPECT_NEAR(s.spacing, std::numbers::ln2 / 8, 1e-15);
    for (std::size_t k = 0; k < s.log_bounds.size(); ++k) {
        EXPECT_LE(s.log_bounds[k].first, -2.0 - k * std::numbers::ln2 + 1e-12);
        EXPECT_GE(s.log_bounds[k].second, 3.0 + k * std::numbers::ln2 - 1e-12);
        const double cells = (s.log_bounds[k].second - s.log_bounds[k].first) / s.spacing;
        EXPECT_NEAR(cells, std::round(cells), 1e-9);
    }
    EXPECT_THROW(nested_schedule(1.0, 0.5), DomainError);
}

TEST(Annulus, NestedSolutionsIncreaseAndStayBelowTheBound) {
    const InitialDatum u0(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    const auto sched = nested_schedule(std::exp(-2.0), std::exp(3.0), 3, 16);
    const auto res = nested_annulus_limit(u0, sched, 1.0, 1e-2);
    EXPECT_TRUE(res.monotone) << res.worst_decrease;
    EXPECT_LE(res.bound_excess, 1e-8);
    ASSERT_EQ(res.increments.size(), 2u);
    EXPECT_GT(res.bound.K, 0.0);
}

TEST(Annulus, UniversalBoundDominatesTheKernelSolution) {
    const InitialDatum u0(GaussianBumpInY{-0.3, 0.6, 1.2}, Dimension(4));
    const auto b = universal_bound(u0);
    const KernelSolution sol(u0);
    for (double t : {0.1, 1.0, 10.0})
        for (double lr = -15; lr <= 5; lr += 0.5) EXPECT_LE(sol.at_log_radius(lr, t), b.at_log_radius(lr, t) * (1 + 1e-9) + 1e-300);
    EXPECT_THROW(universal_bound(InitialDatum(StepToK{}, Dimension(3))), DomainError);
}
