#include <array>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cdh/profiles.hpp"
#include "cdh/residual.hpp"
#include "oracles.hpp"

using namespace cdh;

TEST(Residual, RejectsInvalidStencils) {
    auto f = [](double r, double t) { return oracle::F(r, t, 3); };
    EXPECT_THROW(pde_residual(f, 1.0, 1.0, Dimension(3), 0.0), DomainError);
    EXPECT_THROW(pde_residual(f, 0.05, 1.0, Dimension(3), 0.01), DomainError);
    EXPECT_THROW(pde_residual(f, 1.0, 0.05, Dimension(3), 0.01), DomainError);
    EXPECT_NO_THROW(pde_residual(f, 1.0, 0.1, Dimension(3), 0.01));
}

TEST(Residual, SecondOrderOnTheProfiles) {
    for (int n : {3, 4, 6}) {
        const Dimension dim(n);
        auto f = [dim](double r, double t) { return profile_F(r, t, dim); };
        auto e = [dim](double r, double t) { return profile_E(r, t, dim, 2.0); };
        for (double r : {0.3, 1.0, 1.8}) {
            const double t = 0.9;
            const double a = std::fabs(pde_residual(f, r, t, dim, 1e-2));
            const double b = std::fabs(pde_residual(f, r, t, dim, 5e-3));
            EXPECT_NEAR(a / b, 4.0, 0.4) << n << " " << r;
            const double c = std::fabs(pde_residual(e, r, t, dim, 1e-2));
            const double d = std::fabs(pde_residual(e, r, t, dim, 5e-3));
            EXPECT_NEAR(c / d, 4.0, 0.4) << n << " " << r;
        }
    }
}

TEST(Residual, DetectsAFunctionThatIsNotASolution) {
    // F in dimension 4 is not a solution in dimension 3
    const Dimension four(4);
    auto f = [four](double r, double t) { return profile_F(r, t, four); };
    const double res = pde_residual(f, 0.7, 1.0, Dimension(3), 1e-3);
    // u = v(log r + 2t, t) with v = G: the N = 3 operator leaves v_y / r^2
    auto exact = [](double r, double t) {
        const double y = std::log(r) + 2 * t;
        return -y / (2 * t) * oracle::kernel(y, t) / (r * r);
    };
    EXPECT_NEAR(res, exact(0.7, 1.0), 1e-4 * std::fabs(exact(0.7, 1.0)) + 1e-6);
    EXPECT_GT(std::fabs(res), 1e-2);
}

TEST(Residual, CartesianMatchesRadialForRadialFunctions) {
    const Dimension dim(3);
    auto radial = [dim](double r, double t) { return profile_F(r, t, dim); };
    auto cart = [dim](const std::array<double, 3>& x, double t) {
        return profile_F(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), t, dim);
    };
    const std::array<double, 3> x{-0.6, 0.5, 0.4};
    const double r = std::sqrt(0.36 + 0.25 + 0.16);
    const double a = pde_residual_cartesian(cart, x, 1.0, 1e-2);
    const double b = pde_residual(radial, r, 1.0, dim, 1e-2);
    EXPECT_LT(std::fabs(a), 5e-3);
    EXPECT_LT(std::fabs(b), 5e-3);
}

TEST(Residual, AzimuthalSolutionConvergesAtSecondOrder) {
    const Dimension dim(3);
    auto fn = [dim](const std::array<double, 3>& x, double t) {
        return azimuth(x) * profile_F(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), t, dim);
    };
    const std::array<double, 3> x{-0.5, -0.7, 0.3};
    const double a = std::fabs(pde_residual_cartesian(fn, x, 1.2, 1e-2));
    const double b = std::fabs(pde_residual_cartesian(fn, x, 1.2, 5e-3));
    EXPECT_NEAR(a / b, 4.0, 0.4);
}

TEST(Residual, CartesianStencilRejections) {
    auto fn = [](const std::array<double, 3>& x, double) { return azimuth(x); };
    EXPECT_THROW(pde_residual_cartesian(fn, {1.0, 0.0, 0.2}, 1.0, 1e-2), DomainError);   // angular cut
    EXPECT_THROW(pde_residual_cartesian(fn, {0.0, 0.0, 1.0}, 1.0, 1e-2), DomainError);   // axis
    EXPECT_THROW(pde_residual_cartesian(fn, {0.01, 0.05, 0.0}, 1.0, 1e-2), DomainError); // origin
    EXPECT_NO_THROW(pde_residual_cartesian(fn, {-1.0, 0.0, 0.2}, 1.0, 1e-2));
}

TEST(Residual, AzimuthRange) {
    EXPECT_DOUBLE_EQ(azimuth({1.0, 0.0, 0.0}), 0.0);
    EXPECT_NEAR(azimuth({0.0, -1.0, 0.0}), 1.5 * std::numbers::pi, 1e-15);
    EXPECT_NEAR(azimuth({-1.0, 0.0, 0.0}), std::numbers::pi, 1e-15);
}
