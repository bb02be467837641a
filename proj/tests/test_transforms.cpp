#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cdh/datum.hpp"
#include "cdh/kernel_solver.hpp"
#include "cdh/profiles.hpp"
#include "cdh/transforms.hpp"
#include "oracles.hpp"

using namespace cdh;

namespace {

RadialField single_point(double log_r, double value, double t, Dimension d) {
    RadialField u;
    u.log_radii = {log_r};
    u.values = {value};
    u.time = t;
    u.dim = d;
    return u;
}

double logistic(double r, double K, double rc, double p) { return K / (1 + std::pow(r / rc, p)); }

}  // namespace

TEST(Datum, FamilyValidation) {
    EXPECT_THROW(InitialDatum(AnnulusIndicator{2.0, 1.0, 1.0}, Dimension(3)), DomainError);
    EXPECT_THROW(InitialDatum(AnnulusIndicator{1.0, 2.0, -1.0}, Dimension(3)), DomainError);
    EXPECT_THROW(InitialDatum(GaussianBumpInY{0.0, 0.0, 1.0}, Dimension(3)), DomainError);
    EXPECT_THROW(InitialDatum(StepToK{0.0, 1.0, 1.0}, Dimension(3)), DomainError);
    EXPECT_THROW(InitialDatum(Tabulated{{1.0, 1.0}, {0.0, 0.0}, 0, 0}, Dimension(3)), DomainError);
    EXPECT_THROW(InitialDatum(Tabulated{{1.0, 2.0}, {0.0, -1.0}, 0, 0}, Dimension(3)), DomainError);
}

TEST(Datum, ValuesAndTails) {
    const InitialDatum a(AnnulusIndicator{1.0, std::numbers::e, 2.0}, Dimension(3));
    EXPECT_EQ(a.radial_value(1.5), 2.0);
    EXPECT_EQ(a.radial_value(0.5), 0.0);
    EXPECT_EQ(a.radial_value(0.0), 0.0);
    const InitialDatum s(StepToK{1.5, 2.0, 3.0}, Dimension(3));
    EXPECT_EQ(s.tail_left(), 1.5);
    EXPECT_EQ(s.tail_right(), 0.0);
    EXPECT_EQ(s.radial_value(0.0), 1.5);
    EXPECT_NEAR(s.radial_value(2.0), 0.75, 1e-15);
    EXPECT_NEAR(s.line_value(std::log(3.0)), logistic(3.0, 1.5, 2.0, 3.0), 1e-15);
    const InitialDatum e(SmoothErfcLike{2.0, 0.5}, Dimension(4));
    EXPECT_NEAR(e.line_value(1.0), std::erfc(0.5), 1e-15);
}

TEST(LogMap, RoundTripIsExact) {
    const InitialDatum g(GaussianBumpInY{0.2, 0.6, 1.0}, Dimension(5));
    const auto grid = uniform_grid(-4, 4, 101);
    auto v = to_log_coords(g, grid);
    v.time = 0.7;
    const auto u = from_log_coords(v, Dimension(5));
    EXPECT_NEAR(u.log_radii[10], grid[10] - 3 * 0.7, 1e-15);
    const auto back = to_log_coords(u);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        EXPECT_NEAR(back.grid[k], grid[k], 1e-14);
        EXPECT_EQ(back.values[k], v.values[k]);
    }
}

TEST(LogMap, KernelSolutionOfFIsF) {
    // v = G(y, t) is the line image of F: F(r, t) = G(log r + (N-2) t, t)
    for (int n : {1, 3, 6}) {
        const double t = 1.7;
        for (double lr : {-3.0, 0.0, 2.0}) EXPECT_NEAR(profile_F_log(lr, t, Dimension(n)), oracle::kernel(lr + (n - 2) * t, t), 1e-16);
    }
}

TEST(Inversion, SolvesConstantCoefficientHeatEquation) {
    // w(z, t) = e^{dt - z} F(r(z), t) must satisfy w_t = d w_zz
    for (int n : {3, 4, 5, 7}) {
        const Dimension dim(n);
        const double half = -0.5 * dim.drift();
        const double d = inversion_diffusivity(dim);
        auto w = [&](double z, double t) {
            const double lr = z / half;
            return inversion_transform(single_point(lr, profile_F_log(lr, t, dim), t, dim)).values[0];
        };
        const double h = 1e-3;
        for (double z : {-0.5, 0.3, 1.1}) {
            const double t = 1.3;
            const double w_t = (w(z, t + h) - w(z, t - h)) / (2 * h);
            const double w_zz = (w(z + h, t) - 2 * w(z, t) + w(z - h, t)) / (h * h);
            EXPECT_NEAR(w_t, d * w_zz, 2e-5 * (1 + std::fabs(w_t))) << "N=" << n << " z=" << z;
        }
    }
}

TEST(Inversion, RoundTripAndOrdering) {
    const Dimension dim(3);
    RadialField u;
    u.dim = dim;
    u.time = 0.4;
    u.log_radii = uniform_grid(-2, 2, 21);
    for (double lr : u.log_radii) u.values.push_back(profile_F_log(lr, 0.4, dim));
    const auto w = inversion_transform(u);
    for (std::size_t k = 1; k < w.size(); ++k) EXPECT_GT(w.grid[k], w.grid[k - 1]);
    const auto back = inverse_inversion_transform(w, dim);
    for (std::size_t k = 0; k < u.size(); ++k) {
        EXPECT_NEAR(back.log_radii[k], u.log_radii[k], 1e-14);
        EXPECT_NEAR(back.values[k], u.values[k], 1e-15);
    }
}

TEST(Inversion, FPeaksInZAtHalfDriftSquaredTime) {
    for (int n : {3, 5})
        for (double t : {0.5, 2.0}) {
            const double b = n - 2.0;
            auto F_of_z = [&](double z) { return profile_F_log(-2 * z / b, t, Dimension(n)); };
            const double z0 = b * b * t / 2;
            EXPECT_GT(F_of_z(z0), F_of_z(z0 + 1e-3));
            EXPECT_GT(F_of_z(z0), F_of_z(z0 - 1e-3));
        }
}

TEST(Inversion, UnsupportedInTwoDimensions) {
    EXPECT_THROW(inversion_transform(single_point(0.0, 1.0, 1.0, Dimension(2))), Unsupported);
    EXPECT_THROW(inverse_inversion_transform(LineField{{0.0, 1.0}, {1.0, 1.0}}, Dimension(2)), Unsupported);
}

TEST(SelfMap, IdentityCasesAndFToF) {
    const Dimension three(3), four(4);
    for (double lr : {-1.0, 0.0, 0.8}) {
        const auto same = self_map(single_point(lr, 0.3, 1.0, three), three);
        EXPECT_EQ(same.log_radii[0], lr);
        const auto at_zero = self_map(single_point(lr, 0.3, 0.0, three), four);
        EXPECT_EQ(at_zero.log_radii[0], lr);
    }
    // F in N = 3 mapped to N = 4 is F in N = 4
    for (double lrbar : {-2.0, -1.0, 0.5}) {
        const double t = 1.0;
        const double lr = lrbar + t;  // r = rbar e^{(4 - 3) t}
        const auto m = self_map(single_point(lr, profile_F_log(lr, t, three), t, three), four);
        EXPECT_NEAR(m.log_radii[0], lrbar, 1e-15);
        EXPECT_NEAR(m.values[0], profile_F_log(lrbar, t, four), 1e-12);
    }
    auto sampler = self_map([&](double r, double t) { return profile_F(r, t, three); }, three, four);
    EXPECT_NEAR(sampler(0.6, 1.0), profile_F(0.6, 1.0, four), 1e-12);
}

TEST(Integrals, WeightedMassOfAnnulus) {
    const InitialDatum a(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    const auto m = weighted_mass(a);
    ASSERT_FALSE(m.infinite);
    EXPECT_NEAR(m.value, 4 * oracle::pi, 1e-13);
    EXPECT_NEAR(line_mass(a).value, 1.0, 1e-14);
}

TEST(Integrals, MassIdentityAcrossFamiliesAndDimensions) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const int n = 3 + i % 4;
        const Dimension d(n);
        const double c = -1 + 2 * U(rng), w = 0.2 + U(rng), h = 0.5 + U(rng);
        const InitialDatum g(GaussianBumpInY{c, w, h}, d);
        EXPECT_NEAR(line_mass(g).value, h * w * std::sqrt(oracle::pi), 1e-12);
        EXPECT_NEAR(weighted_mass(g).value, unit_sphere_area(d) * line_mass(g).value, 1e-11);
        // r-route oracle: int_0^inf r^{-1} u0(r) dr
        const double by_boost = oracle::integrate(
            [&](double y) { return h * std::exp(-((y - c) / w) * ((y - c) / w)); }, c - 12 * w, c + 12 * w);
        EXPECT_NEAR(weighted_mass(g).value, oracle::sphere_area(n) * by_boost, 1e-11);
    }
    // data with a nonzero limit at the origin have infinite weighted mass by both routes
    const InitialDatum s(StepToK{}, Dimension(3));
    EXPECT_TRUE(weighted_mass(s).infinite);
    EXPECT_TRUE(line_mass(s).infinite);
}

TEST(Integrals, L12NormAnnulusAndStep) {
    const InitialDatum a(AnnulusIndicator{1.0, std::numbers::e, 1.0}, Dimension(3));
    EXPECT_NEAR(l12_norm(a).value, 4 * oracle::pi * (std::numbers::e - 1), 1e-12);
    // logistic step in N = 4: omega int r^{N-3} u0 dr
    const double K = 1.0, rc = 2.0, p = 4.0;
    const InitialDatum s(StepToK{K, rc, p}, Dimension(4));
    // in y = log r the integrand e^{2y} u0 decays like e^{-2y}; no far-field cut
    const double oracle_value = oracle::sphere_area(4) *
        oracle::integrate([&](double y) { return std::exp(2 * y) * logistic(std::exp(y), K, rc, p); }, -40.0, 40.0, 1e-15);
    EXPECT_NEAR(l12_norm(s).value, oracle_value, 1e-7 * oracle_value);
    // constant data are not in the space
    EXPECT_TRUE(l12_norm(InitialDatum(Constant{1.0}, Dimension(3))).infinite);
}

TEST(Integrals, ConditionI1BothRoutesAndOracle) {
    const double K = 1.0, rc = std::numbers::e, p = 4.0;
    const InitialDatum s(StepToK{K, rc, p}, Dimension(3));
    const auto by_r = condition_I1(s, K);
    const auto by_y = condition_I1_line(s, K);
    ASSERT_FALSE(by_r.infinite);
    EXPECT_NEAR(by_r.value, by_y.value, 1e-10);
    const double below = oracle::integrate([&](double r) { return (K - logistic(r, K, rc, p)) / r; }, 1e-12, 1.0, 1e-15);
    const double above = oracle::integrate([&](double r) { return logistic(r, K, rc, p) / r; }, 1.0, 1e6, 1e-15);
    EXPECT_NEAR(by_r.value, 4 * oracle::pi * (below + above), 1e-8);
    // wrong K: the datum does not approach K at the origin
    EXPECT_TRUE(condition_I1(s, 2.0).infinite);
}

TEST(Integrals, ConditionI2) {
    const InitialDatum e(SmoothErfcLike{1.0, 0.3}, Dimension(3));
    const auto i2 = condition_I2(e);
    ASSERT_FALSE(i2.infinite);
    const double ref = 4 * oracle::pi * oracle::integrate([](double y) {
        return std::fabs(y * y * y) / std::sqrt(oracle::pi) * std::exp(-(y - 0.3) * (y - 0.3));
    }, -15.0, 15.0);
    EXPECT_NEAR(i2.value, ref, 1e-9 * ref);
    EXPECT_TRUE(condition_I2(InitialDatum(AnnulusIndicator{}, Dimension(3))).infinite);
}

TEST(Integrals, PsiMomentsOfSampledErfc) {
    const InitialDatum e(SmoothErfcLike{2.0, 0.0}, Dimension(3));
    const auto v = to_log_coords(e, uniform_grid(-12, 12, 2001));
    const auto m = psi_moments(v);
    EXPECT_DOUBLE_EQ(m.mass, 2.0);
    const double ref = oracle::integrate([](double y) {
        return std::fabs(y * y * y) * 2.0 / std::sqrt(oracle::pi) * std::exp(-y * y);
    }, -12.0, 12.0);
    EXPECT_NEAR(m.rho, ref, 1e-9);
}
