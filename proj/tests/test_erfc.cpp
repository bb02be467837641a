#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cdh/cli/acceptance.hpp"
#include "cdh/erfc.hpp"
#include "oracles.hpp"

using namespace cdh;

TEST(Erfc, AgreesWithTanhSinhOracle) {
    for (double x = -6.0; x <= 6.0; x += 0.37) EXPECT_NEAR(erfc_fn(x), oracle::erfc_integral(x), 2e-15) << x;
}

TEST(Erfc, RelativeAccuracyInTheTail) {
    for (double x : {3.0, 5.0, 10.0, 20.0, 26.0})
        EXPECT_NEAR(erfc_fn(x) / std::erfc(x), 1.0, 1e-13) << x;
}

TEST(Erfc, SpecialValues) {
    EXPECT_EQ(erfc_fn(0.0), 1.0);
    EXPECT_EQ(erfc_fn(30.0), 0.0);
    EXPECT_EQ(erfc_fn(std::numeric_limits<double>::infinity()), 0.0);
    EXPECT_EQ(erfc_fn(-std::numeric_limits<double>::infinity()), 2.0);
    EXPECT_TRUE(std::isnan(erfc_fn(std::nan(""))));
}

TEST(Erfc, ReflectionIdentity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> X(-8.0, 8.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = X(rng);
        EXPECT_NEAR(erfc_fn(x) + erfc_fn(-x), 2.0, 4e-16);
    }
}

TEST(Erfc, MonotoneDecreasing) {
    double prev = 2.0;
    for (double x = -8.0; x <= 8.0; x += 1e-3) {
        const double v = erfc_fn(x);
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(Erfc, DerivativeIsTheGaussian) {
    for (double x : {-1.5, 0.0, 0.7, 2.4, 2.6, 4.0}) {
        const double h = 1e-4;
        const double fd = (erfc_fn(x + h) - erfc_fn(x - h)) / (2 * h);
        EXPECT_NEAR(fd, -2 / std::sqrt(oracle::pi) * std::exp(-x * x), 1e-8);
    }
}

TEST(Erfc, LibraryQuadratureOracleAgreesWithBoost) {
    for (double x : {-8.0, -2.0, 0.0, 1.3, 6.0}) EXPECT_NEAR(cli::erfc_by_quadrature(x), oracle::erfc_integral(x), 1e-15);
}

TEST(Erfc, AcceptanceGatePassesForTheLibrary) { EXPECT_TRUE(cli::erfc_accuracy(erfc_fn).pass); }

TEST(Erfc, MutationFixtureCorruptedConstantFailsTheGate) {
    // 2/sqrt(pi) off in the sixth digit
    const double bad = 2.0 * std::numbers::inv_sqrtpi * (1.0 + 1e-6);
    const auto outcome = cli::erfc_accuracy([bad](double x) { return detail::erfc_with_constant(x, bad); });
    EXPECT_FALSE(outcome.pass) << outcome.detail;
}
