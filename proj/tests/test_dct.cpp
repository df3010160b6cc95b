#include "ddk/dct.hpp"
#include "ddk/metrics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace ddk {
namespace {

double sum_sq(const MelGrid& g) {
    double s = 0.0;
    for (double v : g.values()) s += v * v;
    return s;
}

}  // namespace

TEST(Dct2, ConstantHasOnlyDc) {
    const double c = 1.7;
    const auto s = dct2_forward(MelGrid(4, 4, c));
    EXPECT_NEAR(s(0, 0), c * 4.0, 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (i || j) EXPECT_NEAR(s(i, j), 0.0, 1e-12);
        }
    }
}

TEST(Dct2, ZeroInZeroOut) {
    const auto s = dct2_forward(MelGrid(3, 5, 0.0));
    for (double v : s.coefficients.values()) EXPECT_EQ(v, 0.0);
    const auto x = dct2_inverse(FrequencySpectrum{MelGrid(3, 5, 0.0)});
    for (double v : x.values()) EXPECT_EQ(v, 0.0);
}

TEST(Dct2, UnitDcCoefficientIsHalfOn2x2) {
    FrequencySpectrum s{MelGrid(2, 2, 0.0)};
    s(0, 0) = 1.0;
    const auto x = dct2_inverse(s);
    for (double v : x.values()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Dct2, MatchesBruteForceOnRectangularGrid) {
    RandomSource rng(5);
    const MelGrid x = oracle::random_grid(5, 7, rng);
    EXPECT_LT(max_abs_diff(dct2_forward(x).coefficients, oracle::brute_dct2(x)), 1e-12);
}

TEST(Dct2, RoundTrip8x8And5x7) {
    RandomSource rng(8);
    for (auto [w, h] : {std::pair{8, 8}, std::pair{5, 7}}) {
        const MelGrid x = oracle::random_grid(w, h, rng);
        EXPECT_LT(max_abs_diff(dct2_inverse(dct2_forward(x)), x), 1e-9);
    }
}

TEST(Dct2, Parseval) {
    RandomSource rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const MelGrid x = oracle::random_grid(3 + trial, 11 - trial / 2, rng, 3.0);
        const double e = sum_sq(x);
        EXPECT_NEAR(sum_sq(dct2_forward(x).coefficients), e, 1e-9 * e);
    }
}

TEST(HeatEigenvalues, FormulaValues) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    EXPECT_NEAR(heat_eigenvalues(2, 2)(1, 1), -pi2 / 2.0, 1e-14);
    EXPECT_NEAR(heat_eigenvalues(2, 2)(1, 1), -4.934802200544679, 1e-12);
    EXPECT_NEAR(heat_eigenvalues(4, 2)(3, 1), -13.0 * pi2 / 16.0, 1e-13);
    for (auto [w, h] : {std::pair{1, 1}, std::pair{3, 9}, std::pair{32, 32}}) {
        EXPECT_EQ(heat_eigenvalues(w, h)(0, 0), 0.0);
    }
}

TEST(HeatEigenvalues, NegativeAndMonotone) {
    const auto ev = heat_eigenvalues(6, 9);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
            if (i || j) EXPECT_LT(ev(i, j), 0.0);
            if (i > 0) EXPECT_LE(ev(i, j), ev(i - 1, j));
            if (j > 0) EXPECT_LE(ev(i, j), ev(i, j - 1));
        }
    }
}

TEST(Blur, ZeroTimeIsIdentity) {
    RandomSource rng(2);
    const MelGrid x = oracle::random_grid(8, 8, rng);
    EXPECT_LT(max_abs_diff(blur(x, 0.0), x), 1e-9);
}

TEST(Blur, ConstantIsFixedPoint) {
    const MelGrid c(6, 4, -0.3);
    for (double n : {0.5, 3.0, 100.0}) EXPECT_LT(max_abs_diff(blur(c, n), c), 1e-12);
}

TEST(Blur, TwoByTwoImpulseMatchesBruteForce) {
    MelGrid x(2, 2, 0.0);
    x(0, 0) = 1.0;
    const MelGrid got = blur(x, 1.0);
    const MelGrid want = oracle::brute_blur(x, 1.0);
    EXPECT_LT(max_abs_diff(got, want), 1e-14);
    // Closed forms 0.25 (1 +- a)^2 and 0.25 (1 - a^2), a = exp(-pi^2 / 4).
    EXPECT_NEAR(got(0, 0), 0.29420045707451348, 1e-14);
    EXPECT_NEAR(got(0, 1), 0.24820202916104341, 1e-14);
    EXPECT_NEAR(got(1, 0), 0.24820202916104341, 1e-14);
    EXPECT_NEAR(got(1, 1), 0.20939548460339970, 1e-14);
}

TEST(Blur, MatchesBruteForceOnRandomGrid) {
    RandomSource rng(4);
    const MelGrid x = oracle::random_grid(6, 5, rng);
    EXPECT_LT(max_abs_diff(blur(x, 2.5), oracle::brute_blur(x, 2.5)), 1e-12);
}

TEST(Blur, NegativeTimeRejected) {
    EXPECT_THROW(blur(MelGrid(2, 2, 1.0), -1.0), ValueError);
}

TEST(BlurProperties, SemigroupLinearityMeanContraction) {
    RandomSource rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto w = static_cast<std::size_t>(rng.uniform_int(1, 12));
        const auto h = static_cast<std::size_t>(rng.uniform_int(1, 12));
        const MelGrid x = oracle::random_grid(w, h, rng);
        const MelGrid y = oracle::random_grid(w, h, rng);
        const double a = 5.0 * rng.uniform01();
        const double b = 5.0 * rng.uniform01();

        EXPECT_LT(max_abs_diff(blur(blur(x, a), b), blur(x, a + b)), 1e-6);

        const double alpha = 2.0 * rng.uniform01() - 1.0, beta = 3.0 * rng.uniform01();
        EXPECT_LT(max_abs_diff(blur(alpha * x + beta * y, a), alpha * blur(x, a) + beta * blur(y, a)),
                  1e-9);

        EXPECT_NEAR(blur(x, a).mean(), x.mean(), 1e-9);

        const MelGrid mean_grid = MelGrid::constant(x.shape(), x.mean());
        double prev = std::numeric_limits<double>::infinity();
        for (double n : {0.0, 0.25, 1.0, 2.0, 4.0, 8.0}) {
            const double dev = std::sqrt(sum_sq(blur(x, n) - mean_grid));
            EXPECT_LE(dev, prev + 1e-12);
            prev = dev;
        }
    }
}

}  // namespace ddk
