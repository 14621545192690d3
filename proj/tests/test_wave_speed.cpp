#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "svw/wave_speed.hpp"

using namespace svw;

namespace {

// Independent trapezoid integration of c, the oracle for F.
double trapezoid_F(const WaveSpeed& w, double u, std::size_t n = 200000) {
    const double h = u / double(n);
    double s = 0.5 * (w.c(0.0) + w.c(u));
    for (std::size_t i = 1; i < n; ++i) s += w.c(h * double(i));
    return s * h;
}

void check_kappa_bounds(const WaveSpeed& w, double lo = -10.0, double hi = 10.0) {
    const double kappa = w.kappa();
    ASSERT_GT(kappa, 1.0);
    for (int i = 0; i <= 400; ++i) {
        const double u = lo + (hi - lo) * double(i) / 400.0;
        EXPECT_GE(w.c(u), 1.0 / kappa - 1e-12);
        EXPECT_LE(w.c(u), kappa + 1e-12);
        EXPECT_LE(std::abs(w.c_prime(u)), kappa + 1e-12);
    }
}

void check_f_inverse_roundtrip(const WaveSpeed& w, double lo = -6.0, double hi = 6.0) {
    for (int i = 0; i <= 120; ++i) {
        const double u = lo + (hi - lo) * double(i) / 120.0;
        EXPECT_NEAR(w.F_inverse(w.F(u)), u, 1e-10 * std::max(1.0, std::abs(u)));
    }
}

}  // namespace

TEST(ConstantSpeed, ClosedForms) {
    const WaveSpeed w = WaveSpeed::constant(1.5);
    EXPECT_DOUBLE_EQ(w.c(0.3), 1.5);
    EXPECT_DOUBLE_EQ(w.c_prime(-2.0), 0.0);
    EXPECT_DOUBLE_EQ(w.c_tilde(0.7), 0.0);
    EXPECT_DOUBLE_EQ(w.F(2.0), 3.0);
    EXPECT_DOUBLE_EQ(w.F_inverse(3.0), 2.0);
    EXPECT_THROW(WaveSpeed::constant(0.0), std::invalid_argument);
    EXPECT_THROW(WaveSpeed::constant(-1.0), std::invalid_argument);
}

TEST(CosineSpeed, PointValues) {
    const WaveSpeed w = WaveSpeed::cosine();
    EXPECT_DOUBLE_EQ(w.c(0.0), 2.0);
    EXPECT_DOUBLE_EQ(w.c(std::numbers::pi), 1.0);
    EXPECT_NEAR(w.c(1.0), 1.7701511529340699, 1e-15);
    EXPECT_NEAR(w.F(1.0), 1.9207354924039483, 1e-15);
    EXPECT_DOUBLE_EQ(w.kappa(), 2.0);
}

TEST(CosineSpeed, DerivativeMatchesFiniteDifference) {
    const WaveSpeed w = WaveSpeed::cosine();
    for (double u : {-3.0, -1.1, 0.0, 0.4, 2.7}) {
        const double h = 1e-6;
        const double fd = (w.c(u + h) - w.c(u - h)) / (2.0 * h);
        EXPECT_NEAR(w.c_prime(u), fd, 1e-9);
        EXPECT_NEAR(w.c_tilde(u), w.c_prime(u) / (4.0 * w.c(u)), 1e-15);
        // F' = c.
        const double fdF = (w.F(u + h) - w.F(u - h)) / (2.0 * h);
        EXPECT_NEAR(fdF, w.c(u), 1e-9);
    }
}

TEST(CosineSpeed, BoundsAndInverse) {
    const WaveSpeed w = WaveSpeed::cosine();
    check_kappa_bounds(w);
    check_f_inverse_roundtrip(w);
}

TEST(LiquidCrystalSpeed, PointValuesAndSymmetry) {
    const WaveSpeed w = WaveSpeed::liquid_crystal(1.0, 2.0);
    EXPECT_DOUBLE_EQ(w.c(0.0), 1.0);
    EXPECT_NEAR(w.c(0.5 * std::numbers::pi), 2.0, 1e-14);
    const double u = 0.8;
    EXPECT_NEAR(w.c(u), std::sqrt(std::cos(u) * std::cos(u) + 4.0 * std::sin(u) * std::sin(u)),
                1e-15);
    EXPECT_NEAR(w.c(u + std::numbers::pi), w.c(u), 1e-14);
    EXPECT_THROW(WaveSpeed::liquid_crystal(0.0, 1.0), std::invalid_argument);
}

TEST(LiquidCrystalSpeed, AntiderivativeAgainstQuadrature) {
    const WaveSpeed w = WaveSpeed::liquid_crystal(1.0, 2.0);
    for (double u : {0.7, 2.0, 4.0, -3.3, 9.0}) {
        EXPECT_NEAR(w.F(u), trapezoid_F(w, u), 1e-8 * std::max(1.0, std::abs(u)));
    }
    // Periodic additivity: F(u + pi) - F(u) equals the half-period integral.
    const double half_period = w.F(std::numbers::pi);
    for (double u : {0.3, 1.9, -2.2})
        EXPECT_NEAR(w.F(u + std::numbers::pi) - w.F(u), half_period, 1e-12);
}

TEST(LiquidCrystalSpeed, BoundsAndInverse) {
    const WaveSpeed w = WaveSpeed::liquid_crystal(1.0, 2.0);
    check_kappa_bounds(w);
    check_f_inverse_roundtrip(w);
    const WaveSpeed v = WaveSpeed::liquid_crystal(0.5, 1.2);
    check_kappa_bounds(v);
    check_f_inverse_roundtrip(v);
}

TEST(TabulatedSpeed, InterpolationAndExtension) {
    const WaveSpeed w = WaveSpeed::tabulated({-1.0, 0.0, 1.0}, {2.0, 1.0, 2.0});
    EXPECT_DOUBLE_EQ(w.c(-1.0), 2.0);
    EXPECT_DOUBLE_EQ(w.c(0.0), 1.0);
    EXPECT_DOUBLE_EQ(w.c(0.5), 1.5);
    EXPECT_DOUBLE_EQ(w.c(-5.0), 2.0);  // constant extension
    EXPECT_DOUBLE_EQ(w.c(7.0), 2.0);
    EXPECT_DOUBLE_EQ(w.c_prime(0.5), 1.0);
    EXPECT_DOUBLE_EQ(w.c_prime(-0.5), -1.0);
}

TEST(TabulatedSpeed, AntiderivativeExactForPiecewiseLinear) {
    const WaveSpeed w = WaveSpeed::tabulated({-1.0, 0.0, 1.0}, {2.0, 1.0, 2.0});
    // On [0, u] with c = 1 + v: F(u) = u + u^2/2.
    EXPECT_NEAR(w.F(1.0), 1.5, 1e-12);
    EXPECT_NEAR(w.F(0.5), 0.5 + 0.125, 1e-12);
    EXPECT_NEAR(w.F(-1.0), -1.5, 1e-12);
    // Beyond the table c = 2: F(2) = F(1) + 2.
    EXPECT_NEAR(w.F(2.0), 3.5, 1e-12);
    check_f_inverse_roundtrip(w, -3.0, 3.0);
}

TEST(TabulatedSpeed, RejectsBadTables) {
    EXPECT_THROW(WaveSpeed::tabulated({0.0}, {1.0}), std::invalid_argument);
    EXPECT_THROW(WaveSpeed::tabulated({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(WaveSpeed::tabulated({0.0, 1.0}, {1.0, -1.0}), std::invalid_argument);
    EXPECT_THROW(WaveSpeed::tabulated({0.0, 1.0, 2.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST(Smoothing, IdentityOnAnalyticPresets) {
    const WaveSpeed w = WaveSpeed::cosine();
    const WaveSpeed s = w.smoothed(16);
    for (double u : {-2.0, 0.0, 1.3}) EXPECT_DOUBLE_EQ(s.c(u), w.c(u));
    EXPECT_THROW(w.smoothed(0), std::invalid_argument);
}

TEST(Smoothing, RegularizesKink) {
    // c(u) = 1 + |u| on [-2, 2]: the kink at 0 has a unit slope jump.
    const WaveSpeed w = WaveSpeed::tabulated({-2.0, 0.0, 2.0}, {3.0, 1.0, 3.0});
    const WaveSpeed s = w.smoothed(8);
    // Convex averaging keeps the range.
    for (int i = 0; i <= 200; ++i) {
        const double u = -2.0 + 4.0 * double(i) / 200.0;
        EXPECT_GE(s.c(u), 1.0 - 1e-12);
        EXPECT_LE(s.c(u), 3.0 + 1e-12);
    }
    // Away from the kink the smoothing is a small perturbation; at the kink
    // it raises the minimum.
    EXPECT_NEAR(s.c(1.5), w.c(1.5), 0.02);
    EXPECT_GT(s.c(0.0), 1.01);
    // Tighter smoothing converges back to the kink value.
    EXPECT_LT(std::abs(w.smoothed(64).c(0.0) - 1.0), std::abs(s.c(0.0) - 1.0));
}

TEST(BiLipschitz, TwoSidedBoundsOnF) {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (const WaveSpeed& w :
         {WaveSpeed::cosine(), WaveSpeed::liquid_crystal(1.0, 2.0),
          WaveSpeed::tabulated({-1.0, 0.5, 2.0}, {1.2, 0.7, 1.9})}) {
        const double kappa = w.kappa();
        for (int trial = 0; trial < 200; ++trial) {
            const double a = dist(rng), b = dist(rng);
            const double dF = std::abs(w.F(a) - w.F(b));
            const double du = std::abs(a - b);
            EXPECT_LE(dF, kappa * du + 1e-10);
            EXPECT_GE(dF, du / kappa - 1e-10);
        }
    }
}
