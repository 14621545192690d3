#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "svw/field.hpp"

using namespace svw;

namespace {

// Independent O(M^2) DFT, the oracle for to_spectral.
std::vector<cplx> direct_dft(const std::vector<double>& f) {
    const std::size_t M = f.size();
    std::vector<cplx> out(M / 2);
    for (std::size_t k = 0; k < out.size(); ++k) {
        cplx s(0.0);
        for (std::size_t m = 0; m < M; ++m)
            s += f[m] * std::exp(cplx(0.0, -two_pi * double(k) * double(m) / double(M)));
        out[k] = s / double(M);
    }
    return out;
}

GridField sampled(std::size_t M, double (*fn)(double)) {
    GridField g(M);
    for (std::size_t m = 0; m < M; ++m) g[m] = fn(double(m) / double(M));
    return g;
}

SpectralField random_field(std::mt19937& rng, int K, double scale = 1.0, bool zero_mean = false) {
    std::normal_distribution<double> n(0.0, 1.0);
    SpectralField f(K);
    if (!zero_mean) f.set_coeff(0, cplx(n(rng), 0.0));
    for (int k = 1; k <= K; ++k)
        f.set_coeff(k, scale / double(k) * cplx(n(rng), n(rng)));
    return f;
}

}  // namespace

TEST(ToSpectral, ConstantField) {
    const SpectralField f = to_spectral(GridField(64, 1.0));
    EXPECT_DOUBLE_EQ(f.coeff(0).real(), 1.0);
    for (int k = 1; k <= f.max_freq(); ++k) EXPECT_NEAR(std::abs(f.coeff(k)), 0.0, 1e-15);
}

TEST(ToSpectral, SingleSineMode) {
    const SpectralField f =
        to_spectral(sampled(64, [](double x) { return std::sin(two_pi * x); }));
    EXPECT_NEAR(std::abs(f.coeff(1) - cplx(0.0, -0.5)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(f.coeff(-1) - cplx(0.0, 0.5)), 0.0, 1e-14);
    for (int k = 2; k <= f.max_freq(); ++k) EXPECT_NEAR(std::abs(f.coeff(k)), 0.0, 1e-14);
}

TEST(ToSpectral, MatchesDirectDft) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridField g(16);
    for (std::size_t m = 0; m < 16; ++m) g[m] = u(rng);
    const SpectralField f = to_spectral(g);
    const auto oracle = direct_dft(g.values());
    for (int k = 0; k <= f.max_freq(); ++k)
        EXPECT_NEAR(std::abs(f.coeff(k) - oracle[std::size_t(k)]), 0.0, 1e-13);
}

TEST(ToSpectral, RejectsBadSizes) {
    EXPECT_THROW(to_spectral(GridField(std::vector<double>{1.0, 2.0, 3.0})),
                 std::invalid_argument);
    EXPECT_THROW(GridField(std::vector<double>{}), std::invalid_argument);
}

TEST(RoundTrip, BandLimitedExact) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const SpectralField f = random_field(rng, 13);
        const SpectralField back = to_spectral(to_grid(f, 64));
        for (int k = 0; k <= 13; ++k)
            EXPECT_NEAR(std::abs(back.coeff(k) - f.coeff(k)), 0.0, 1e-12);
    }
}

TEST(Project, KillsHighFrequencies) {
    // sin(4 pi x) has frequency 2 > N - 1 = 1.
    SpectralField f(4);
    f.set_coeff(2, cplx(0.0, -0.5));
    const SpectralField p = project(f, 2);
    EXPECT_NEAR(norm(p, Norm::L2), 0.0, 1e-15);
}

TEST(Project, IdentityOnBandLimited) {
    std::mt19937 rng(3);
    const SpectralField f = random_field(rng, 7);
    const SpectralField p = project(f, 8);
    for (int k = 0; k <= 7; ++k) EXPECT_EQ(p.coeff(k), f.coeff(k));
}

TEST(Project, IdempotentAndSelfAdjoint) {
    std::mt19937 rng(5);
    const SpectralField f = random_field(rng, 20);
    const SpectralField g = random_field(rng, 20);
    const SpectralField p1 = project(f, 6);
    const SpectralField p2 = project(p1, 6);
    for (int k = 0; k <= p1.max_freq(); ++k) EXPECT_EQ(p1.coeff(k), p2.coeff(k));
    EXPECT_NEAR(inner(project(f, 6), g), inner(f, project(g, 6)), 1e-13);
}

TEST(Project, CommutesWithDerivative) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const SpectralField f = random_field(rng, 24);
        const SpectralField a = project(derivative(f), 9);
        const SpectralField b = derivative(project(f, 9));
        for (int k = 0; k <= a.max_freq(); ++k) EXPECT_EQ(a.coeff(k), b.coeff(k));
    }
}

TEST(Derivative, SineToCosine) {
    SpectralField f(2);
    f.set_coeff(1, cplx(0.0, -0.5));  // sin(2 pi x)
    const SpectralField d = derivative(f);
    // 2 pi cos(2 pi x): coeff(1) = pi.
    EXPECT_NEAR(std::abs(d.coeff(1) - cplx(std::numbers::pi, 0.0)), 0.0, 1e-14);
    EXPECT_EQ(d.mean(), 0.0);
}

TEST(Derivative, ConstantVanishes) {
    SpectralField f(0);
    f.set_coeff(0, cplx(3.7, 0.0));
    EXPECT_NEAR(norm(derivative(f), Norm::L2), 0.0, 1e-16);
}

TEST(Antiderivative, InverseIdentities) {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const SpectralField f = random_field(rng, 16, 1.0, /*zero_mean=*/true);
        const SpectralField a = derivative(antiderivative(f));
        for (int k = 0; k <= f.max_freq(); ++k)
            EXPECT_NEAR(std::abs(a.coeff(k) - f.coeff(k)), 0.0, 1e-13);
        const SpectralField b = antiderivative(derivative(f));
        for (int k = 1; k <= f.max_freq(); ++k)
            EXPECT_NEAR(std::abs(b.coeff(k) - f.coeff(k)), 0.0, 1e-13);
        EXPECT_EQ(b.mean(), 0.0);
    }
}

TEST(Antiderivative, ClosedForms) {
    SpectralField s(1);
    s.set_coeff(1, cplx(0.0, -0.5));  // sin(2 pi x)
    const SpectralField as = antiderivative(s);
    // -cos(2 pi x) / (2 pi): coeff(1) = -1/(4 pi).
    EXPECT_NEAR(std::abs(as.coeff(1) - cplx(-0.25 / std::numbers::pi, 0.0)), 0.0, 1e-15);

    SpectralField c(1);
    c.set_coeff(1, cplx(0.5, 0.0));  // cos(2 pi x)
    const SpectralField ac = antiderivative(c);
    // sin(2 pi x) / (2 pi): coeff(1) = -i/(4 pi).
    EXPECT_NEAR(std::abs(ac.coeff(1) - cplx(0.0, -0.25 / std::numbers::pi)), 0.0, 1e-15);

    EXPECT_NEAR(norm(antiderivative(SpectralField(4)), Norm::L2), 0.0, 1e-16);
}

TEST(Antiderivative, RejectsNonzeroMean) {
    SpectralField f(1);
    f.set_coeff(0, cplx(0.5, 0.0));
    try {
        antiderivative(f);
        FAIL() << "expected constraint_error";
    } catch (const constraint_error& e) {
        EXPECT_DOUBLE_EQ(e.offending_value(), 0.5);
    }
}

TEST(Antiderivative, SupBoundedByTwiceL1) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const SpectralField f = random_field(rng, 12, 1.0, /*zero_mean=*/true);
        EXPECT_LE(norm(antiderivative(f), Norm::Linf), 2.0 * norm(f, Norm::L1) + 1e-12);
    }
}

TEST(Mollify, PreservesConstants) {
    SpectralField f(0);
    f.set_coeff(0, cplx(2.5, 0.0));
    const SpectralField m = mollify(f, 0.3);
    EXPECT_DOUBLE_EQ(m.mean(), 2.5);
}

TEST(Mollify, SingleModeFactor) {
    SpectralField f(1);
    f.set_coeff(1, cplx(0.0, -0.5));
    const SpectralField m = mollify(f, 0.1);
    const double factor = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * 0.01);
    EXPECT_NEAR(factor, 0.8209, 5e-5);
    EXPECT_NEAR(std::abs(m.coeff(1) - factor * f.coeff(1)), 0.0, 1e-16);
}

TEST(Mollify, ExactMeanAndConvergence) {
    std::mt19937 rng(23);
    const SpectralField f = random_field(rng, 10);
    EXPECT_EQ(mollify(f, 0.2).mean(), f.mean());
    double prev = norm(mollify(f, 0.2) - f, Norm::L2);
    for (double delta : {0.1, 0.05, 0.025}) {
        const double cur = norm(mollify(f, delta) - f, Norm::L2);
        EXPECT_LT(cur, prev);
        prev = cur;
    }
    EXPECT_THROW(mollify(f, 0.0), std::invalid_argument);
}

TEST(Norms, KnownValues) {
    SpectralField s(1);
    s.set_coeff(1, cplx(0.0, -0.5));  // sin(2 pi x)
    EXPECT_NEAR(norm(s, Norm::L2), 1.0 / std::sqrt(2.0), 1e-14);
    const double w = 1.0 + 4.0 * std::numbers::pi * std::numbers::pi;
    EXPECT_NEAR(norm(s, Norm::H_neg3), std::pow(w, -1.5) / std::sqrt(2.0), 1e-12);

    SpectralField c(0);
    c.set_coeff(0, cplx(1.0, 0.0));
    EXPECT_DOUBLE_EQ(norm(c, Norm::L2), 1.0);
}

TEST(Norms, ParsevalMatchesQuadrature) {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const SpectralField f = random_field(rng, 15);
        const GridField g = to_grid(f, 64);
        double quad = 0.0;
        for (double v : g.values()) quad += v * v;
        quad /= double(g.size());
        const double l2 = norm(f, Norm::L2);
        EXPECT_NEAR(l2 * l2, quad, 1e-12 * std::max(1.0, quad));
    }
}
