#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "squeezelab/su11.hpp"

using namespace squeezelab;

TEST(Regime, Classification) {
    EXPECT_EQ(classify_regime({0.0, 1.0}), Regime::Hyperbolic);
    EXPECT_EQ(classify_regime({4.0, 1.0}), Regime::Trigonometric);
    EXPECT_EQ(classify_regime({2.0, 1.0}, 1e-12), Regime::Transition);
    EXPECT_EQ(classify_regime({2.0 + 1e-6, 1.0}, 1e-12), Regime::Trigonometric);
    EXPECT_THROW(classify_regime({0.0, 1.0}, 0.0), DomainError);
}

TEST(SqueezeParams, RejectsNonFiniteAndClampsTheta) {
    EXPECT_THROW(SqueezeParams(NAN, 1.0), DomainError);
    EXPECT_THROW(SqueezeParams(0.0, cplx{0.0, INFINITY}), DomainError);
    EXPECT_DOUBLE_EQ(SqueezeParams(0.0, 0.0, 3.0).theta, std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(SqueezeParams(0.0, 0.0, -1.0).theta, 0.0);
}

TEST(Disentangle, ConventionalLimit) {
    const auto c = disentangle_general({0.0, 1.0});
    EXPECT_NEAR(c.p_plus.real(), std::tanh(1.0), 1e-15);
    EXPECT_NEAR(c.p_plus.imag(), 0.0, 1e-15);
    EXPECT_NEAR(c.p_zero.real(), -2.0 * std::log(std::cosh(1.0)), 1e-15);
    EXPECT_NEAR(c.p_zero.imag(), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.p_minus + c.p_plus), 0.0, 1e-15);
}

TEST(Disentangle, TransitionCase) {
    const auto c = disentangle_general({2.0, 1.0});
    EXPECT_NEAR(std::abs(c.p_plus - cplx{0.5, 0.5}), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.p_zero + 2.0 * std::log(cplx{1.0, -1.0})), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.p_minus + cplx{0.5, 0.5}), 0.0, 1e-15);
}

TEST(Disentangle, IdentityAtOrigin) {
    const auto c = disentangle_general({0.0, 0.0});
    EXPECT_EQ(c.p_plus, cplx{});
    EXPECT_EQ(c.p_minus, cplx{});
    EXPECT_EQ(c.p_zero, cplx{});
    EXPECT_EQ(property_residual(c), 0.0);
}

TEST(Disentangle, PureRotation) {
    // tau = 0: U = exp(i alpha K0), so p0 = i alpha.
    const auto c = disentangle_general({1.3, 0.0});
    EXPECT_NEAR(std::abs(c.p_zero - cplx{0.0, 1.3}), 0.0, 1e-14);
    EXPECT_EQ(std::abs(c.p_plus), 0.0);
}

TEST(Disentangle, ConventionalAgreesWithGeneral) {
    for (double r : {0.0, 0.1, 0.7, 1.0, 2.0, 5.0}) {
        for (double ph : {0.0, 1.0, -2.5}) {
            const cplx tau = std::polar(r, ph);
            const auto g = disentangle_general({0.0, tau});
            const auto k = disentangle_conventional(tau);
            EXPECT_NEAR(std::abs(g.p_plus - k.p_plus), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(g.p_minus - k.p_minus), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(g.p_zero - k.p_zero), 0.0, 1e-12);
        }
    }
    const auto z = disentangle_conventional(0.0);
    EXPECT_EQ(z.p_plus, cplx{});
    EXPECT_EQ(z.p_zero, cplx{});
}

TEST(Disentangle, PropertyResidualExamples) {
    EXPECT_LT(property_residual(disentangle_general({0.0, 1.0})), 1e-12);
    EXPECT_LT(property_residual(disentangle_general({3.0, 1.0})), 1e-12);
}

TEST(Disentangle, ContinuousAcrossTransitionBand) {
    // Approaching alpha = 2|tau| from both sides the coefficients converge
    // monotonically to the transition value.
    const cplx tau = std::polar(1.0, 0.4);
    const auto at = disentangle_general({2.0, tau});
    double prev_lo = INFINITY, prev_hi = INFINITY;
    for (double d : {1e-4, 1e-6, 1e-8}) {
        const auto lo = disentangle_general({2.0 - d, tau});
        const auto hi = disentangle_general({2.0 + d, tau});
        const double dlo = std::abs(lo.p_plus - at.p_plus) + std::abs(lo.p_zero - at.p_zero);
        const double dhi = std::abs(hi.p_plus - at.p_plus) + std::abs(hi.p_zero - at.p_zero);
        EXPECT_LT(dlo, prev_lo);
        EXPECT_LT(dhi, prev_hi);
        EXPECT_LT(dlo, 10 * d);
        EXPECT_LT(dhi, 10 * d);
        EXPECT_LT(property_residual(lo), 1e-12);
        EXPECT_LT(property_residual(hi), 1e-12);
        prev_lo = dlo;
        prev_hi = dhi;
    }
}

TEST(Disentangle, PMinusZeroAtBreakLoci) {
    for (int k : {1, 2, 3}) {
        for (double t : {0.1, 0.5, 1.0}) {
            const double kp = k * std::numbers::pi;
            const double alpha = 2.0 * std::sqrt(kp * kp + t * t);
            EXPECT_LT(std::abs(disentangle_general({alpha, t}).p_minus), 1e-10) << k << " " << t;
            EXPECT_LT(std::abs(disentangle_general({-alpha, t}).p_minus), 1e-10);
        }
    }
}

TEST(Disentangle, ModulusBelowOneRandomized) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const SqueezeParams p(20.0 * u(rng), cplx{4.0 * u(rng), 4.0 * u(rng)});
        const auto c = disentangle_general(p);
        EXPECT_LT(std::abs(c.p_plus), 1.0);
        EXPECT_GT(c.one_minus_abs2_plus(), 0.0);
        EXPECT_NEAR(c.one_minus_abs2_plus(), 1.0 - c.abs2_plus(), 1e-12);
        // The residual forms 1 - |p+|^2 directly and loses digits as |p+| -> 1.
        if (std::abs(p.tau) <= 2.0) {
            EXPECT_LT(property_residual(c), 1e-12);
        }
    }
}

TEST(Disentangle, OverflowIsReported) {
    EXPECT_THROW(disentangle_general({0.0, 1e300}), DomainError);
}
