#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/states.hpp"

using namespace squeezelab;

TEST(Amplitudes, LeadingTerms) {
    const auto id = disentangle_general({0.0, 0.0});
    EXPECT_EQ(c_even(0, id), cplx(1.0));
    EXPECT_EQ(c_odd(0, id), cplx(1.0));
    EXPECT_EQ(c_even(3, id), cplx(0.0));

    const auto c = disentangle_general({1.0, cplx{0.3, -0.8}});
    EXPECT_NEAR(std::abs(c_even(0, c) - std::exp(0.25 * c.p_zero)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c_odd(0, c) - std::exp(0.75 * c.p_zero)), 0.0, 1e-15);
}

TEST(Amplitudes, SecondTermClosedForm) {
    // c_2 = exp(p0/4) (p+/2) sqrt(2) and c_3 = exp(3p0/4) (p+/2) sqrt(6)
    const auto c = disentangle_general({-0.7, cplx{0.5, 0.9}});
    EXPECT_NEAR(std::abs(c_even(1, c) - std::exp(0.25 * c.p_zero) * c.p_plus * std::sqrt(2.0) / 2.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c_odd(1, c) - std::exp(0.75 * c.p_zero) * c.p_plus * std::sqrt(6.0) / 2.0), 0.0, 1e-15);
}

TEST(Amplitudes, MatchOracleColumns) {
    {
        const SqueezeParams p(0.0, 1.0, 0.0);
        const auto o = oracle::oracle_state(p).state;
        EXPECT_NEAR(std::abs(c_even(3, disentangle_general(p)) - o.amplitudes[6]), 0.0, 1e-8);
    }
    {
        const SqueezeParams p(1.0, 1.0, std::numbers::pi / 2);
        const auto o = oracle::oracle_state(p).state;
        EXPECT_NEAR(std::abs(c_odd(2, disentangle_general(p)) - o.amplitudes[5]), 0.0, 1e-8);
    }
}

TEST(FockAmplitudes, Superposition) {
    const auto v = fock_amplitudes({0.0, 0.0, std::numbers::pi / 4}, 1e-14);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(v.amplitudes[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(v.amplitudes[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(FockAmplitudes, ConventionalSqueezedVacuum) {
    const auto v = fock_amplitudes({0.0, 1.0, 0.0}, 1e-14);
    const double t = std::tanh(1.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k % 2 == 1) {
            EXPECT_EQ(v.amplitudes[k], cplx(0.0));
            continue;
        }
        // (-1)^n omitted: tau real positive gives positive coefficients here.
        const double n = static_cast<double>(k / 2);
        const double expect = std::exp(0.5 * std::lgamma(2 * n + 1) - std::lgamma(n + 1)) * std::pow(t / 2, n) /
                              std::sqrt(std::cosh(1.0));
        EXPECT_NEAR(v.amplitudes[k].real(), expect, 1e-14);
    }
}

TEST(FockAmplitudes, NormalizedWithinBound) {
    const double eps = 1e-12;
    const auto v = fock_amplitudes({1.0, 1.0, std::numbers::pi / 3}, eps);
    EXPECT_LE(v.tail_bound, eps);
    EXPECT_LE(v.norm2(), 1.0 + 1e-14);
    EXPECT_GE(v.norm2(), 1.0 - eps - 1e-14);
}

TEST(FockAmplitudes, ParitySplit) {
    const auto even = fock_amplitudes({1.2, cplx{0.4, 0.4}, 0.0}, 1e-13);
    const auto odd = fock_amplitudes({1.2, cplx{0.4, 0.4}, std::numbers::pi / 2}, 1e-13);
    for (std::size_t k = 1; k < even.size(); k += 2) EXPECT_EQ(even.amplitudes[k], cplx(0.0));
    for (std::size_t k = 0; k < odd.size(); k += 2) EXPECT_EQ(odd.amplitudes[k], cplx(0.0));

    const double th = 0.6;
    const auto mix = fock_amplitudes({1.2, cplx{0.4, 0.4}, th}, 1e-13);
    const auto c = disentangle_general({1.2, cplx{0.4, 0.4}});
    EXPECT_NEAR(std::abs(mix.amplitudes[4] - std::cos(th) * c_even(2, c)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(mix.amplitudes[5] - std::sin(th) * c_odd(2, c)), 0.0, 1e-15);
}

TEST(FockAmplitudes, TruncationErrors) {
    EXPECT_THROW(fock_amplitudes({0.0, 1.0}, 0.0), DomainError);
    EXPECT_THROW(fock_amplitudes({0.0, 6.0}, 1e-14, 16), TruncationError);
}
