#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/photon_stats.hpp"

using namespace squeezelab;

constexpr double kPi = std::numbers::pi;

namespace {

double binom_central(int n) { return std::exp(std::lgamma(2.0 * n + 1) - 2.0 * std::lgamma(n + 1.0)); }

}  // namespace

TEST(SectorProbabilities, LeadingTerms) {
    const auto c = disentangle_general({1.0, cplx{0.6, 0.2}});
    const double gap = 1.0 - c.abs2_plus();
    EXPECT_NEAR(p_even(0, c), std::sqrt(gap), 1e-15);
    EXPECT_NEAR(p_odd(0, c), std::pow(gap, 1.5), 1e-15);
}

TEST(SectorProbabilities, KnownSqueezedVacuum) {
    const double r = 1.0;
    const auto c = disentangle_general({0.0, r});
    const double t2 = std::pow(std::tanh(r), 2);
    for (int n = 0; n <= 20; ++n) {
        const double expect = binom_central(n) * std::pow(t2 / 4, n) / std::cosh(r);
        EXPECT_NEAR(p_even(n, c), expect, 1e-12) << n;
    }
}

TEST(SectorProbabilities, MatchOracle) {
    const auto check = [](const SqueezeParams& p, int nmax) {
        const auto c = disentangle_general(p);
        const auto o = oracle::oracle_distribution(oracle::oracle_state(p).state);
        const bool odd = p.theta > 0.0;
        for (int n = 0; n <= nmax; ++n) {
            const std::size_t N = 2 * n + (odd ? 1 : 0);
            EXPECT_NEAR(odd ? p_odd(n, c) : p_even(n, c), o.probs[N], 1e-8) << n;
        }
    };
    check({1.5, 1.0, 0.0}, 6);
    check({0.0, 2.0, kPi / 2}, 10);
}

TEST(SectorProbabilities, SeparatelyNormalized) {
    for (const SqueezeParams& p : {SqueezeParams(0.0, 1.0), SqueezeParams(3.0, 1.0), SqueezeParams(4.0, 2.0),
                                   SqueezeParams(0.0, 2.0), SqueezeParams(-7.0, cplx{1.0, 1.0})}) {
        const auto c = disentangle_general(p);
        const auto even = distribution_even(c);
        const auto odd = distribution_odd(c);
        EXPECT_LT(even.norm_defect, 1e-9);
        EXPECT_LT(odd.norm_defect, 1e-9);
        double se = 0.0, so = 0.0;
        for (double v : even.probs) se += v;
        for (double v : odd.probs) so += v;
        EXPECT_NEAR(se, 1.0, 1e-9);
        EXPECT_NEAR(so, 1.0, 1e-9);
    }
}

TEST(Means, ClosedForms) {
    const auto id = disentangle_general({0.0, 0.0});
    EXPECT_DOUBLE_EQ(mean_n_even(id), 0.0);
    EXPECT_DOUBLE_EQ(mean_n_odd(id), 1.0);
    EXPECT_NEAR(mean_n_even(disentangle_general({0.0, 1.0})), std::pow(std::sinh(1.0), 2), 1e-13);
}

TEST(Means, SeriesAgree) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const SqueezeParams p(20 * u(rng) - 10, std::polar(2 * u(rng), 2 * kPi * u(rng)), kPi / 2 * u(rng));
        const auto c = disentangle_general(p);
        const double me = mean_n_even(c), mo = mean_n_odd(c);
        EXPECT_NEAR(series_mean(distribution_even(c)), me, 1e-8 * std::max(1.0, me));
        EXPECT_NEAR(series_mean(distribution_odd(c)), mo, 1e-8 * std::max(1.0, mo));
        EXPECT_NEAR(series_mean(distribution_mixed(p)), mean_n_total(p, c), 1e-8 * std::max(1.0, mo));
    }
}

TEST(MeanForm, RoundTrip) {
    for (const SqueezeParams& p : {SqueezeParams(0.0, 0.0), SqueezeParams(0.0, 1.0), SqueezeParams(2.5, 1.0),
                                   SqueezeParams(-3.0, cplx{0.0, 2.0}), SqueezeParams(9.0, 0.3)}) {
        const auto c = disentangle_general(p);
        for (int n = 0; n <= 12; ++n) {
            EXPECT_NEAR(p_even_from_mean(n, mean_n_even(c)), p_even(n, c), 1e-10);
            EXPECT_NEAR(p_odd_from_mean(n, mean_n_odd(c)), p_odd(n, c), 1e-10);
        }
    }
    EXPECT_DOUBLE_EQ(p_even_from_mean(0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(p_odd_from_mean(0, 1.0), 1.0);
    EXPECT_THROW(p_even_from_mean(0, -0.1), DomainError);
    EXPECT_THROW(p_odd_from_mean(0, 0.5), DomainError);
}

TEST(MeanForm, UncorrectedOddPrefactorIsInconsistent) {
    // The odd-sector form with prefactor 3^{3/2} (<n>_o + 1)^{-3/2} and no
    // central binomial gives (3/2)^{3/2} at <n>_o = 1, n = 0, not 1.
    const auto uncorrected = [](int n, double mo) {
        return std::pow(3.0, 1.5) * (2.0 * n + 1) * std::pow(mo + 1.0, -1.5) *
               std::pow((mo - 1.0) / (4.0 * (mo + 2.0)), n);
    };
    EXPECT_NEAR(uncorrected(0, 1.0), std::pow(1.5, 1.5), 1e-15);
    EXPECT_GT(std::abs(uncorrected(0, 1.0) - p_odd(0, disentangle_general({0.0, 0.0}))), 0.8);
    // The substituted form is exact there.
    EXPECT_NEAR(p_odd_from_mean(0, 1.0), 1.0, 1e-15);

    // Away from p+ = 0 the uncorrected forms also miss C(2n, n).
    const auto c = disentangle_general({0.0, 1.0});
    const double me = mean_n_even(c);
    const double uncorrected_even_n2 = std::pow(me + 1.0, -0.5) * std::pow(me / (4.0 * (me + 1.0)), 2);
    EXPECT_NEAR(p_even(2, c) / uncorrected_even_n2, binom_central(2), 1e-12);
}

TEST(Mixed, Probabilities) {
    const SqueezeParams p0(0.7, 1.0, 0.0);
    EXPECT_EQ(p_N(3, p0), 0.0);
    const SqueezeParams p(0.0, 1.0, kPi / 4);
    EXPECT_NEAR(p_N(2, p), 0.5 * p_even(1, disentangle_general(p)), 1e-15);
    const auto d = distribution_mixed({1.0, 1.0, kPi / 3});
    EXPECT_LT(d.norm_defect, 1e-9);
}

TEST(Mixed, MeanEndpoints) {
    EXPECT_DOUBLE_EQ(mean_n_total({0.0, 0.0, 0.0}), 0.0);
    EXPECT_NEAR(mean_n_total({0.0, 0.0, kPi / 2}), 1.0, 1e-15);
    const SqueezeParams p(1.0, 1.0, kPi / 4);
    EXPECT_NEAR(series_mean(distribution_mixed(p)), mean_n_total(p), 1e-8);
}

TEST(Mixed, AlphaSharpensVacuumPeak) {
    // At tau = 1 the n = 0 probability grows with alpha over {0, 1.5, 2.5, 3}.
    double prev = 0.0;
    for (double a : {0.0, 1.5, 2.5, 3.0}) {
        const double p0 = p_even(0, disentangle_general({a, 1.0}));
        EXPECT_GT(p0, prev);
        prev = p0;
    }
}
