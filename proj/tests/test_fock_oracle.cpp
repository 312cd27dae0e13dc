#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/states.hpp"

using namespace squeezelab;
using oracle::Matrix;

namespace {

double interior_max(const Matrix& m, Eigen::Index b) { return m.topLeftCorner(b, b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Generators, Commutators) {
    for (std::size_t dim : {8u, 32u, 64u}) {
        const auto g = oracle::build_generators(dim);
        const Matrix& k0 = g.k0.entries;
        const Matrix& kp = g.k_plus.entries;
        const Matrix& km = g.k_minus.entries;
        const auto b = static_cast<Eigen::Index>(dim) - 2;
        // Scale-relative: entries grow like dim^2.
        const double scale = std::max(1.0, kp.cwiseAbs().maxCoeff());
        EXPECT_LT(interior_max(k0 * kp - kp * k0 - kp, b) / scale, 1e-15 * dim);
        EXPECT_LT(interior_max(k0 * km - km * k0 + km, b) / scale, 1e-15 * dim);
        EXPECT_LT(interior_max(kp * km - km * kp + 2.0 * k0, b) / scale, 1e-15 * dim);
    }
    const auto g = oracle::build_generators(32);
    EXPECT_LT(interior_max(g.k0.entries * g.k_plus.entries - g.k_plus.entries * g.k0.entries - g.k_plus.entries, 30),
              1e-12);
    EXPECT_THROW(oracle::build_generators(3), DomainError);
}

TEST(Generators, LowestStatesAnnihilated) {
    const auto g = oracle::build_generators(16);
    EXPECT_EQ(g.k_minus.entries.col(0).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(g.k_minus.entries.col(1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Expm, IdentityAndScalar) {
    const Matrix z = Matrix::Zero(5, 5);
    EXPECT_LT((oracle::expm(z) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-16);
    const Matrix d = cplx{0.3, 2.0} * Matrix::Identity(3, 3);
    EXPECT_LT(std::abs(oracle::expm(d)(1, 1) - std::exp(cplx{0.3, 2.0})), 1e-14);
}

TEST(Unitary, IdentityAtOrigin) {
    const auto u = oracle::unitary({0.0, 0.0}, 16);
    EXPECT_LT((u.entries - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Unitary, DefectAndFirstColumn) {
    const SqueezeParams p(1.0, 1.0);
    const auto u = oracle::unitary(p, 256);
    EXPECT_LT(oracle::unitarity_defect(u, 128), 1e-9);
    const auto c = disentangle_general(p);
    for (std::size_t n = 0; n < 40; ++n) {
        EXPECT_NEAR(std::abs(u.entries(static_cast<Eigen::Index>(2 * n), 0) - c_even(n, c)), 0.0, 1e-8) << n;
    }
}

TEST(Unitary, TooSmallBasisThrows) {
    try {
        oracle::unitary({0.0, 2.0}, 16);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError& e) {
        EXPECT_EQ(e.suggested_dim(), 32u);
        EXPECT_GT(e.achieved_bound(), oracle::kUnitaryLeakTol);
    }
}

TEST(OracleState, ActionMatchesDenseExponential) {
    const SqueezeParams p(-2.0, cplx{0.5, 0.5}, 0.7);
    const auto dense = oracle::unitary(p, 128);
    const auto s = oracle::oracle_state(p, 128);
    for (Eigen::Index n = 0; n < 60; ++n) {
        const cplx expect = dense.entries(n, 0) * std::cos(p.theta) + dense.entries(n, 1) * std::sin(p.theta);
        EXPECT_NEAR(std::abs(s.state.amplitudes[static_cast<std::size_t>(n)] - expect), 0.0, 1e-12);
    }
}

TEST(OracleState, AdaptiveDimGrowsWithTau) {
    std::size_t prev = 0;
    for (double tau : {0.2, 1.0, 2.0}) {
        const auto s = oracle::oracle_state({0.0, tau});
        EXPECT_LE(s.leak, oracle::kStateLeakTol);
        EXPECT_GE(s.dim, prev);
        prev = s.dim;
    }
    EXPECT_THROW(oracle::oracle_state({0.0, 2.0}, 64), TruncationError);
}

TEST(OracleState, DeviationShrinksWithDim) {
    // Fixed-dim runs: agreement with the analytic amplitudes tightens with dim.
    const SqueezeParams p(0.5, 1.0);
    const auto c = disentangle_general(p);
    double prev = INFINITY;
    for (std::size_t dim : {24u, 48u, 96u}) {
        const auto s = oracle::oracle_state(p, dim, 1.0);
        double dev = 0.0;
        for (std::size_t n = 0; 2 * n < 16; ++n) dev = std::max(dev, std::abs(s.state.amplitudes[2 * n] - c_even(n, c)));
        EXPECT_LT(dev, prev);
        prev = dev;
    }
    EXPECT_LT(prev, 1e-10);
}

TEST(TwoMode, OnePhotonRouting) {
    // |0> (x) |1> at port a': <n> = |T12|^2.
    const MZConfig cfg{0.0, 0.9, Port::APrime};
    const auto o = oracle::oracle_mz(cfg, {0.0, 0.0, std::numbers::pi / 2});
    EXPECT_NEAR(o.mean_n, std::norm(transfer_matrix(0.9).t12), 1e-14);
}

TEST(TwoMode, CoherentVacuumIsPoissonian) {
    const MZConfig cfg{1.0, std::numbers::pi / 2, Port::APrime};
    const auto o = oracle::oracle_mz(cfg, {0.0, 0.0});
    EXPECT_NEAR(o.mandel_q, 0.0, 1e-8);
}

TEST(TwoMode, RejectsSmallCoherentBasis) {
    const MZConfig cfg{cplx{6.0, 0.0}, 1.0, Port::APrime};
    EXPECT_THROW(oracle::oracle_mz(cfg, {0.0, 0.1}, {16, 64}), TruncationError);
}
