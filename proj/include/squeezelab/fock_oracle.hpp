#pragma once

// Brute-force reference engine on a truncated Fock space. Everything here is
// built from the ladder operator a and plain linear algebra; nothing is shared
// with the closed forms of the analytic modules.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "squeezelab/errors.hpp"
#include "squeezelab/mach_zehnder.hpp"
#include "squeezelab/photon_stats.hpp"
#include "squeezelab/quadratures.hpp"
#include "squeezelab/states.hpp"
#include "squeezelab/su11.hpp"

namespace squeezelab::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

struct TruncatedOperator {
    Matrix entries;

    std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

/// a|n> = sqrt(n)|n-1> on {|0>, ..., |dim-1>}.
inline TruncatedOperator annihilation(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix a = Matrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {a};
}

struct Generators {
    TruncatedOperator k0, k_plus, k_minus;
};

/// K0 = (a†a + 1/2)/2, K+ = a†^2/2, K- = a^2/2, each formed by matrix products.
inline Generators build_generators(std::size_t dim) {
    if (dim < 4) throw DomainError("build_generators: dim must be >= 4");
    const Matrix a = annihilation(dim).entries;
    const Matrix ad = a.adjoint();
    const auto d = static_cast<Eigen::Index>(dim);
    Generators g;
    g.k0.entries = 0.5 * (ad * a + 0.5 * Matrix::Identity(d, d));
    g.k_plus.entries = 0.5 * (ad * ad);
    g.k_minus.entries = 0.5 * (a * a);
    return g;
}

inline Matrix generator_matrix(const SqueezeParams& params, std::size_t dim) {
    const auto g = build_generators(dim);
    return cplx{0.0, params.alpha} * g.k0.entries + params.tau * g.k_plus.entries -
           std::conj(params.tau) * g.k_minus.entries;
}

inline double one_norm(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

/// exp(A) by scaling and squaring with a Taylor series: A is scaled by 2^-s
/// until its 1-norm is at most 1/2, the series runs until terms stop
/// contributing, then the result is squared s times.
inline Matrix expm(const Matrix& A) {
    const double norm = one_norm(A);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix X = A / std::ldexp(1.0, squarings);
    const auto d = A.rows();
    Matrix result = Matrix::Identity(d, d);
    Matrix term = Matrix::Identity(d, d);
    for (int k = 1; k <= 40; ++k) {
        term = (term * X) / static_cast<double>(k);
        result += term;
        if (one_norm(term) < 1e-18 * one_norm(result)) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

namespace detail {

inline Vector vacuum_mix(double theta, Eigen::Index dim) {
    Vector w = Vector::Zero(dim);
    w(0) = std::cos(theta);
    w(1) = std::sin(theta);
    return w;
}

inline Eigen::Index top_block(Eigen::Index dim) { return std::max<Eigen::Index>(2, (dim + 9) / 10); }

// Amplitude the raising part of the generator can push past the cutoff, from
// the top 10% of the basis.
inline double leak_estimate(const Vector& psi, cplx tau) {
    const Eigen::Index d = psi.size();
    const Eigen::Index top = top_block(d);
    const double coupling = std::abs(tau) * 0.5 * std::sqrt(static_cast<double>(d) * static_cast<double>(d + 1));
    return coupling * psi.tail(top).norm();
}

inline double top_mass(const Vector& psi) { return psi.tail(top_block(psi.size())).squaredNorm(); }

}  // namespace detail

inline constexpr double kUnitaryLeakTol = 1e-8;

/// Dense U(alpha, tau) = exp(i alpha K0 + tau K+ - conj(tau) K-) on dim states.
/// Throws TruncationError (suggesting 2*dim) when U|omega> leaks past the cutoff.
inline TruncatedOperator unitary(const SqueezeParams& params, std::size_t dim, double leak_tol = kUnitaryLeakTol) {
    TruncatedOperator u{expm(generator_matrix(params, dim))};
    const Vector psi = u.entries * detail::vacuum_mix(params.theta, u.entries.rows());
    const double leak = detail::leak_estimate(psi, params.tau);
    if (leak > leak_tol) {
        throw TruncationError("unitary: truncation leak " + std::to_string(leak) + " at dim " + std::to_string(dim),
                              leak, 2 * dim);
    }
    return u;
}

/// max |(U†U - I)_ij| over the lowest `block` basis states.
inline double unitarity_defect(const TruncatedOperator& u, std::size_t block) {
    const auto b = static_cast<Eigen::Index>(std::min(block, u.dim()));
    const Matrix prod = u.entries.adjoint() * u.entries;
    return (prod.topLeftCorner(b, b) - Matrix::Identity(b, b)).cwiseAbs().maxCoeff();
}

/// Sparse generator, assembled from the sparse ladder operator by products.
inline SparseMatrix sparse_generator(const SqueezeParams& params, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    SparseMatrix a(d, d);
    a.reserve(Eigen::VectorXi::Constant(d, 1));
    for (Eigen::Index n = 1; n < d; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
    a.makeCompressed();
    const SparseMatrix ad = a.adjoint();
    SparseMatrix id(d, d);
    id.setIdentity();
    const SparseMatrix k0 = 0.5 * (SparseMatrix(ad * a) + 0.5 * id);
    const SparseMatrix kp = 0.5 * SparseMatrix(ad * ad);
    const SparseMatrix km = 0.5 * SparseMatrix(a * a);
    SparseMatrix g = cplx{0.0, params.alpha} * k0 + params.tau * kp - std::conj(params.tau) * km;
    g.makeCompressed();
    return g;
}

/// exp(G) v by Taylor steps of 1-norm at most 4 each.
inline Vector expm_action(const SparseMatrix& g, const Vector& v) {
    double norm = 0.0;
    for (Eigen::Index k = 0; k < g.outerSize(); ++k) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(g, k); it; ++it) col += std::abs(it.value());
        norm = std::max(norm, col);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(norm / 4.0)));
    const double h = 1.0 / steps;
    Vector x = v;
    Vector term(v.size());
    for (int s = 0; s < steps; ++s) {
        Vector acc = x;
        term = x;
        const double scale = x.norm();
        for (int k = 1; k <= 80; ++k) {
            term = (g * term) * (h / k);
            acc += term;
            if (term.norm() < 1e-18 * scale) break;
        }
        x = acc;
    }
    return x;
}

struct OracleState {
    FockVector state;  ///< tail_bound holds the squared norm in the top 10% of the basis
    std::size_t dim = 0;
    double leak = 0.0;
};

inline constexpr double kStateLeakTol = 1e-11;
inline constexpr std::size_t kMinOracleDim = 64;
inline constexpr std::size_t kMaxOracleDim = 16384;

/// U(alpha, tau)(cos theta |0> + sin theta |1>).
///
/// dim == 0 grows the basis from max(min_dim, 64) by doubling until the leak
/// estimate is at most leak_tol. A fixed dim is used as given and fails with
/// TruncationError if the leak exceeds leak_tol.
inline OracleState oracle_state(const SqueezeParams& params, std::size_t dim = 0, double leak_tol = kStateLeakTol,
                                std::size_t min_dim = kMinOracleDim) {
    const bool adaptive = dim == 0;
    std::size_t d = adaptive ? std::max(min_dim, kMinOracleDim) : dim;
    if (d < 4) throw DomainError("oracle_state: dim must be >= 4");
    for (;;) {
        const auto di = static_cast<Eigen::Index>(d);
        const Vector psi = expm_action(sparse_generator(params, d), detail::vacuum_mix(params.theta, di));
        const double leak = detail::leak_estimate(psi, params.tau);
        if (leak <= leak_tol) {
            OracleState out;
            out.dim = d;
            out.leak = leak;
            out.state.amplitudes.assign(psi.data(), psi.data() + psi.size());
            out.state.tail_bound = detail::top_mass(psi);
            return out;
        }
        if (!adaptive || 2 * d > kMaxOracleDim) {
            throw TruncationError("oracle_state: leak " + std::to_string(leak) + " at dim " + std::to_string(d), leak,
                                  adaptive ? 0 : 2 * d);
        }
        d *= 2;
    }
}

/// Quadrature variances by applying q and p to the state vector.
inline VariancePair oracle_variances(const FockVector& state) {
    const auto d = static_cast<Eigen::Index>(state.size());
    Vector psi = Vector::Zero(d + 1);
    for (Eigen::Index n = 0; n < d; ++n) psi(n) = state.amplitudes[static_cast<std::size_t>(n)];
    const double norm2 = psi.squaredNorm();
    if (!(norm2 > 0.0)) throw DomainError("oracle_variances: zero vector");

    // a psi and a† psi in the (d+1)-dimensional space that holds a† psi exactly.
    Vector a_psi = Vector::Zero(d + 1);
    Vector ad_psi = Vector::Zero(d + 1);
    for (Eigen::Index n = 0; n < d; ++n) {
        a_psi(n) = std::sqrt(static_cast<double>(n + 1)) * psi(n + 1);
        ad_psi(n + 1) = std::sqrt(static_cast<double>(n + 1)) * psi(n);
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Vector q_psi = inv_sqrt2 * (ad_psi + a_psi);
    const Vector p_psi = cplx{0.0, inv_sqrt2} * (ad_psi - a_psi);

    const double mean_q = psi.dot(q_psi).real() / norm2;  // Eigen's dot conjugates the left operand
    const double mean_p = psi.dot(p_psi).real() / norm2;
    const double var_q = q_psi.squaredNorm() / norm2 - mean_q * mean_q;
    const double var_p = p_psi.squaredNorm() / norm2 - mean_p * mean_p;
    return {var_q, var_p};
}

inline PhotonDistribution oracle_distribution(const FockVector& state) {
    PhotonDistribution out;
    out.parity = Parity::Mixed;
    KahanSum total;
    out.probs.reserve(state.size());
    for (const auto& amp : state.amplitudes) {
        out.probs.push_back(std::norm(amp));
        total.add(out.probs.back());
    }
    out.tail = state.tail_bound;
    out.norm_defect = std::abs(1.0 - total.value());
    return out;
}

/// Product state on F_a (x) F_b, stored as a dim_a x dim_b matrix.
struct TwoModeState {
    Matrix amplitudes;
    double tail_bound = 0.0;

    std::size_t dim_a() const { return static_cast<std::size_t>(amplitudes.rows()); }
    std::size_t dim_b() const { return static_cast<std::size_t>(amplitudes.cols()); }
};

struct TwoModeDims {
    std::size_t a = 64;
    std::size_t b = 256;
};

/// e^{-|z|^2/2} z^n / sqrt(n!)
inline Vector coherent_amplitudes(cplx z, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Vector c(d);
    c(0) = std::exp(-0.5 * std::norm(z));
    for (Eigen::Index n = 1; n < d; ++n) c(n) = c(n - 1) * z / std::sqrt(static_cast<double>(n));
    return c;
}

/// Smallest dim_a accepted for a coherent amplitude z.
inline std::size_t min_coherent_dim(cplx z) {
    const double r2 = std::norm(z);
    return static_cast<std::size_t>(std::ceil(r2 + 10.0 * std::sqrt(r2) + 20.0));
}

/// n_out = |t1|^2 n_a + |t2|^2 n_b + conj(t1) t2 a† b + t1 conj(t2) a b†
/// applied to psi; the result lives on (dim_a + 1) x (dim_b + 1).
inline Matrix apply_output_number(const Matrix& psi, cplx t1, cplx t2) {
    const Eigen::Index da = psi.rows();
    const Eigen::Index db = psi.cols();
    Matrix out = Matrix::Zero(da + 1, db + 1);
    const double w1 = std::norm(t1);
    const double w2 = std::norm(t2);
    const cplx up_down = std::conj(t1) * t2;  // a† (x) b
    const cplx down_up = t1 * std::conj(t2);  // a (x) b†
    for (Eigen::Index j = 0; j < db; ++j) {
        for (Eigen::Index i = 0; i < da; ++i) {
            const cplx v = psi(i, j);
            if (v == cplx{0.0, 0.0}) continue;
            out(i, j) += (w1 * static_cast<double>(i) + w2 * static_cast<double>(j)) * v;
            if (j > 0) out(i + 1, j - 1) += up_down * std::sqrt(static_cast<double>((i + 1) * j)) * v;
            if (i > 0) out(i - 1, j + 1) += down_up * std::sqrt(static_cast<double>(i * (j + 1))) * v;
        }
    }
    return out;
}

/// Output-port moments for |z> (x) |alpha, tau, theta>. Port a' uses the first
/// row of T, port b' the second.
inline MZObservables oracle_mz(const MZConfig& cfg, const SqueezeParams& params, TwoModeDims dims = {}) {
    const std::size_t need = min_coherent_dim(cfg.z);
    if (dims.a < need) {
        throw TruncationError("oracle_mz: dim_a " + std::to_string(dims.a) + " too small for |z|", 1.0, need);
    }
    const auto squeezed = oracle_state(params, 0, kStateLeakTol, dims.b);
    const auto& amps = squeezed.state.amplitudes;
    const Vector b_state = Eigen::Map<const Vector>(amps.data(), static_cast<Eigen::Index>(amps.size()));
    const Vector a_state = coherent_amplitudes(cfg.z, dims.a);

    TwoModeState psi{a_state * b_state.transpose(), squeezed.state.tail_bound};
    const double norm2 = psi.amplitudes.squaredNorm();

    const auto t = transfer_matrix(cfg.phi);
    const cplx t1 = cfg.port == Port::APrime ? t.t11 : t.t21;
    const cplx t2 = cfg.port == Port::APrime ? t.t12 : t.t22;
    const Matrix n_psi = apply_output_number(psi.amplitudes, t1, t2);

    MZObservables out;
    const Eigen::Index da = psi.amplitudes.rows();
    const Eigen::Index db = psi.amplitudes.cols();
    out.mean_n = (psi.amplitudes.conjugate().cwiseProduct(n_psi.topLeftCorner(da, db))).sum().real() / norm2;
    out.mean_n2 = n_psi.squaredNorm() / norm2;
    out.mandel_q = out.mean_n > kMinMeanForQ ? mandel_q(out.mean_n, out.mean_n2) : NAN;
    return out;
}

}  // namespace squeezelab::oracle
