#pragma once

// Disentanglement of SU(1,1) group elements in the one-mode (Schwinger)
// realization K- = a^2/2, K+ = a†^2/2, K0 = (n + 1/2)/2:
//
//   U(alpha, tau) = exp(i alpha K0 + tau K+ - conj(tau) K-)
//                 = exp(p+ K+) exp(p0 K0) exp(p- K-)

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

#include "squeezelab/errors.hpp"

namespace squeezelab {

using cplx = std::complex<double>;

inline constexpr double kDefaultRegimeTol = 1e-10;

/// Control triple of the generalized squeezed vacuum |alpha, tau, theta>.
/// theta is clamped to [0, pi/2].
struct SqueezeParams {
    double alpha = 0.0;
    cplx tau{0.0, 0.0};
    double theta = 0.0;

    SqueezeParams() = default;
    SqueezeParams(double alpha_, cplx tau_, double theta_ = 0.0)
        : alpha(alpha_), tau(tau_), theta(theta_) {
        if (!std::isfinite(alpha) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()) ||
            !std::isfinite(theta)) {
            throw DomainError("SqueezeParams: non-finite parameter");
        }
        theta = std::clamp(theta, 0.0, std::numbers::pi / 2);
    }

    /// cos and sin of theta, exact at the endpoint pi/2.
    double cos_theta() const { return theta == std::numbers::pi / 2 ? 0.0 : std::cos(theta); }
    double sin_theta() const { return theta == std::numbers::pi / 2 ? 1.0 : std::sin(theta); }

    /// s = sin^2(theta), the weight of the one-photon component of the vacuum.
    double s() const { return sin_theta() * sin_theta(); }
};

enum class Regime { Hyperbolic, Trigonometric, Transition };

constexpr std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Hyperbolic: return "hyperbolic";
        case Regime::Trigonometric: return "trigonometric";
        case Regime::Transition: return "transition";
    }
    return "?";
}

/// Normal-ordered coefficients (p+, p0, p-). For the conventional squeezing
/// operator these are (t+, t0, t-).
struct DisentangledCoeffs {
    cplx p_plus{0.0, 0.0};
    cplx p_zero{0.0, 0.0};
    cplx p_minus{0.0, 0.0};
    Regime regime = Regime::Transition;
    double beta = 0.0;  ///< sqrt(| |tau|^2 - alpha^2/4 |)

    double abs2_plus() const { return std::norm(p_plus); }
    /// 1 - |p+|^2 evaluated as exp(Re p0); free of cancellation as |p+| -> 1.
    double one_minus_abs2_plus() const { return std::exp(p_zero.real()); }
};

/// Classify by the sign of |tau|^2 - alpha^2/4; |difference| within
/// tol * max(|tau|^2, alpha^2/4) counts as the transition case.
inline Regime classify_regime(const SqueezeParams& params, double tol = kDefaultRegimeTol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("classify_regime: tol must be positive");
    const double t2 = std::norm(params.tau);
    const double a2 = params.alpha * params.alpha / 4.0;
    const double band = tol * std::max(t2, a2);
    const double diff = t2 - a2;
    if (diff > band) return Regime::Hyperbolic;
    if (diff < -band) return Regime::Trigonometric;
    return Regime::Transition;
}

namespace detail {

inline constexpr double kSeriesBeta = 1e-6;

// ln(cosh x) for x >= 0 without overflow.
inline double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

}  // namespace detail

/// Coefficients of the general SU(1,1) element in every regime.
///
/// One formula in b2 = |tau|^2 - alpha^2/4 covers all three regimes:
/// with S = sinh(beta)/beta, C = cosh(beta) (b2 > 0) or the trigonometric
/// counterparts (b2 < 0), and w = D/beta = C - i(alpha/2)S,
///
///   p+ = tau S / w,  p- = -conj(tau) S / w,  p0 = -2 ln w.
///
/// At b2 = 0 this is exactly the transition-case closed form. ln w is taken
/// on the branch continuous in (alpha, tau) starting from ln 1 = 0, so that
/// exp(p0/4) is the actual vacuum amplitude <0|U|0> and not merely its modulus.
inline DisentangledCoeffs disentangle_general(const SqueezeParams& params) {
    const double alpha = params.alpha;
    const cplx tau = params.tau;
    const double half_alpha = alpha / 2.0;
    const double b2 = std::norm(tau) - half_alpha * half_alpha;

    DisentangledCoeffs out;
    out.regime = classify_regime(params);
    out.beta = std::sqrt(std::abs(b2));
    const double beta = out.beta;

    cplx ratio;  // S / w
    cplx log_w;
    if (beta < detail::kSeriesBeta) {
        const double S = 1.0 + b2 / 6.0 + b2 * b2 / 120.0;
        const double C = 1.0 + b2 / 2.0 + b2 * b2 / 24.0;
        const cplx w{C, -half_alpha * S};
        ratio = S / w;
        log_w = std::log(w);
    } else if (b2 > 0.0) {
        // Divide through by cosh(beta): w = cosh(beta) * (1 - i(alpha/2) tanh(beta)/beta).
        const double tb = std::tanh(beta) / beta;
        const cplx w_scaled{1.0, -half_alpha * tb};
        ratio = tb / w_scaled;
        log_w = detail::log_cosh(beta) + std::log(w_scaled);
    } else {
        const double S = std::sin(beta) / beta;
        const double C = std::cos(beta);
        const cplx w{C, -half_alpha * S};
        ratio = S / w;
        // w winds clockwise (alpha > 0) as beta grows and crosses the
        // negative real axis at beta = (2k+1)pi; its continuous argument
        // stays within pi/2 of -sign(alpha) beta.
        const double principal = std::arg(w);
        const double target = alpha > 0.0 ? -beta : beta;
        const double turns = std::round((target - principal) / (2.0 * std::numbers::pi));
        log_w = cplx{std::log(std::abs(w)), principal + 2.0 * std::numbers::pi * turns};
    }

    out.p_plus = tau * ratio;
    out.p_minus = -std::conj(tau) * ratio;
    out.p_zero = -2.0 * log_w;
    if (!std::isfinite(std::abs(out.p_plus)) || !std::isfinite(std::abs(out.p_zero))) {
        throw DomainError("disentangle_general: parameters too large, coefficients overflow");
    }
    return out;
}

/// Coefficients of the conventional squeezing operator S(tau) = U(0, tau).
inline DisentangledCoeffs disentangle_conventional(cplx tau) {
    if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
        throw DomainError("disentangle_conventional: non-finite tau");
    }
    DisentangledCoeffs out;
    const double r = std::abs(tau);
    out.beta = r;
    if (r == 0.0) {
        out.regime = Regime::Transition;
        return out;
    }
    out.regime = Regime::Hyperbolic;
    out.p_plus = (tau / r) * std::tanh(r);
    out.p_minus = -std::conj(out.p_plus);
    out.p_zero = -2.0 * detail::log_cosh(r);
    return out;
}

/// |exp(-(p0 + conj p0)/2)(1 - |p+|^2) - 1|; zero for exact coefficients.
inline double property_residual(const DisentangledCoeffs& c) {
    return std::abs(std::exp(-c.p_zero.real()) * (1.0 - c.abs2_plus()) - 1.0);
}

}  // namespace squeezelab
