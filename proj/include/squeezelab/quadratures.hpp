#pragma once

// Quadrature variances for q = (a† + a)/sqrt(2), p = i(a† - a)/sqrt(2) and the
// squeezing-transition polynomials in s = sin^2(theta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "squeezelab/errors.hpp"
#include "squeezelab/su11.hpp"

namespace squeezelab {

struct VariancePair {
    double var_q = 0.5;
    double var_p = 0.5;

    double product() const { return var_q * var_p; }
};

/// Variances in the conventional squeezed vacuum S(tau)|0>.
inline VariancePair variance_conventional(cplx tau) {
    const double r = std::abs(tau);
    const double phase_cos = r > 0.0 ? std::cos(std::arg(tau)) : 0.0;
    const double sh = std::sinh(r);
    const double cross = sh * std::cosh(r) * phase_cos;
    return {0.5 + sh * sh + cross, 0.5 + sh * sh - cross};
}

/// Variances in S(tau)|1>.
inline VariancePair variance_one_photon(cplx tau) {
    const double r = std::abs(tau);
    const double phase_cos = r > 0.0 ? std::cos(std::arg(tau)) : 0.0;
    const double sh = std::sinh(r);
    const double base = 0.5 + (1.0 + 3.0 * sh * sh);
    const double cross = 3.0 * sh * std::cosh(r) * phase_cos;
    return {base + cross, base - cross};
}

/// Variances in |alpha, tau, theta>, written term by term as three groups:
/// the theta-independent part, the sin^2 part, and the sin^2 cos^2 part.
inline VariancePair variance_general(const SqueezeParams& params, const DisentangledCoeffs& c) {
    const double s = params.s();
    const double cos2 = 1.0 - s;
    const double e_re = std::exp(-c.p_zero.real());  // exp(-(p0 + conj p0)/2)
    const double pm2 = std::norm(c.p_minus);
    const cplx x = std::exp(-c.p_zero) * c.p_minus;
    const double x_cc = 2.0 * x.real();               // x + c.c.
    const cplx y = std::exp(-0.5 * c.p_zero) * (1.0 - c.p_minus);
    const double y_plus_cc = 2.0 * y.real();          // y + c.c.
    const cplx y_minus_cc{0.0, 2.0 * y.imag()};       // y - c.c.

    const double var_q = 0.5 + (e_re * pm2 - 0.5 * x_cc) + (e_re * (1.0 + pm2) - x_cc) * s -
                         0.5 * y_plus_cc * y_plus_cc * s * cos2;
    const double var_p = 0.5 + (e_re * pm2 + 0.5 * x_cc) + (e_re * (1.0 + pm2) + x_cc) * s +
                         0.5 * (y_minus_cc * y_minus_cc).real() * s * cos2;
    return {var_q, var_p};
}

inline VariancePair variance_general(const SqueezeParams& params) {
    return variance_general(params, disentangle_general(params));
}

/// Coefficients of F(s) = A s^2 + B s + C and G(s) = L s^2 + M s + N with
/// var_q = 1/2 + F - G and var_p = 1/2 + F + G.
struct TransitionPolys {
    double A = 0, B = 0, C = 0;
    double L = 0, M = 0, N = 0;
    std::optional<double> x;  ///< M / L; empty when L == 0

    double F(double s) const { return (A * s + B) * s + C; }
    double G(double s) const { return (L * s + M) * s + N; }

    double x_value() const {
        if (!x) throw UndefinedError("transition polynomial: L = 0, x = M/L undefined");
        return *x;
    }
};

inline TransitionPolys transition_polys(const DisentangledCoeffs& c) {
    const double e_re = std::exp(-c.p_zero.real());
    const double r = std::abs(c.p_minus);
    const double r_cos = r > 0.0 ? r * std::cos(std::arg(c.p_minus)) : 0.0;  // |p-| cos(Phi_p)
    const cplx e = std::exp(-c.p_zero);
    const cplx one_minus = 1.0 - c.p_minus;

    TransitionPolys t;
    t.A = e_re * (1.0 + r * r - 2.0 * r_cos);
    t.B = e_re * 2.0 * r_cos;
    t.C = e_re * r * r;
    t.L = -(e * one_minus * one_minus).real();
    t.M = (e * (1.0 + c.p_minus * c.p_minus)).real();
    t.N = (e * c.p_minus).real();
    if (t.L != 0.0) t.x = t.M / t.L;
    return t;
}

inline TransitionPolys transition_polys(const SqueezeParams& params) {
    return transition_polys(disentangle_general(params));
}

/// Roots of G(s) = 0 in [0, 1], written through x = M/L using 2N = L + M:
/// s = (-x +- sqrt(x^2 - 2x - 2)) / 2. Both lie in [0, 1] iff x is in
/// [-1, 1 - sqrt(3)]. A double root is returned twice.
struct TransitionRoots {
    std::vector<double> roots;  ///< ascending

    bool empty() const { return roots.empty(); }
    std::size_t size() const { return roots.size(); }
};

inline TransitionRoots transition_roots(double x) {
    if (!std::isfinite(x)) throw DomainError("transition_roots: non-finite x");
    TransitionRoots out;
    double disc = x * x - 2.0 * x - 2.0;
    // Rounding near the double root at x = 1 - sqrt(3).
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (x * x + 2.0 * std::abs(x) + 2.0);
    if (disc < 0.0) {
        if (disc < -slack) return out;
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    const double s_minus = 0.5 * (-x - root);
    const double s_plus = 0.5 * (-x + root);
    const double tol = 1e-15;
    for (double s : {s_minus, s_plus}) {
        if (s >= -tol && s <= 1.0 + tol) out.roots.push_back(std::clamp(s, 0.0, 1.0));
    }
    return out;
}

/// G(s)/L = s^2 + x s + (1 + x)/2, the root polynomial as a function of x alone.
inline double monic_transition_poly(double x, double s) {
    return (s + x) * s + 0.5 * (1.0 + x);
}

enum class SqueezedQuadrature { Q, P, Neither };

constexpr std::string_view to_string(SqueezedQuadrature q) {
    switch (q) {
        case SqueezedQuadrature::Q: return "q";
        case SqueezedQuadrature::P: return "p";
        case SqueezedQuadrature::Neither: return "none";
    }
    return "?";
}

/// Which quadrature has the smaller variance (sign of G); Neither when G = 0.
inline SqueezedQuadrature smaller_variance_quadrature(double s, const TransitionPolys& polys) {
    const double g = polys.G(s);
    if (g > 0.0) return SqueezedQuadrature::Q;
    if (g < 0.0) return SqueezedQuadrature::P;
    return SqueezedQuadrature::Neither;
}

/// Sub-vacuum squeezing: the smaller variance must also be below 1/2.
inline SqueezedQuadrature squeezed_quadrature(double s, const TransitionPolys& polys) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("squeezed_quadrature: s outside [0, 1]");
    const double f = polys.F(s);
    const double g = polys.G(s);
    if (g > 0.0 && 0.5 + f - g < 0.5) return SqueezedQuadrature::Q;
    if (g < 0.0 && 0.5 + f + g < 0.5) return SqueezedQuadrature::P;
    return SqueezedQuadrature::Neither;
}

}  // namespace squeezelab
