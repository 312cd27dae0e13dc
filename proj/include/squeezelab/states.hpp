#pragma once

// Fock amplitudes of the generalized squeezed vacuum
//
//   |alpha, tau, theta> = cos(theta) U|0> + sin(theta) U|1>,
//   U|0> = sum_n c_{2n} |2n>,  U|1> = sum_n c_{2n+1} |2n+1>.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "squeezelab/errors.hpp"
#include "squeezelab/su11.hpp"

namespace squeezelab {

/// Amplitudes indexed by photon number, plus an upper bound on the squared
/// norm of everything past the last stored entry.
struct FockVector {
    std::vector<cplx> amplitudes;
    double tail_bound = 0.0;

    std::size_t size() const { return amplitudes.size(); }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

namespace detail {

// log( sqrt(k!) / n! ) for the amplitude prefactors, k = 2n or 2n+1.
inline double log_amp_factor(std::size_t k, std::size_t n) {
    return 0.5 * std::lgamma(static_cast<double>(k) + 1.0) - std::lgamma(static_cast<double>(n) + 1.0);
}

inline cplx sector_amplitude(std::size_t n, std::size_t k, double p0_weight, const DisentangledCoeffs& c) {
    const cplx lead = std::exp(p0_weight * c.p_zero);
    if (n == 0) return lead;
    const double mag = std::abs(c.p_plus);
    if (mag == 0.0) return cplx{0.0, 0.0};
    const double nd = static_cast<double>(n);
    const double log_mag = p0_weight * c.p_zero.real() + nd * std::log(mag / 2.0) + log_amp_factor(k, n);
    const double phase = p0_weight * c.p_zero.imag() + nd * std::arg(c.p_plus);
    return std::polar(std::exp(log_mag), phase);
}

}  // namespace detail

/// c_{2n} = exp(p0/4) (p+/2)^n sqrt((2n)!)/n!
inline cplx c_even(std::size_t n, const DisentangledCoeffs& c) {
    return detail::sector_amplitude(n, 2 * n, 0.25, c);
}

/// c_{2n+1} = exp(3p0/4) (p+/2)^n sqrt((2n+1)!)/n!
inline cplx c_odd(std::size_t n, const DisentangledCoeffs& c) {
    return detail::sector_amplitude(n, 2 * n + 1, 0.75, c);
}

inline constexpr std::size_t kMaxFockTerms = std::size_t{1} << 22;

/// Amplitudes of |alpha, tau, theta> truncated so that tail_bound <= eps.
///
/// Successive weights within a sector change by y(2n+1)/(2n+2) (even,
/// increasing to y) and y(2n+3)/(2n+2) (odd, decreasing to y), y = |p+|^2,
/// so each remaining tail is bounded by a geometric series.
inline FockVector fock_amplitudes(const SqueezeParams& params, double eps,
                                  std::size_t max_terms = kMaxFockTerms) {
    if (!(eps > 0.0)) throw DomainError("fock_amplitudes: eps must be positive");
    const auto coeffs = disentangle_general(params);
    const double ct = params.cos_theta();
    const double st = params.sin_theta();
    const double w_even = ct * ct;
    const double w_odd = st * st;
    const double y = coeffs.abs2_plus();

    FockVector out;
    double bound = 1.0;
    for (std::size_t n = 0;; ++n) {
        const cplx ce = c_even(n, coeffs);
        const cplx co = c_odd(n, coeffs);
        out.amplitudes.push_back(ct * ce);
        out.amplitudes.push_back(st * co);

        const double nd = static_cast<double>(n);
        const double r_even = y;
        const double r_odd = y * (2.0 * nd + 3.0) / (2.0 * nd + 2.0);
        const double tail_even = r_even < 1.0 ? std::norm(ce) * r_even / (1.0 - r_even) : INFINITY;
        const double tail_odd = r_odd < 1.0 ? std::norm(co) * r_odd / (1.0 - r_odd) : INFINITY;
        bound = (w_even > 0.0 ? w_even * tail_even : 0.0) + (w_odd > 0.0 ? w_odd * tail_odd : 0.0);
        if (bound <= eps) break;
        if (out.amplitudes.size() >= max_terms) {
            throw TruncationError("fock_amplitudes: tail bound " + std::to_string(bound) +
                                      " above eps after " + std::to_string(out.amplitudes.size()) + " terms",
                                  bound);
        }
    }
    out.tail_bound = bound;
    // Drop the trailing odd slot when only the even sector is populated.
    while (out.amplitudes.size() > 1 && out.amplitudes.back() == cplx{0.0, 0.0}) out.amplitudes.pop_back();
    return out;
}

}  // namespace squeezelab
