#pragma once

// Photon-number statistics of the generalized squeezed vacuum. Everything
// depends on the coefficients only through y = |p+|^2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

#include "squeezelab/errors.hpp"
#include "squeezelab/su11.hpp"

namespace squeezelab {

enum class Parity { Even, Odd, Mixed };

constexpr std::string_view to_string(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        case Parity::Mixed: return "mixed";
    }
    return "?";
}

/// probs[n] is p_{2n} (Even), p_{2n+1} (Odd) or p_N (Mixed).
struct PhotonDistribution {
    Parity parity = Parity::Mixed;
    std::vector<double> probs;
    double tail = 0.0;         ///< bound on the mass beyond probs.back()
    double norm_defect = 0.0;  ///< |1 - sum(probs) - tail|
};

/// Compensated summation.
class KahanSum {
public:
    void add(double v) {
        const double y = v - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

namespace detail {

// log of (y/4)^n C(2n, n)
inline double log_central_term(std::size_t n, double y) {
    const double nd = static_cast<double>(n);
    return nd * std::log(y / 4.0) + std::lgamma(2.0 * nd + 1.0) - 2.0 * std::lgamma(nd + 1.0);
}

inline double central_term(std::size_t n, double y) {
    if (n == 0) return 1.0;
    if (y <= 0.0) return 0.0;
    return std::exp(log_central_term(n, y));
}

}  // namespace detail

/// p_{2n} = (1 - |p+|^2)^{1/2} (|p+|^2/4)^n C(2n, n)
inline double p_even(std::size_t n, const DisentangledCoeffs& c) {
    return std::sqrt(c.one_minus_abs2_plus()) * detail::central_term(n, c.abs2_plus());
}

/// p_{2n+1} = (1 - |p+|^2)(2n + 1) p_{2n}
inline double p_odd(std::size_t n, const DisentangledCoeffs& c) {
    return c.one_minus_abs2_plus() * (2.0 * static_cast<double>(n) + 1.0) * p_even(n, c);
}

namespace detail {

inline double checked_gap(const DisentangledCoeffs& c) {
    const double gap = c.one_minus_abs2_plus();
    if (gap < 1e-12) throw UndefinedError("photon moments diverge: 1 - |p+|^2 < 1e-12");
    return gap;
}

}  // namespace detail

/// <n>_e = |p+|^2 / (1 - |p+|^2)
inline double mean_n_even(const DisentangledCoeffs& c) {
    return c.abs2_plus() / detail::checked_gap(c);
}

/// <n>_o = (1 + 2|p+|^2) / (1 - |p+|^2)
inline double mean_n_odd(const DisentangledCoeffs& c) {
    return (1.0 + 2.0 * c.abs2_plus()) / detail::checked_gap(c);
}

/// p_{2n} in terms of <n>_e, from |p+|^2 = <n>_e / (<n>_e + 1):
///   (<n>_e + 1)^{-1/2} C(2n, n) [<n>_e / (4(<n>_e + 1))]^n
inline double p_even_from_mean(std::size_t n, double mean_e) {
    if (!(mean_e >= 0.0) || !std::isfinite(mean_e)) throw DomainError("p_even_from_mean: mean must be >= 0");
    const double y = mean_e / (mean_e + 1.0);
    return std::pow(mean_e + 1.0, -0.5) * detail::central_term(n, y);
}

/// p_{2n+1} in terms of <n>_o, from |p+|^2 = (<n>_o - 1) / (<n>_o + 2):
///   3^{3/2} (2n + 1) (<n>_o + 2)^{-3/2} C(2n, n) [(<n>_o - 1) / (4(<n>_o + 2))]^n
inline double p_odd_from_mean(std::size_t n, double mean_o) {
    if (!(mean_o >= 1.0) || !std::isfinite(mean_o)) {
        throw DomainError("p_odd_from_mean: the odd sector holds at least one photon, mean must be >= 1");
    }
    const double y = (mean_o - 1.0) / (mean_o + 2.0);
    return std::pow(3.0, 1.5) * (2.0 * static_cast<double>(n) + 1.0) * std::pow(mean_o + 2.0, -1.5) *
           detail::central_term(n, y);
}

/// Probability of N photons in |alpha, tau, theta>; the two parity sectors
/// do not interfere.
inline double p_N(std::size_t N, const SqueezeParams& params, const DisentangledCoeffs& c) {
    const double ct = params.cos_theta();
    const double st = params.sin_theta();
    return N % 2 == 0 ? ct * ct * p_even(N / 2, c) : st * st * p_odd(N / 2, c);
}

inline double p_N(std::size_t N, const SqueezeParams& params) {
    return p_N(N, params, disentangle_general(params));
}

inline double mean_n_total(const SqueezeParams& params, const DisentangledCoeffs& c) {
    const double s = params.s();
    return (1.0 - s) * mean_n_even(c) + s * mean_n_odd(c);
}

inline double mean_n_total(const SqueezeParams& params) {
    return mean_n_total(params, disentangle_general(params));
}

inline constexpr double kSeriesRelCutoff = 1e-12;
inline constexpr std::size_t kMaxSeriesTerms = std::size_t{1} << 24;

namespace detail {

// Accumulate terms until the geometric bound on what remains drops below
// rel_cutoff of the accumulated mass. ratio_bound(n) bounds term(k+1)/term(k)
// for all k >= n.
template <typename Term, typename RatioBound>
PhotonDistribution sum_sector(Parity parity, Term term, RatioBound ratio_bound, double rel_cutoff) {
    PhotonDistribution out;
    out.parity = parity;
    KahanSum total;
    for (std::size_t n = 0;; ++n) {
        const double t = term(n);
        out.probs.push_back(t);
        total.add(t);
        const double r = ratio_bound(n);
        const double tail = r < 1.0 ? t * r / (1.0 - r) : INFINITY;
        if (tail < rel_cutoff * total.value()) {
            out.tail = tail;
            break;
        }
        if (out.probs.size() >= kMaxSeriesTerms) {
            throw TruncationError("photon distribution series did not converge", tail);
        }
    }
    out.norm_defect = std::abs(1.0 - total.value() - out.tail);
    return out;
}

}  // namespace detail

inline PhotonDistribution distribution_even(const DisentangledCoeffs& c, double rel_cutoff = kSeriesRelCutoff) {
    const double y = c.abs2_plus();
    return detail::sum_sector(
        Parity::Even, [&](std::size_t n) { return p_even(n, c); }, [y](std::size_t) { return y; }, rel_cutoff);
}

inline PhotonDistribution distribution_odd(const DisentangledCoeffs& c, double rel_cutoff = kSeriesRelCutoff) {
    const double y = c.abs2_plus();
    return detail::sum_sector(
        Parity::Odd, [&](std::size_t n) { return p_odd(n, c); },
        [y](std::size_t n) {
            const double nd = static_cast<double>(n);
            return y * (2.0 * nd + 3.0) / (2.0 * nd + 2.0);
        },
        rel_cutoff);
}

/// p_N for N = 0, 1, 2, ... interleaving both sectors.
inline PhotonDistribution distribution_mixed(const SqueezeParams& params, double rel_cutoff = kSeriesRelCutoff) {
    const auto c = disentangle_general(params);
    const double s = params.s();
    const auto even = distribution_even(c, rel_cutoff);
    const auto odd = distribution_odd(c, rel_cutoff);
    PhotonDistribution out;
    out.parity = Parity::Mixed;
    const std::size_t n_sector = std::max(even.probs.size(), odd.probs.size());
    KahanSum total;
    for (std::size_t n = 0; n < n_sector; ++n) {
        const double pe = (1.0 - s) * (n < even.probs.size() ? even.probs[n] : p_even(n, c));
        const double po = s * (n < odd.probs.size() ? odd.probs[n] : p_odd(n, c));
        out.probs.push_back(pe);
        out.probs.push_back(po);
        total.add(pe);
        total.add(po);
    }
    // Both sector tails shrink once padded to the common length; keep the larger bounds.
    out.tail = (1.0 - s) * even.tail + s * odd.tail;
    out.norm_defect = std::abs(1.0 - total.value() - out.tail);
    return out;
}

/// First moment by direct series over a distribution, with the same
/// photon-number convention as its parity (2n, 2n+1 or N).
inline double series_mean(const PhotonDistribution& d) {
    KahanSum m;
    for (std::size_t n = 0; n < d.probs.size(); ++n) {
        const double nd = static_cast<double>(n);
        const double count = d.parity == Parity::Even ? 2.0 * nd : d.parity == Parity::Odd ? 2.0 * nd + 1.0 : nd;
        m.add(count * d.probs[n]);
    }
    return m.value();
}

}  // namespace squeezelab
