#pragma once

// Mach-Zehnder interferometer with a Glauber coherent state |z> at input a and
// the generalized squeezed vacuum at input b. Output port moments of n_a' and
// the Mandel parameter Q = <n^2>/<n> - <n> - 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squeezelab/errors.hpp"
#include "squeezelab/parallel.hpp"
#include "squeezelab/su11.hpp"

namespace squeezelab {

enum class Port { APrime, BPrime };

constexpr std::string_view to_string(Port p) { return p == Port::APrime ? "a" : "b"; }

struct MZConfig {
    cplx z{1.0, 0.0};
    double phi = std::numbers::pi / 2;
    Port port = Port::APrime;
};

/// [a'; b'] = T [a; b]
struct TransferMatrix {
    cplx t11, t12, t21, t22;

    /// max |(T†T - I)_ij|
    double unitarity_defect() const {
        const cplx d11 = std::norm(t11) + std::norm(t21) - 1.0;
        const cplx d22 = std::norm(t12) + std::norm(t22) - 1.0;
        const cplx d12 = std::conj(t11) * t12 + std::conj(t21) * t22;
        return std::max({std::abs(d11), std::abs(d22), std::abs(d12)});
    }
};

inline TransferMatrix transfer_matrix(double phi) {
    if (!std::isfinite(phi)) throw DomainError("transfer_matrix: non-finite phase");
    const cplx e = std::polar(1.0, -phi);
    const cplx t11 = -0.5 * (1.0 - e);
    const cplx t12 = cplx{0.0, -0.5} * (1.0 + e);
    return {t11, t12, t12, -t11};
}

struct MZObservables {
    double mean_n = 0.0;
    double mean_n2 = 0.0;
    double mandel_q = 0.0;  ///< NaN when <n> vanishes
};

namespace detail {

inline void check_config(const MZConfig& cfg) {
    if (!std::isfinite(cfg.z.real()) || !std::isfinite(cfg.z.imag()) || !std::isfinite(cfg.phi)) {
        throw DomainError("MZConfig: non-finite field");
    }
}

// Port b' uses the port-a' expressions with phi -> phi + pi.
inline double effective_phase(const MZConfig& cfg) {
    return cfg.port == Port::APrime ? cfg.phi : cfg.phi + std::numbers::pi;
}

}  // namespace detail

/// <n_out>: coherent term, squeezed-sector term, and the sin(2 theta) sin(phi)
/// cross term.
inline double mean_n_out(const MZConfig& cfg, const SqueezeParams& params, const DisentangledCoeffs& c) {
    detail::check_config(cfg);
    const double phi = detail::effective_phase(cfg);
    const double s = params.s();
    const double r2 = std::norm(c.p_minus);
    const double gap = c.one_minus_abs2_plus();  // 1 - |p-|^2
    const double z2 = std::norm(cfg.z);
    const double sin_half2 = std::pow(std::sin(phi / 2.0), 2);
    const double cos_half2 = std::pow(std::cos(phi / 2.0), 2);

    const cplx w = cfg.z * std::exp(-0.5 * c.p_zero) * (1.0 - c.p_minus);
    return z2 * sin_half2 + (r2 + (1.0 + r2) * s) / gap * cos_half2 +
           0.25 * (2.0 * w.real()) * std::sin(2.0 * params.theta) * std::sin(phi);
}

/// <n_out^2>, five groups of terms.
inline double mean_n2_out(const MZConfig& cfg, const SqueezeParams& params, const DisentangledCoeffs& c) {
    detail::check_config(cfg);
    const double phi = detail::effective_phase(cfg);
    const double s = params.s();
    const double r2 = std::norm(c.p_minus);
    const double gap = c.one_minus_abs2_plus();
    const double z2 = std::norm(cfg.z);
    const double sin_half2 = std::pow(std::sin(phi / 2.0), 2);
    const double cos_half2 = std::pow(std::cos(phi / 2.0), 2);
    const double sin_phi = std::sin(phi);
    const double sin_phi2 = sin_phi * sin_phi;
    const cplx half_factor = std::exp(-0.5 * c.p_zero);

    const double coherent = sin_half2 * sin_half2 * z2 * (1.0 + z2);
    const double squeezed =
        cos_half2 * cos_half2 / (gap * gap) * ((1.0 + 8.0 * r2 + 3.0 * r2 * r2) * s + r2 * (2.0 + r2));
    const double mixed = sin_phi2 / gap * (r2 + (1.0 + r2) * s) * (0.25 + z2);
    const cplx zz = cfg.z * cfg.z * std::exp(-c.p_zero) * c.p_minus;
    const double quadratic = 0.25 * sin_phi2 * (z2 - 2.0 * zz.real() * (1.0 + 2.0 * s));

    const cplx w1 = cfg.z * half_factor * (1.0 - c.p_minus);
    const cplx w2 = cfg.z * half_factor / gap * (1.0 + 5.0 * r2 - 3.0 * c.p_minus * (1.0 + r2));
    const double cross = 0.25 * std::sin(2.0 * params.theta) * sin_phi *
                         ((1.0 + 2.0 * z2) * 2.0 * w1.real() * sin_half2 + 2.0 * w2.real() * cos_half2);

    return coherent + squeezed + mixed + quadratic + cross;
}

inline constexpr double kMinMeanForQ = 1e-12;

/// Q = <n^2>/<n> - <n> - 1; throws UndefinedError when <n> <= 1e-12.
inline double mandel_q(double mean_n, double mean_n2) {
    if (!(mean_n > kMinMeanForQ)) throw UndefinedError("Mandel Q undefined: vanishing mean photon number");
    return mean_n2 / mean_n - mean_n - 1.0;
}

inline MZObservables mz_observables(const MZConfig& cfg, const SqueezeParams& params) {
    const auto c = disentangle_general(params);
    MZObservables out;
    out.mean_n = mean_n_out(cfg, params, c);
    out.mean_n2 = mean_n2_out(cfg, params, c);
    out.mandel_q = out.mean_n > kMinMeanForQ ? mandel_q(out.mean_n, out.mean_n2) : NAN;
    return out;
}

inline double mean_n_out(const MZConfig& cfg, const SqueezeParams& params) {
    return mean_n_out(cfg, params, disentangle_general(params));
}

inline double mean_n2_out(const MZConfig& cfg, const SqueezeParams& params) {
    return mean_n2_out(cfg, params, disentangle_general(params));
}

inline double mandel_q(const MZConfig& cfg, const SqueezeParams& params) {
    const auto c = disentangle_general(params);
    return mandel_q(mean_n_out(cfg, params, c), mean_n2_out(cfg, params, c));
}

/// alpha > 0 at which alpha^2/4 - |tau|^2 = (k pi)^2, i.e. sin(beta) = 0 and
/// p- vanishes inside the trigonometric regime.
inline double smoothness_break_alpha(int k, double tau_abs) {
    if (k == 0) throw DomainError("smoothness_break_alpha: k must be nonzero");
    const double kp = k * std::numbers::pi;
    return 2.0 * std::sqrt(kp * kp + tau_abs * tau_abs);
}

/// Grid for q_scan. Rows are ordered tau-major, then theta, then alpha.
struct ScanGrid {
    std::vector<double> alphas;
    std::vector<double> thetas;
    std::vector<cplx> taus;

    std::size_t size() const { return alphas.size() * thetas.size() * taus.size(); }
};

struct ScanRow {
    SqueezeParams params;
    std::optional<MZObservables> obs;  ///< empty on a per-point math error
    std::string error;
    double p_minus_abs = 0.0;
    int break_k = 0;  ///< k when this row is the grid point nearest a smoothness-break locus
};

namespace detail {

// Half the distance to the nearest neighbouring alpha.
inline double half_spacing(const std::vector<double>& alphas, std::size_t i) {
    double gap = INFINITY;
    if (i > 0) gap = std::min(gap, std::abs(alphas[i] - alphas[i - 1]));
    if (i + 1 < alphas.size()) gap = std::min(gap, std::abs(alphas[i + 1] - alphas[i]));
    return std::isfinite(gap) ? 0.5 * gap : 0.0;
}

inline int nearest_break(double alpha, double tau_abs, double half_gap) {
    const double b2 = alpha * alpha / 4.0 - tau_abs * tau_abs;
    if (b2 <= 0.0) return 0;
    const int k = static_cast<int>(std::lround(std::sqrt(b2) / std::numbers::pi));
    if (k == 0) return 0;
    const double locus = smoothness_break_alpha(k, tau_abs);
    const double d = std::abs(std::abs(alpha) - locus);
    // A locus exactly midway between two grid points is assigned to the upper one.
    return (d < half_gap || (d == half_gap && std::abs(alpha) > locus)) ? k : 0;
}

}  // namespace detail

inline std::vector<ScanRow> q_scan(const MZConfig& cfg, const ScanGrid& grid, unsigned threads = 1) {
    detail::check_config(cfg);
    std::vector<ScanRow> rows(grid.size());
    const std::size_t na = grid.alphas.size();
    const std::size_t nt = grid.thetas.size();
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
        const std::size_t ia = idx % na;
        const std::size_t it = (idx / na) % nt;
        const std::size_t iu = idx / (na * nt);
        ScanRow& row = rows[idx];
        try {
            row.params = SqueezeParams(grid.alphas[ia], grid.taus[iu], grid.thetas[it]);
            const auto c = disentangle_general(row.params);
            row.p_minus_abs = std::abs(c.p_minus);
            MZObservables obs;
            obs.mean_n = mean_n_out(cfg, row.params, c);
            obs.mean_n2 = mean_n2_out(cfg, row.params, c);
            obs.mandel_q = mandel_q(obs.mean_n, obs.mean_n2);
            row.obs = obs;
        } catch (const Error& e) {
            row.error = e.what();
        }
        const double half_gap = detail::half_spacing(grid.alphas, ia);
        row.break_k = detail::nearest_break(grid.alphas[ia], std::abs(grid.taus[iu]), half_gap);
    });
    return rows;
}

}  // namespace squeezelab
