#pragma once

// Self-check: every invariant of the library evaluated over a seeded random
// parameter grid, one pass/fail line each with the worst residual seen.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "squeezelab/cli/grid.hpp"
#include "squeezelab/cli/sweep.hpp"
#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/mach_zehnder.hpp"
#include "squeezelab/photon_stats.hpp"
#include "squeezelab/quadratures.hpp"
#include "squeezelab/su11.hpp"

namespace squeezelab::cli {

struct VerifyOptions {
    std::uint64_t seed = 12345;
    std::size_t points = 200;        ///< analytic checks
    std::size_t oracle_points = 20;  ///< single-mode oracle comparisons
    std::size_t mz_points = 6;       ///< two-mode oracle comparisons
    double max_alpha = 10.0;
    double max_tau = 2.0;
    std::map<std::string, double> tol_overrides;
};

struct InvariantResult {
    std::string name;
    std::size_t samples = 0;
    double worst = 0.0;
    double tol = 0.0;
    std::string failure;  ///< set when evaluation itself threw

    bool passed() const { return failure.empty() && worst <= tol; }
};

inline const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> tols = {
        {"property_residual", 1e-12},     {"p_plus_bound", 0.0},         {"p_minus_modulus", 1e-13},
        {"heisenberg", 1e-12},            {"reduction_conventional", 1e-12}, {"reduction_one_photon", 1e-12},
        {"transition_identity", 1e-12},   {"transition_roots", 1e-10},   {"sector_normalization", 1e-9},
        {"moment_consistency", 1e-8},     {"mean_param_roundtrip", 1e-12}, {"oracle_variances", 1e-8},
        {"oracle_distribution", 1e-8},    {"coherent_closure", 1e-10},   {"transfer_unitarity", 1e-12},
        {"port_complementarity", 1e-10},  {"oracle_mz", 1e-7},           {"algebra_commutators", 1e-12},
    };
    return tols;
}

/// "name=value"
inline void add_tol_override(VerifyOptions& opts, std::string_view text) {
    const auto at = text.find('=');
    if (at == std::string_view::npos) throw UsageError("--tol expects name=value");
    const std::string name(text.substr(0, at));
    if (!default_tolerances().count(name)) throw UsageError("unknown invariant '" + name + "'");
    const double v = parse_real(text.substr(at + 1));
    if (v < 0.0) throw UsageError("tolerance must be non-negative");
    opts.tol_overrides[name] = v;
}

namespace detail {

struct RandomGrid {
    std::vector<SqueezeParams> params;
    std::vector<double> xs;
    std::vector<MZConfig> mz;
};

inline RandomGrid random_grid(const VerifyOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RandomGrid g;
    for (std::size_t i = 0; i < opts.points; ++i) {
        const double alpha = opts.max_alpha * (2.0 * unit(rng) - 1.0);
        const double r = opts.max_tau * unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        const double theta = 0.5 * std::numbers::pi * unit(rng);
        g.params.emplace_back(alpha, std::polar(r, phase), theta);
    }
    const double x_hi = 1.0 - std::sqrt(3.0);
    for (std::size_t i = 0; i < opts.points; ++i) g.xs.push_back(-1.0 + (x_hi + 1.0) * unit(rng));
    for (std::size_t i = 0; i < opts.points; ++i) {
        MZConfig cfg;
        cfg.z = std::polar(0.5 + 2.5 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
        cfg.phi = 0.2 + (2.0 * std::numbers::pi - 0.4) * unit(rng);
        cfg.port = unit(rng) < 0.5 ? Port::APrime : Port::BPrime;
        g.mz.push_back(cfg);
    }
    return g;
}

inline double rel_dev(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

inline std::vector<InvariantResult> run_invariants(const VerifyOptions& opts) {
    const auto grid = detail::random_grid(opts);
    const auto& P = grid.params;
    std::vector<InvariantResult> results;

    auto check = [&](const std::string& name, const std::function<double(std::size_t&)>& body) {
        InvariantResult r;
        r.name = name;
        auto it = opts.tol_overrides.find(name);
        r.tol = it != opts.tol_overrides.end() ? it->second : default_tolerances().at(name);
        try {
            r.worst = body(r.samples);
        } catch (const std::exception& e) {
            r.failure = e.what();
        }
        results.push_back(r);
    };

    check("property_residual", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) w = std::max(w, property_residual(disentangle_general(p))), ++n;
        return w;
    });
    check("p_plus_bound", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) {
            const auto c = disentangle_general(p);
            // |p+| < 1 strictly; report how far the gap falls short of positive.
            w = std::max(w, c.one_minus_abs2_plus() > 0.0 && std::abs(c.p_plus) < 1.0 ? 0.0 : 1.0);
            ++n;
        }
        return w;
    });
    check("p_minus_modulus", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) {
            const auto c = disentangle_general(p);
            w = std::max(w, std::abs(std::abs(c.p_minus) - std::abs(c.p_plus)));
            ++n;
        }
        return w;
    });
    check("heisenberg", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) w = std::max(w, 0.25 - variance_general(p).product()), ++n;
        return w;
    });
    check("reduction_conventional", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) {
            const auto g = variance_general(SqueezeParams(0.0, p.tau, 0.0));
            const auto v = variance_conventional(p.tau);
            w = std::max({w, detail::rel_dev(g.var_q, v.var_q), detail::rel_dev(g.var_p, v.var_p)});
            ++n;
        }
        return w;
    });
    check("reduction_one_photon", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) {
            const auto g = variance_general(SqueezeParams(0.0, p.tau, std::numbers::pi / 2));
            const auto v = variance_one_photon(p.tau);
            w = std::max({w, detail::rel_dev(g.var_q, v.var_q), detail::rel_dev(g.var_p, v.var_p)});
            ++n;
        }
        return w;
    });
    check("transition_identity", [&](std::size_t& n) {
        // 2N = L + M, and var_q, var_p rebuilt from F and G.
        double w = 0.0;
        for (const auto& p : P) {
            const auto c = disentangle_general(p);
            const auto t = transition_polys(c);
            const auto v = variance_general(p, c);
            const double scale = std::max({1.0, std::abs(t.L), std::abs(t.M), std::abs(t.N)});
            w = std::max({w, std::abs(2.0 * t.N - t.L - t.M) / scale,
                          detail::rel_dev(0.5 + t.F(p.s()) - t.G(p.s()), v.var_q),
                          detail::rel_dev(0.5 + t.F(p.s()) + t.G(p.s()), v.var_p)});
            ++n;
        }
        return w;
    });
    check("transition_roots", [&](std::size_t& n) {
        double w = 0.0;
        for (double x : grid.xs) {
            const auto r = transition_roots(x);
            if (r.size() != 2) return 1.0;
            for (double s : r.roots) w = std::max(w, std::abs(monic_transition_poly(x, s)));
            ++n;
        }
        return w;
    });
    check("sector_normalization", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) {
            const auto c = disentangle_general(p);
            w = std::max({w, distribution_even(c).norm_defect, distribution_odd(c).norm_defect,
                          distribution_mixed(p).norm_defect});
            ++n;
        }
        return w;
    });
    check("moment_consistency", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) {
            const auto c = disentangle_general(p);
            w = std::max({w, detail::rel_dev(series_mean(distribution_even(c, 1e-15)), mean_n_even(c)),
                          detail::rel_dev(series_mean(distribution_odd(c, 1e-15)), mean_n_odd(c)),
                          detail::rel_dev(series_mean(distribution_mixed(p, 1e-15)), mean_n_total(p, c))});
            ++n;
        }
        return w;
    });
    check("mean_param_roundtrip", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& p : P) {
            const auto c = disentangle_general(p);
            const double me = mean_n_even(c);
            const double mo = mean_n_odd(c);
            for (std::size_t k = 0; k <= 10; ++k) {
                w = std::max({w, std::abs(p_even_from_mean(k, me) - p_even(k, c)),
                              std::abs(p_odd_from_mean(k, mo) - p_odd(k, c))});
            }
            ++n;
        }
        return w;
    });
    const std::size_t n_oracle = std::min(opts.oracle_points, P.size());
    check("oracle_variances", [&](std::size_t& n) {
        double w = 0.0;
        for (std::size_t i = 0; i < n_oracle; ++i) {
            const auto a = variance_general(P[i]);
            const auto o = oracle::oracle_variances(oracle::oracle_state(P[i]).state);
            w = std::max({w, std::abs(a.var_q - o.var_q), std::abs(a.var_p - o.var_p)});
            ++n;
        }
        return w;
    });
    check("oracle_distribution", [&](std::size_t& n) {
        double w = 0.0;
        for (std::size_t i = 0; i < n_oracle; ++i) {
            const auto o = oracle::oracle_state(P[i]).state;
            const auto c = disentangle_general(P[i]);
            for (std::size_t N = 0; N < o.size(); ++N) w = std::max(w, std::abs(p_N(N, P[i], c) - std::norm(o.amplitudes[N])));
            ++n;
        }
        return w;
    });
    check("coherent_closure", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& cfg : grid.mz) {
            const auto obs = mz_observables(cfg, SqueezeParams(0.0, 0.0, 0.0));
            if (obs.mean_n < 1e-3) continue;
            w = std::max(w, std::abs(obs.mandel_q));
            ++n;
        }
        return w;
    });
    check("transfer_unitarity", [&](std::size_t& n) {
        double w = 0.0;
        for (const auto& cfg : grid.mz) w = std::max(w, transfer_matrix(cfg.phi).unitarity_defect()), ++n;
        return w;
    });
    check("port_complementarity", [&](std::size_t& n) {
        // Photon number is conserved: <n_a'> + <n_b'> = |z|^2 + <n_b>.
        double w = 0.0;
        for (std::size_t i = 0; i < P.size(); ++i) {
            MZConfig a = grid.mz[i];
            MZConfig b = a;
            a.port = Port::APrime;
            b.port = Port::BPrime;
            const double total = mean_n_out(a, P[i]) + mean_n_out(b, P[i]);
            w = std::max(w, detail::rel_dev(total, std::norm(a.z) + mean_n_total(P[i])));
            ++n;
        }
        return w;
    });
    check("oracle_mz", [&](std::size_t& n) {
        double w = 0.0;
        for (std::size_t i = 0; i < std::min(opts.mz_points, P.size()); ++i) {
            const auto& cfg = grid.mz[i];
            oracle::TwoModeDims dims;
            dims.a = std::max(dims.a, oracle::min_coherent_dim(cfg.z));
            const auto o = oracle::oracle_mz(cfg, P[i], dims);
            w = std::max({w, detail::rel_dev(o.mean_n, mean_n_out(cfg, P[i])),
                          detail::rel_dev(o.mean_n2, mean_n2_out(cfg, P[i]))});
            ++n;
        }
        return w;
    });
    check("algebra_commutators", [&](std::size_t& n) {
        const std::size_t dim = 32;
        const auto g = oracle::build_generators(dim);
        const auto& k0 = g.k0.entries;
        const auto& kp = g.k_plus.entries;
        const auto& km = g.k_minus.entries;
        // Truncation spoils the top two rows and columns; compare the interior block.
        const Eigen::Index b = static_cast<Eigen::Index>(dim) - 2;
        auto interior = [b](const oracle::Matrix& m) { return m.topLeftCorner(b, b); };
        const double w = std::max({(interior(k0 * kp - kp * k0) - interior(kp)).cwiseAbs().maxCoeff(),
                                   (interior(k0 * km - km * k0) + interior(km)).cwiseAbs().maxCoeff(),
                                   (interior(kp * km - km * kp) + 2.0 * interior(k0)).cwiseAbs().maxCoeff()});
        n = 3;
        return w;
    });
    return results;
}

/// Writes the report; returns 0 when every invariant passes, 1 otherwise.
inline int run_verify(const VerifyOptions& opts, std::ostream& out) {
    if (opts.points == 0) throw UsageError("verify needs at least one point");
    const auto results = run_invariants(opts);
    out << "# squeezelab " << kVersion << " verify\n";
    out << "# seed: " << opts.seed << "\n";
    out << "# points: " << opts.points << " oracle_points: " << opts.oracle_points
        << " mz_points: " << opts.mz_points << "\n";
    out << "invariant,samples,worst_residual,tolerance,result\n";
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.passed();
        out << r.name << "," << r.samples << "," << detail::format_double(r.worst) << ","
            << detail::format_double(r.tol) << "," << (r.passed() ? "PASS" : "FAIL");
        if (!r.failure.empty()) {
            std::string msg = r.failure;
            for (char& c : msg) {
                if (c == ',' || c == '\n') c = ';';
            }
            out << "," << msg;
        }
        out << "\n";
    }
    out << "# overall: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace squeezelab::cli
