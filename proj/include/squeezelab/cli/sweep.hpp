#pragma once

// Parameter sweeps over the analytic modules with optional oracle spot checks,
// written as CSV or JSON. The column set depends on the quantity only.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "squeezelab/cli/grid.hpp"
#include "squeezelab/fock_oracle.hpp"
#include "squeezelab/mach_zehnder.hpp"
#include "squeezelab/parallel.hpp"
#include "squeezelab/photon_stats.hpp"
#include "squeezelab/quadratures.hpp"
#include "squeezelab/su11.hpp"

namespace squeezelab::cli {

inline constexpr const char* kVersion = "1.0.0";

enum class Quantity { Variances, Transition, PhotonDist, Mandel };
enum class OutputFormat { Csv, Json };

inline std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::Variances: return "variances";
        case Quantity::Transition: return "transition";
        case Quantity::PhotonDist: return "photon-dist";
        case Quantity::Mandel: return "mandel";
    }
    return "?";
}

inline Quantity parse_quantity(std::string_view s) {
    if (s == "variances") return Quantity::Variances;
    if (s == "transition") return Quantity::Transition;
    if (s == "photon-dist" || s == "photon_dist") return Quantity::PhotonDist;
    if (s == "mandel") return Quantity::Mandel;
    throw UsageError("unknown quantity '" + std::string(s) + "'");
}

inline OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw UsageError("unknown output format '" + std::string(s) + "'");
}

inline Parity parse_parity(std::string_view s) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    if (s == "mixed") return Parity::Mixed;
    throw UsageError("parity must be even, odd or mixed");
}

inline Port parse_port(std::string_view s) {
    if (s == "a" || s == "a'" || s == "APrime") return Port::APrime;
    if (s == "b" || s == "b'" || s == "BPrime") return Port::BPrime;
    throw UsageError("port must be a or b");
}

/// "re" or "re,im"
inline cplx parse_complex(std::string_view s) {
    const auto parts = detail::split(s, ',');
    if (parts.size() == 1) return {parse_real(parts[0]), 0.0};
    if (parts.size() == 2) return {parse_real(parts[0]), parse_real(parts[1])};
    throw UsageError("complex value must be 're' or 're,im'");
}

struct GridSpec {
    std::string source;
    std::vector<double> values;
};

/// Grid names: alpha, tau, tau_abs, tau_phase, theta, x, n.
struct SweepSpec {
    Quantity quantity = Quantity::Variances;
    std::map<std::string, GridSpec> grids;
    std::optional<cplx> tau_complex;
    cplx z{1.0, 0.0};
    double phi = std::numbers::pi / 2;
    Port port = Port::APrime;
    Parity parity = Parity::Even;
    OutputFormat format = OutputFormat::Csv;
    double oracle_check = 0.0;
    std::uint64_t seed = 12345;
    std::size_t max_points = kDefaultPointCap;
    unsigned threads = 1;

    void set_grid(const std::string& name, const std::string& source) {
        grids[name] = GridSpec{source, parse_grid(source, max_points)};
    }

    bool has(const std::string& name) const { return grids.count(name) != 0; }

    std::vector<double> values(const std::string& name, std::vector<double> fallback) const {
        auto it = grids.find(name);
        return it == grids.end() ? fallback : it->second.values;
    }

    std::vector<cplx> taus() const {
        if (tau_complex) return {*tau_complex};
        if (has("tau_abs") || has("tau_phase")) {
            std::vector<cplx> out;
            for (double r : values("tau_abs", {0.0})) {
                for (double ph : values("tau_phase", {0.0})) out.push_back(std::polar(r, ph));
            }
            return out;
        }
        std::vector<cplx> out;
        for (double t : values("tau", {0.0})) out.emplace_back(t, 0.0);
        return out;
    }

    std::size_t point_count() const {
        const std::size_t nt = taus().size();
        const std::size_t na = values("alpha", {0.0}).size();
        const std::size_t nth = values("theta", {0.0}).size();
        switch (quantity) {
            case Quantity::Variances:
            case Quantity::Mandel: return nt * na * nth;
            case Quantity::Transition: return has("x") ? values("x", {}).size() : nt * na;
            case Quantity::PhotonDist: {
                const std::size_t nn = has("n") ? grids.at("n").values.size() : 21;
                return nt * na * (parity == Parity::Mixed ? nth : 1) * nn;
            }
        }
        return 0;
    }

    void validate() const {
        if (!(oracle_check >= 0.0 && oracle_check <= 1.0)) throw UsageError("oracle-check fraction must lie in [0, 1]");
        for (const auto& [name, grid] : grids) {
            if (grid.values.empty()) throw UsageError("grid '" + name + "' is empty");
        }
        if (quantity == Quantity::Transition && has("x") && (has("alpha") || has("tau") || has("tau_abs"))) {
            throw UsageError("transition takes either --x or parameter grids, not both");
        }
        if (quantity == Quantity::PhotonDist && has("n")) (void)parse_index_grid(grids.at("n").source, max_points);
        const std::size_t n = point_count();
        if (n == 0) throw UsageError("empty sweep");
        if (n > max_points) throw UsageError("sweep has " + std::to_string(n) + " points, above the cap");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["quantity"] = to_string(quantity);
        nlohmann::json g = nlohmann::json::object();
        for (const auto& [name, grid] : grids) g[name] = grid.source;
        j["grids"] = g;
        nlohmann::json fixed = nlohmann::json::object();
        if (tau_complex) fixed["tau_complex"] = {tau_complex->real(), tau_complex->imag()};
        if (quantity == Quantity::Mandel) {
            fixed["z"] = {z.real(), z.imag()};
            fixed["phi"] = phi;
            fixed["port"] = std::string(to_string(port));
        }
        if (quantity == Quantity::PhotonDist) fixed["parity"] = std::string(to_string(parity));
        j["fixed"] = fixed;
        j["output_format"] = format == OutputFormat::Csv ? "csv" : "json";
        j["oracle_check"] = oracle_check;
        j["seed"] = seed;
        return j;
    }
};

namespace detail {

inline std::string json_scalar_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) {
        char buf[40];
        const auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>(), std::chars_format::general, 17);
        return std::string(buf, res.ptr);
    }
    throw UsageError("expected a number or string in config, got " + v.dump());
}

// A grid entry: "0:30:0.1", 1.5, [0, "pi/8"], or {"start":..,"stop":..,"step":..}.
inline std::string json_grid_text(const nlohmann::json& v) {
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v) out += (out.empty() ? "" : ",") + json_scalar_text(item);
        return out;
    }
    if (v.is_object()) {
        return json_scalar_text(v.at("start")) + ":" + json_scalar_text(v.at("stop")) + ":" +
               json_scalar_text(v.at("step"));
    }
    return json_scalar_text(v);
}

inline cplx json_complex(const nlohmann::json& v) {
    if (v.is_array() && v.size() == 2) return {parse_real(json_scalar_text(v[0])), parse_real(json_scalar_text(v[1]))};
    return parse_complex(json_scalar_text(v));
}

}  // namespace detail

/// Overlay a declarative config document onto `spec`.
inline void apply_config(SweepSpec& spec, const nlohmann::json& doc) {
    try {
        if (doc.contains("quantity")) spec.quantity = parse_quantity(doc.at("quantity").get<std::string>());
        if (doc.contains("max_points")) spec.max_points = doc.at("max_points").get<std::size_t>();
        if (doc.contains("grids")) {
            for (const auto& [name, v] : doc.at("grids").items()) spec.set_grid(name, detail::json_grid_text(v));
        }
        if (doc.contains("fixed")) {
            for (const auto& [name, v] : doc.at("fixed").items()) {
                if (name == "z") spec.z = detail::json_complex(v);
                else if (name == "phi") spec.phi = parse_real(detail::json_scalar_text(v));
                else if (name == "port") spec.port = parse_port(v.get<std::string>());
                else if (name == "parity") spec.parity = parse_parity(v.get<std::string>());
                else if (name == "tau_complex") spec.tau_complex = detail::json_complex(v);
                else spec.set_grid(name, detail::json_scalar_text(v));
            }
        }
        if (doc.contains("output_format")) spec.format = parse_format(doc.at("output_format").get<std::string>());
        if (doc.contains("oracle_check")) spec.oracle_check = doc.at("oracle_check").get<double>();
        if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("invalid config: ") + e.what());
    }
}

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> trailer;  ///< comment lines after the data (CSV)
    nlohmann::json extra = nlohmann::json::object();  ///< the same facts for JSON metadata
};

inline std::vector<std::string> columns_for(Quantity q) {
    switch (q) {
        case Quantity::Variances:
            return {"alpha", "tau_re", "tau_im", "theta", "regime", "var_q", "var_p", "uncertainty_product",
                    "smaller_variance", "squeezed", "status"};
        case Quantity::Transition:
            return {"alpha", "tau_re", "tau_im", "A", "B", "C", "L", "M", "N", "x", "root_count", "s_minus",
                    "s_plus", "status"};
        case Quantity::PhotonDist:
            return {"alpha", "tau_re", "tau_im", "theta", "parity", "n", "photons", "probability", "p_plus_abs",
                    "status"};
        case Quantity::Mandel:
            return {"alpha", "tau_re", "tau_im", "theta", "z_re", "z_im", "phi", "port", "mean_n", "mean_n2",
                    "mandel_q", "p_minus_abs", "break_k", "status"};
    }
    return {};
}

namespace detail {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string status_of(const std::exception& e) {
    std::string tag = "error";
    if (dynamic_cast<const UndefinedError*>(&e)) tag = "undefined";
    else if (dynamic_cast<const DomainError*>(&e)) tag = "domain";
    else if (dynamic_cast<const TruncationError*>(&e)) tag = "truncation";
    std::string msg = tag + ": " + e.what();
    for (char& c : msg) {
        if (c == ',' || c == '\n' || c == '"') c = ';';
    }
    return msg;
}

inline std::vector<std::size_t> choose_checked(std::size_t n, double fraction, std::uint64_t seed) {
    if (fraction <= 0.0 || n == 0) return {};
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::vector<std::size_t> chosen;
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), std::min(k, n), rng);
    return chosen;
}

struct OracleReport {
    std::size_t checked = 0;
    std::size_t skipped = 0;
    double max_dev = 0.0;
};

struct Point {
    double alpha = 0.0;
    cplx tau{0.0, 0.0};
    double theta = 0.0;
};

// Evaluate `row_fn` for every point in order, then run `oracle_fn` on a
// seeded subset of them. oracle_fn returns the deviation or nullopt when the
// row has nothing to compare.
template <typename RowFn, typename OracleFn>
OracleReport fill_rows(Table& t, std::size_t n, const SweepSpec& spec, RowFn row_fn, OracleFn oracle_fn) {
    t.rows.resize(n);
    parallel_for(n, spec.threads, [&](std::size_t i) { t.rows[i] = row_fn(i); });
    OracleReport rep;
    const auto chosen = choose_checked(n, spec.oracle_check, spec.seed);
    std::vector<std::optional<double>> devs(chosen.size());
    parallel_for(chosen.size(), spec.threads, [&](std::size_t k) {
        try {
            devs[k] = oracle_fn(chosen[k]);
        } catch (const Error&) {
            devs[k] = std::nullopt;
        }
    });
    for (const auto& d : devs) {
        if (d) {
            ++rep.checked;
            rep.max_dev = std::max(rep.max_dev, *d);
        } else {
            ++rep.skipped;
        }
    }
    return rep;
}

inline std::vector<Point> param_points(const SweepSpec& spec, bool use_theta) {
    std::vector<Point> pts;
    const auto alphas = spec.values("alpha", {0.0});
    const auto thetas = use_theta ? spec.values("theta", {0.0}) : std::vector<double>{0.0};
    for (cplx tau : spec.taus()) {
        for (double th : thetas) {
            for (double a : alphas) pts.push_back({a, tau, th});
        }
    }
    return pts;
}

inline Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

inline Table variance_table(const SweepSpec& spec, OracleReport& rep) {
    Table t;
    t.columns = columns_for(Quantity::Variances);
    const auto pts = param_points(spec, true);
    rep = fill_rows(
        t, pts.size(), spec,
        [&](std::size_t i) -> std::vector<Cell> {
            const auto& p = pts[i];
            std::vector<Cell> row{p.alpha, p.tau.real(), p.tau.imag(), p.theta};
            try {
                const SqueezeParams params(p.alpha, p.tau, p.theta);
                const auto c = disentangle_general(params);
                const auto v = variance_general(params, c);
                const auto polys = transition_polys(c);
                row.insert(row.end(), {std::string(to_string(c.regime)), v.var_q, v.var_p, v.product(),
                                       std::string(to_string(smaller_variance_quadrature(params.s(), polys))),
                                       std::string(to_string(squeezed_quadrature(params.s(), polys))),
                                       std::string("ok")});
            } catch (const Error& e) {
                row.resize(t.columns.size() - 1);
                row.emplace_back(status_of(e));
            }
            return row;
        },
        [&](std::size_t i) -> std::optional<double> {
            const auto& p = pts[i];
            const SqueezeParams params(p.alpha, p.tau, p.theta);
            const auto a = variance_general(params);
            const auto o = oracle::oracle_variances(oracle::oracle_state(params).state);
            return std::max(std::abs(a.var_q - o.var_q), std::abs(a.var_p - o.var_p));
        });
    return t;
}

inline Table transition_table(const SweepSpec& spec, OracleReport& rep) {
    Table t;
    t.columns = columns_for(Quantity::Transition);
    auto root_cells = [](std::vector<Cell>& row, double x) {
        const auto r = transition_roots(x);
        row.emplace_back(static_cast<long long>(r.size()));
        if (r.size() == 2) {
            row.emplace_back(r.roots[0]);
            row.emplace_back(r.roots[1]);
        } else if (r.size() == 1) {
            // A single admissible root is s- when it lies below -x/2.
            const bool is_minus = r.roots[0] <= -x / 2.0;
            row.push_back(is_minus ? Cell{r.roots[0]} : Cell{});
            row.push_back(is_minus ? Cell{} : Cell{r.roots[0]});
        } else {
            row.emplace_back();
            row.emplace_back();
        }
    };

    if (spec.has("x")) {
        const auto xs = spec.values("x", {});
        rep = fill_rows(
            t, xs.size(), spec,
            [&](std::size_t i) -> std::vector<Cell> {
                std::vector<Cell> row(9);  // parameter and coefficient columns stay empty
                row.emplace_back(xs[i]);
                root_cells(row, xs[i]);
                row.emplace_back(std::string("ok"));
                return row;
            },
            [](std::size_t) -> std::optional<double> { return std::nullopt; });
        return t;
    }

    const auto pts = param_points(spec, false);
    rep = fill_rows(
        t, pts.size(), spec,
        [&](std::size_t i) -> std::vector<Cell> {
            const auto& p = pts[i];
            std::vector<Cell> row{p.alpha, p.tau.real(), p.tau.imag()};
            try {
                const auto polys = transition_polys(SqueezeParams(p.alpha, p.tau, 0.0));
                row.insert(row.end(), {polys.A, polys.B, polys.C, polys.L, polys.M, polys.N});
                if (polys.x) {
                    row.emplace_back(*polys.x);
                    root_cells(row, *polys.x);
                    row.emplace_back(std::string("ok"));
                } else {
                    row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
                    row.emplace_back(std::string("undefined: L = 0"));
                }
            } catch (const Error& e) {
                row.resize(t.columns.size() - 1);
                row.emplace_back(status_of(e));
            }
            return row;
        },
        // The oracle's (var_p - var_q)/2 is G(s); it must vanish at each root.
        [&](std::size_t i) -> std::optional<double> {
            const auto& p = pts[i];
            const auto polys = transition_polys(SqueezeParams(p.alpha, p.tau, 0.0));
            if (!polys.x) return std::nullopt;
            const auto roots = transition_roots(*polys.x);
            if (roots.empty()) return std::nullopt;
            double dev = 0.0;
            for (double s : roots.roots) {
                const SqueezeParams params(p.alpha, p.tau, std::asin(std::sqrt(s)));
                const auto o = oracle::oracle_variances(oracle::oracle_state(params).state);
                dev = std::max(dev, std::abs(0.5 * (o.var_p - o.var_q)));
            }
            return dev;
        });
    return t;
}

inline Table photon_table(const SweepSpec& spec, OracleReport& rep) {
    Table t;
    t.columns = columns_for(Quantity::PhotonDist);
    const auto ns = spec.has("n") ? parse_index_grid(spec.grids.at("n").source, spec.max_points)
                                  : parse_index_grid("0:20:1");
    const bool mixed = spec.parity == Parity::Mixed;
    const auto pts = param_points(spec, mixed);
    const std::size_t nn = ns.size();

    auto photons = [&](std::size_t n) -> std::size_t {
        switch (spec.parity) {
            case Parity::Even: return 2 * n;
            case Parity::Odd: return 2 * n + 1;
            case Parity::Mixed: return n;
        }
        return n;
    };

    rep = fill_rows(
        t, pts.size() * nn, spec,
        [&](std::size_t i) -> std::vector<Cell> {
            const auto& p = pts[i / nn];
            const std::size_t n = ns[i % nn];
            std::vector<Cell> row{p.alpha, p.tau.real(), p.tau.imag(), mixed ? Cell{p.theta} : Cell{},
                                  std::string(to_string(spec.parity)), static_cast<long long>(n),
                                  static_cast<long long>(photons(n))};
            try {
                const SqueezeParams params(p.alpha, p.tau, p.theta);
                const auto c = disentangle_general(params);
                double prob = 0.0;
                switch (spec.parity) {
                    case Parity::Even: prob = p_even(n, c); break;
                    case Parity::Odd: prob = p_odd(n, c); break;
                    case Parity::Mixed: prob = p_N(n, params, c); break;
                }
                row.insert(row.end(), {prob, std::abs(c.p_plus), std::string("ok")});
            } catch (const Error& e) {
                row.resize(t.columns.size() - 1);
                row.emplace_back(status_of(e));
            }
            return row;
        },
        [&](std::size_t i) -> std::optional<double> {
            const auto& p = pts[i / nn];
            const std::size_t n = ns[i % nn];
            // Sector distributions are the theta = 0 and theta = pi/2 states.
            const double theta =
                spec.parity == Parity::Even ? 0.0 : spec.parity == Parity::Odd ? std::numbers::pi / 2 : p.theta;
            const SqueezeParams params(p.alpha, p.tau, theta);
            const auto c = disentangle_general(params);
            const auto st = oracle::oracle_state(params).state;
            const std::size_t N = photons(n);
            const double o = N < st.size() ? std::norm(st.amplitudes[N]) : 0.0;
            const double a = spec.parity == Parity::Even  ? p_even(n, c)
                             : spec.parity == Parity::Odd ? p_odd(n, c)
                                                          : p_N(n, params, c);
            return std::abs(a - o);
        });
    return t;
}

inline Table mandel_table(const SweepSpec& spec, OracleReport& rep) {
    Table t;
    t.columns = columns_for(Quantity::Mandel);
    MZConfig cfg{spec.z, spec.phi, spec.port};
    ScanGrid grid{spec.values("alpha", {0.0}), spec.values("theta", {0.0}), spec.taus()};
    const auto scan = q_scan(cfg, grid, spec.threads);
    rep = fill_rows(
        t, scan.size(), spec,
        [&](std::size_t i) -> std::vector<Cell> {
            const auto& r = scan[i];
            const std::size_t na = grid.alphas.size();
            const std::size_t nt = grid.thetas.size();
            const double alpha = grid.alphas[i % na];
            const double theta = grid.thetas[(i / na) % nt];
            const cplx tau = grid.taus[i / (na * nt)];
            std::vector<Cell> row{alpha, tau.real(), tau.imag(), theta, cfg.z.real(), cfg.z.imag(), cfg.phi,
                                  std::string(to_string(cfg.port))};
            if (r.obs) {
                row.insert(row.end(), {r.obs->mean_n, r.obs->mean_n2, r.obs->mandel_q, r.p_minus_abs,
                                       static_cast<long long>(r.break_k), std::string("ok")});
            } else {
                const auto mean = [&]() -> std::optional<double> {
                    try {
                        return mean_n_out(cfg, SqueezeParams(alpha, tau, theta));
                    } catch (const Error&) {
                        return std::nullopt;
                    }
                }();
                std::string status = r.error;
                for (char& ch : status) {
                    if (ch == ',' || ch == '"') ch = ';';
                }
                row.insert(row.end(), {opt_cell(mean), Cell{}, Cell{}, r.p_minus_abs,
                                       static_cast<long long>(r.break_k), "undefined: " + status});
            }
            return row;
        },
        [&](std::size_t i) -> std::optional<double> {
            const auto& r = scan[i];
            if (!r.obs) return std::nullopt;
            oracle::TwoModeDims dims;
            dims.a = std::max(dims.a, oracle::min_coherent_dim(cfg.z));
            const auto o = oracle::oracle_mz(cfg, r.params, dims);
            return std::max(std::abs(o.mean_n - r.obs->mean_n), std::abs(o.mean_n2 - r.obs->mean_n2));
        });

    // Analytic loci of the smoothness breaks inside the scanned alpha range.
    const auto [amin, amax] = std::minmax_element(grid.alphas.begin(), grid.alphas.end());
    nlohmann::json breaks = nlohmann::json::array();
    for (cplx tau : grid.taus) {
        for (int k = 1;; ++k) {
            const double a = smoothness_break_alpha(k, std::abs(tau));
            if (a > std::max(std::abs(*amin), std::abs(*amax))) break;
            for (double sign : {1.0, -1.0}) {
                const double at = sign * a;
                if (at < *amin || at > *amax) continue;
                t.trailer.push_back("# smoothness_break tau_abs=" + format_double(std::abs(tau)) +
                                    " k=" + std::to_string(k) + " alpha=" + format_double(at));
                breaks.push_back({{"tau_abs", std::abs(tau)}, {"k", k}, {"alpha", at}});
            }
        }
    }
    t.extra["smoothness_breaks"] = breaks;
    return t;
}

inline std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else return v;
        },
        c);
}

inline nlohmann::json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? nlohmann::json(v) : nullptr;
            else return v;
        },
        c);
}

}  // namespace detail

/// Evaluate the sweep into a table (no I/O).
inline Table build_table(const SweepSpec& spec) {
    spec.validate();
    detail::OracleReport rep;
    Table t;
    switch (spec.quantity) {
        case Quantity::Variances: t = detail::variance_table(spec, rep); break;
        case Quantity::Transition: t = detail::transition_table(spec, rep); break;
        case Quantity::PhotonDist: t = detail::photon_table(spec, rep); break;
        case Quantity::Mandel: t = detail::mandel_table(spec, rep); break;
    }
    if (spec.oracle_check > 0.0) {
        t.trailer.push_back("# oracle_check fraction=" + detail::format_double(spec.oracle_check) +
                            " seed=" + std::to_string(spec.seed) + " checked=" + std::to_string(rep.checked) +
                            " skipped=" + std::to_string(rep.skipped) +
                            " max_abs_deviation=" + detail::format_double(rep.max_dev));
        t.extra["oracle_check"] = {{"fraction", spec.oracle_check},
                                   {"seed", spec.seed},
                                   {"checked", rep.checked},
                                   {"skipped", rep.skipped},
                                   {"max_abs_deviation", rep.max_dev}};
    }
    return t;
}

inline void write_table(const SweepSpec& spec, const Table& t, std::ostream& out) {
    if (spec.format == OutputFormat::Csv) {
        out << "# squeezelab " << kVersion << "\n";
        out << "# quantity: " << to_string(spec.quantity) << "\n";
        out << "# spec: " << spec.to_json().dump() << "\n";
        out << "# seed: " << spec.seed << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::cell_text(row[i]);
            out << "\n";
        }
        for (const auto& line : t.trailer) out << line << "\n";
        return;
    }
    nlohmann::json doc;
    nlohmann::json meta = {{"version", kVersion},
                           {"quantity", to_string(spec.quantity)},
                           {"spec", spec.to_json()},
                           {"seed", spec.seed},
                           {"columns", t.columns}};
    for (const auto& [k, v] : t.extra.items()) meta[k] = v;
    doc["metadata"] = meta;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = detail::cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << "\n";
}

/// Build and write; returns the process exit status.
inline int run_sweep(const SweepSpec& spec, std::ostream& out) {
    write_table(spec, build_table(spec), out);
    return 0;
}

}  // namespace squeezelab::cli
