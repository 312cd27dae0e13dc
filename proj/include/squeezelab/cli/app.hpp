#pragma once

// Command-line front end. Flags override a --config document; the subcommand
// names the quantity.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "squeezelab/cli/sweep.hpp"
#include "squeezelab/cli/verify.hpp"
#include "squeezelab/parallel.hpp"

namespace squeezelab::cli {

inline constexpr int kExitUsage = 2;

namespace detail {

struct SweepFlags {
    std::map<std::string, std::string> grids;  // flag-backed grid sources
    std::string tau_complex, z, phi, port, parity;
};

inline void add_grid_flag(CLI::App* sub, SweepFlags& f, const std::string& name, const std::string& flag,
                          const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&f, name](const std::string& v) { f.grids[name] = v; }, help);
}

inline void add_tau_flags(CLI::App* sub, SweepFlags& f) {
    add_grid_flag(sub, f, "tau", "--tau", "real tau grid");
    add_grid_flag(sub, f, "tau_abs", "--tau-abs", "|tau| grid");
    add_grid_flag(sub, f, "tau_phase", "--tau-phase", "arg(tau) grid (radians)");
    sub->add_option("--tau-complex", f.tau_complex, "single complex tau as re,im");
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open output '" + path + "'");
    file << text;
    if (!file) throw Error("write to '" + path + "' failed");
}

}  // namespace detail

/// Runs the CLI; returns the process exit status.
inline int run_app(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Generalized squeezed vacuum: variances, transitions, photon statistics, Mach-Zehnder Q"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path, output_path = "-", format;
    std::optional<double> oracle_check;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_points;
    app.add_option("--config", config_path, "JSON sweep spec");
    app.add_option("-o,--output", output_path, "output path, '-' for stdout");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--oracle-check", oracle_check, "fraction of points re-evaluated by the Fock oracle");
    app.add_option("--seed", seed, "seed for oracle sampling and verify");
    app.add_option("--max-points", max_points, "cap on sweep size");

    detail::SweepFlags f;
    auto* variances = app.add_subcommand("variances", "quadrature variances over an (alpha, tau, theta) grid");
    detail::add_grid_flag(variances, f, "alpha", "--alpha", "alpha grid");
    detail::add_tau_flags(variances, f);
    detail::add_grid_flag(variances, f, "theta", "--theta", "theta grid (radians)");

    auto* transition = app.add_subcommand("transition", "transition polynomial and roots s-, s+");
    detail::add_grid_flag(transition, f, "alpha", "--alpha", "alpha grid");
    detail::add_tau_flags(transition, f);
    detail::add_grid_flag(transition, f, "x", "--x", "x = M/L grid (instead of alpha, tau)");

    auto* photon = app.add_subcommand("photon-dist", "photon number distribution");
    detail::add_grid_flag(photon, f, "alpha", "--alpha", "alpha grid");
    detail::add_tau_flags(photon, f);
    detail::add_grid_flag(photon, f, "theta", "--theta", "theta grid, parity mixed only");
    detail::add_grid_flag(photon, f, "n", "--n", "sector index grid (photon number for mixed)");
    photon->add_option("--parity", f.parity, "even, odd or mixed");

    auto* mandel = app.add_subcommand("mandel", "Mach-Zehnder output moments and Mandel Q");
    detail::add_grid_flag(mandel, f, "alpha", "--alpha", "alpha grid");
    detail::add_tau_flags(mandel, f);
    detail::add_grid_flag(mandel, f, "theta", "--theta", "theta grid (radians)");
    mandel->add_option("--z", f.z, "coherent amplitude, re or re,im");
    mandel->add_option("--phi", f.phi, "interferometer phase (radians)");
    mandel->add_option("--port", f.port, "output port a or b");

    VerifyOptions vopts;
    std::vector<std::string> tol_texts;
    auto* verify = app.add_subcommand("verify", "run the invariant suite on a seeded random grid");
    verify->add_option("--points", vopts.points, "random points for analytic checks");
    verify->add_option("--oracle-points", vopts.oracle_points, "points compared with the single-mode oracle");
    verify->add_option("--mz-points", vopts.mz_points, "points compared with the two-mode oracle");
    verify->add_option("--tol", tol_texts, "override a tolerance, name=value")->allow_extra_args(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : kExitUsage;
    }

    try {
        std::ostringstream buffer;
        int status = 0;
        if (verify->parsed()) {
            if (seed) vopts.seed = *seed;
            for (const auto& t : tol_texts) add_tol_override(vopts, t);
            status = run_verify(vopts, buffer);
        } else {
            SweepSpec spec;
            spec.threads = thread_count_from_env();
            if (max_points) spec.max_points = *max_points;
            bool config_names_quantity = false;
            if (!config_path.empty()) {
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(detail::read_file(config_path));
                } catch (const nlohmann::json::parse_error& e) {
                    throw UsageError(std::string("config is not valid JSON: ") + e.what());
                }
                if (!doc.is_object()) throw UsageError("config must be a JSON object");
                config_names_quantity = doc.contains("quantity");
                apply_config(spec, doc);
                if (max_points) spec.max_points = *max_points;
            }
            const std::vector<std::pair<CLI::App*, Quantity>> subs = {{variances, Quantity::Variances},
                                                                      {transition, Quantity::Transition},
                                                                      {photon, Quantity::PhotonDist},
                                                                      {mandel, Quantity::Mandel}};
            bool chosen = false;
            for (const auto& [sub, q] : subs) {
                if (!sub->parsed()) continue;
                if (config_names_quantity && spec.quantity != q) {
                    throw UsageError("subcommand " + to_string(q) + " disagrees with config quantity " +
                                     to_string(spec.quantity));
                }
                spec.quantity = q;
                chosen = true;
            }
            if (!chosen && !config_names_quantity) {
                err << app.help();
                return kExitUsage;
            }
            for (const auto& [name, source] : f.grids) spec.set_grid(name, source);
            if (!f.tau_complex.empty()) spec.tau_complex = parse_complex(f.tau_complex);
            if (!f.z.empty()) spec.z = parse_complex(f.z);
            if (!f.phi.empty()) spec.phi = parse_real(f.phi);
            if (!f.port.empty()) spec.port = parse_port(f.port);
            if (!f.parity.empty()) spec.parity = parse_parity(f.parity);
            if (!format.empty()) spec.format = parse_format(format);
            if (oracle_check) spec.oracle_check = *oracle_check;
            if (seed) spec.seed = *seed;
            status = run_sweep(spec, buffer);
        }
        detail::emit(output_path, buffer.str(), out);
        return status;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace squeezelab::cli
