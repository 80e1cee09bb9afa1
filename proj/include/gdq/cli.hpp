#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "gdq/io.hpp"

namespace gdq::cli {

/// Exit codes: 0 ok, 1 usage, 2 validation/config infeasibility, 3 solver,
/// 4 I/O or malformed document, 5 antichain cap exceeded, 6 resolution too
/// coarse for a trusted quantization estimate.
inline int exit_code_for(errc c) {
    switch (c) {
        case errc::row_not_stochastic:
        case errc::fan_out_below_two:
        case errc::ratio_support_mismatch:
        case errc::ratio_out_of_range:
        case errc::initial_not_positive_probability:
        case errc::bad_shape:
        case errc::inadmissible_junction:
        case errc::separation_infeasible:
        case errc::insufficient_levels:
        case errc::invalid_n:
            return 2;
        case errc::non_convergence:
        case errc::trivial_component:
        case errc::unknown_component:
            return 3;
        case errc::bad_config:
        case errc::io_error:
            return 4;
        case errc::cap_exceeded:
        case errc::incomplete_antichain:
            return 5;
        case errc::resolution_too_coarse:
            return 6;
    }
    return 3;
}

/// All knobs of one CLI invocation; every run is a pure function of
/// (config file, these fields), re-runs emit byte-identical artifacts.
struct RunConfig {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    int j = 1;
    int k_lo = 2;
    int k_hi = 10;
    int n_exp_lo = 2;
    int n_exp_hi = 12;
    double tol = 1e-12;
    std::size_t cap = Antichain::kDefaultCap;
    std::size_t sample_count = 100'000;
    double sample_resolution = 1e-3;
};

namespace detail {

template <class Fn>
int run_guarded(Fn&& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
}

inline std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::filesystem::path(cfg.out_dir) / name;
}

} // namespace detail

/// validate -> scc -> classify, plus the level diagnostics over --k-range;
/// writes analyze.json, diagnostics.csv, condensation.dot.
inline int cmd_analyze(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(
        [&]() {
            const SystemConfig sc = load_system_file(cfg.config_path);
            const SccDecomposition dec = scc_decompose(sc.system);
            ClassifyOptions opt;
            opt.root_tol = cfg.tol;
            const SpectralReport rep = classify(sc.system, dec, opt);
            nlohmann::json doc = to_json(rep, dec);
            doc["order_r"] = sc.system.order();

            // Per-level diagnostics up to the cap; deeper levels only grow.
            std::ostringstream csv;
            write_diagnostics_header(csv);
            int k_last = cfg.k_lo - 1;
            for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) {
                try {
                    const AntichainDiagnostics d = level_diagnostics(sc.system, k, rep.s_r, cfg.cap);
                    write_diagnostics_row(csv, d, d.normalized_sum);
                    k_last = k;
                } catch (const Error& e) {
                    if (e.code() != errc::cap_exceeded) throw;
                    break;
                }
            }
            write_text_file(detail::out_path(cfg, "diagnostics.csv").string(), csv.str());

            if (k_last - cfg.k_lo + 1 >= 4) {
                const GrowthSeries gs = growth_series(sc.system, rep, cfg.k_lo, k_last, cfg.cap);
                doc["growth"] = {{"levels", gs.levels},
                                 {"q", gs.q},
                                 {"verdict", to_string(gs.verdict)},
                                 {"fitted_slope", gs.fitted_slope}};
            } else {
                doc["growth"] = {{"verdict", "insufficient_levels"}};
            }
            const DecayReport decay = f_decay_check(sc.system, dec, rep, 1, 8);
            if (decay.trivial_pass) {
                doc["f_decay"] = {{"trivial_pass", true}};
            } else {
                doc["f_decay"] = {{"trivial_pass", false},
                                  {"vertices", one_based(decay.f_vertices)},
                                  {"rate", decay.rate},
                                  {"decays", decay.decays}};
            }

            write_text_file(detail::out_path(cfg, "analyze.json").string(), doc.dump(2) + "\n");
            write_text_file(detail::out_path(cfg, "condensation.dot").string(), dec.to_dot());
            return 0;
        },
        err);
}

/// Lambda_{j,r} as CSV plus one diagnostics row (Q_k taken at s_r).
inline int cmd_antichain(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(
        [&]() {
            if (cfg.j < 1) throw Error(errc::bad_config, "--j must be >= 1");
            const SystemConfig sc = load_system_file(cfg.config_path);
            const Antichain chain = build_lambda(sc.system, cfg.j, cfg.cap);
            if (!chain.complete()) {
                throw Error(errc::cap_exceeded,
                            "Lambda_" + std::to_string(cfg.j) + " exceeds cap " +
                                std::to_string(cfg.cap) + " (partial count " +
                                std::to_string(chain.size()) + ")");
            }
            const double s_r = solve_sr(sc.system, cfg.tol);
            const AntichainDiagnostics diag = diagnostics(sc.system, chain, s_r);
            std::ostringstream words;
            write_antichain_csv(words, sc.system, chain);
            write_text_file(detail::out_path(cfg, "antichain_j" + std::to_string(cfg.j) + ".csv").string(),
                            words.str());
            std::ostringstream drow;
            write_diagnostics_header(drow);
            write_diagnostics_row(drow, diag, diag.normalized_sum);
            write_text_file(
                detail::out_path(cfg, "antichain_diag_j" + std::to_string(cfg.j) + ".csv").string(),
                drow.str());
            return 0;
        },
        err);
}

/// Cylinder intervals of Lambda_{j,r} for external plotting.
inline int cmd_geometry(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(
        [&]() {
            if (cfg.j < 1) throw Error(errc::bad_config, "--j must be >= 1");
            const SystemConfig sc = load_system_file(cfg.config_path);
            const CylinderGeometry geom = CylinderGeometry::realize(sc.system, sc.separation_t);
            const Antichain chain = build_lambda(sc.system, cfg.j, cfg.cap);
            if (!chain.complete()) {
                throw Error(errc::cap_exceeded, "Lambda_" + std::to_string(cfg.j) + " exceeds cap");
            }
            std::ostringstream os;
            write_intervals_csv(os, geom, chain);
            write_text_file(detail::out_path(cfg, "geometry_j" + std::to_string(cfg.j) + ".csv").string(),
                            os.str());
            return 0;
        },
        err);
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(
        [&]() {
            const SystemConfig sc = load_system_file(cfg.config_path);
            const CylinderGeometry geom = CylinderGeometry::realize(sc.system, sc.separation_t);
            const auto samples =
                sample_measure(geom, sc.system, cfg.sample_count, cfg.sample_resolution, cfg.seed);
            std::ostringstream os;
            write_samples_csv(os, sc.system, samples);
            write_text_file(detail::out_path(cfg, "samples.csv").string(), os.str());
            return 0;
        },
        err);
}

/// discretize -> lloyd -> dimension fit over the n schedule.
inline int cmd_quantize(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(
        [&]() {
            if (cfg.n_exp_lo < 0 || cfg.n_exp_hi < cfg.n_exp_lo) {
                throw Error(errc::bad_config, "bad --n-schedule range");
            }
            const SystemConfig sc = load_system_file(cfg.config_path);
            const CylinderGeometry geom = CylinderGeometry::realize(sc.system, sc.separation_t);
            const double s_r = solve_sr(sc.system, cfg.tol);
            std::vector<std::size_t> schedule;
            for (int k = cfg.n_exp_lo; k <= cfg.n_exp_hi; ++k) {
                schedule.push_back(static_cast<std::size_t>(1) << k);
            }
            FitOptions opt;
            opt.cap = cfg.cap;
            opt.lloyd.seed = cfg.seed;
            const DimensionFit fit = dimension_fit(sc.system, geom, schedule, s_r, opt);
            std::ostringstream os;
            write_quantize_csv(os, fit);
            write_text_file(detail::out_path(cfg, "quantize.csv").string(), os.str());
            write_text_file(detail::out_path(cfg, "quantize_fit.json").string(),
                            to_json(fit, s_r).dump(2) + "\n");
            return 0;
        },
        err);
}

/// Concatenates the JSON artifacts found in the output directory.
inline int cmd_report(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(
        [&]() {
            nlohmann::json doc;
            doc["schema_version"] = kSchemaVersion;
            bool found = false;
            for (const char* name : {"analyze", "quantize_fit"}) {
                const auto path = std::filesystem::path(cfg.out_dir) / (std::string(name) + ".json");
                if (std::filesystem::exists(path)) {
                    std::ifstream in(path);
                    nlohmann::json part;
                    try {
                        in >> part;
                    } catch (const nlohmann::json::exception& e) {
                        throw Error(errc::io_error, path.string() + ": " + e.what());
                    }
                    doc[name] = std::move(part);
                    found = true;
                }
            }
            if (!found) {
                throw Error(errc::io_error, "no JSON artifacts in " + cfg.out_dir);
            }
            write_text_file(detail::out_path(cfg, "report.json").string(), doc.dump(2) + "\n");
            return 0;
        },
        err);
}

} // namespace gdq::cli
