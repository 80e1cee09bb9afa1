// Command-line front end: analyze | antichain | geometry | sample | quantize | report.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gdq/cli.hpp"

namespace {

bool parse_range(const std::string& text, int& lo, int& hi) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        lo = std::stoi(text.substr(0, colon));
        hi = std::stoi(text.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantization dimension toolkit for Markov-type measures on "
                 "ratio-specified graph-directed fractals"};
    app.require_subcommand(1);

    gdq::cli::RunConfig cfg;
    std::string k_range = "2:10";
    std::string n_schedule = "geometric:2:12";

    app.add_option("--config", cfg.config_path, "system definition JSON")->required();
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--seed", cfg.seed, "master seed for all randomness");
    app.add_option("--j", cfg.j, "antichain level j (>= 1)");
    app.add_option("--k-range", k_range, "level range A:B for series commands");
    app.add_option("--n-schedule", n_schedule, "geometric:A:B meaning n = 2^A .. 2^B");
    app.add_option("--tol", cfg.tol, "root-solver tolerance");
    app.add_option("--cap", cfg.cap, "antichain cardinality cap");
    app.add_option("--count", cfg.sample_count, "sample count (sample command)");
    app.add_option("--resolution", cfg.sample_resolution, "sample resolution (sample command)");

    auto* analyze = app.add_subcommand("analyze", "spectral classification report");
    auto* antichain = app.add_subcommand("antichain", "emit Lambda_{j,r} and its diagnostics");
    auto* geometry = app.add_subcommand("geometry", "emit cylinder intervals of Lambda_{j,r}");
    auto* sample = app.add_subcommand("sample", "draw samples of the measure");
    auto* quantize = app.add_subcommand("quantize", "empirical quantization dimension fit");
    auto* report = app.add_subcommand("report", "concatenate JSON artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (!parse_range(k_range, cfg.k_lo, cfg.k_hi)) {
        std::cerr << "error: bad --k-range, expected A:B\n";
        return 1;
    }
    if (n_schedule.rfind("geometric:", 0) != 0 ||
        !parse_range(n_schedule.substr(10), cfg.n_exp_lo, cfg.n_exp_hi)) {
        std::cerr << "error: bad --n-schedule, expected geometric:A:B\n";
        return 1;
    }
    if ((antichain->parsed() || geometry->parsed()) && cfg.j < 1) {
        std::cerr << "error: --j must be >= 1\n";
        return 1;
    }

    if (analyze->parsed()) return gdq::cli::cmd_analyze(cfg);
    if (antichain->parsed()) return gdq::cli::cmd_antichain(cfg);
    if (geometry->parsed()) return gdq::cli::cmd_geometry(cfg);
    if (sample->parsed()) return gdq::cli::cmd_sample(cfg);
    if (quantize->parsed()) return gdq::cli::cmd_quantize(cfg);
    if (report->parsed()) return gdq::cli::cmd_report(cfg);
    return 1;
}
