#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gdq/antichain.hpp"
#include "gdq/errors.hpp"
#include "gdq/matrix.hpp"
#include "gdq/numeric.hpp"
#include "gdq/spectral.hpp"
#include "gdq/system.hpp"

namespace gdq {

/// Quantitative summary of one finite maximal antichain: the distortion proxy
/// sum p_sigma c_sigma^r and the normalized sum at a supplied exponent s
/// (each term raised to s/(s+r)).
struct AntichainDiagnostics {
    int level = 0;            // j for Lambda-built chains, 0 otherwise
    std::size_t phi = 0;      // cardinality
    std::size_t l1 = 0;       // min word length
    std::size_t l2 = 0;       // max word length
    double proxy = 0.0;       // sum p_sigma c_sigma^r
    double normalized_sum = 0.0;
    double exponent_s = 0.0;  // the s the normalized sum was taken at
};

/// Compensated sums over a completed antichain, in its (lexicographic)
/// storage order. Throws IncompleteAntichain on capped input.
inline AntichainDiagnostics diagnostics(const MarkovSystem& sys, const Antichain& chain,
                                        double exponent_s) {
    if (!chain.complete()) {
        throw Error(errc::incomplete_antichain, "antichain was capped; sums would be partial");
    }
    const double r = sys.order();
    const double e = exponent_s / (exponent_s + r);
    KahanSum proxy, normalized;
    for (const auto& entry : chain.entries()) {
        proxy.add(std::exp(entry.log_weight));
        normalized.add(std::exp(e * entry.log_weight));
    }
    AntichainDiagnostics d;
    d.level = chain.level();
    d.phi = chain.size();
    d.l1 = chain.min_length();
    d.l2 = chain.max_length();
    d.proxy = proxy.value();
    d.normalized_sum = normalized.value();
    d.exponent_s = exponent_s;
    return d;
}

/// Streaming per-level diagnostics: one Lambda scan, no materialization.
inline AntichainDiagnostics level_diagnostics(const MarkovSystem& sys, int j, double exponent_s,
                                              std::size_t cap = Antichain::kDefaultCap) {
    const double e = exponent_s / (exponent_s + sys.order());
    KahanSum proxy, normalized;
    ScanStats stats = scan_lambda(sys, j, cap,
                                  [&](std::span<const std::uint32_t>, double, double, double lw) {
                                      proxy.add(std::exp(lw));
                                      normalized.add(std::exp(e * lw));
                                  });
    if (!stats.complete) throw Error(errc::cap_exceeded, "Lambda level " + std::to_string(j));
    AntichainDiagnostics d;
    d.level = j;
    d.phi = stats.count;
    d.l1 = stats.min_length;
    d.l2 = stats.max_length;
    d.proxy = proxy.value();
    d.normalized_sum = normalized.value();
    d.exponent_s = exponent_s;
    return d;
}

/// Streaming equivalents used where materializing the words is wasteful.
inline double lambda_normalized_sum(const MarkovSystem& sys, int j, double exponent_s,
                                    std::size_t cap = Antichain::kDefaultCap) {
    const double e = exponent_s / (exponent_s + sys.order());
    KahanSum sum;
    ScanStats stats = scan_lambda(sys, j, cap,
                                  [&](std::span<const std::uint32_t>, double, double, double lw) {
                                      sum.add(std::exp(e * lw));
                                  });
    if (!stats.complete) throw Error(errc::cap_exceeded, "Lambda level " + std::to_string(j));
    return sum.value();
}

inline double level_normalized_sum(const MarkovSystem& sys, std::size_t k, double exponent_s,
                                   std::size_t cap = Antichain::kDefaultCap) {
    const double e = exponent_s / (exponent_s + sys.order());
    KahanSum sum;
    ScanStats stats = scan_level(sys, k, cap,
                                 [&](std::span<const std::uint32_t>, double, double, double lw) {
                                     sum.add(std::exp(e * lw));
                                 });
    if (!stats.complete) throw Error(errc::cap_exceeded, "Omega level " + std::to_string(k));
    return sum.value();
}

struct SlopeEstimate {
    double slope = 0.0;
    double residual_rms = 0.0;
    std::size_t levels = 0;
};

/// Least-squares slope of log phi_{j,r} against -log(proxy_j^{ 1/r }) over a
/// range of Lambda levels; approaches the quantization dimension on
/// irreducible systems. Needs at least 4 uncapped levels.
inline SlopeEstimate proxy_dimension_estimate(const MarkovSystem& sys, int j_lo, int j_hi,
                                              std::size_t cap = Antichain::kDefaultCap) {
    if (j_lo < 1 || j_hi - j_lo + 1 < 4) {
        throw Error(errc::insufficient_levels, "need at least 4 levels with j >= 1");
    }
    const double r = sys.order();
    std::vector<double> xs, ys;
    for (int j = j_lo; j <= j_hi; ++j) {
        KahanSum proxy;
        std::size_t phi = 0;
        ScanStats stats = scan_lambda(sys, j, cap,
                                      [&](std::span<const std::uint32_t>, double, double, double lw) {
                                          proxy.add(std::exp(lw));
                                          ++phi;
                                      });
        if (!stats.complete) throw Error(errc::cap_exceeded, "Lambda level " + std::to_string(j));
        xs.push_back(-std::log(proxy.value()) / r);
        ys.push_back(std::log(static_cast<double>(phi)));
    }
    const LinearFit fit = least_squares(xs, ys);
    return {fit.slope, fit.residual_rms, xs.size()};
}

enum class Trend { bounded, increasing, indeterminate };

inline const char* to_string(Trend t) {
    switch (t) {
        case Trend::bounded: return "bounded";
        case Trend::increasing: return "increasing";
        case Trend::indeterminate: return "indeterminate";
    }
    return "?";
}

/// The Q_k series: normalized antichain sums at the exponent s_r/(s_r+r),
/// per Lambda level, with a finite-level trend verdict. The verdict is a
/// diagnostic; the spectral classification is the ground truth it must agree
/// with (bounded <=> finite upper coefficient).
struct GrowthSeries {
    std::vector<int> levels;
    std::vector<double> q;
    Trend verdict = Trend::indeterminate;
    double fitted_slope = 0.0;
    double mid_quartile_mean = 0.0;
    double last_quartile_mean = 0.0;
};

inline GrowthSeries growth_series(const MarkovSystem& sys, const SpectralReport& report, int k_lo,
                                  int k_hi, std::size_t cap = Antichain::kDefaultCap) {
    if (k_lo < 1 || k_hi - k_lo + 1 < 4) {
        throw Error(errc::insufficient_levels, "need at least 4 levels with k >= 1");
    }
    GrowthSeries gs;
    for (int k = k_lo; k <= k_hi; ++k) {
        gs.levels.push_back(k);
        gs.q.push_back(lambda_normalized_sum(sys, k, report.s_r, cap));
    }
    const std::size_t n = gs.q.size();
    auto mean_over = [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += gs.q[i];
        return s / static_cast<double>(hi - lo);
    };
    gs.mid_quartile_mean = mean_over(n / 4, 3 * n / 4);
    gs.last_quartile_mean = mean_over(3 * n / 4, n);

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = static_cast<double>(gs.levels[i]);
        ys[i] = gs.q[i];
    }
    gs.fitted_slope = least_squares(xs, ys).slope;

    const bool flat = std::fabs(gs.last_quartile_mean - gs.mid_quartile_mean) <=
                      0.05 * std::fabs(gs.mid_quartile_mean);
    bool monotone = true;
    for (std::size_t i = 1; i < n; ++i) monotone = monotone && gs.q[i] > gs.q[i - 1];
    if (flat) {
        gs.verdict = Trend::bounded;
    } else if (monotone && gs.fitted_slope > 0.0) {
        gs.verdict = Trend::increasing;
    } else {
        gs.verdict = Trend::indeterminate;
    }
    return gs;
}

/// Decay of the normalized sums over words confined to F = G \ union(M).
/// Computed through restricted matrix powers: sum over F_n equals
/// 1^T A_{F}^{n-1} 1 at the exponent s_r/(s_r+r).
struct DecayReport {
    bool trivial_pass = false;   // F empty: nothing to decay
    std::vector<int> f_vertices; // 0-based
    std::vector<int> lengths;
    std::vector<double> sums;
    double rate = 0.0;           // fitted geometric rate, 0 when sums vanish
    bool decays = true;          // rate < 1
};

inline DecayReport f_decay_check(const MarkovSystem& sys, const SccDecomposition& dec,
                                 const SpectralReport& report, int n_lo, int n_hi) {
    DecayReport out;
    std::vector<bool> in_m(sys.size(), false);
    for (int k : report.class_m) {
        for (int v : dec.component(static_cast<std::size_t>(k)).vertices) {
            in_m[static_cast<std::size_t>(v)] = true;
        }
    }
    for (std::size_t v = 0; v < sys.size(); ++v) {
        if (!in_m[v]) out.f_vertices.push_back(static_cast<int>(v));
    }
    if (out.f_vertices.empty()) {
        out.trivial_pass = true;
        return out;
    }
    if (n_lo < 1 || n_hi < n_lo) throw Error(errc::bad_config, "bad length range");
    const Matrix af = quantization_matrix(sys, report.s_r, out.f_vertices);
    std::vector<double> v(out.f_vertices.size(), 1.0);
    int length = 1;
    for (int n = n_lo; n <= n_hi; ++n) {
        while (length < n) {
            v = af.apply(v);
            ++length;
        }
        out.lengths.push_back(n);
        out.sums.push_back(l1_norm(v));
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < out.sums.size(); ++i) {
        if (out.sums[i] > 0.0) {
            xs.push_back(static_cast<double>(out.lengths[i]));
            ys.push_back(std::log(out.sums[i]));
        }
    }
    if (xs.size() < 2) {
        out.rate = 0.0; // no admissible F-internal words beyond the first level
        out.decays = true;
        return out;
    }
    out.rate = std::exp(least_squares(xs, ys).slope);
    out.decays = out.rate < 1.0;
    return out;
}

} // namespace gdq
