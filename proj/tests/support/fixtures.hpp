#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "gdq/gdq.hpp"

namespace fixtures {

using gdq::MarkovSystem;

/// Full 2-vertex graph, p = 1/2 and c = 1/3 on every edge, chi = (1/2, 1/2).
/// Closed forms: s_r = ln 2 / ln 3 for every r, eta = (1/2)(1/3)^r,
/// Lambda_{j,1} = Omega_{j+2}.
inline MarkovSystem homogeneous(double r = 1.0) {
    const double h = 0.5, t = 1.0 / 3.0;
    return MarkovSystem::validate({{h, h}, {h, h}}, {{t, t}, {t, t}}, {h, h}, r);
}

/// The 4-vertex two-block fixture with H1 = {1,2} feeding H2 = {3,4}.
/// Displayed-matrix reading: c = 1/4 inside H1, c = 2^{-1/s} inside H2 with
/// s = r/(2r+1), and c = 1/8 on the connecting edges. Both blocks share the
/// root s, and H1 < H2, so the lower coefficient is infinite.
inline MarkovSystem two_block_chain(double r = 1.0) {
    const double s = r / (2.0 * r + 1.0);
    const double c2 = std::pow(2.0, -1.0 / s);
    const double q = 0.25, h = 0.5, e = 0.125;
    return MarkovSystem::validate(
        {{q, q, h, 0.0}, {q, q, h, 0.0}, {0.0, 0.0, h, h}, {0.0, 0.0, h, h}},
        {{q, q, e, 0.0}, {q, q, e, 0.0}, {0.0, 0.0, c2, c2}, {0.0, 0.0, c2, c2}},
        {0.25, 0.25, 0.25, 0.25}, r);
}

/// The prose reading of the same fixture (c = 1/8 everywhere on rows 1-2).
/// Recorded for the discrepancy test: H1's root drops below H2's, M shrinks
/// to {H2}, and the classification flips.
inline MarkovSystem two_block_chain_weak_first(double r = 1.0) {
    const double s = r / (2.0 * r + 1.0);
    const double c2 = std::pow(2.0, -1.0 / s);
    const double q = 0.25, h = 0.5, e = 0.125;
    return MarkovSystem::validate(
        {{q, q, h, 0.0}, {q, q, h, 0.0}, {0.0, 0.0, h, h}, {0.0, 0.0, h, h}},
        {{e, e, e, 0.0}, {e, e, e, 0.0}, {0.0, 0.0, c2, c2}, {0.0, 0.0, c2, c2}},
        {0.25, 0.25, 0.25, 0.25}, r);
}

namespace detail {

inline std::vector<std::vector<double>> random_stochastic(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += (p[i][j] = u(rng));
        for (std::size_t j = 0; j < n; ++j) p[i][j] /= sum;
    }
    return p;
}

/// Block-diagonal 5-vertex system: a positive 2x2 block Q on {1,2} and a
/// positive 3x3 block T on {3,4,5} (no connecting edges, so the components
/// are incomparable). T's ratios are scaled by a bisection-tuned factor so
/// both blocks share s_r within 1e-9. The ratio ranges must leave T dominant
/// before tuning.
inline MarkovSystem tuned_blocks(std::uint64_t seed, double r, double cq_lo, double cq_hi,
                                 double ct_lo, double ct_hi) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        const auto q = detail::random_stochastic(rng, 2);
        const auto t = detail::random_stochastic(rng, 3);
        std::uniform_real_distribution<double> cq(cq_lo, cq_hi), ct(ct_lo, ct_hi);
        std::vector<std::vector<double>> c1(2, std::vector<double>(2));
        std::vector<std::vector<double>> c2(3, std::vector<double>(3));
        for (auto& row : c1)
            for (auto& x : row) x = cq(rng);
        for (auto& row : c2)
            for (auto& x : row) x = ct(rng);

        auto block2 = [&](double lambda) {
            std::vector<std::vector<double>> scaled = c2;
            for (auto& row : scaled)
                for (auto& x : row) x *= lambda;
            return MarkovSystem::validate(t, scaled, {1.0 / 3, 1.0 / 3, 1.0 / 3}, r);
        };
        const MarkovSystem first = MarkovSystem::validate(q, c1, {0.5, 0.5}, r);
        const double target = gdq::solve_sr(first);
        double lo = 0.05, hi = 1.0;
        if (gdq::solve_sr(block2(hi)) - target < 0.0) continue; // T not dominant, redraw
        if (gdq::solve_sr(block2(lo)) - target > 0.0) continue;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            if (gdq::solve_sr(block2(mid)) - target >= 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        const double lambda = 0.5 * (lo + hi);
        std::vector<std::vector<double>> p(5, std::vector<double>(5, 0.0));
        std::vector<std::vector<double>> c(5, std::vector<double>(5, 0.0));
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                p[i][j] = q[i][j];
                c[i][j] = c1[i][j];
            }
        }
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                p[2 + i][2 + j] = t[i][j];
                c[2 + i][2 + j] = c2[i][j] * lambda;
            }
        }
        return MarkovSystem::validate(p, c, {0.2, 0.2, 0.2, 0.2, 0.2}, r);
    }
    throw std::runtime_error("tuned block fixture: tuning failed for this seed");
}

} // namespace detail

inline MarkovSystem incomparable_blocks(std::uint64_t seed, double r = 1.0) {
    return detail::tuned_blocks(seed, r, 0.30, 0.45, 0.75, 0.92);
}

/// Same construction with ratios small enough that every row also satisfies
/// the interval-placement feasibility bound (ratio sums well below 1), so
/// the fixture supports the geometry and quantizer pipeline.
inline MarkovSystem incomparable_blocks_feasible(std::uint64_t seed, double r = 1.0) {
    return detail::tuned_blocks(seed, r, 0.20, 0.26, 0.26, 0.28);
}

struct RandomSystemOptions {
    std::size_t n_min = 2;
    std::size_t n_max = 6;
    bool irreducible = false;
    bool geometry_feasible = false;
    double r = 1.0;
};

/// Random valid system: every row gets fan-out >= 2; `irreducible` overlays
/// the full cycle so the graph is strongly connected; `geometry_feasible`
/// keeps each row's ratio sum below 0.9.
inline MarkovSystem random_system(std::mt19937_64& rng, const RandomSystemOptions& opt = {}) {
    std::uniform_int_distribution<std::size_t> pick_n(opt.n_min, opt.n_max);
    const std::size_t n = pick_n(rng);
    std::uniform_real_distribution<double> mass(0.3, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<bool>> support(n, std::vector<bool>(n, false));
    std::uniform_int_distribution<std::size_t> pick_v(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (opt.irreducible) support[i][(i + 1) % n] = true;
        while (true) {
            std::size_t fan = 0;
            for (std::size_t j = 0; j < n; ++j) fan += support[i][j] ? 1 : 0;
            if (fan >= 2) break;
            support[i][pick_v(rng)] = true;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!support[i][j] && unit(rng) < 0.3) support[i][j] = true;
        }
    }

    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    std::vector<double> chi(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        std::size_t fan = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (support[i][j]) {
                p[i][j] = mass(rng);
                sum += p[i][j];
                ++fan;
            }
        }
        for (std::size_t j = 0; j < n; ++j) p[i][j] /= sum;
        for (std::size_t j = 0; j < n; ++j) {
            if (!support[i][j]) continue;
            if (opt.geometry_feasible) {
                c[i][j] = (0.4 + 0.5 * unit(rng)) * 0.9 / static_cast<double>(fan);
            } else {
                c[i][j] = 0.3 + 0.4 * unit(rng);
            }
        }
    }
    double chi_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) chi_sum += (chi[i] = mass(rng));
    for (std::size_t i = 0; i < n; ++i) chi[i] /= chi_sum;
    return MarkovSystem::validate(p, c, chi, opt.r);
}

} // namespace fixtures
