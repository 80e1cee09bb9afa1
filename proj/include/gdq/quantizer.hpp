#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "gdq/antichain.hpp"
#include "gdq/errors.hpp"
#include "gdq/geometry.hpp"
#include "gdq/numeric.hpp"
#include "gdq/system.hpp"

namespace gdq {

/// Finite atomic stand-in for mu: one atom per antichain word at the cylinder
/// midpoint, weighted by chi_{sigma_1} p_sigma. `resolution` (the largest
/// cylinder diameter) bounds the Wasserstein gap to the true measure.
struct DiscreteMeasure {
    struct Atom {
        double position;
        double weight;
    };
    std::vector<Atom> atoms; // ascending by position
    double resolution = 0.0;
    int provenance_level = 0;
};

inline DiscreteMeasure discretize(const MarkovSystem& sys, const Antichain& chain,
                                  const CylinderGeometry& geom) {
    if (!chain.complete()) {
        throw Error(errc::incomplete_antichain, "cannot discretize a capped antichain");
    }
    DiscreteMeasure m;
    m.provenance_level = chain.level();
    m.atoms.reserve(chain.size());
    for (const auto& entry : chain.entries()) {
        const auto iv = geom.interval(entry.word);
        const double w = sys.initial(entry.word.front()) * std::exp(entry.log_mass);
        m.atoms.push_back({iv.midpoint(), w});
        m.resolution = std::max(m.resolution, iv.length());
    }
    // Lexicographic word order lists cylinders left to right within a root
    // tree and roots left to right, so positions are already ascending.
    return m;
}

/// Streaming variant for deep levels: atoms straight off the Lambda scan,
/// never materializing the words.
inline DiscreteMeasure discretize_level(const MarkovSystem& sys, const CylinderGeometry& geom,
                                        int j, std::size_t cap = Antichain::kDefaultCap) {
    DiscreteMeasure m;
    m.provenance_level = j;
    const ScanStats stats = scan_lambda(
        sys, j, cap, [&](std::span<const std::uint32_t> letters, double lm, double, double) {
            const auto iv = geom.interval(letters);
            m.atoms.push_back({iv.midpoint(), sys.initial(letters.front()) * std::exp(lm)});
            m.resolution = std::max(m.resolution, iv.length());
        });
    if (!stats.complete) {
        throw Error(errc::cap_exceeded, "Lambda level " + std::to_string(j) + " exceeds the cap");
    }
    return m;
}

struct QuantizationResult {
    std::size_t n = 0;
    std::vector<double> codebook; // ascending
    double distortion = 0.0;      // e_{n,r}^r of the discrete measure
    std::size_t iterations = 0;
    bool converged = false;

    double error(double r) const { return std::pow(distortion, 1.0 / r); }
};

enum class SeedPolicy {
    quantile_then_random, // restart 0 seeds codes at weight quantiles, the rest at random atoms
    random_only,
};

struct LloydOptions {
    int restarts = 8;
    std::uint64_t seed = 42;
    double tol = 1e-12; // relative distortion improvement considered converged
    std::size_t max_iter = 1000;
    SeedPolicy init = SeedPolicy::quantile_then_random;
    // When C(atoms, n) stays below this, every n-subset of atom positions is
    // tried as a seed (deterministically) instead of random restarts; tiny
    // instances then reach the global basin without luck.
    std::size_t exhaustive_seed_limit = 512;
};

namespace detail {

/// Best code position for one cell of atoms [lo, hi): argmin of
/// sum w |x - a|^r. Closed forms for r = 1 and r = 2; golden section on the
/// convex objective otherwise (r >= 1).
inline double cell_centroid(const std::vector<DiscreteMeasure::Atom>& atoms, std::size_t lo,
                            std::size_t hi, double r) {
    if (hi - lo == 1) return atoms[lo].position;
    if (r == 2.0) {
        double sw = 0.0, swx = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            sw += atoms[i].weight;
            swx += atoms[i].weight * atoms[i].position;
        }
        return swx / sw;
    }
    if (r == 1.0) {
        double total = 0.0;
        for (std::size_t i = lo; i < hi; ++i) total += atoms[i].weight;
        const double half = 0.5 * total;
        double cum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            cum += atoms[i].weight;
            if (cum >= half) return atoms[i].position;
        }
        return atoms[hi - 1].position;
    }
    auto objective = [&](double a) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += atoms[i].weight * std::pow(std::fabs(atoms[i].position - a), r);
        }
        return s;
    };
    return golden_section_minimize(objective, atoms[lo].position, atoms[hi - 1].position, 1e-12);
}

inline double cell_cost(const std::vector<DiscreteMeasure::Atom>& atoms, std::size_t lo,
                        std::size_t hi, double code, double r) {
    KahanSum s;
    for (std::size_t i = lo; i < hi; ++i) {
        s.add(atoms[i].weight * std::pow(std::fabs(atoms[i].position - code), r));
    }
    return s.value();
}

/// Cell boundaries for a sorted codebook: atom i belongs to the nearest code,
/// ties to the left one. Returns n+1 offsets into the atom array.
inline std::vector<std::size_t> assign_cells(const std::vector<DiscreteMeasure::Atom>& atoms,
                                             const std::vector<double>& codes) {
    std::vector<std::size_t> bounds(codes.size() + 1, 0);
    bounds[codes.size()] = atoms.size();
    std::size_t a = 0;
    for (std::size_t k = 0; k + 1 < codes.size(); ++k) {
        const double split = 0.5 * (codes[k] + codes[k + 1]);
        while (a < atoms.size() && atoms[a].position <= split) ++a;
        bounds[k + 1] = a;
    }
    return bounds;
}

} // namespace detail

/// Lloyd alternation for the discrete 1-D measure: nearest-code assignment,
/// per-cell generalized centroid, empty cells re-seeded at the atom with the
/// largest distortion contribution. Returns the best of `restarts` seeded runs.
inline QuantizationResult lloyd(const DiscreteMeasure& measure, std::size_t n, double r,
                                const LloydOptions& opt = {}) {
    const auto& atoms = measure.atoms;
    const std::size_t m = atoms.size();
    if (n < 1 || n > m) {
        throw Error(errc::invalid_n, "codebook size " + std::to_string(n) + " for " +
                                         std::to_string(m) + " atoms");
    }
    if (n == m) {
        QuantizationResult res;
        res.n = n;
        res.codebook.reserve(m);
        for (const auto& a : atoms) res.codebook.push_back(a.position);
        res.converged = true;
        return res;
    }

    double total_w = 0.0;
    for (const auto& a : atoms) total_w += a.weight;

    QuantizationResult best;
    best.n = n;
    best.distortion = std::numeric_limits<double>::infinity();

    auto run_from = [&](std::vector<double> codes) {
        std::sort(codes.begin(), codes.end());
        codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
        while (codes.size() < n) {
            // Duplicate positions collapsed; spread replacements at distinct atoms.
            bool grew = false;
            for (const auto& a : atoms) {
                if (!std::binary_search(codes.begin(), codes.end(), a.position)) {
                    codes.insert(std::upper_bound(codes.begin(), codes.end(), a.position),
                                 a.position);
                    grew = true;
                    break;
                }
            }
            if (!grew) break; // fewer distinct positions than codes
        }

        double prev = std::numeric_limits<double>::infinity();
        std::size_t iter = 0;
        bool converged = false;
        for (; iter < opt.max_iter; ++iter) {
            auto bounds = detail::assign_cells(atoms, codes);
            // Repair empty cells: park the code on the atom contributing most.
            bool repaired = false;
            for (std::size_t k = 0; k < codes.size(); ++k) {
                if (bounds[k] == bounds[k + 1]) {
                    std::size_t worst = 0;
                    double worst_cost = -1.0;
                    for (std::size_t q = 0; q < codes.size(); ++q) {
                        for (std::size_t i = bounds[q]; i < bounds[q + 1]; ++i) {
                            const double cost =
                                atoms[i].weight *
                                std::pow(std::fabs(atoms[i].position - codes[q]), r);
                            if (cost > worst_cost) {
                                worst_cost = cost;
                                worst = i;
                            }
                        }
                    }
                    codes[k] = atoms[worst].position;
                    repaired = true;
                }
            }
            if (repaired) {
                std::sort(codes.begin(), codes.end());
                bounds = detail::assign_cells(atoms, codes);
            }
            KahanSum dist;
            for (std::size_t k = 0; k < codes.size(); ++k) {
                if (bounds[k] == bounds[k + 1]) continue;
                codes[k] = detail::cell_centroid(atoms, bounds[k], bounds[k + 1], r);
                dist.add(detail::cell_cost(atoms, bounds[k], bounds[k + 1], codes[k], r));
            }
            std::sort(codes.begin(), codes.end());
            const double d = dist.value();
            if (d <= prev && prev - d <= opt.tol * std::max(d, 1e-300)) {
                prev = std::min(prev, d);
                converged = true;
                break;
            }
            prev = d;
        }
        if (prev < best.distortion) {
            best.codebook = std::move(codes);
            best.distortion = prev;
            best.iterations = iter;
            best.converged = converged;
        }
    };

    if (opt.init == SeedPolicy::quantile_then_random) {
        // Codes at the (k + 1/2)/n weight quantiles.
        std::vector<double> codes(n);
        std::size_t i = 0;
        double cum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double target =
                total_w * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
            while (i + 1 < m && cum + atoms[i].weight < target) cum += atoms[i++].weight;
            codes[k] = atoms[i].position;
        }
        run_from(std::move(codes));
    }

    // C(m, n), saturated at the seed limit + 1.
    double subsets = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        subsets *= static_cast<double>(m - k + 1) / static_cast<double>(k);
        if (subsets > static_cast<double>(opt.exhaustive_seed_limit) + 1.0) break;
    }
    if (subsets <= static_cast<double>(opt.exhaustive_seed_limit)) {
        std::vector<std::size_t> pick(n);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            std::vector<double> codes(n);
            for (std::size_t k = 0; k < n; ++k) codes[k] = atoms[pick[k]].position;
            run_from(std::move(codes));
            // next combination
            std::size_t k = n;
            while (k > 0 && pick[k - 1] == m - n + k - 1) --k;
            if (k == 0) break;
            ++pick[k - 1];
            for (std::size_t q = k; q < n; ++q) pick[q] = pick[q - 1] + 1;
        }
        return best;
    }

    std::mt19937_64 master(opt.seed);
    const int restarts = std::max(1, opt.restarts);
    for (int run = 0; run < restarts; ++run) {
        std::mt19937_64 gen(master());
        std::vector<std::size_t> idx(m);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t k = 0; k < n; ++k) {
            std::uniform_int_distribution<std::size_t> swap_with(k, m - 1);
            std::swap(idx[k], idx[swap_with(gen)]);
        }
        std::vector<double> codes(n);
        for (std::size_t k = 0; k < n; ++k) codes[k] = atoms[idx[k]].position;
        run_from(std::move(codes));
    }
    return best;
}

/// Distortion of a fixed codebook (no optimization); assignment by nearest code.
inline double codebook_distortion(const DiscreteMeasure& measure, std::vector<double> codes,
                                  double r) {
    std::sort(codes.begin(), codes.end());
    auto bounds = detail::assign_cells(measure.atoms, codes);
    KahanSum dist;
    for (std::size_t k = 0; k < codes.size(); ++k) {
        dist.add(detail::cell_cost(measure.atoms, bounds[k], bounds[k + 1], codes[k], r));
    }
    return dist.value();
}

struct DimensionFit {
    struct Point {
        std::size_t n;
        int level_j;
        std::size_t atom_count;
        double resolution;
        double distortion;   // e_{n,r}^r
        double e_nr;         // e_{n,r}
        double coeff_at_s;   // n^{r/s} e_{n,r}^r
    };
    std::vector<Point> points;
    double slope = 0.0;
    double half_width = 0.0; // ~2 stderr of the slope
    double s_probe = 0.0;
};

struct FitOptions {
    std::size_t atoms_per_code = 50; // discretization level chosen so phi >= this * n
    std::size_t cap = Antichain::kDefaultCap;
    LloydOptions lloyd;
};

/// Empirical dimension estimate: for each n in the schedule, pick the
/// smallest uncapped Lambda level with phi >= atoms_per_code * n, quantize,
/// and fit log n against -log e_{n,r}. The coefficient series at s_probe is
/// reported for flatness inspection.
inline DimensionFit dimension_fit(const MarkovSystem& sys, const CylinderGeometry& geom,
                                  const std::vector<std::size_t>& n_schedule, double s_probe,
                                  const FitOptions& opt = {}) {
    if (n_schedule.size() < 2) throw Error(errc::insufficient_levels, "need a schedule of >= 2 sizes");
    const double r = sys.order();
    DimensionFit fit;
    fit.s_probe = s_probe;

    int level = 1;
    DiscreteMeasure disc = discretize_level(sys, geom, level, opt.cap);
    for (std::size_t n : n_schedule) {
        const std::size_t want = opt.atoms_per_code * n;
        while (disc.atoms.size() < want) {
            // Stay on the deepest level that fits the cap; lloyd then rejects
            // n outright if even that level has fewer atoms than codes.
            DiscreteMeasure next;
            try {
                next = discretize_level(sys, geom, level + 1, opt.cap);
            } catch (const Error& e) {
                if (e.code() == errc::cap_exceeded) break;
                throw;
            }
            ++level;
            disc = std::move(next);
        }
        QuantizationResult qr = lloyd(disc, n, r, opt.lloyd);
        if (qr.distortion <= 2.0 * std::pow(disc.resolution, r)) {
            throw Error(errc::resolution_too_coarse,
                        "distortion at n = " + std::to_string(n) +
                            " is within 2x of resolution^r; estimate untrusted");
        }
        DimensionFit::Point p;
        p.n = n;
        p.level_j = level;
        p.atom_count = disc.atoms.size();
        p.resolution = disc.resolution;
        p.distortion = qr.distortion;
        p.e_nr = qr.error(r);
        p.coeff_at_s = std::pow(static_cast<double>(n), r / s_probe) * qr.distortion;
        fit.points.push_back(p);
    }

    std::vector<double> xs, ys;
    for (const auto& p : fit.points) {
        xs.push_back(-std::log(p.e_nr));
        ys.push_back(std::log(static_cast<double>(p.n)));
    }
    const LinearFit lf = least_squares(xs, ys);
    fit.slope = lf.slope;
    fit.half_width = 2.0 * lf.slope_stderr;
    return fit;
}

} // namespace gdq
