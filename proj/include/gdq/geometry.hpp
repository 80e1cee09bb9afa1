#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gdq/errors.hpp"
#include "gdq/system.hpp"
#include "gdq/word.hpp"

namespace gdq {

/// Explicit 1-D realization of the cylinder construction: root intervals
/// J_i = [2i-2, 2i-1] (unit diameter, unit gaps), children placed left to
/// right inside the parent in ascending vertex order, separated by the
/// uniform per-row gap g_i = (1 - sum_j c_ij) / (m_i - 1). Feasibility of the
/// separation constant t requires g_i >= t * max_j c_ij on every row, so the
/// separation condition holds at every depth by construction.
///
/// Interval queries are lazy and pure: J_sigma costs O(|sigma|).
class CylinderGeometry {
public:
    /// Stored as (left, length): a cylinder at depth d has length c_sigma,
    /// which drops below the ulp of its coordinate long before desk-scale
    /// depths run out, so right-minus-left would destroy it.
    struct Interval {
        double left;
        double length_;
        double length() const { return length_; }
        double right() const { return left + length_; }
        double midpoint() const { return left + 0.5 * length_; }
        bool contains(const Interval& other) const {
            return left <= other.left && other.right() <= right();
        }
    };

    /// Largest t the placement rule can honor for this system.
    static double max_feasible_t(const MarkovSystem& sys) {
        double t = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < sys.size(); ++i) {
            t = std::min(t, row_feasible_t(sys, i));
        }
        return t;
    }

    /// Builds the geometry; without an explicit t, uses 0.9 * max feasible
    /// (clamped below 1 to stay a valid separation constant).
    static CylinderGeometry realize(const MarkovSystem& sys, std::optional<double> t = {}) {
        double sep;
        if (t.has_value()) {
            sep = *t;
            if (!(sep > 0.0 && sep < 1.0)) {
                throw Error(errc::bad_config, "separation t must lie in (0,1)");
            }
            for (std::size_t i = 0; i < sys.size(); ++i) {
                if (row_feasible_t(sys, i) < sep) {
                    throw SeparationError(
                        static_cast<int>(i + 1), max_feasible_t(sys),
                        "row " + std::to_string(i + 1) + " cannot honor t = " + std::to_string(sep) +
                            "; maximal feasible t = " + std::to_string(max_feasible_t(sys)));
                }
            }
        } else {
            sep = std::min(0.9 * max_feasible_t(sys), 0.99);
            if (!(sep > 0.0)) {
                throw SeparationError(0, max_feasible_t(sys),
                                      "no positive separation constant is feasible");
            }
        }
        return CylinderGeometry(sys, sep);
    }

    double separation_t() const { return t_; }

    Interval root(std::uint32_t vertex) const {
        return {2.0 * static_cast<double>(vertex), 1.0};
    }

    /// J_sigma for a non-empty admissible word.
    Interval interval(std::span<const std::uint32_t> letters) const {
        if (letters.empty()) {
            throw Error(errc::bad_config, "the empty word has no cylinder interval");
        }
        double left = 2.0 * static_cast<double>(letters[0]);
        double len = 1.0;
        for (std::size_t h = 0; h + 1 < letters.size(); ++h) {
            const std::uint32_t u = letters[h];
            const std::uint32_t a = letters[h + 1];
            const std::size_t rank = child_rank_[u][a];
            left += child_offset_[u][rank] * len;
            len *= ratio_[u][rank];
        }
        return {left, len};
    }

    Interval interval(const Word& w) const { return interval(w.letters()); }

private:
    CylinderGeometry(const MarkovSystem& sys, double t) : t_(t) {
        const std::size_t n = sys.size();
        child_rank_.assign(n, {});
        child_offset_.assign(n, {});
        ratio_.assign(n, {});
        for (std::size_t i = 0; i < n; ++i) {
            const auto& succ = sys.successors(i);
            const std::size_t m = succ.size();
            double csum = 0.0;
            for (std::uint32_t a : succ) csum += sys.ratio(i, a);
            const double gap = (1.0 - csum) / static_cast<double>(m - 1);
            child_rank_[i].assign(n, 0);
            child_offset_[i].resize(m);
            ratio_[i].resize(m);
            double off = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                child_rank_[i][succ[k]] = k;
                child_offset_[i][k] = off;
                ratio_[i][k] = sys.ratio(i, succ[k]);
                off += ratio_[i][k] + gap;
            }
        }
    }

    static double row_feasible_t(const MarkovSystem& sys, std::size_t i) {
        const auto& succ = sys.successors(i);
        double csum = 0.0, cmax = 0.0;
        for (std::uint32_t a : succ) {
            csum += sys.ratio(i, a);
            cmax = std::max(cmax, sys.ratio(i, a));
        }
        const double gap = (1.0 - csum) / static_cast<double>(succ.size() - 1);
        return gap / cmax;
    }

    double t_;
    std::vector<std::vector<std::size_t>> child_rank_;
    std::vector<std::vector<double>> child_offset_;
    std::vector<std::vector<double>> ratio_;
};

/// One draw from the Markov-type measure, resolved to a cylinder whose
/// diameter first reaches the requested resolution; `position` is the
/// midpoint of that cylinder, so it lies within `resolution` of the true
/// projected point.
struct SamplePoint {
    double position;
    Word word;
    double resolution; // |J_sigma| of the emitted cylinder
};

/// Draws `count` samples: initial vertex ~ chi, successive letters ~ rows of
/// P, stopping at the first cylinder with c_sigma <= resolution. Fully
/// deterministic for a fixed seed.
inline std::vector<SamplePoint> sample_measure(const CylinderGeometry& geom,
                                               const MarkovSystem& sys, std::size_t count,
                                               double resolution, std::uint64_t seed) {
    if (!(resolution > 0.0 && resolution <= 1.0)) {
        throw Error(errc::bad_config, "resolution must lie in (0,1]");
    }
    if (count < 1) throw Error(errc::bad_config, "count must be >= 1");
    std::mt19937_64 gen(seed);
    auto uniform = [&gen]() {
        return std::generate_canonical<double, std::numeric_limits<double>::digits>(gen);
    };
    const std::size_t n = sys.size();
    std::vector<SamplePoint> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<std::uint32_t> letters;
        double u = uniform();
        double cum = 0.0;
        std::uint32_t v = static_cast<std::uint32_t>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            cum += sys.initial(i);
            if (u <= cum) {
                v = static_cast<std::uint32_t>(i);
                break;
            }
        }
        letters.push_back(v);
        double c_sigma = 1.0;
        while (c_sigma > resolution) {
            const auto& succ = sys.successors(v);
            double u2 = uniform();
            double cum2 = 0.0;
            std::uint32_t next = succ.back();
            for (std::uint32_t a : succ) {
                cum2 += sys.transition(v, a);
                if (u2 <= cum2) {
                    next = a;
                    break;
                }
            }
            c_sigma *= sys.ratio(v, next);
            letters.push_back(next);
            v = next;
        }
        Word w(std::move(letters));
        const auto iv = geom.interval(w);
        out.push_back({iv.midpoint(), std::move(w), iv.length()});
    }
    return out;
}

} // namespace gdq
