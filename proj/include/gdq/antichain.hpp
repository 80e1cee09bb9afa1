#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "gdq/errors.hpp"
#include "gdq/system.hpp"
#include "gdq/word.hpp"

namespace gdq {

struct ScanStats {
    std::size_t count = 0;
    std::size_t min_length = 0;
    std::size_t max_length = 0;
    bool complete = true;
};

namespace detail {

/// Depth-first scan over the word tree spanned by `succ`, starting from each
/// root in order. Words are visited in lexicographic order. The visitor
/// receives (letters, log_mass, log_ratio, log_weight), all accumulated edge
/// by edge along the path. `emit_at_level == 0` selects the Lambda rule:
/// descend while log-weight >= threshold and emit the first descendant that
/// crosses strictly below it (ties stay above, so their children are
/// emitted). `emit_at_level == k` emits every word of exact length k instead.
template <class Fn>
ScanStats scan_words(const MarkovSystem& sys, const std::vector<std::vector<std::uint32_t>>& succ,
                     std::span<const std::uint32_t> roots, double threshold,
                     std::size_t emit_at_level, std::size_t cap, Fn&& fn) {
    ScanStats stats;
    stats.min_length = std::numeric_limits<std::size_t>::max();

    std::vector<std::uint32_t> path;
    std::vector<double> lm, lr, lw; // prefix log mass / log ratio / log weight
    std::vector<std::size_t> next;  // next successor index per depth

    auto emit = [&](double log_mass, double log_ratio, double log_weight) -> bool {
        if (stats.count >= cap) {
            stats.complete = false;
            return false;
        }
        fn(std::span<const std::uint32_t>(path), log_mass, log_ratio, log_weight);
        ++stats.count;
        stats.min_length = std::min(stats.min_length, path.size());
        stats.max_length = std::max(stats.max_length, path.size());
        return true;
    };

    for (std::uint32_t root : roots) {
        if (!stats.complete) break;
        path.assign(1, root);
        lm.assign(1, 0.0);
        lr.assign(1, 0.0);
        lw.assign(1, 0.0);
        next.assign(1, 0);
        if (emit_at_level == 1) {
            if (!emit(0.0, 0.0, 0.0)) break;
            continue;
        }
        while (!path.empty()) {
            const std::size_t d = path.size() - 1;
            const std::uint32_t u = path[d];
            const auto& out = succ[u];
            if (next[d] >= out.size()) {
                path.pop_back();
                lm.pop_back();
                lr.pop_back();
                lw.pop_back();
                next.pop_back();
                continue;
            }
            const std::uint32_t a = out[next[d]++];
            const double lm2 = lm[d] + sys.log_transition(u, a);
            const double lr2 = lr[d] + sys.log_ratio(u, a);
            const double lw2 = lw[d] + sys.edge_log_weight(u, a);
            const bool emit_here =
                emit_at_level == 0 ? lw2 < threshold : path.size() + 1 == emit_at_level;
            if (emit_here) {
                path.push_back(a);
                const bool ok = emit(lm2, lr2, lw2);
                path.pop_back();
                if (!ok) break;
            } else {
                path.push_back(a);
                lm.push_back(lm2);
                lr.push_back(lr2);
                lw.push_back(lw2);
                next.push_back(0);
            }
        }
        if (!stats.complete) break;
    }
    if (stats.count == 0) stats.min_length = 0;
    return stats;
}

inline std::vector<std::vector<std::uint32_t>> restricted_successors(
    const MarkovSystem& sys, std::span<const int> subset) {
    std::vector<bool> in(sys.size(), false);
    for (int v : subset) in[static_cast<std::size_t>(v)] = true;
    std::vector<std::vector<std::uint32_t>> succ(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (!in[i]) continue;
        for (std::uint32_t a : sys.successors(i)) {
            if (in[a]) succ[i].push_back(a);
        }
    }
    return succ;
}

inline std::vector<std::vector<std::uint32_t>> all_successors(const MarkovSystem& sys) {
    std::vector<std::vector<std::uint32_t>> succ(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) succ[i] = sys.successors(i);
    return succ;
}

inline std::vector<std::uint32_t> all_roots(const MarkovSystem& sys) {
    std::vector<std::uint32_t> roots(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) roots[i] = static_cast<std::uint32_t>(i);
    return roots;
}

} // namespace detail

/// Streaming visit of Lambda_{j,r} in lexicographic order without
/// materializing words; the workhorse behind build_lambda and the level sums.
template <class Fn>
ScanStats scan_lambda(const MarkovSystem& sys, int j, std::size_t cap, Fn&& fn) {
    if (j < 1) throw Error(errc::bad_config, "Lambda level j must be >= 1");
    const auto succ = detail::all_successors(sys);
    const auto roots = detail::all_roots(sys);
    return detail::scan_words(sys, succ, roots, static_cast<double>(j) * sys.log_eta(), 0, cap,
                              std::forward<Fn>(fn));
}

/// Same scan restricted to the subgraph induced by `subset`, starting only
/// from `root` (maximal antichains in H^*(i)).
template <class Fn>
ScanStats scan_lambda_in(const MarkovSystem& sys, std::span<const int> subset, int root, int j,
                         std::size_t cap, Fn&& fn) {
    if (j < 1) throw Error(errc::bad_config, "Lambda level j must be >= 1");
    const auto succ = detail::restricted_successors(sys, subset);
    const std::uint32_t r0 = static_cast<std::uint32_t>(root);
    return detail::scan_words(sys, succ, std::span<const std::uint32_t>(&r0, 1),
                              static_cast<double>(j) * sys.log_eta(), 0, cap, std::forward<Fn>(fn));
}

/// Streaming visit of the full level Omega_k (every admissible word of length k).
template <class Fn>
ScanStats scan_level(const MarkovSystem& sys, std::size_t k, std::size_t cap, Fn&& fn) {
    if (k < 1) throw Error(errc::bad_config, "level k must be >= 1");
    const auto succ = detail::all_successors(sys);
    const auto roots = detail::all_roots(sys);
    return detail::scan_words(sys, succ, roots, 0.0, k, cap, std::forward<Fn>(fn));
}

/// F_k-style restricted level: words of length k staying inside `subset`.
template <class Fn>
ScanStats scan_level_in(const MarkovSystem& sys, std::span<const int> subset, std::size_t k,
                        std::size_t cap, Fn&& fn) {
    if (k < 1) throw Error(errc::bad_config, "level k must be >= 1");
    const auto succ = detail::restricted_successors(sys, subset);
    std::vector<std::uint32_t> roots;
    for (int v : subset) roots.push_back(static_cast<std::uint32_t>(v));
    return detail::scan_words(sys, succ, roots, 0.0, k, cap, std::forward<Fn>(fn));
}

struct AntichainEntry {
    Word word;
    double log_mass;
    double log_ratio;
    double log_weight; // log(p_sigma c_sigma^r), the scanner's own accumulation
};

/// A finite maximal antichain of admissible words, sorted lexicographically.
/// When built by build_lambda it is the level set Lambda_{j,r}; when built by
/// full_level it is Omega_k. `complete() == false` means the cardinality cap
/// was hit: the stored words are a prefix of the construction and the set is
/// not maximal.
class Antichain {
public:
    static constexpr std::size_t kDefaultCap = 1'000'000;

    Antichain(std::vector<AntichainEntry> entries, int level, double eta, ScanStats stats)
        : entries_(std::move(entries)), level_(level), eta_(eta), stats_(stats) {}

    const std::vector<AntichainEntry>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    /// phi_{j,r}: the cardinality (partial when capped).
    std::size_t size() const { return entries_.size(); }
    bool complete() const { return stats_.complete; }

    /// The threshold level j for Lambda-built chains; 0 for Omega_k chains.
    int level() const { return level_; }
    double eta() const { return eta_; }

    /// l_{1j} and l_{2j}: minimal and maximal word length.
    std::size_t min_length() const { return stats_.min_length; }
    std::size_t max_length() const { return stats_.max_length; }

private:
    std::vector<AntichainEntry> entries_;
    int level_;
    double eta_;
    ScanStats stats_;
};

/// Lambda_{j,r} = { sigma : p_{sigma^-} c_{sigma^-}^r >= eta^j > p_sigma c_sigma^r },
/// materialized by lexicographic depth-first descent.
inline Antichain build_lambda(const MarkovSystem& sys, int j,
                              std::size_t cap = Antichain::kDefaultCap) {
    std::vector<AntichainEntry> entries;
    ScanStats stats = scan_lambda(
        sys, j, cap, [&](std::span<const std::uint32_t> letters, double lm, double lr, double lw) {
            entries.push_back(
                {Word(std::vector<std::uint32_t>(letters.begin(), letters.end())), lm, lr, lw});
        });
    return Antichain(std::move(entries), j, sys.eta(), stats);
}

/// Omega_k as an antichain (every admissible word of length k).
inline Antichain full_level(const MarkovSystem& sys, std::size_t k,
                            std::size_t cap = Antichain::kDefaultCap) {
    std::vector<AntichainEntry> entries;
    ScanStats stats = scan_level(
        sys, k, cap, [&](std::span<const std::uint32_t> letters, double lm, double lr, double lw) {
            entries.push_back(
                {Word(std::vector<std::uint32_t>(letters.begin(), letters.end())), lm, lr, lw});
        });
    return Antichain(std::move(entries), 0, sys.eta(), stats);
}

/// Maximal antichain in H^*(i): Lambda-rule words confined to `subset`,
/// starting at `root`.
inline Antichain build_lambda_in(const MarkovSystem& sys, std::span<const int> subset, int root,
                                 int j, std::size_t cap = Antichain::kDefaultCap) {
    std::vector<AntichainEntry> entries;
    ScanStats stats = scan_lambda_in(
        sys, subset, root, j, cap,
        [&](std::span<const std::uint32_t> letters, double lm, double lr, double lw) {
            entries.push_back(
                {Word(std::vector<std::uint32_t>(letters.begin(), letters.end())), lm, lr, lw});
        });
    return Antichain(std::move(entries), j, sys.eta(), stats);
}

/// N1 = min{ h >= 1 : (p_max c_max^r)^h < eta }, the refinement depth of the
/// cardinality-comparison lemma.
inline int refinement_depth(const MarkovSystem& sys) {
    const double lw_max = sys.log_weight_max();
    const double l_eta = sys.log_eta();
    int h = 1;
    while (static_cast<double>(h) * lw_max >= l_eta) {
        ++h;
        if (h > 1'000'000) throw Error(errc::non_convergence, "refinement depth runaway");
    }
    return h;
}

struct RefineBound {
    double ratio;        // phi_{j+1,r} / phi_{j,r}
    double bound;        // N^{N1}
    int n1;              // N1
    std::size_t phi_j;
    std::size_t phi_j1;
};

/// Consecutive-level cardinality comparison: phi_j <= phi_{j+1} <= N^{N1} phi_j.
inline RefineBound antichain_refine_bound(const MarkovSystem& sys, int j,
                                          std::size_t cap = Antichain::kDefaultCap) {
    std::size_t phi_j = 0, phi_j1 = 0;
    auto count = [](std::size_t& c) {
        return [&c](std::span<const std::uint32_t>, double, double, double) { ++c; };
    };
    const ScanStats s0 = scan_lambda(sys, j, cap, count(phi_j));
    const ScanStats s1 = scan_lambda(sys, j + 1, cap, count(phi_j1));
    if (!s0.complete || !s1.complete) {
        throw Error(errc::cap_exceeded, "refine bound needs both levels uncapped");
    }
    if (phi_j1 < phi_j) {
        throw std::logic_error("antichain refinement lost monotonicity");
    }
    const int n1 = refinement_depth(sys);
    RefineBound rb;
    rb.phi_j = phi_j;
    rb.phi_j1 = phi_j1;
    rb.ratio = static_cast<double>(phi_j1) / static_cast<double>(phi_j);
    rb.n1 = n1;
    rb.bound = std::pow(static_cast<double>(sys.size()), n1);
    return rb;
}

} // namespace gdq
