#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "gdq/detail/scc.hpp"
#include "gdq/errors.hpp"
#include "gdq/system.hpp"
#include "gdq/word.hpp"

namespace gdq {

/// Strongly connected components of the transition graph, their condensation
/// DAG, and the reflexive-transitive reachability relation between them.
/// Components are indexed by smallest contained vertex, ascending.
class SccDecomposition {
public:
    struct Component {
        std::vector<int> vertices; // sorted ascending, 0-based
        bool trivial;              // singleton without a self-loop
    };

    static SccDecomposition of(const MarkovSystem& sys) {
        const std::size_t n = sys.size();
        std::vector<std::vector<int>> adj(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::uint32_t a : sys.successors(i)) adj[i].push_back(static_cast<int>(a));
        }
        SccDecomposition dec;
        auto comps = detail::strongly_connected_components(adj);
        dec.component_of_.assign(n, -1);
        bool has_big = false;
        for (std::size_t k = 0; k < comps.size(); ++k) {
            Component c;
            c.vertices = std::move(comps[k]);
            c.trivial = c.vertices.size() == 1 &&
                        !sys.edge(static_cast<std::size_t>(c.vertices[0]),
                                  static_cast<std::size_t>(c.vertices[0]));
            has_big = has_big || c.vertices.size() >= 2;
            for (int v : c.vertices) dec.component_of_[static_cast<std::size_t>(v)] = static_cast<int>(k);
            dec.components_.push_back(std::move(c));
        }
        // Fan-out >= 2 forces a sink component with at least two vertices.
        if (!has_big) {
            throw std::logic_error("no strongly connected component of size >= 2; system invalid");
        }
        const std::size_t m = dec.components_.size();
        std::vector<std::vector<bool>> edge(m, std::vector<bool>(m, false));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::uint32_t a : sys.successors(i)) {
                const int ci = dec.component_of_[i];
                const int ca = dec.component_of_[a];
                if (ci != ca) edge[static_cast<std::size_t>(ci)][static_cast<std::size_t>(ca)] = true;
            }
        }
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                if (edge[a][b]) dec.condensation_edges_.emplace_back(static_cast<int>(a), static_cast<int>(b));
            }
        }
        // Reflexive-transitive closure over the (acyclic) condensation.
        dec.reach_ = edge;
        for (std::size_t k = 0; k < m; ++k) dec.reach_[k][k] = true;
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t a = 0; a < m; ++a) {
                if (!dec.reach_[a][k]) continue;
                for (std::size_t b = 0; b < m; ++b) {
                    if (dec.reach_[k][b]) dec.reach_[a][b] = true;
                }
            }
        }
        return dec;
    }

    std::size_t count() const { return components_.size(); }
    const Component& component(std::size_t k) const { return components_[k]; }
    const std::vector<Component>& components() const { return components_; }
    int component_of(int vertex) const { return component_of_[static_cast<std::size_t>(vertex)]; }

    /// Reflexive-transitive reachability between component indices.
    bool reachable(int from, int to) const {
        return reach_[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
    }

    const std::vector<std::pair<int, int>>& condensation_edges() const {
        return condensation_edges_;
    }

    /// DOT rendering of the condensation for external tooling.
    std::string to_dot() const {
        std::string out = "digraph condensation {\n";
        for (std::size_t k = 0; k < components_.size(); ++k) {
            out += "  c" + std::to_string(k) + " [label=\"{";
            for (std::size_t i = 0; i < components_[k].vertices.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(components_[k].vertices[i] + 1);
            }
            out += "}\"";
            if (components_[k].trivial) out += " shape=plaintext";
            out += "];\n";
        }
        for (const auto& [a, b] : condensation_edges_) {
            out += "  c" + std::to_string(a) + " -> c" + std::to_string(b) + ";\n";
        }
        out += "}\n";
        return out;
    }

private:
    std::vector<Component> components_;
    std::vector<int> component_of_;
    std::vector<std::pair<int, int>> condensation_edges_;
    std::vector<std::vector<bool>> reach_;
};

inline SccDecomposition scc_decompose(const MarkovSystem& sys) { return SccDecomposition::of(sys); }

enum class Relation {
    incomparable,
    first_precedes,  // H_a < H_b: a path leads from H_a into H_b
    second_precedes, // H_b < H_a
};

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::incomparable: return "incomparable";
        case Relation::first_precedes: return "first_precedes";
        case Relation::second_precedes: return "second_precedes";
    }
    return "?";
}

struct PairVerdict {
    int a; // component index
    int b;
    Relation relation;
    Word witness; // empty when incomparable
};

/// Pairwise comparability of a set of components (the class M of the main
/// theorem) plus explicit admissible witness paths for comparable pairs.
struct ComparabilityVerdict {
    std::vector<int> class_m;
    std::vector<PairVerdict> pairs;

    bool all_incomparable() const {
        for (const auto& p : pairs) {
            if (p.relation != Relation::incomparable) return false;
        }
        return true;
    }
};

namespace detail {

/// Lexicographically smallest shortest admissible path from any vertex of
/// `from` to any vertex of `to`. Assumes reachability holds.
inline Word witness_path(const MarkovSystem& sys, const std::vector<int>& from,
                         const std::vector<int>& to) {
    const std::size_t n = sys.size();
    const int inf = std::numeric_limits<int>::max();
    std::vector<int> dist(n, inf); // edges to reach `to`
    std::deque<int> queue;
    for (int v : to) {
        dist[static_cast<std::size_t>(v)] = 0;
        queue.push_back(v);
    }
    // Reverse BFS over predecessors.
    std::vector<std::vector<int>> preds(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t a : sys.successors(i)) preds[a].push_back(static_cast<int>(i));
    }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int p : preds[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(p)] == inf) {
                dist[static_cast<std::size_t>(p)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(p);
            }
        }
    }
    int best = inf, start = -1;
    for (int s : from) {
        if (dist[static_cast<std::size_t>(s)] < best ||
            (dist[static_cast<std::size_t>(s)] == best && s < start)) {
            best = dist[static_cast<std::size_t>(s)];
            start = s;
        }
    }
    if (start < 0 || best == inf) {
        throw std::logic_error("witness_path called without reachability");
    }
    std::vector<std::uint32_t> letters{static_cast<std::uint32_t>(start)};
    int cur = start;
    while (dist[static_cast<std::size_t>(cur)] > 0) {
        int nxt = -1;
        for (std::uint32_t a : sys.successors(static_cast<std::size_t>(cur))) {
            if (dist[a] == dist[static_cast<std::size_t>(cur)] - 1) {
                nxt = static_cast<int>(a);
                break; // successors ascend, first hit is the smallest
            }
        }
        letters.push_back(static_cast<std::uint32_t>(nxt));
        cur = nxt;
    }
    return Word(std::move(letters));
}

} // namespace detail

/// Pairwise relations inside `class_m` (component indices of `dec`), with a
/// BFS witness path for every comparable pair.
inline ComparabilityVerdict comparability(const MarkovSystem& sys, const SccDecomposition& dec,
                                          const std::vector<int>& class_m) {
    if (class_m.empty()) throw Error(errc::unknown_component, "class M must be non-empty");
    for (int k : class_m) {
        if (k < 0 || static_cast<std::size_t>(k) >= dec.count()) {
            throw Error(errc::unknown_component, "component index " + std::to_string(k));
        }
    }
    ComparabilityVerdict verdict;
    verdict.class_m = class_m;
    for (std::size_t x = 0; x < class_m.size(); ++x) {
        for (std::size_t y = x + 1; y < class_m.size(); ++y) {
            const int a = class_m[x];
            const int b = class_m[y];
            PairVerdict pv{a, b, Relation::incomparable, Word{}};
            if (a != b && dec.reachable(a, b)) {
                pv.relation = Relation::first_precedes;
                pv.witness = detail::witness_path(sys, dec.component(static_cast<std::size_t>(a)).vertices,
                                                  dec.component(static_cast<std::size_t>(b)).vertices);
            } else if (a != b && dec.reachable(b, a)) {
                pv.relation = Relation::second_precedes;
                pv.witness = detail::witness_path(sys, dec.component(static_cast<std::size_t>(b)).vertices,
                                                  dec.component(static_cast<std::size_t>(a)).vertices);
            }
            verdict.pairs.push_back(std::move(pv));
        }
    }
    return verdict;
}

} // namespace gdq
