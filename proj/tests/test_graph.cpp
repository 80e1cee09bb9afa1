#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gdq/graph.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using gdq::comparability;
using gdq::Relation;
using gdq::scc_decompose;
using gdq::Word;

TEST_CASE("two-block fixture decomposes into {1,2} -> {3,4}") {
    const auto sys = fixtures::two_block_chain();
    const auto dec = scc_decompose(sys);
    REQUIRE(dec.count() == 2);
    REQUIRE(dec.component(0).vertices == std::vector<int>{0, 1});
    REQUIRE(dec.component(1).vertices == std::vector<int>{2, 3});
    REQUIRE(dec.condensation_edges() == std::vector<std::pair<int, int>>{{0, 1}});
    REQUIRE(dec.reachable(0, 1));
    REQUIRE_FALSE(dec.reachable(1, 0));
}

TEST_CASE("block-diagonal fixture has two incomparable components") {
    const auto sys = fixtures::incomparable_blocks(11);
    const auto dec = scc_decompose(sys);
    REQUIRE(dec.count() == 2);
    REQUIRE(dec.component(0).vertices == std::vector<int>{0, 1});
    REQUIRE(dec.component(1).vertices == std::vector<int>{2, 3, 4});
    REQUIRE(dec.condensation_edges().empty());
    const auto verdict = comparability(sys, dec, {0, 1});
    REQUIRE(verdict.all_incomparable());
}

TEST_CASE("a fully positive matrix is one component") {
    std::mt19937_64 rng(3);
    fixtures::RandomSystemOptions opt;
    opt.irreducible = true;
    opt.n_min = 5;
    opt.n_max = 5;
    auto sys = fixtures::random_system(rng, opt);
    const auto dec = scc_decompose(sys);
    REQUIRE(dec.count() == 1);
    REQUIRE(dec.component(0).vertices.size() == 5);
}

TEST_CASE("condensation is acyclic: topological order exists") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sys = fixtures::random_system(rng);
        const auto dec = scc_decompose(sys);
        // Kahn's algorithm must consume every component.
        std::vector<int> indeg(dec.count(), 0);
        for (const auto& [a, b] : dec.condensation_edges()) {
            (void)a;
            ++indeg[static_cast<std::size_t>(b)];
        }
        std::vector<int> queue;
        for (std::size_t k = 0; k < dec.count(); ++k) {
            if (indeg[k] == 0) queue.push_back(static_cast<int>(k));
        }
        std::size_t seen = 0;
        while (!queue.empty()) {
            const int k = queue.back();
            queue.pop_back();
            ++seen;
            for (const auto& [a, b] : dec.condensation_edges()) {
                if (a == k && --indeg[static_cast<std::size_t>(b)] == 0) queue.push_back(b);
            }
        }
        REQUIRE(seen == dec.count());
    }
}

TEST_CASE("reachability agrees with brute-force path enumeration") {
    std::mt19937_64 rng(23);
    fixtures::RandomSystemOptions opt;
    opt.n_max = 8;
    for (int trial = 0; trial < 25; ++trial) {
        const auto sys = fixtures::random_system(rng, opt);
        const auto dec = scc_decompose(sys);
        const auto brute = oracles::brute_reachability(sys);
        for (std::size_t u = 0; u < sys.size(); ++u) {
            for (std::size_t v = 0; v < sys.size(); ++v) {
                REQUIRE(dec.reachable(dec.component_of(static_cast<int>(u)),
                                      dec.component_of(static_cast<int>(v))) == brute[u][v]);
            }
        }
    }
}

TEST_CASE("comparable pair carries the BFS witness (1,3)") {
    const auto sys = fixtures::two_block_chain();
    const auto dec = scc_decompose(sys);
    const auto verdict = comparability(sys, dec, {0, 1});
    REQUIRE(verdict.pairs.size() == 1);
    REQUIRE(verdict.pairs[0].relation == Relation::first_precedes);
    REQUIRE(verdict.pairs[0].witness == Word({0, 2}));
    REQUIRE_FALSE(verdict.all_incomparable());
}

TEST_CASE("witness paths are admissible letter by letter") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sys = fixtures::random_system(rng);
        const auto dec = scc_decompose(sys);
        std::vector<int> all;
        for (std::size_t k = 0; k < dec.count(); ++k) all.push_back(static_cast<int>(k));
        const auto verdict = comparability(sys, dec, all);
        for (const auto& p : verdict.pairs) {
            if (p.relation == Relation::incomparable) continue;
            const auto& w = p.witness;
            REQUIRE(w.length() >= 1);
            for (std::size_t h = 0; h + 1 < w.length(); ++h) {
                REQUIRE(sys.edge(w[h], w[h + 1]));
            }
            const int from = p.relation == Relation::first_precedes ? p.a : p.b;
            const int to = p.relation == Relation::first_precedes ? p.b : p.a;
            REQUIRE(dec.component_of(static_cast<int>(w.front())) == from);
            REQUIRE(dec.component_of(static_cast<int>(w.back())) == to);
        }
    }
}

TEST_CASE("singleton class M is vacuously incomparable") {
    const auto sys = fixtures::two_block_chain();
    const auto dec = scc_decompose(sys);
    const auto verdict = comparability(sys, dec, {1});
    REQUIRE(verdict.pairs.empty());
    REQUIRE(verdict.all_incomparable());
}

TEST_CASE("unknown component index is rejected") {
    const auto sys = fixtures::two_block_chain();
    const auto dec = scc_decompose(sys);
    REQUIRE_THROWS_AS(comparability(sys, dec, {0, 5}), gdq::Error);
    REQUIRE_THROWS_AS(comparability(sys, dec, {}), gdq::Error);
}

TEST_CASE("feeder vertex becomes a trivial singleton component") {
    // vertex 1 feeds {2,3} and nothing returns
    const auto sys = gdq::MarkovSystem::validate(
        {{0.0, 0.5, 0.5}, {0.0, 0.5, 0.5}, {0.0, 0.5, 0.5}},
        {{0.0, 0.3, 0.3}, {0.0, 0.3, 0.3}, {0.0, 0.3, 0.3}}, {0.2, 0.4, 0.4}, 1.0);
    const auto dec = scc_decompose(sys);
    REQUIRE(dec.count() == 2);
    REQUIRE(dec.component(0).vertices == std::vector<int>{0});
    REQUIRE(dec.component(0).trivial);
    REQUIRE_FALSE(dec.component(1).trivial);
}

TEST_CASE("DOT export names every component") {
    const auto sys = fixtures::two_block_chain();
    const auto dec = scc_decompose(sys);
    const auto dot = dec.to_dot();
    REQUIRE(dot.find("digraph condensation") != std::string::npos);
    REQUIRE(dot.find("{1,2}") != std::string::npos);
    REQUIRE(dot.find("{3,4}") != std::string::npos);
    REQUIRE(dot.find("c0 -> c1") != std::string::npos);
}
