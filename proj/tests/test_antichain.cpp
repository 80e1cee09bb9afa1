#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gdq/antichain.hpp"
#include "gdq/numeric.hpp"
#include "gdq/word.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using gdq::Antichain;
using gdq::build_lambda;
using gdq::full_level;
using gdq::KahanSum;
using gdq::MarkovSystem;
using gdq::Word;

namespace {

std::vector<std::vector<std::uint32_t>> letters_of(const Antichain& chain) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& e : chain.entries()) {
        out.emplace_back(e.word.letters().begin(), e.word.letters().end());
    }
    return out;
}

void check_against_oracle(const MarkovSystem& sys, int j, std::size_t depth) {
    const auto chain = build_lambda(sys, j);
    REQUIRE(chain.complete());
    const auto expected = oracles::brute_lambda(sys, j, depth);
    REQUIRE(letters_of(chain) == expected);
}

} // namespace

TEST_CASE("homogeneous Lambda_{1,1} is the full third level") {
    const auto sys = fixtures::homogeneous();
    const auto chain = build_lambda(sys, 1);
    REQUIRE(chain.size() == 8);
    REQUIRE(chain.min_length() == 3);
    REQUIRE(chain.max_length() == 3);
    REQUIRE(letters_of(chain) == oracles::brute_lambda(sys, 1, 5));
}

TEST_CASE("level-1 members always have length at least two") {
    // Single letters carry weight 1 >= eta^j, so they can never cross below.
    const auto fixtures_list = {fixtures::homogeneous(), fixtures::two_block_chain()};
    for (const auto& sys : fixtures_list) {
        const auto chain = build_lambda(sys, 1);
        REQUIRE(chain.min_length() >= 2);
    }
}

TEST_CASE("scanner agrees with the exhaustive prefix-tree oracle") {
    const auto sys2 = fixtures::two_block_chain();
    for (int j = 1; j <= 4; ++j) check_against_oracle(sys2, j, 12);

    const auto homog = fixtures::homogeneous();
    for (int j = 1; j <= 4; ++j) check_against_oracle(homog, j, 8);

    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        fixtures::RandomSystemOptions opt;
        opt.n_max = 4;
        const auto sys = fixtures::random_system(rng, opt);
        const auto probe = build_lambda(sys, 2);
        check_against_oracle(sys, 2, probe.max_length() + 2);
    }
}

TEST_CASE("membership window: eta^{j+1} <= weight < eta^j") {
    const auto sys = fixtures::two_block_chain();
    for (int j = 1; j <= 6; ++j) {
        const auto chain = build_lambda(sys, j);
        const double upper = static_cast<double>(j) * sys.log_eta();
        const double lower = static_cast<double>(j + 1) * sys.log_eta();
        for (const auto& e : chain.entries()) {
            REQUIRE(e.log_weight < upper);
            // ulp slack: the lower bound sums logs along a different route
            // than the construction threshold
            REQUIRE(e.log_weight >= lower - 1e-9 * std::fabs(lower));
        }
    }
}

TEST_CASE("antichains are prefix-free and cover every path exactly once") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        fixtures::RandomSystemOptions opt;
        opt.n_max = 4;
        const auto sys = fixtures::random_system(rng, opt);
        for (int j = 1; j <= 2; ++j) {
            const auto chain = build_lambda(sys, j);
            REQUIRE(chain.complete());
            const auto words = letters_of(chain);
            REQUIRE(oracles::is_prefix_free(words));
            REQUIRE(oracles::covers_exactly_once(sys, words, chain.max_length() + 1));
        }
    }
}

TEST_CASE("measure sums to one over every maximal antichain") {
    std::mt19937_64 rng(5);
    fixtures::RandomSystemOptions opt;
    opt.n_max = 4;
    for (int trial = 0; trial < 6; ++trial) {
        const auto sys = fixtures::random_system(rng, opt);
        for (int j = 1; j <= 3; ++j) {
            const auto chain = build_lambda(sys, j);
            KahanSum total;
            for (const auto& e : chain.entries()) {
                total.add(sys.initial(e.word.front()) * std::exp(e.log_mass));
            }
            REQUIRE(total.value() == Catch::Approx(1.0).margin(1e-9));
        }
        const auto omega = full_level(sys, 5);
        KahanSum total;
        for (const auto& e : omega.entries()) {
            total.add(sys.initial(e.word.front()) * std::exp(e.log_mass));
        }
        REQUIRE(total.value() == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("member lengths sit inside the linear-in-j bracket") {
    // weight >= eta^{len-1} and parent weight <= (p_max c_max^r)^{len-2} give
    // j + 2 <= len <= 2 + j * log(eta)/log(p_max c_max^r).
    const auto sys = fixtures::two_block_chain();
    const double ratio = sys.log_eta() / sys.log_weight_max();
    for (int j = 1; j <= 6; ++j) {
        const auto chain = build_lambda(sys, j);
        REQUIRE(chain.min_length() >= static_cast<std::size_t>(j) + 2);
        REQUIRE(static_cast<double>(chain.max_length()) <=
                2.0 + static_cast<double>(j) * ratio + 1e-9);
    }
}

TEST_CASE("refinement bound: phi grows monotonically and below N^N1") {
    const auto homog = fixtures::homogeneous();
    for (int j = 1; j <= 4; ++j) {
        const auto rb = gdq::antichain_refine_bound(homog, j);
        REQUIRE(rb.ratio >= 1.0);
        REQUIRE(rb.ratio <= std::pow(2.0, rb.n1));
        // all edges share one weight, so one extension always crosses
        REQUIRE(rb.n1 == 2);
    }
    const auto ex2 = fixtures::two_block_chain();
    for (int j = 1; j <= 3; ++j) {
        const auto rb = gdq::antichain_refine_bound(ex2, j);
        REQUIRE(rb.ratio >= 1.0);
        REQUIRE(rb.ratio <= std::pow(4.0, rb.n1));
    }
}

TEST_CASE("cap produces a flagged partial result") {
    const auto sys = fixtures::homogeneous();
    const auto chain = build_lambda(sys, 3, 10);
    REQUIRE_FALSE(chain.complete());
    REQUIRE(chain.size() == 10);
    REQUIRE_THROWS_AS(gdq::antichain_refine_bound(sys, 3, 10), gdq::Error);
}

TEST_CASE("construction is deterministic and lexicographically sorted") {
    const auto sys = fixtures::two_block_chain();
    const auto a = build_lambda(sys, 3);
    const auto b = build_lambda(sys, 3);
    REQUIRE(letters_of(a) == letters_of(b));
    for (std::size_t i = 1; i < a.size(); ++i) {
        REQUIRE(a.entries()[i - 1].word < a.entries()[i].word);
    }
}

TEST_CASE("Omega_k as an antichain") {
    const auto sys = fixtures::homogeneous();
    const auto omega3 = full_level(sys, 3);
    REQUIRE(omega3.size() == 8);
    REQUIRE(omega3.min_length() == 3);
    REQUIRE(omega3.max_length() == 3);
    const auto words = letters_of(omega3);
    REQUIRE(oracles::is_prefix_free(words));
    REQUIRE(oracles::covers_exactly_once(sys, words, 4));
}
