#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gdq/word.hpp"
#include "support/fixtures.hpp"

using gdq::Word;
using gdq::word_concat;
using gdq::word_measure;
using gdq::word_weights;

TEST_CASE("concatenation on the full 2-vertex graph") {
    const auto sys = fixtures::homogeneous();
    const Word a({0, 1}), b({1, 0});
    const Word joined = word_concat(sys, a, b);
    REQUIRE(joined == Word({0, 1, 1, 0}));
    REQUIRE(joined.display() == "1-2-2-1");
}

TEST_CASE("the empty word is the identity") {
    const auto sys = fixtures::homogeneous();
    const Word sigma({0, 1, 0});
    REQUIRE(word_concat(sys, Word{}, sigma) == sigma);
    REQUIRE(word_concat(sys, sigma, Word{}) == sigma);
    const auto ww = word_weights(sys, Word{});
    REQUIRE(ww.mass() == 1.0);
    REQUIRE(ww.ratio() == 1.0);
}

TEST_CASE("junction admissibility on the two-block fixture") {
    const auto sys = fixtures::two_block_chain();
    const Word joined = word_concat(sys, Word({0}), Word({2}));
    REQUIRE(joined == Word({0, 2}));
    REQUIRE(word_weights(sys, joined).mass() == Catch::Approx(0.5).margin(0));
    // vertex 3 has no edge back into the first block
    REQUIRE_THROWS_AS(word_concat(sys, Word({2}), Word({0})), gdq::Error);
}

TEST_CASE("admissibility is validated on construction") {
    const auto sys = fixtures::two_block_chain();
    REQUIRE_NOTHROW(Word::admissible(sys, {0, 1, 2, 3}));
    REQUIRE_THROWS_AS(Word::admissible(sys, {2, 0}), gdq::Error);
    REQUIRE_THROWS_AS(Word::admissible(sys, {7}), gdq::Error);
}

TEST_CASE("weights multiply under concatenation") {
    const auto sys = fixtures::two_block_chain();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> len(1, 9);
    auto random_word = [&](std::uint32_t start) {
        std::vector<std::uint32_t> letters{start};
        const std::size_t want = len(rng);
        while (letters.size() < want) {
            const auto& succ = sys.successors(letters.back());
            letters.push_back(succ[rng() % succ.size()]);
        }
        return Word(letters);
    };
    for (int trial = 0; trial < 200; ++trial) {
        const Word a = random_word(static_cast<std::uint32_t>(rng() % sys.size()));
        const auto& succ = sys.successors(a.back());
        const Word b = random_word(succ[rng() % succ.size()]);
        const Word ab = word_concat(sys, a, b);
        const auto wa = word_weights(sys, a);
        const auto wb = word_weights(sys, b);
        const auto wab = word_weights(sys, ab);
        const double junction_p = sys.transition(a.back(), b.front());
        const double junction_c = sys.ratio(a.back(), b.front());
        REQUIRE(wab.mass() ==
                Catch::Approx(wa.mass() * junction_p * wb.mass()).epsilon(1e-12));
        REQUIRE(wab.ratio() ==
                Catch::Approx(wa.ratio() * junction_c * wb.ratio()).epsilon(1e-12));
    }
}

TEST_CASE("prefix and comparability predicates") {
    const Word a({0, 1}), b({0, 1, 1}), c({0, 0});
    REQUIRE(a.is_prefix_of(b));
    REQUIRE_FALSE(b.is_prefix_of(a));
    REQUIRE(Word::comparable(a, b));
    REQUIRE_FALSE(Word::comparable(b, c));
    REQUIRE(Word{}.is_prefix_of(a));
    REQUIRE(a.parent() == Word({0}));
    REQUIRE(b.prefix(2) == a);
}

TEST_CASE("words order lexicographically") {
    REQUIRE(Word({0, 1}) < Word({0, 1, 0}));
    REQUIRE(Word({0, 1}) < Word({1}));
    REQUIRE(Word({0, 2}) < Word({1, 0}));
}

TEST_CASE("measure of a word weights the initial vertex") {
    const auto sys = fixtures::two_block_chain();
    REQUIRE(word_measure(sys, Word({0, 2})) == Catch::Approx(0.25 * 0.5).epsilon(1e-14));
    REQUIRE(word_measure(sys, Word{}) == 1.0);
}
