#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdq/errors.hpp"
#include "gdq/system.hpp"

namespace gdq {

/// An admissible word over the vertex alphabet: consecutive letters must be
/// edges of the transition graph. Letters are 0-based internally; all textual
/// output is 1-based. The default-constructed word is the empty word theta.
class Word {
public:
    Word() = default;

    /// Caller guarantees admissibility (used by the scanners, which only ever
    /// extend along edges). Use Word::admissible to validate external input.
    explicit Word(std::vector<std::uint32_t> letters) : letters_(std::move(letters)) {}

    static Word admissible(const MarkovSystem& sys, std::vector<std::uint32_t> letters) {
        for (std::size_t h = 0; h + 1 < letters.size(); ++h) {
            if (!sys.edge(letters[h], letters[h + 1])) {
                throw Error(errc::inadmissible_junction,
                            "pair (" + std::to_string(letters[h] + 1) + "," +
                                std::to_string(letters[h + 1] + 1) + ") is not an edge");
            }
        }
        for (std::uint32_t v : letters) {
            if (v >= sys.size()) {
                throw Error(errc::bad_config, "vertex index out of range");
            }
        }
        return Word(std::move(letters));
    }

    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    std::uint32_t operator[](std::size_t h) const { return letters_[h]; }
    std::uint32_t front() const { return letters_.front(); }
    std::uint32_t back() const { return letters_.back(); }

    std::span<const std::uint32_t> letters() const { return letters_; }

    /// sigma|k, the prefix of length k.
    Word prefix(std::size_t k) const {
        return Word(std::vector<std::uint32_t>(letters_.begin(), letters_.begin() + k));
    }

    /// sigma^- (parent): the word with the last letter removed.
    Word parent() const {
        if (empty()) return {};
        return prefix(length() - 1);
    }

    bool is_prefix_of(const Word& other) const {
        if (length() > other.length()) return false;
        for (std::size_t h = 0; h < length(); ++h) {
            if (letters_[h] != other.letters_[h]) return false;
        }
        return true;
    }

    /// Two words are comparable when one is a prefix of the other.
    static bool comparable(const Word& a, const Word& b) {
        return a.is_prefix_of(b) || b.is_prefix_of(a);
    }

    /// Dash-joined 1-based vertex indices; empty word renders as "".
    std::string display() const {
        std::string s;
        for (std::size_t h = 0; h < letters_.size(); ++h) {
            if (h) s += '-';
            s += std::to_string(letters_[h] + 1);
        }
        return s;
    }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word& a, const Word& b) {
        return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                      b.letters_.begin(), b.letters_.end());
    }

private:
    std::vector<std::uint32_t> letters_;
};

/// Multiplicative weights of a word, kept in log space so that deep words do
/// not underflow; p_theta = c_theta = 1 and words of length 1 carry weight 1.
struct WordWeights {
    double log_mass = 0.0;  // log p_sigma
    double log_ratio = 0.0; // log c_sigma

    double mass() const { return std::exp(log_mass); }
    double ratio() const { return std::exp(log_ratio); }

    /// log(p_sigma c_sigma^r), the quantity thresholded by the Lambda levels.
    double log_error_weight(double r) const { return log_mass + r * log_ratio; }
};

inline WordWeights word_weights(const MarkovSystem& sys, const Word& w) {
    WordWeights ww;
    for (std::size_t h = 0; h + 1 < w.length(); ++h) {
        ww.log_mass += sys.log_transition(w[h], w[h + 1]);
        ww.log_ratio += sys.log_ratio(w[h], w[h + 1]);
    }
    return ww;
}

/// mu(J_sigma) = chi_{sigma_1} p_sigma; the empty word carries the whole mass.
inline double word_measure(const MarkovSystem& sys, const Word& w) {
    if (w.empty()) return 1.0;
    return sys.initial(w.front()) * word_weights(sys, w).mass();
}

/// sigma * omega. Either side may be empty; otherwise the junction
/// (last of a, first of b) must be an edge.
inline Word word_concat(const MarkovSystem& sys, const Word& a, const Word& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (!sys.edge(a.back(), b.front())) {
        throw Error(errc::inadmissible_junction,
                    "p[" + std::to_string(a.back() + 1) + "," + std::to_string(b.front() + 1) +
                        "] = 0");
    }
    std::vector<std::uint32_t> letters;
    letters.reserve(a.length() + b.length());
    letters.insert(letters.end(), a.letters().begin(), a.letters().end());
    letters.insert(letters.end(), b.letters().begin(), b.letters().end());
    return Word(std::move(letters));
}

} // namespace gdq
