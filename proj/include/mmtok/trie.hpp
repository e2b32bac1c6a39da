#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mmtok/random.hpp"
#include "mmtok/vocab.hpp"

namespace mmtok {

// Accepted candidate of a trie walk. length counts scalar values of the
// matched surface, excluding any continuation prefix.
struct MatchResult {
    int length = 0;
    int token_id = -1;

    bool operator==(const MatchResult&) const = default;
};

// Prefix tree over the vocabulary entries of one position class. Accepting
// nodes carry the vocabulary id of the token their path spells. Continuation
// prefixes are stripped before insertion. Immutable after build; shareable
// across threads.
class Trie {
public:
    Trie() = default;

    static Trie build(const Vocabulary& v, PositionClass position);

    // Walks the trie along word[start..], stopping at the first missing edge
    // or at the end of the word. Every accepting state encountered is a
    // candidate; candidates of length >= 2 are kept with probability 1-q
    // (one fresh draw each, consumed in increasing length order), length-1
    // candidates are always kept so q=1 degrades to character segmentation
    // instead of constant [UNK]. Returns the last kept candidate.
    std::optional<MatchResult> longest_match(std::u32string_view word, std::size_t start,
                                             double q, RandomSource& rng) const;

    // Dropout-free walk: the longest vocabulary prefix. The inference path.
    std::optional<MatchResult> longest_match(std::u32string_view word, std::size_t start) const;

    // Every accepting state on the walk, in increasing length order.
    std::vector<MatchResult> accepting_prefixes(std::u32string_view word, std::size_t start) const;

    PositionClass position_class() const noexcept { return position_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t accepting_count() const noexcept { return accepting_; }

private:
    struct Node {
        std::int32_t edges_begin = 0;
        std::int32_t edges_end = 0;
        std::int32_t token_id = -1;
    };
    struct Edge {
        char32_t label = 0;
        std::int32_t target = -1;
    };

    std::int32_t child(std::int32_t node, char32_t c) const;

    template <typename OnAccept>
    void walk(std::u32string_view word, std::size_t start, OnAccept&& on_accept) const;

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::size_t accepting_ = 0;
    PositionClass position_ = PositionClass::Initial;
};

}  // namespace mmtok
