#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mmtok/random.hpp"
#include "mmtok/trie.hpp"
#include "mmtok/vocab.hpp"

namespace mmtok {

enum class PreTokenization { Whitespace, WhitespacePunct };

struct TokenizerConfig {
    double q = 0.0;  // dropout rate; 0 = plain maximum matching, 1 = characters
    std::string continuation_prefix = "##";
    std::string unk_token = "[UNK]";
    std::size_t max_word_chars = 100;
    PreTokenization pre_tokenization = PreTokenization::Whitespace;
    bool lowercase = false;

    VocabOptions vocab_options() const {
        VocabOptions o;
        o.continuation_prefix = continuation_prefix;
        o.unk_token = unk_token;
        return o;
    }
};

struct Token {
    std::string surface;    // as emitted, including any continuation prefix
    int id = -1;            // vocabulary id; -1 where no vocabulary applies (BPE)
    std::size_t begin = 0;  // [begin,end) scalar-value offsets into the source
    std::size_t end = 0;

    bool operator==(const Token&) const = default;
};

using TokenSequence = std::vector<Token>;

std::vector<std::string> surfaces(const TokenSequence& seq);
std::vector<int> ids(const TokenSequence& seq);

// Word spans of `text` under the given mode: maximal runs separated by
// Unicode whitespace; in WhitespacePunct mode each punctuation character is
// additionally a word of its own.
std::vector<std::pair<std::size_t, std::size_t>> pre_tokenize(std::u32string_view text,
                                                              PreTokenization mode);

// Exhaustive distribution over the tokenizations a word can receive under
// dropout rate q, keyed by emitted surfaces. Probabilities sum to 1.
using TokenizationDistribution = std::map<std::vector<std::string>, double>;

// Greedy longest-match tokenizer with per-query random demotion of accepting
// states. Construction builds one trie per position class; the tokenizer is
// immutable afterwards and shareable across threads. Calls taking a
// RandomSource require exclusive use of that source.
class MaxMatchTokenizer {
public:
    MaxMatchTokenizer(Vocabulary vocab, TokenizerConfig cfg);

    // Tokenizes one whitespace-free word. Words longer than max_word_chars,
    // and words where any position fails to match, collapse to the unk token.
    TokenSequence tokenize_word(std::u32string_view word, RandomSource& rng) const;
    TokenSequence tokenize_word(std::u32string_view word) const;  // q forced to 0

    // Pre-tokenizes, lowercases if configured, then tokenizes word by word.
    // Spans index into the original text.
    TokenSequence tokenize_text(std::string_view text, RandomSource& rng) const;
    TokenSequence tokenize_text(std::string_view text) const;

    std::vector<int> encode(std::string_view text, RandomSource& rng) const;
    std::vector<int> encode(std::string_view text) const;

    // Brute-force enumeration of every keep/drop decision sequence, for words
    // of at most 16 characters (WordTooLong beyond that).
    TokenizationDistribution enumerate_tokenization_distribution(std::u32string_view word) const;

    const Vocabulary& vocab() const noexcept { return vocab_; }
    const TokenizerConfig& config() const noexcept { return cfg_; }
    const Trie& initial_trie() const noexcept { return initial_; }
    const Trie& continuation_trie() const noexcept { return continuation_; }

private:
    TokenSequence tokenize_word_impl(std::u32string_view word, RandomSource* rng) const;
    TokenSequence tokenize_text_impl(std::string_view text, RandomSource* rng) const;
    TokenSequence unk_sequence(std::size_t word_chars) const;

    Vocabulary vocab_;
    TokenizerConfig cfg_;
    Trie initial_;
    Trie continuation_;
};

}  // namespace mmtok
