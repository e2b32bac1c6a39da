#include "mmtok/tokenizer.hpp"

#include <stdexcept>
#include <utility>

#include "mmtok/errors.hpp"
#include "mmtok/unicode.hpp"

namespace mmtok {

namespace {
constexpr std::size_t kEnumerationCap = 16;
}

std::vector<std::string> surfaces(const TokenSequence& seq) {
    std::vector<std::string> out;
    out.reserve(seq.size());
    for (const Token& t : seq) out.push_back(t.surface);
    return out;
}

std::vector<int> ids(const TokenSequence& seq) {
    std::vector<int> out;
    out.reserve(seq.size());
    for (const Token& t : seq) out.push_back(t.id);
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> pre_tokenize(std::u32string_view text,
                                                              PreTokenization mode) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (is_whitespace(text[i])) {
            ++i;
            continue;
        }
        if (mode == PreTokenization::WhitespacePunct && is_punctuation(text[i])) {
            spans.emplace_back(i, i + 1);
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < n && !is_whitespace(text[i]) &&
               (mode != PreTokenization::WhitespacePunct || !is_punctuation(text[i]))) {
            ++i;
        }
        spans.emplace_back(begin, i);
    }
    return spans;
}

MaxMatchTokenizer::MaxMatchTokenizer(Vocabulary vocab, TokenizerConfig cfg)
    : vocab_(std::move(vocab)), cfg_(std::move(cfg)) {
    if (cfg_.q < 0.0 || cfg_.q > 1.0) {
        throw std::invalid_argument("dropout rate must be in [0,1]");
    }
    if (cfg_.max_word_chars < 1) {
        throw std::invalid_argument("max_word_chars must be positive");
    }
    if (cfg_.continuation_prefix != vocab_.continuation_prefix() ||
        cfg_.unk_token != vocab_.unk_token()) {
        throw std::invalid_argument(
            "tokenizer config and vocabulary disagree on prefix or unk token");
    }
    initial_ = Trie::build(vocab_, PositionClass::Initial);
    continuation_ = Trie::build(vocab_, PositionClass::Continuation);
}

TokenSequence MaxMatchTokenizer::unk_sequence(std::size_t word_chars) const {
    return {Token{vocab_.unk_token(), vocab_.unk_id(), 0, word_chars}};
}

TokenSequence MaxMatchTokenizer::tokenize_word_impl(std::u32string_view word,
                                                    RandomSource* rng) const {
    const std::size_t n = word.size();
    if (n == 0) return {};
    if (n > cfg_.max_word_chars) return unk_sequence(n);

    TokenSequence out;
    std::size_t pos = 0;
    while (pos < n) {
        const Trie& trie = pos == 0 ? initial_ : continuation_;
        const auto match = rng ? trie.longest_match(word, pos, cfg_.q, *rng)
                               : trie.longest_match(word, pos);
        if (!match) return unk_sequence(n);  // whole word collapses
        const std::size_t end = pos + static_cast<std::size_t>(match->length);
        out.push_back(Token{vocab_.token(match->token_id), match->token_id, pos, end});
        pos = end;
    }
    return out;
}

TokenSequence MaxMatchTokenizer::tokenize_word(std::u32string_view word,
                                               RandomSource& rng) const {
    return tokenize_word_impl(word, &rng);
}

TokenSequence MaxMatchTokenizer::tokenize_word(std::u32string_view word) const {
    return tokenize_word_impl(word, nullptr);
}

TokenSequence MaxMatchTokenizer::tokenize_text_impl(std::string_view text,
                                                    RandomSource* rng) const {
    const std::u32string decoded = decode_utf8(text);
    TokenSequence out;
    std::u32string word;
    for (const auto& [begin, end] : pre_tokenize(decoded, cfg_.pre_tokenization)) {
        word.assign(decoded, begin, end - begin);
        if (cfg_.lowercase) {
            for (char32_t& c : word) c = to_lower(c);
        }
        TokenSequence tokens = tokenize_word_impl(word, rng);
        for (Token& t : tokens) {
            t.begin += begin;
            t.end += begin;
            out.push_back(std::move(t));
        }
    }
    return out;
}

TokenSequence MaxMatchTokenizer::tokenize_text(std::string_view text, RandomSource& rng) const {
    return tokenize_text_impl(text, &rng);
}

TokenSequence MaxMatchTokenizer::tokenize_text(std::string_view text) const {
    return tokenize_text_impl(text, nullptr);
}

std::vector<int> MaxMatchTokenizer::encode(std::string_view text, RandomSource& rng) const {
    return ids(tokenize_text(text, rng));
}

std::vector<int> MaxMatchTokenizer::encode(std::string_view text) const {
    return ids(tokenize_text(text));
}

TokenizationDistribution MaxMatchTokenizer::enumerate_tokenization_distribution(
    std::u32string_view word) const {
    const std::size_t n = word.size();
    if (n > kEnumerationCap) throw WordTooLong(n, kEnumerationCap);
    TokenizationDistribution dist;
    if (n == 0) {
        dist[{}] = 1.0;
        return dist;
    }
    if (n > cfg_.max_word_chars) {
        dist[{vocab_.unk_token()}] = 1.0;
        return dist;
    }

    const double q = cfg_.q;

    // Per position: probability of each final accepted candidate (index into
    // the accepting-prefix list, -1 = none), from every keep/drop sequence
    // over the length>=2 accepting states. Zero-probability branches pruned.
    struct Outcome {
        int candidate = -1;  // -1: no accepted subword
        double prob = 0.0;
    };
    std::vector<std::vector<MatchResult>> candidates(n);
    std::vector<std::vector<Outcome>> outcomes(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const Trie& trie = pos == 0 ? initial_ : continuation_;
        candidates[pos] = trie.accepting_prefixes(word, pos);
        const auto& cands = candidates[pos];
        std::map<int, double> acc;
        auto enumerate = [&](auto&& self, std::size_t i, int last, double p) -> void {
            if (p == 0.0) return;
            if (i == cands.size()) {
                acc[last] += p;
                return;
            }
            if (cands[i].length == 1) {
                self(self, i + 1, static_cast<int>(i), p);
                return;
            }
            self(self, i + 1, static_cast<int>(i), p * (1.0 - q));  // kept
            self(self, i + 1, last, p * q);                         // dropped
        };
        enumerate(enumerate, 0, -1, 1.0);
        for (const auto& [cand, prob] : acc) outcomes[pos].push_back(Outcome{cand, prob});
    }

    std::vector<std::string> current;
    auto explore = [&](auto&& self, std::size_t pos, double p) -> void {
        if (pos == n) {
            dist[current] += p;
            return;
        }
        for (const Outcome& o : outcomes[pos]) {
            if (o.candidate < 0) {
                dist[{vocab_.unk_token()}] += p * o.prob;
                continue;
            }
            const MatchResult& m = candidates[pos][static_cast<std::size_t>(o.candidate)];
            current.push_back(vocab_.token(m.token_id));
            self(self, pos + static_cast<std::size_t>(m.length), p * o.prob);
            current.pop_back();
        }
    };
    explore(explore, 0, 1.0);
    return dist;
}

}  // namespace mmtok
