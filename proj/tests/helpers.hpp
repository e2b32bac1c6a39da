#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mmtok/bpe.hpp"
#include "mmtok/random.hpp"
#include "mmtok/tokenizer.hpp"
#include "mmtok/unicode.hpp"
#include "mmtok/vocab.hpp"

namespace testing {

// Replays a fixed keep/skip script; lets tests force specific dropout
// decisions. Draws past the end of the script return true.
class ScriptedRandomSource final : public mmtok::RandomSource {
public:
    explicit ScriptedRandomSource(std::vector<bool> script) : script_(std::move(script)) {}

    bool bernoulli(double) override {
        if (next_ >= script_.size()) return true;
        return script_[next_++];
    }

    std::size_t draws() const noexcept { return next_; }

private:
    std::vector<bool> script_;
    std::size_t next_ = 0;
};

// Seeded generator for randomized-property inputs.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t below(std::uint64_t n) { return rng_.next() % n; }

    bool coin() { return (rng_.next() & 1) != 0; }

    std::u32string word(std::size_t max_len, unsigned alphabet) {
        const std::size_t len = 1 + below(max_len);
        std::u32string w;
        for (std::size_t i = 0; i < len; ++i) {
            w.push_back(static_cast<char32_t>(U'a' + below(alphabet)));
        }
        return w;
    }

    mmtok::Vocabulary vocab(std::size_t max_tokens, unsigned alphabet,
                            const std::string& prefix, bool all_chars = false) {
        std::set<std::string> tokens;
        if (all_chars) {
            for (unsigned c = 0; c < alphabet; ++c) {
                const std::string ch(1, static_cast<char>('a' + c));
                tokens.insert(ch);
                if (!prefix.empty()) tokens.insert(prefix + ch);
            }
        }
        const std::size_t want = 1 + below(max_tokens);
        for (std::size_t attempts = 0; attempts < want * 4 && tokens.size() < want; ++attempts) {
            const std::string body = mmtok::encode_utf8(word(4, alphabet));
            if (!prefix.empty() && coin()) {
                tokens.insert(prefix + body);
            } else {
                tokens.insert(body);
            }
        }
        mmtok::VocabOptions opts;
        opts.continuation_prefix = prefix;
        return mmtok::Vocabulary::from_tokens(
            std::vector<std::string>(tokens.begin(), tokens.end()), opts);
    }

    mmtok::MergeTable merge_table(std::size_t max_merges, unsigned alphabet) {
        std::vector<std::string> producible;
        for (unsigned c = 0; c < alphabet; ++c) {
            producible.emplace_back(1, static_cast<char>('a' + c));
        }
        std::set<std::string> seen;
        std::vector<std::pair<std::string, std::string>> merges;
        const std::size_t want = below(max_merges + 1);
        for (std::size_t attempts = 0; attempts < want * 4 && merges.size() < want; ++attempts) {
            const std::string& l = producible[below(producible.size())];
            const std::string& r = producible[below(producible.size())];
            if (l.size() + r.size() > 8) continue;
            if (!seen.insert(l + " " + r).second) continue;
            merges.emplace_back(l, r);
            producible.push_back(l + r);
        }
        return mmtok::MergeTable::from_pairs(merges);
    }

private:
    mmtok::SplitMix64 rng_;
};

inline mmtok::MaxMatchTokenizer make_tokenizer(const std::vector<std::string>& tokens, double q,
                                               const std::string& prefix = "",
                                               mmtok::PreTokenization pretok =
                                                   mmtok::PreTokenization::Whitespace) {
    mmtok::TokenizerConfig cfg;
    cfg.q = q;
    cfg.continuation_prefix = prefix;
    cfg.pre_tokenization = pretok;
    return {mmtok::Vocabulary::from_tokens(tokens, cfg.vocab_options()), cfg};
}

inline mmtok::MaxMatchTokenizer make_tokenizer(mmtok::Vocabulary vocab, double q) {
    mmtok::TokenizerConfig cfg;
    cfg.q = q;
    cfg.continuation_prefix = vocab.continuation_prefix();
    cfg.unk_token = vocab.unk_token();
    return {std::move(vocab), cfg};
}

}  // namespace testing
