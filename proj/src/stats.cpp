#include "mmtok/stats.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "mmtok/errors.hpp"
#include "mmtok/unicode.hpp"

namespace mmtok {

void LengthHistogram::merge(const LengthHistogram& other) {
    for (const auto& [len, count] : other.counts) counts[len] += count;
    trials += other.trials;
    total_tokens += other.total_tokens;
    unk_count += other.unk_count;
    total_words += other.total_words;
}

namespace {

// One tokenization pass over one line; appends into the histogram.
using LineFn = std::function<void(const std::string& line, SplitMix64& rng, LengthHistogram& h)>;

LengthHistogram run_pass(const std::vector<std::string>& lines, std::uint64_t pass_seed,
                         unsigned threads, const LineFn& per_line) {
    if (threads < 1) threads = 1;
    LengthHistogram total;
    total.trials = 1;
    if (threads == 1 || lines.size() < 2) {
        for (std::size_t i = 0; i < lines.size(); ++i) {
            SplitMix64 rng(derive_seed(pass_seed, i));
            per_line(lines[i], rng, total);
        }
        return total;
    }
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(lines.size()));
    std::vector<LengthHistogram> partial(n);
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n);
    workers.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < lines.size(); i += n) {
                    SplitMix64 rng(derive_seed(pass_seed, i));
                    per_line(lines[i], rng, partial[w]);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    for (const auto& h : partial) total.merge(h);
    total.trials = 1;
    return total;
}

void count_tokens(const TokenSequence& tokens, bool unk_possible, int unk_id,
                  LengthHistogram& h) {
    for (const Token& t : tokens) {
        ++h.total_tokens;
        if (unk_possible && t.id == unk_id) {
            ++h.unk_count;
        } else {
            // span length excludes the continuation prefix by construction
            ++h.counts[t.end - t.begin];
        }
    }
}

LineFn maxmatch_line_fn(const MaxMatchTokenizer& tokenizer) {
    const int unk_id = tokenizer.vocab().unk_id();
    return [tok = &tokenizer, unk_id](const std::string& line, SplitMix64& rng,
                                      LengthHistogram& h) {
        const TokenizerConfig& cfg = tok->config();
        const std::u32string text = decode_utf8(line);
        std::u32string word;
        for (const auto& [b, e] : pre_tokenize(text, cfg.pre_tokenization)) {
            word.assign(text, b, e - b);
            if (cfg.lowercase) {
                for (char32_t& c : word) c = to_lower(c);
            }
            ++h.total_words;
            count_tokens(tok->tokenize_word(word, rng), true, unk_id, h);
        }
    };
}

LineFn bpe_line_fn(const MergeTable& merges, double p, const TokenizerConfig& cfg) {
    return [m = &merges, p, c = &cfg](const std::string& line, SplitMix64& rng,
                                      LengthHistogram& h) {
        const std::u32string text = decode_utf8(line);
        std::u32string word;
        for (const auto& [b, e] : pre_tokenize(text, c->pre_tokenization)) {
            word.assign(text, b, e - b);
            if (c->lowercase) {
                for (char32_t& c2 : word) c2 = to_lower(c2);
            }
            ++h.total_words;
            count_tokens(bpe_tokenize_word(word, *m, p, rng), false, -1, h);
        }
    };
}

LengthHistogram run_trials(const std::vector<std::string>& lines, std::uint64_t trials,
                           std::uint64_t seed, unsigned threads, const LineFn& per_line) {
    LengthHistogram total;
    for (std::uint64_t t = 0; t < trials; ++t) {
        total.merge(run_pass(lines, derive_seed(seed, t), threads, per_line));
    }
    return total;
}

}  // namespace

LengthHistogram length_histogram_pass(const std::vector<std::string>& lines,
                                      const MaxMatchTokenizer& tokenizer,
                                      std::uint64_t pass_seed, unsigned threads) {
    return run_pass(lines, pass_seed, threads, maxmatch_line_fn(tokenizer));
}

LengthHistogram length_histogram_pass(const std::vector<std::string>& lines,
                                      const MergeTable& merges, double p,
                                      const TokenizerConfig& cfg, std::uint64_t pass_seed,
                                      unsigned threads) {
    return run_pass(lines, pass_seed, threads, bpe_line_fn(merges, p, cfg));
}

LengthHistogram length_histogram(const std::vector<std::string>& lines,
                                 const MaxMatchTokenizer& tokenizer, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads) {
    return run_trials(lines, trials, seed, threads, maxmatch_line_fn(tokenizer));
}

LengthHistogram length_histogram(const std::vector<std::string>& lines, const MergeTable& merges,
                                 double p, const TokenizerConfig& cfg, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads) {
    return run_trials(lines, trials, seed, threads, bpe_line_fn(merges, p, cfg));
}

SummaryReport summary(const LengthHistogram& h) {
    if (h.total_tokens == 0) throw EmptyHistogram();
    SummaryReport r;
    std::uint64_t length_weighted = 0;
    std::uint64_t counted = 0;
    std::uint64_t best = 0;
    for (const auto& [len, count] : h.counts) {
        length_weighted += len * count;
        counted += count;
        if (count > best) {
            best = count;
            r.mode_length = len;
        }
    }
    r.mean_token_length =
        counted > 0 ? static_cast<double>(length_weighted) / static_cast<double>(counted) : 0.0;
    r.mean_tokens_per_word =
        h.total_words > 0
            ? static_cast<double>(h.total_tokens) / static_cast<double>(h.total_words)
            : 0.0;
    r.unk_rate = static_cast<double>(h.unk_count) / static_cast<double>(h.total_tokens);
    return r;
}

void write_tsv(std::ostream& out, const LengthHistogram& h) {
    for (const auto& [len, count] : h.counts) {
        out << len << '\t' << count << '\n';
    }
}

std::string summary_json(const LengthHistogram& h) {
    const SummaryReport r = summary(h);
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json shares = nlohmann::json::object();
    for (const auto& [len, count] : h.counts) {
        const std::string key = std::to_string(len);
        counts[key] = count;
        shares[key] = static_cast<double>(count) / static_cast<double>(h.total_tokens);
    }
    const nlohmann::json j = {
        {"trials", h.trials},
        {"total_tokens", h.total_tokens},
        {"total_words", h.total_words},
        {"unk_count", h.unk_count},
        {"counts", counts},
        {"shares", shares},
        {"mean_token_length", r.mean_token_length},
        {"mean_tokens_per_word", r.mean_tokens_per_word},
        {"unk_rate", r.unk_rate},
        {"mode_length", r.mode_length},
    };
    return j.dump();
}

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace mmtok
