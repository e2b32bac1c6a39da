// Acceptance suite: runs every shipping criterion and prints one PASS/FAIL
// line each. Exits nonzero if any criterion fails or overruns its budget.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <unordered_set>
#include <vector>

#include "helpers.hpp"
#include "mmtok/bpe.hpp"
#include "mmtok/stats.hpp"
#include "mmtok/tokenizer.hpp"
#include "mmtok/unicode.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mmtok;
using testing::Gen;
using testing::ScriptedRandomSource;
using testing::make_tokenizer;

namespace {

std::string g_cli_path = MMTOK_CLI_PATH;
const std::string kFixtureDir = MMTOK_FIXTURE_DIR;

struct Result {
    bool pass = false;
    std::string detail;
};

struct Shell {
    int exit_code = -1;
    std::string out;
};

Shell run_shell(const std::string& command) {
    Shell r;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> load_fixture_lines(const std::string& name) {
    std::ifstream in(kFixtureDir + "/" + name, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture: " + name);
    return read_lines(in);
}

bool eq(const std::vector<std::string>& a, const std::vector<std::string>& b) { return a == b; }

// 1. The worked traces: greedy matches, whole-word unk, and the dropped
//    long accept.
Result criterion_traces() {
    const auto figure2 = make_tokenizer({"a", "b", "c", "d", "abc", "bcd"}, 0.0);
    if (!eq(surfaces(figure2.tokenize_word(U"abcd")), {"abc", "d"})) {
        return {false, "abcd did not split as abc,d"};
    }
    if (!eq(surfaces(figure2.tokenize_word(U"abce")), {"[UNK]"})) {
        return {false, "abce did not collapse to [UNK]"};
    }
    const auto figure1 = make_tokenizer({"w", "o", "r", "d", "or", "rd", "word"}, 0.5);
    if (!eq(surfaces(figure1.tokenize_word(U"word")), {"word"})) {
        return {false, "word did not stay whole at q=0"};
    }
    ScriptedRandomSource rig({false, true});  // drop the word accept, keep or
    if (!eq(surfaces(figure1.tokenize_word(U"word", rig)), {"w", "or", "d"})) {
        return {false, "rigged drop did not yield w,or,d"};
    }
    return {true, "4/4 traces exact"};
}

// 2. q=0 / p=0 match the independent oracles on randomized instances.
Result criterion_vanilla_equivalence() {
    Gen gen(101);
    int maxmatch_cases = 0;
    for (int round = 0; round < 1200; ++round) {
        const std::string prefix = round % 2 == 0 ? "" : "##";
        const auto tok = make_tokenizer(gen.vocab(20, 5, prefix), 0.0);
        const std::u32string word = gen.word(12, 5);
        if (!eq(surfaces(tok.tokenize_word(word)),
                oracles::greedy_scan_tokenize(word, tok.vocab()))) {
            return {false, "maxmatch mismatch on " + encode_utf8(word)};
        }
        ++maxmatch_cases;
    }
    int bpe_cases = 0;
    for (int round = 0; round < 1200; ++round) {
        const MergeTable m = gen.merge_table(15, 4);
        const std::u32string word = gen.word(10, 4);
        if (!eq(surfaces(bpe_tokenize_word(word, m)), oracles::vanilla_bpe(word, m))) {
            return {false, "bpe mismatch on " + encode_utf8(word)};
        }
        ++bpe_cases;
    }
    return {true, std::to_string(maxmatch_cases) + " maxmatch + " + std::to_string(bpe_cases) +
                      " bpe instances exact"};
}

// 3. q=1 gives characters iff all characters are known; p=1 always characters.
Result criterion_limits() {
    Gen gen(103);
    for (int round = 0; round < 1200; ++round) {
        const std::string prefix = round % 2 == 0 ? "" : "##";
        const auto tok = make_tokenizer(gen.vocab(20, 5, prefix, round % 3 == 0), 1.0);
        const std::u32string word = gen.word(12, 5);
        SplitMix64 rng(static_cast<std::uint64_t>(round));
        if (!eq(surfaces(tok.tokenize_word(word, rng)),
                oracles::character_segmentation(word, tok.vocab()))) {
            return {false, "q=1 mismatch on " + encode_utf8(word)};
        }
    }
    for (int round = 0; round < 1200; ++round) {
        const MergeTable m = gen.merge_table(15, 4);
        const std::u32string word = gen.word(10, 4);
        SplitMix64 rng(static_cast<std::uint64_t>(round) + 7);
        const TokenSequence seq = bpe_tokenize_word(word, m, 1.0, rng);
        if (seq.size() != word.size()) {
            return {false, "p=1 did not yield characters on " + encode_utf8(word)};
        }
    }
    return {true, "2400 limit instances exact"};
}

// 4. Monte-Carlo frequencies match the enumeration oracle within 0.02.
Result criterion_distributions() {
    const auto tok = make_tokenizer({"a", "b", "ab"}, 0.5);
    const TokenizationDistribution oracle = tok.enumerate_tokenization_distribution(U"ab");
    const double expected_whole = oracle.at({"ab"});
    const int trials = 10000;
    int whole = 0;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(91, static_cast<std::uint64_t>(t)));
        if (eq(surfaces(tok.tokenize_word(U"ab", rng)), {"ab"})) ++whole;
    }
    const double freq = static_cast<double>(whole) / trials;
    if (std::abs(freq - expected_whole) > 0.02) {
        return {false, "maxmatch [ab] frequency " + std::to_string(freq) + " vs oracle " +
                           std::to_string(expected_whole)};
    }

    const MergeTable m = MergeTable::from_pairs({{"a", "b"}, {"ab", "c"}});
    int full = 0;
    int pair = 0;
    int chars = 0;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(53, static_cast<std::uint64_t>(t)));
        const auto s = surfaces(bpe_tokenize_word(U"abc", m, 0.5, rng));
        if (eq(s, {"abc"})) {
            ++full;
        } else if (eq(s, {"ab", "c"})) {
            ++pair;
        } else if (eq(s, {"a", "b", "c"})) {
            ++chars;
        } else {
            return {false, "unexpected bpe outcome"};
        }
    }
    if (std::abs(full / double(trials) - 0.25) > 0.02 ||
        std::abs(pair / double(trials) - 0.25) > 0.02 ||
        std::abs(chars / double(trials) - 0.5) > 0.02) {
        return {false, "bpe frequencies off: " + std::to_string(full / double(trials)) + "," +
                           std::to_string(pair / double(trials)) + "," +
                           std::to_string(chars / double(trials))};
    }
    std::ostringstream detail;
    detail << "maxmatch [ab] " << freq << " (oracle " << expected_whole << "), bpe "
           << full / double(trials) << "/" << pair / double(trials) << "/"
           << chars / double(trials);
    return {true, detail.str()};
}

// 5. On the committed fixture, dropout shifts mass toward single characters,
//    and the shift is gentler for maxmatch than for BPE at the same rate.
Result criterion_length_shift() {
    const std::vector<std::string> corpus = load_fixture_lines("corpus.txt");
    VocabOptions vopts;
    vopts.continuation_prefix = "";
    Vocabulary vocab = Vocabulary::load_file(kFixtureDir + "/vocab.txt", vopts);
    const MergeTable merges = MergeTable::load_file(kFixtureDir + "/merges.txt");

    TokenizerConfig cfg;
    cfg.continuation_prefix = "";
    TokenizerConfig cfg_half = cfg;
    cfg_half.q = 0.5;
    const MaxMatchTokenizer tok0(vocab, cfg);
    const MaxMatchTokenizer tok_half(std::move(vocab), cfg_half);

    const std::uint64_t trials = 2;
    const std::uint64_t seed = 1;
    const LengthHistogram mm0 = length_histogram(corpus, tok0, trials, seed, 2);
    const LengthHistogram mm_half = length_histogram(corpus, tok_half, trials, seed, 2);
    const LengthHistogram bpe_half = length_histogram(corpus, merges, 0.5, cfg, trials, seed, 2);

    const auto ones = [](const LengthHistogram& h) -> std::uint64_t {
        const auto it = h.counts.find(1);
        return it == h.counts.end() ? 0 : it->second;
    };
    const auto share1 = [&](const LengthHistogram& h) {
        std::uint64_t total = 0;
        for (const auto& [len, c] : h.counts) total += c;
        return total == 0 ? 0.0 : static_cast<double>(ones(h)) / static_cast<double>(total);
    };

    if (mm0.unk_count != 0 || mm_half.unk_count != 0) {
        return {false, "fixture vocabulary does not cover the corpus"};
    }
    if (ones(mm_half) <= ones(mm0)) {
        return {false, "length-1 count did not grow under dropout"};
    }
    const double mm_share = share1(mm_half);
    const double bpe_share = share1(bpe_half);
    std::ostringstream detail;
    detail << "length-1 share at 0.5: maxmatch " << mm_share << " vs bpe " << bpe_share
           << " (counts " << ones(mm0) << " -> " << ones(mm_half) << ")";
    if (!(mm_share < bpe_share)) return {false, detail.str()};
    return {true, detail.str()};
}

// 6. Byte-identical CLI output across reruns and worker counts 1, 2, 8.
Result criterion_cli_determinism() {
    const std::string vocab = kFixtureDir + "/vocab.txt";
    const std::string corpus = kFixtureDir + "/corpus.txt";
    const std::string base = g_cli_path + " tokenize " + corpus + " --vocab " + vocab +
                             " --prefix '' --dropout 0.5 --seed 9 2>/dev/null --threads ";
    const Shell t1a = run_shell(base + "1");
    const Shell t1b = run_shell(base + "1");
    const Shell t2 = run_shell(base + "2");
    const Shell t8 = run_shell(base + "8");
    if (t1a.exit_code != 0) return {false, "cli exited " + std::to_string(t1a.exit_code)};
    if (t1a.out.empty()) return {false, "cli produced no output"};
    if (t1a.out != t1b.out) return {false, "reruns differ"};
    if (t1a.out != t2.out) return {false, "threads=2 differs"};
    if (t1a.out != t8.out) return {false, "threads=8 differs"};
    return {true, std::to_string(t1a.out.size()) + " bytes identical across 4 runs"};
}

// 7. Plain q=0 tokenization clears 100k words/s on a ~1 MB corpus with a
//    32k-entry vocabulary.
Result criterion_throughput() {
    // English-like synthetic text: syllable words over a 32k token inventory.
    std::vector<std::string> syllables;
    const std::string consonants = "bcdfghjklmnpqrstvwxz";
    const std::string vowels = "aeiouy";
    for (char c : consonants) {
        for (char v : vowels) {
            syllables.push_back(std::string{c, v});
            for (char c2 : consonants) {
                syllables.push_back(std::string{c, v, c2});
            }
        }
    }
    std::vector<std::string> tokens;
    std::unordered_set<std::string> seen;
    const auto add = [&](const std::string& t) {
        if (seen.insert(t).second) tokens.push_back(t);
    };
    for (char c = 'a'; c <= 'z'; ++c) {
        add(std::string(1, c));
        add("##" + std::string(1, c));
    }
    for (const auto& s : syllables) {
        add(s);
        add("##" + s);
    }
    const std::size_t budget = 32768;
    for (std::size_t i = 0; tokens.size() + 1 < budget && i < syllables.size() * syllables.size();
         ++i) {
        const std::string pair =
            syllables[i / syllables.size()] + syllables[i % syllables.size()];
        add(pair);
        if (tokens.size() + 1 < budget) add("##" + pair);
    }

    TokenizerConfig cfg;
    const MaxMatchTokenizer tok(Vocabulary::from_tokens(tokens, cfg.vocab_options()), cfg);

    SplitMix64 rng(2025);
    std::vector<std::string> lines;
    std::size_t total_bytes = 0;
    std::size_t total_words = 0;
    while (total_bytes < (1u << 20)) {
        std::string line;
        for (int w = 0; w < 12; ++w) {
            const int n_syll = 1 + static_cast<int>(rng.next() % 4);
            for (int s = 0; s < n_syll; ++s) {
                line += syllables[rng.next() % syllables.size()];
            }
            line.push_back(' ');
            ++total_words;
        }
        total_bytes += line.size() + 1;
        lines.push_back(std::move(line));
    }

    std::size_t token_count = 0;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& line : lines) {
        token_count += tok.tokenize_text(line).size();
    }
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    const double words_per_second = static_cast<double>(total_words) / elapsed.count();
    std::ostringstream detail;
    detail << static_cast<long>(words_per_second) << " words/s (" << total_words << " words, "
           << token_count << " tokens, " << elapsed.count() << "s)";
    return {words_per_second >= 100000.0, detail.str()};
}

struct Criterion {
    int number;
    std::string name;
    double budget_seconds;
    std::function<Result()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "appendix trace fidelity", 1.0, criterion_traces},
        {2, "vanilla equivalence vs oracles", 10.0, criterion_vanilla_equivalence},
        {3, "q=1 / p=1 limit behavior", 10.0, criterion_limits},
        {4, "sampled distribution correctness", 10.0, criterion_distributions},
        {5, "token-length shift on fixture corpus", 60.0, criterion_length_shift},
        {6, "cli determinism and parallel invariance", 30.0, criterion_cli_determinism},
        {7, "throughput >= 100k words/s", 60.0, criterion_throughput},
    };

    bool all_pass = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > c.budget_seconds) {
            r.pass = false;
            r.detail += " [over budget of " + std::to_string(c.budget_seconds) + "s]";
        }
        std::printf("%s  criterion %d: %s  (%.2fs)  %s\n", r.pass ? "PASS" : "FAIL", c.number,
                    c.name.c_str(), elapsed, r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
