#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmtok/bpe.hpp"
#include "mmtok/errors.hpp"
#include "mmtok/stats.hpp"
#include "mmtok/tokenizer.hpp"

namespace {

using mmtok::TokenSequence;

struct Options {
    std::string input;  // empty = stdin
    std::string vocab_path;
    std::string merges_path;
    std::string method = "maxmatch";
    double dropout = 0.0;
    std::uint64_t seed = 0;
    std::string format = "text";
    std::string prefix = "##";
    std::string unk = "[UNK]";
    std::string pretok = "whitespace";
    bool lowercase = false;
    std::size_t max_word_chars = 100;
    unsigned threads = 1;
    std::uint64_t epochs = 1;
    std::uint64_t trials = 1;
    std::string output;       // sample: base path of epoch files
    std::string out_tsv;      // stats
    std::string out_summary;  // stats
    std::string out_prefix;   // compare
};

mmtok::TokenizerConfig make_config(const Options& o) {
    mmtok::TokenizerConfig cfg;
    cfg.q = o.dropout;
    cfg.continuation_prefix = o.prefix;
    cfg.unk_token = o.unk;
    cfg.max_word_chars = o.max_word_chars;
    cfg.pre_tokenization = o.pretok == "whitespace-punct"
                               ? mmtok::PreTokenization::WhitespacePunct
                               : mmtok::PreTokenization::Whitespace;
    cfg.lowercase = o.lowercase;
    return cfg;
}

std::vector<std::string> read_input(const Options& o) {
    if (o.input.empty() || o.input == "-") {
        return mmtok::read_lines(std::cin);
    }
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw mmtok::IoError("cannot open input file: " + o.input);
    return mmtok::read_lines(in);
}

// Tokenizes one line under one method; the per-line seed keeps output
// independent of how lines are distributed over threads.
class Engine {
public:
    explicit Engine(const Options& o) : cfg_(make_config(o)) {
        method_bpe_ = o.method == "bpe";
        if (method_bpe_) {
            merges_ = mmtok::MergeTable::load_file(o.merges_path);
        } else {
            tokenizer_.emplace(mmtok::Vocabulary::load_file(o.vocab_path, cfg_.vocab_options()),
                               cfg_);
        }
        dropout_ = o.dropout;
    }

    TokenSequence run_line(const std::string& line, std::uint64_t line_seed) const {
        if (method_bpe_) {
            if (dropout_ == 0.0) return mmtok::bpe_tokenize_text(line, merges_, cfg_);
            mmtok::SplitMix64 rng(line_seed);
            return mmtok::bpe_tokenize_text(line, merges_, dropout_, cfg_, rng);
        }
        if (dropout_ == 0.0) return tokenizer_->tokenize_text(line);
        mmtok::SplitMix64 rng(line_seed);
        return tokenizer_->tokenize_text(line, rng);
    }

private:
    mmtok::TokenizerConfig cfg_;
    std::optional<mmtok::MaxMatchTokenizer> tokenizer_;
    mmtok::MergeTable merges_;
    bool method_bpe_ = false;
    double dropout_ = 0.0;
};

std::string render_text(const TokenSequence& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += tokens[i].surface;
    }
    return out;
}

std::string render_jsonl(const TokenSequence& tokens) {
    nlohmann::json surfaces = nlohmann::json::array();
    nlohmann::json token_ids = nlohmann::json::array();
    nlohmann::json spans = nlohmann::json::array();
    for (const auto& t : tokens) {
        surfaces.push_back(t.surface);
        if (t.id >= 0) {
            token_ids.push_back(t.id);
        } else {
            token_ids.push_back(nullptr);
        }
        spans.push_back({t.begin, t.end});
    }
    nlohmann::json record = {{"tokens", surfaces}, {"ids", token_ids}, {"spans", spans}};
    return record.dump();
}

// Maps fn over all lines, writing results in input order.
void process_lines(const std::vector<std::string>& lines, unsigned threads,
                   const std::function<std::string(std::size_t)>& fn, std::ostream& out) {
    if (threads <= 1 || lines.size() < 2) {
        for (std::size_t i = 0; i < lines.size(); ++i) out << fn(i) << '\n';
        return;
    }
    std::vector<std::string> results(lines.size());
    std::atomic<std::size_t> next{0};
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(lines.size()));
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n);
    workers.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < lines.size();
                     i = next.fetch_add(1)) {
                    results[i] = fn(i);
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
    for (const auto& r : results) out << r << '\n';
}

int cmd_tokenize(const Options& o) {
    const Engine engine(o);
    const std::vector<std::string> lines = read_input(o);
    const bool jsonl = o.format == "jsonl";
    process_lines(
        lines, o.threads,
        [&](std::size_t i) {
            const TokenSequence tokens = engine.run_line(lines[i], mmtok::derive_seed(o.seed, i));
            return jsonl ? render_jsonl(tokens) : render_text(tokens);
        },
        std::cout);
    return 0;
}

int cmd_sample(const Options& o) {
    if (o.output.empty() && (o.input.empty() || o.input == "-")) {
        std::cerr << "sample: --output is required when reading stdin\n";
        return 1;
    }
    const std::string base = o.output.empty() ? o.input : o.output;
    const Engine engine(o);
    const std::vector<std::string> lines = read_input(o);
    const bool jsonl = o.format == "jsonl";
    for (std::uint64_t epoch = 0; epoch < o.epochs; ++epoch) {
        const std::uint64_t epoch_seed = mmtok::derive_seed(o.seed, epoch);
        const std::string path = base + ".epoch" + std::to_string(epoch);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw mmtok::IoError("cannot open output file: " + path);
        process_lines(
            lines, o.threads,
            [&](std::size_t i) {
                const TokenSequence tokens =
                    engine.run_line(lines[i], mmtok::derive_seed(epoch_seed, i));
                return jsonl ? render_jsonl(tokens) : render_text(tokens);
            },
            out);
        std::cerr << "wrote " << path << "\n";
    }
    return 0;
}

mmtok::LengthHistogram run_histogram(const Options& o, const std::vector<std::string>& lines,
                                     const std::string& method, double rate) {
    const mmtok::TokenizerConfig cfg = make_config(o);
    if (method == "bpe") {
        const mmtok::MergeTable merges = mmtok::MergeTable::load_file(o.merges_path);
        return mmtok::length_histogram(lines, merges, rate, cfg, o.trials, o.seed, o.threads);
    }
    mmtok::Vocabulary vocab = mmtok::Vocabulary::load_file(o.vocab_path, cfg.vocab_options());
    mmtok::TokenizerConfig with_rate = cfg;
    with_rate.q = rate;
    const mmtok::MaxMatchTokenizer tokenizer(std::move(vocab), with_rate);
    return mmtok::length_histogram(lines, tokenizer, o.trials, o.seed, o.threads);
}

void write_or_print(const std::string& path, const std::string& content, std::ostream& fallback) {
    if (path.empty()) {
        fallback << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mmtok::IoError("cannot open output file: " + path);
    out << content;
}

int cmd_stats(const Options& o) {
    const std::vector<std::string> lines = read_input(o);
    const mmtok::LengthHistogram h = run_histogram(o, lines, o.method, o.dropout);
    std::ostringstream tsv;
    mmtok::write_tsv(tsv, h);
    write_or_print(o.out_tsv, tsv.str(), std::cout);
    write_or_print(o.out_summary, mmtok::summary_json(h) + "\n", std::cerr);
    return 0;
}

int cmd_compare(const Options& o) {
    const std::vector<std::string> lines = read_input(o);
    const mmtok::LengthHistogram mm = run_histogram(o, lines, "maxmatch", o.dropout);
    const mmtok::LengthHistogram bp = run_histogram(o, lines, "bpe", o.dropout);
    std::ostringstream mm_tsv;
    std::ostringstream bp_tsv;
    mmtok::write_tsv(mm_tsv, mm);
    mmtok::write_tsv(bp_tsv, bp);
    const std::string summary = std::string("{\"maxmatch\":") + mmtok::summary_json(mm) +
                                ",\"bpe\":" + mmtok::summary_json(bp) + "}\n";
    if (o.out_prefix.empty()) {
        std::cout << "# method=maxmatch\n" << mm_tsv.str();
        std::cout << "# method=bpe\n" << bp_tsv.str();
        std::cerr << summary;
        return 0;
    }
    write_or_print(o.out_prefix + ".maxmatch.tsv", mm_tsv.str(), std::cout);
    write_or_print(o.out_prefix + ".bpe.tsv", bp_tsv.str(), std::cout);
    write_or_print(o.out_prefix + ".summary.json", summary, std::cerr);
    return 0;
}

void add_common_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("input", o.input, "Input file (default: stdin)");
    cmd->add_option("--vocab", o.vocab_path, "Vocabulary file, one token per line");
    cmd->add_option("--merges", o.merges_path, "BPE merges file");
    cmd->add_option("--method", o.method, "Tokenizer family")
        ->check(CLI::IsMember({"maxmatch", "bpe"}));
    cmd->add_option("--dropout", o.dropout, "Dropout rate in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", o.seed, "Base seed; derived per line/epoch/trial");
    cmd->add_option("--prefix", o.prefix, "Continuation prefix (empty to disable)");
    cmd->add_option("--unk", o.unk, "Unknown-word token");
    cmd->add_option("--pre-tokenization", o.pretok, "Word splitting mode")
        ->check(CLI::IsMember({"whitespace", "whitespace-punct"}));
    cmd->add_flag("--lowercase", o.lowercase, "Lowercase words before matching");
    cmd->add_option("--max-word-chars", o.max_word_chars, "Words longer than this become unk")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    cmd->add_option("--threads", o.threads, "Worker count (output is independent of it)")
        ->check(CLI::Range(1u, 256u));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subword tokenization with maximum matching and dropout regularization"};
    app.require_subcommand(1);

    Options o;
    auto* tokenize = app.add_subcommand("tokenize", "Tokenize lines from a file or stdin");
    add_common_flags(tokenize, o);
    tokenize->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "jsonl"}));

    auto* sample = app.add_subcommand("sample", "Write one sampled tokenization per epoch");
    add_common_flags(sample, o);
    sample->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "jsonl"}));
    sample->add_option("--epochs", o.epochs, "Number of epoch files")->check(CLI::Range(1, 100000));
    sample->add_option("--output", o.output, "Base path of epoch files (default: input path)");

    auto* stats = app.add_subcommand("stats", "Token-length histogram over sampled tokenizations");
    add_common_flags(stats, o);
    stats->add_option("--trials", o.trials, "Sampling passes")->check(CLI::Range(1, 100000));
    stats->add_option("--out-tsv", o.out_tsv, "Histogram TSV path (default: stdout)");
    stats->add_option("--out-summary", o.out_summary, "Summary JSON path (default: stderr)");

    auto* compare = app.add_subcommand("compare", "Run maxmatch and bpe side by side");
    add_common_flags(compare, o);
    compare->add_option("--trials", o.trials, "Sampling passes")->check(CLI::Range(1, 100000));
    compare->add_option("--out-prefix", o.out_prefix, "Write PREFIX.{maxmatch,bpe}.tsv + summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    // Which inputs a run needs depends on the method, so CLI11's static
    // required() is too coarse.
    const bool wants_bpe = o.method == "bpe" || app.got_subcommand(compare);
    const bool wants_vocab = o.method != "bpe" || app.got_subcommand(compare);
    if (wants_bpe && o.merges_path.empty()) {
        std::cerr << "missing --merges (required for bpe)\n";
        return 1;
    }
    if (wants_vocab && o.vocab_path.empty()) {
        std::cerr << "missing --vocab\n";
        return 1;
    }

    std::cerr << "seed: " << o.seed << "\n";
    try {
        if (app.got_subcommand(tokenize)) return cmd_tokenize(o);
        if (app.got_subcommand(sample)) return cmd_sample(o);
        if (app.got_subcommand(stats)) return cmd_stats(o);
        if (app.got_subcommand(compare)) return cmd_compare(o);
    } catch (const mmtok::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
