#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mmtok/bpe.hpp"
#include "mmtok/tokenizer.hpp"

namespace mmtok {

// Token-length counts accumulated over repeated sampled tokenizations of a
// corpus. Lengths are measured in scalar values with continuation prefixes
// stripped; unk tokens are counted separately and excluded from the length
// counts.
struct LengthHistogram {
    std::map<std::size_t, std::uint64_t> counts;
    std::uint64_t trials = 0;
    std::uint64_t total_tokens = 0;  // sum of counts + unk_count
    std::uint64_t unk_count = 0;
    std::uint64_t total_words = 0;

    void merge(const LengthHistogram& other);
};

struct SummaryReport {
    double mean_token_length = 0.0;  // over non-unk tokens
    double mean_tokens_per_word = 0.0;
    double unk_rate = 0.0;
    std::size_t mode_length = 0;
};

// One sampling pass over the corpus. Line i uses seed
// derive_seed(pass_seed, i), so the result does not depend on `threads`.
LengthHistogram length_histogram_pass(const std::vector<std::string>& lines,
                                      const MaxMatchTokenizer& tokenizer,
                                      std::uint64_t pass_seed, unsigned threads = 1);
LengthHistogram length_histogram_pass(const std::vector<std::string>& lines,
                                      const MergeTable& merges, double p,
                                      const TokenizerConfig& cfg, std::uint64_t pass_seed,
                                      unsigned threads = 1);

// `trials` passes with pass seeds derive_seed(seed, t), summed element-wise.
LengthHistogram length_histogram(const std::vector<std::string>& lines,
                                 const MaxMatchTokenizer& tokenizer, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads = 1);

// BPE counterpart; words come from the same pre-tokenization rules.
LengthHistogram length_histogram(const std::vector<std::string>& lines, const MergeTable& merges,
                                 double p, const TokenizerConfig& cfg, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads = 1);

SummaryReport summary(const LengthHistogram& h);  // EmptyHistogram when no tokens

// length <TAB> count, ascending by length.
void write_tsv(std::ostream& out, const LengthHistogram& h);

// Counts plus relative shares and the summary fields, as a JSON object.
std::string summary_json(const LengthHistogram& h);

std::vector<std::string> read_lines(std::istream& in);

}  // namespace mmtok
