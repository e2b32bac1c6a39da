#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mmtok/random.hpp"
#include "mmtok/tokenizer.hpp"

namespace mmtok {

// Ordered byte-pair merge rules; list position is the priority (lower =
// earlier = applied first). Immutable and shareable once loaded.
class MergeTable {
public:
    MergeTable() = default;

    // "left right" per line, optional "#version" header. Each side must be a
    // single character or the output of an earlier merge.
    static MergeTable load(std::istream& in);
    static MergeTable load_file(const std::string& path);
    static MergeTable from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

    std::size_t size() const noexcept { return merges_.size(); }
    const std::pair<std::string, std::string>& merge(std::size_t priority) const {
        return merges_.at(priority);
    }
    std::optional<int> priority_of(std::string_view left, std::string_view right) const;

private:
    void add(const std::string& left, const std::string& right, std::size_t line);

    std::vector<std::pair<std::string, std::string>> merges_;
    std::unordered_map<std::string, int> index_;  // "left right" -> priority
};

// Applies merges to the character sequence of `word`, skipping each candidate
// occurrence with probability p (fresh draw per occurrence per round, in
// left-to-right position order). The surviving candidate with the best
// priority is merged; ties go to the leftmost. Stops when a round leaves no
// unskipped applicable merge. Characters outside the merge alphabet pass
// through as singleton tokens; BPE never emits unk.
TokenSequence bpe_tokenize_word(std::u32string_view word, const MergeTable& merges, double p,
                                RandomSource& rng);

// p = 0: plain BPE.
TokenSequence bpe_tokenize_word(std::u32string_view word, const MergeTable& merges);

// Pre-tokenizes per cfg and applies bpe_tokenize_word to every word; spans
// index into the original text. Only the pre-tokenization fields of cfg are
// consulted.
TokenSequence bpe_tokenize_text(std::string_view text, const MergeTable& merges, double p,
                                const TokenizerConfig& cfg, RandomSource& rng);
TokenSequence bpe_tokenize_text(std::string_view text, const MergeTable& merges,
                                const TokenizerConfig& cfg);

}  // namespace mmtok
