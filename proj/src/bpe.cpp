#include "mmtok/bpe.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <unordered_set>

#include "mmtok/errors.hpp"
#include "mmtok/unicode.hpp"

namespace mmtok {

namespace {

bool is_single_scalar(const std::string& s) {
    return !s.empty() && decode_utf8(s).size() == 1;
}

std::string pair_key(std::string_view left, std::string_view right) {
    std::string key;
    key.reserve(left.size() + right.size() + 1);
    key.append(left);
    key.push_back(' ');
    key.append(right);
    return key;
}

}  // namespace

void MergeTable::add(const std::string& left, const std::string& right, std::size_t line) {
    if (!index_.emplace(pair_key(left, right), static_cast<int>(merges_.size())).second) {
        throw DuplicateMerge(line);
    }
    merges_.emplace_back(left, right);
}

MergeTable MergeTable::load(std::istream& in) {
    MergeTable table;
    std::unordered_set<std::string> producible;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("#version")) continue;
        if (!is_valid_utf8(line)) throw InvalidEncoding();
        const std::size_t space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 >= line.size()) {
            throw MalformedLine("expected \"left right\"", line_no);
        }
        const std::string left = line.substr(0, space);
        const std::string right = line.substr(space + 1);
        if (right.find(' ') != std::string::npos) {
            throw MalformedLine("expected exactly one space", line_no);
        }
        if (!producible.contains(left) && !is_single_scalar(left)) {
            throw MalformedLine("left side \"" + left + "\" is not producible", line_no);
        }
        if (!producible.contains(right) && !is_single_scalar(right)) {
            throw MalformedLine("right side \"" + right + "\" is not producible", line_no);
        }
        table.add(left, right, line_no);
        producible.insert(left + right);
    }
    return table;
}

MergeTable MergeTable::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open merges file: " + path);
    return load(in);
}

MergeTable MergeTable::from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    MergeTable table;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        table.add(pairs[i].first, pairs[i].second, i + 1);
    }
    return table;
}

std::optional<int> MergeTable::priority_of(std::string_view left, std::string_view right) const {
    const auto it = index_.find(pair_key(left, right));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

struct Symbol {
    std::string text;
    std::size_t begin = 0;  // scalar offsets into the word
    std::size_t end = 0;
};

TokenSequence to_sequence(const std::vector<Symbol>& symbols) {
    TokenSequence out;
    out.reserve(symbols.size());
    for (const Symbol& s : symbols) {
        out.push_back(Token{s.text, -1, s.begin, s.end});
    }
    return out;
}

TokenSequence bpe_impl(std::u32string_view word, const MergeTable& merges, double p,
                       RandomSource* rng) {
    std::vector<Symbol> symbols;
    symbols.reserve(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) {
        symbols.push_back(Symbol{encode_utf8(word.substr(i, 1)), i, i + 1});
    }

    while (symbols.size() > 1) {
        int best_priority = std::numeric_limits<int>::max();
        std::size_t best_at = 0;
        bool any = false;
        for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
            const auto priority = merges.priority_of(symbols[i].text, symbols[i + 1].text);
            if (!priority) continue;
            if (rng && rng->bernoulli(p)) continue;  // this occurrence skipped this round
            if (!any || *priority < best_priority) {
                best_priority = *priority;
                best_at = i;
                any = true;
            }
        }
        if (!any) break;
        symbols[best_at].text += symbols[best_at + 1].text;
        symbols[best_at].end = symbols[best_at + 1].end;
        symbols.erase(symbols.begin() + static_cast<std::ptrdiff_t>(best_at) + 1);
    }
    return to_sequence(symbols);
}

}  // namespace

TokenSequence bpe_tokenize_word(std::u32string_view word, const MergeTable& merges, double p,
                                RandomSource& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("dropout rate must be in [0,1]");
    return bpe_impl(word, merges, p, &rng);
}

TokenSequence bpe_tokenize_word(std::u32string_view word, const MergeTable& merges) {
    return bpe_impl(word, merges, 0.0, nullptr);
}

namespace {

TokenSequence bpe_text_impl(std::string_view text, const MergeTable& merges, double p,
                            const TokenizerConfig& cfg, RandomSource* rng) {
    const std::u32string decoded = decode_utf8(text);
    TokenSequence out;
    std::u32string word;
    for (const auto& [begin, end] : pre_tokenize(decoded, cfg.pre_tokenization)) {
        word.assign(decoded, begin, end - begin);
        if (cfg.lowercase) {
            for (char32_t& c : word) c = to_lower(c);
        }
        TokenSequence tokens = bpe_impl(word, merges, p, rng);
        for (Token& t : tokens) {
            t.begin += begin;
            t.end += begin;
            out.push_back(std::move(t));
        }
    }
    return out;
}

}  // namespace

TokenSequence bpe_tokenize_text(std::string_view text, const MergeTable& merges, double p,
                                const TokenizerConfig& cfg, RandomSource& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("dropout rate must be in [0,1]");
    return bpe_text_impl(text, merges, p, cfg, &rng);
}

TokenSequence bpe_tokenize_text(std::string_view text, const MergeTable& merges,
                                const TokenizerConfig& cfg) {
    return bpe_text_impl(text, merges, 0.0, cfg, nullptr);
}

}  // namespace mmtok
