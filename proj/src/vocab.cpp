#include "mmtok/vocab.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mmtok/errors.hpp"
#include "mmtok/unicode.hpp"

namespace mmtok {

Vocabulary Vocabulary::load(std::istream& in, VocabOptions opts) {
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();
    if (!is_valid_utf8(content)) throw InvalidEncoding();

    std::vector<std::string> tokens;
    std::size_t line_start = 0;
    std::size_t line_no = 0;
    while (line_start <= content.size()) {
        std::size_t eol = content.find('\n', line_start);
        const bool last = eol == std::string::npos;
        if (last) eol = content.size();
        ++line_no;
        if (last && line_start == eol) break;  // trailing newline, not a line
        if (line_start == eol) throw EmptyToken(line_no);
        tokens.emplace_back(content, line_start, eol - line_start);
        line_start = eol + 1;
        if (last) break;
    }
    return finish(std::move(tokens), std::move(opts));
}

Vocabulary Vocabulary::load_file(const std::string& path, VocabOptions opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open vocabulary file: " + path);
    return load(in, std::move(opts));
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens, VocabOptions opts) {
    std::vector<std::string> copy = tokens;
    bool has_unk = false;
    for (const auto& t : copy) {
        if (t == opts.unk_token) {
            has_unk = true;
            break;
        }
    }
    if (!has_unk) copy.push_back(opts.unk_token);
    return finish(std::move(copy), std::move(opts));
}

Vocabulary Vocabulary::finish(std::vector<std::string> tokens, VocabOptions opts) {
    Vocabulary v;
    v.opts_ = std::move(opts);
    v.tokens_ = std::move(tokens);
    v.id_by_token_.reserve(v.tokens_.size());
    for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
        const std::string& t = v.tokens_[i];
        if (t.empty()) throw EmptyToken(i + 1);
        if (!is_valid_utf8(t)) throw InvalidEncoding();
        if (!v.id_by_token_.emplace(t, static_cast<int>(i)).second) {
            throw DuplicateToken(t, i + 1);
        }
    }
    for (const auto& s : v.opts_.special_tokens) v.specials_.insert(s);
    v.specials_.insert(v.opts_.unk_token);
    auto unk = v.id_of(v.opts_.unk_token);
    if (!unk) throw MissingUnkToken(v.opts_.unk_token);
    v.unk_id_ = *unk;
    return v;
}

std::optional<int> Vocabulary::id_of(std::string_view token) const {
    auto it = id_by_token_.find(token);
    if (it == id_by_token_.end()) return std::nullopt;
    return it->second;
}

bool Vocabulary::is_special(std::string_view token) const {
    return specials_.find(token) != specials_.end();
}

bool Vocabulary::is_continuation_token(std::string_view token) const {
    const std::string& prefix = opts_.continuation_prefix;
    if (prefix.empty()) return false;
    return token.size() > prefix.size() && token.starts_with(prefix) && !is_special(token);
}

bool Vocabulary::contains(std::string_view s, PositionClass position) const {
    if (s.empty()) return false;
    if (position == PositionClass::Initial) {
        return id_by_token_.find(s) != id_by_token_.end() && !is_special(s) &&
               !is_continuation_token(s);
    }
    if (opts_.continuation_prefix.empty()) {
        return id_by_token_.find(s) != id_by_token_.end() && !is_special(s);
    }
    std::string prefixed = opts_.continuation_prefix;
    prefixed.append(s);
    return id_by_token_.find(prefixed) != id_by_token_.end() && !is_special(prefixed);
}

void Vocabulary::serialize(std::ostream& out) const {
    for (const auto& t : tokens_) {
        out << t << '\n';
    }
}

}  // namespace mmtok
