#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mmtok {

// Whether a candidate substring sits at the start of a word or continues one.
enum class PositionClass { Initial, Continuation };

struct VocabOptions {
    std::string continuation_prefix = "##";  // empty string disables the distinction
    std::string unk_token = "[UNK]";
    // Tokens exempt from matching; the unk token is always included.
    std::vector<std::string> special_tokens = {"[UNK]", "[CLS]", "[SEP]", "[PAD]", "[MASK]"};
};

// Immutable token inventory with ids equal to file order. Safe to share
// across threads once constructed.
class Vocabulary {
public:
    Vocabulary() = default;

    // One token per line, UTF-8, LF endings; id = zero-based line index.
    // A single trailing newline is ignored, blank lines are rejected.
    static Vocabulary load(std::istream& in, VocabOptions opts = {});
    static Vocabulary load_file(const std::string& path, VocabOptions opts = {});

    // Ids in the given order; the unk token is appended when absent.
    static Vocabulary from_tokens(const std::vector<std::string>& tokens, VocabOptions opts = {});

    std::size_t size() const noexcept { return tokens_.size(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
    std::optional<int> id_of(std::string_view token) const;

    const std::string& unk_token() const noexcept { return opts_.unk_token; }
    int unk_id() const noexcept { return unk_id_; }
    const std::string& continuation_prefix() const noexcept { return opts_.continuation_prefix; }
    const VocabOptions& options() const noexcept { return opts_; }

    bool is_special(std::string_view token) const;

    // A token continues a word iff it starts with a non-empty continuation
    // prefix, is longer than the prefix, and is not special. With an empty
    // prefix no token is classified as continuation-only.
    bool is_continuation_token(std::string_view token) const;

    // Membership test for a bare (unprefixed) substring at the given position.
    // Continuation lookups prepend the prefix; with an empty prefix both
    // classes consult the same entries.
    bool contains(std::string_view s, PositionClass position) const;

    // Inverse of load: one token per line with a trailing newline.
    void serialize(std::ostream& out) const;

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    template <typename V>
    using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;
    using StringSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

    static Vocabulary finish(std::vector<std::string> tokens, VocabOptions opts);

    std::vector<std::string> tokens_;
    StringMap<int> id_by_token_;
    StringSet specials_;
    VocabOptions opts_;
    int unk_id_ = -1;
};

}  // namespace mmtok
