#include "mmtok/trie.hpp"

#include <map>
#include <queue>

#include "mmtok/unicode.hpp"

namespace mmtok {

namespace {

struct BuildNode {
    std::map<char32_t, std::size_t> children;  // ordered, so edges come out sorted
    std::int32_t token_id = -1;
};

}  // namespace

Trie Trie::build(const Vocabulary& v, PositionClass position) {
    std::vector<BuildNode> build(1);
    const std::string& prefix = v.continuation_prefix();

    for (std::size_t id = 0; id < v.size(); ++id) {
        const std::string& token = v.tokens()[id];
        if (v.is_special(token)) continue;
        const bool continuation = v.is_continuation_token(token);
        std::string_view body = token;
        if (position == PositionClass::Continuation) {
            if (!prefix.empty()) {
                if (!continuation) continue;
                body.remove_prefix(prefix.size());
            }
        } else {
            if (continuation) continue;
        }
        const std::u32string path = decode_utf8(body);
        std::size_t node = 0;
        for (char32_t c : path) {
            auto [it, inserted] = build[node].children.try_emplace(c, build.size());
            if (inserted) build.emplace_back();
            node = it->second;
        }
        build[node].token_id = static_cast<std::int32_t>(id);
    }

    // Flatten breadth-first into a contiguous arena.
    Trie t;
    t.position_ = position;
    t.nodes_.resize(build.size());
    t.edges_.reserve(build.size() > 0 ? build.size() - 1 : 0);
    std::vector<std::int32_t> order(build.size(), -1);
    std::queue<std::size_t> pending;
    pending.push(0);
    order[0] = 0;
    std::int32_t next_index = 1;
    std::vector<std::size_t> bfs;
    bfs.reserve(build.size());
    while (!pending.empty()) {
        const std::size_t old = pending.front();
        pending.pop();
        bfs.push_back(old);
        for (const auto& [label, target] : build[old].children) {
            order[target] = next_index++;
            pending.push(target);
        }
    }
    for (const std::size_t old : bfs) {
        Node& n = t.nodes_[static_cast<std::size_t>(order[old])];
        n.token_id = build[old].token_id;
        if (n.token_id >= 0) ++t.accepting_;
        n.edges_begin = static_cast<std::int32_t>(t.edges_.size());
        for (const auto& [label, target] : build[old].children) {
            t.edges_.push_back(Edge{label, order[target]});
        }
        n.edges_end = static_cast<std::int32_t>(t.edges_.size());
    }
    return t;
}

std::int32_t Trie::child(std::int32_t node, char32_t c) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    std::int32_t lo = n.edges_begin;
    std::int32_t hi = n.edges_end;
    if (hi - lo <= 8) {
        for (std::int32_t i = lo; i < hi; ++i) {
            if (edges_[static_cast<std::size_t>(i)].label == c) {
                return edges_[static_cast<std::size_t>(i)].target;
            }
        }
        return -1;
    }
    while (lo < hi) {
        const std::int32_t mid = lo + (hi - lo) / 2;
        const Edge& e = edges_[static_cast<std::size_t>(mid)];
        if (e.label == c) return e.target;
        if (e.label < c) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return -1;
}

template <typename OnAccept>
void Trie::walk(std::u32string_view word, std::size_t start, OnAccept&& on_accept) const {
    if (nodes_.empty()) return;
    std::int32_t node = 0;
    int length = 0;
    for (std::size_t i = start; i < word.size(); ++i) {
        node = child(node, word[i]);
        if (node < 0) return;
        ++length;
        const std::int32_t tid = nodes_[static_cast<std::size_t>(node)].token_id;
        if (tid >= 0) on_accept(MatchResult{length, tid});
    }
}

std::optional<MatchResult> Trie::longest_match(std::u32string_view word, std::size_t start,
                                               double q, RandomSource& rng) const {
    std::optional<MatchResult> last;
    walk(word, start, [&](MatchResult m) {
        if (m.length == 1) {
            last = m;
        } else if (rng.bernoulli(1.0 - q)) {
            last = m;
        }
    });
    return last;
}

std::optional<MatchResult> Trie::longest_match(std::u32string_view word,
                                               std::size_t start) const {
    std::optional<MatchResult> last;
    walk(word, start, [&](MatchResult m) { last = m; });
    return last;
}

std::vector<MatchResult> Trie::accepting_prefixes(std::u32string_view word,
                                                  std::size_t start) const {
    std::vector<MatchResult> out;
    walk(word, start, [&](MatchResult m) { out.push_back(m); });
    return out;
}

}  // namespace mmtok
