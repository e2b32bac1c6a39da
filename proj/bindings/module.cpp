#include <optional>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <sstream>

#include "mmtok/bpe.hpp"
#include "mmtok/stats.hpp"
#include "mmtok/tokenizer.hpp"
#include "mmtok/unicode.hpp"
#include "mmtok/vocab.hpp"

namespace py = pybind11;
using namespace mmtok;

namespace {

PositionClass parse_position(const std::string& s) {
    if (s == "initial") return PositionClass::Initial;
    if (s == "continuation") return PositionClass::Continuation;
    throw py::value_error("position must be 'initial' or 'continuation'");
}

PreTokenization parse_pretok(const std::string& s) {
    if (s == "whitespace") return PreTokenization::Whitespace;
    if (s == "whitespace-punct") return PreTokenization::WhitespacePunct;
    throw py::value_error("pre_tokenization must be 'whitespace' or 'whitespace-punct'");
}

// seed=None selects the dropout-free inference path.
template <typename F, typename G>
auto with_rng(const std::optional<std::uint64_t>& seed, F&& stochastic, G&& deterministic) {
    if (seed) {
        SplitMix64 rng(*seed);
        return stochastic(rng);
    }
    return deterministic();
}

py::dict histogram_dict(const LengthHistogram& h) {
    py::dict counts;
    for (const auto& [len, count] : h.counts) counts[py::int_(len)] = count;
    py::dict out;
    out["counts"] = counts;
    out["trials"] = h.trials;
    out["total_tokens"] = h.total_tokens;
    out["unk_count"] = h.unk_count;
    out["total_words"] = h.total_words;
    return out;
}

}  // namespace

PYBIND11_MODULE(mmtok, m) {
    m.doc() = "Subword tokenization with maximum matching and dropout regularization";

    py::class_<Token>(m, "Token")
        .def_readonly("surface", &Token::surface)
        .def_readonly("id", &Token::id)
        .def_readonly("begin", &Token::begin)
        .def_readonly("end", &Token::end)
        .def("__repr__", [](const Token& t) {
            std::ostringstream s;
            s << "Token('" << t.surface << "', id=" << t.id << ", span=[" << t.begin << ", "
              << t.end << "))";
            return s.str();
        });

    py::class_<Vocabulary>(m, "Vocabulary")
        .def_static(
            "load",
            [](const std::string& path, const std::string& prefix, const std::string& unk) {
                VocabOptions opts;
                opts.continuation_prefix = prefix;
                opts.unk_token = unk;
                return Vocabulary::load_file(path, opts);
            },
            py::arg("path"), py::arg("prefix") = "##", py::arg("unk") = "[UNK]")
        .def_static(
            "from_tokens",
            [](const std::vector<std::string>& tokens, const std::string& prefix,
               const std::string& unk) {
                VocabOptions opts;
                opts.continuation_prefix = prefix;
                opts.unk_token = unk;
                return Vocabulary::from_tokens(tokens, opts);
            },
            py::arg("tokens"), py::arg("prefix") = "##", py::arg("unk") = "[UNK]")
        .def("__len__", &Vocabulary::size)
        .def("id_of", &Vocabulary::id_of, py::arg("token"))
        .def("token", &Vocabulary::token, py::arg("id"))
        .def(
            "contains",
            [](const Vocabulary& v, const std::string& s, const std::string& position) {
                return v.contains(s, parse_position(position));
            },
            py::arg("s"), py::arg("position") = "initial")
        .def_property_readonly("unk_token", &Vocabulary::unk_token)
        .def_property_readonly("unk_id", &Vocabulary::unk_id)
        .def_property_readonly("continuation_prefix", &Vocabulary::continuation_prefix)
        .def_property_readonly("tokens", &Vocabulary::tokens);

    py::class_<MaxMatchTokenizer>(m, "MaxMatchTokenizer")
        .def(py::init([](const Vocabulary& vocab, double q, std::size_t max_word_chars,
                         const std::string& pre_tokenization, bool lowercase) {
                 TokenizerConfig cfg;
                 cfg.q = q;
                 cfg.continuation_prefix = vocab.continuation_prefix();
                 cfg.unk_token = vocab.unk_token();
                 cfg.max_word_chars = max_word_chars;
                 cfg.pre_tokenization = parse_pretok(pre_tokenization);
                 cfg.lowercase = lowercase;
                 return MaxMatchTokenizer(vocab, cfg);
             }),
             py::arg("vocab"), py::arg("q") = 0.0, py::arg("max_word_chars") = 100,
             py::arg("pre_tokenization") = "whitespace", py::arg("lowercase") = false)
        .def(
            "tokenize_word",
            [](const MaxMatchTokenizer& t, const std::string& word,
               std::optional<std::uint64_t> seed) {
                const std::u32string w = decode_utf8(word);
                return with_rng(
                    seed, [&](RandomSource& rng) { return t.tokenize_word(w, rng); },
                    [&] { return t.tokenize_word(w); });
            },
            py::arg("word"), py::arg("seed") = std::nullopt)
        .def(
            "tokenize_text",
            [](const MaxMatchTokenizer& t, const std::string& text,
               std::optional<std::uint64_t> seed) {
                return with_rng(
                    seed, [&](RandomSource& rng) { return t.tokenize_text(text, rng); },
                    [&] { return t.tokenize_text(text); });
            },
            py::arg("text"), py::arg("seed") = std::nullopt)
        .def(
            "encode",
            [](const MaxMatchTokenizer& t, const std::string& text,
               std::optional<std::uint64_t> seed) {
                return with_rng(
                    seed, [&](RandomSource& rng) { return t.encode(text, rng); },
                    [&] { return t.encode(text); });
            },
            py::arg("text"), py::arg("seed") = std::nullopt)
        .def(
            "tokenization_distribution",
            [](const MaxMatchTokenizer& t, const std::string& word) {
                py::dict out;
                for (const auto& [tokens, prob] : t.enumerate_tokenization_distribution(
                         decode_utf8(word))) {
                    out[py::tuple(py::cast(tokens))] = prob;
                }
                return out;
            },
            py::arg("word"))
        .def_property_readonly("q", [](const MaxMatchTokenizer& t) { return t.config().q; })
        .def_property_readonly("vocab", &MaxMatchTokenizer::vocab);

    py::class_<MergeTable>(m, "MergeTable")
        .def_static("load", &MergeTable::load_file, py::arg("path"))
        .def_static("from_pairs", &MergeTable::from_pairs, py::arg("pairs"))
        .def("__len__", &MergeTable::size)
        .def("merge", &MergeTable::merge, py::arg("priority"));

    m.def(
        "bpe_tokenize_word",
        [](const std::string& word, const MergeTable& merges, double p,
           std::optional<std::uint64_t> seed) {
            const std::u32string w = decode_utf8(word);
            return with_rng(
                seed, [&](RandomSource& rng) { return bpe_tokenize_word(w, merges, p, rng); },
                [&] { return bpe_tokenize_word(w, merges); });
        },
        py::arg("word"), py::arg("merges"), py::arg("p") = 0.0,
        py::arg("seed") = std::nullopt);

    m.def(
        "length_histogram",
        [](const std::vector<std::string>& lines, const MaxMatchTokenizer& tokenizer,
           std::uint64_t trials, std::uint64_t seed, unsigned threads) {
            return histogram_dict(length_histogram(lines, tokenizer, trials, seed, threads));
        },
        py::arg("lines"), py::arg("tokenizer"), py::arg("trials") = 1, py::arg("seed") = 0,
        py::arg("threads") = 1);

    m.def(
        "bpe_length_histogram",
        [](const std::vector<std::string>& lines, const MergeTable& merges, double p,
           std::uint64_t trials, std::uint64_t seed, unsigned threads) {
            TokenizerConfig cfg;
            return histogram_dict(length_histogram(lines, merges, p, cfg, trials, seed, threads));
        },
        py::arg("lines"), py::arg("merges"), py::arg("p") = 0.0, py::arg("trials") = 1,
        py::arg("seed") = 0, py::arg("threads") = 1);

    m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"));

    m.attr("__version__") = "0.1.0";
}
