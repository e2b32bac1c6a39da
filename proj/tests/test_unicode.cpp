#include <string>

#include "doctest.h"
#include "mmtok/errors.hpp"
#include "mmtok/random.hpp"
#include "mmtok/unicode.hpp"

using namespace mmtok;

TEST_CASE("decode_utf8 handles ascii and multibyte") {
    CHECK(decode_utf8("abc") == U"abc");
    CHECK(decode_utf8("caf\xc3\xa9") == U"café");
    CHECK(decode_utf8("\xe3\x81\x82") == U"あ");          // あ
    CHECK(decode_utf8("\xf0\x9f\x99\x82") == U"\U0001f642");  // 🙂
    CHECK(decode_utf8("").empty());
}

TEST_CASE("decode_utf8 rejects malformed input") {
    CHECK_THROWS_AS(decode_utf8("\x80"), InvalidEncoding);          // lone continuation
    CHECK_THROWS_AS(decode_utf8("\xc3"), InvalidEncoding);          // truncated
    CHECK_THROWS_AS(decode_utf8("\xc0\xaf"), InvalidEncoding);      // overlong '/'
    CHECK_THROWS_AS(decode_utf8("\xe0\x80\xaf"), InvalidEncoding);  // overlong
    CHECK_THROWS_AS(decode_utf8("\xed\xa0\x80"), InvalidEncoding);  // surrogate
    CHECK_THROWS_AS(decode_utf8("\xf5\x80\x80\x80"), InvalidEncoding);  // > U+10FFFF
    CHECK_THROWS_AS(decode_utf8("\xff"), InvalidEncoding);
    CHECK(!is_valid_utf8("\xc3("));
    CHECK(is_valid_utf8("plain"));
}

TEST_CASE("encode/decode round-trip over random scalar values") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        std::u32string text;
        const std::size_t len = rng.next() % 40;
        for (std::size_t k = 0; k < len; ++k) {
            char32_t c = 0;
            do {
                c = static_cast<char32_t>(rng.next() % 0x110000);
            } while (c >= 0xD800 && c <= 0xDFFF);
            text.push_back(c);
        }
        CHECK(decode_utf8(encode_utf8(text)) == text);
    }
}

TEST_CASE("whitespace classification") {
    CHECK(is_whitespace(U' '));
    CHECK(is_whitespace(U'\t'));
    CHECK(is_whitespace(U'\n'));
    CHECK(is_whitespace(0x00A0));
    CHECK(is_whitespace(0x3000));  // ideographic space
    CHECK(is_whitespace(0x2003));  // em space
    CHECK(!is_whitespace(U'a'));
    CHECK(!is_whitespace(U'.'));
}

TEST_CASE("punctuation classification") {
    CHECK(is_punctuation(U'.'));
    CHECK(is_punctuation(U','));
    CHECK(is_punctuation(U'['));
    CHECK(is_punctuation(U'~'));
    CHECK(is_punctuation(0x3001));  // 、
    CHECK(is_punctuation(0xFF01));  // ！
    CHECK(!is_punctuation(U'a'));
    CHECK(!is_punctuation(U'5'));
    CHECK(!is_punctuation(0x3042));  // あ
}

TEST_CASE("to_lower covers ascii and latin-1") {
    CHECK(to_lower(U'A') == U'a');
    CHECK(to_lower(U'Z') == U'z');
    CHECK(to_lower(U'a') == U'a');
    CHECK(to_lower(0xC0) == 0xE0);   // À→à
    CHECK(to_lower(0xD7) == 0xD7);   // × unchanged
    CHECK(to_lower(0x3042) == 0x3042);
}
