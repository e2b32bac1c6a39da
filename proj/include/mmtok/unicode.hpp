#pragma once

#include <string>
#include <string_view>

namespace mmtok {

// All character counts in this library are Unicode scalar values, never bytes.
// decode_utf8 rejects malformed input (truncated or overlong sequences,
// surrogates, values past U+10FFFF) with InvalidEncoding.
std::u32string decode_utf8(std::string_view text);
bool is_valid_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t c);

bool is_whitespace(char32_t c);

// ASCII punctuation plus the common punctuation blocks (general punctuation,
// CJK symbols, fullwidth forms). Not the full Unicode P* category.
bool is_punctuation(char32_t c);

// ASCII and Latin-1 only; everything else maps to itself.
char32_t to_lower(char32_t c);

}  // namespace mmtok
