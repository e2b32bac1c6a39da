#include "mmtok/unicode.hpp"

#include "mmtok/errors.hpp"

namespace mmtok {

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(text[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            throw InvalidEncoding();
        }
        if (i + len > n) throw InvalidEncoding();
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) throw InvalidEncoding();
            cp = (cp << 6) | (b & 0x3F);
        }
        static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinByLen[len]) throw InvalidEncoding();
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) throw InvalidEncoding();
        out.push_back(cp);
        i += len;
    }
    return out;
}

bool is_valid_utf8(std::string_view text) {
    try {
        decode_utf8(text);
        return true;
    } catch (const InvalidEncoding&) {
        return false;
    }
}

void append_utf8(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) append_utf8(out, c);
    return out;
}

bool is_whitespace(char32_t c) {
    switch (c) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0:
        case 0x1680: case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000:
            return true;
        default:
            return c >= 0x2000 && c <= 0x200A;
    }
}

bool is_punctuation(char32_t c) {
    if ((c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
        (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E)) {
        return true;
    }
    switch (c) {
        case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
        case 0x3030: case 0x303D: case 0x30FB:
            return true;
        default:
            break;
    }
    if (c >= 0x2010 && c <= 0x2027) return true;   // dashes, quotes, ellipsis
    if (c >= 0x2030 && c <= 0x205E) return true;   // per-mille, primes, brackets
    if (c >= 0x3001 && c <= 0x3003) return true;   // CJK comma, full stop, ditto
    if (c >= 0x3008 && c <= 0x3011) return true;   // CJK brackets
    if (c >= 0x3014 && c <= 0x301F) return true;
    if (c >= 0xFE50 && c <= 0xFE6B) return true;   // small form variants
    if (c >= 0xFF01 && c <= 0xFF0F) return true;   // fullwidth punctuation
    if (c >= 0xFF1A && c <= 0xFF20) return true;
    if (c >= 0xFF3B && c <= 0xFF40) return true;
    if (c >= 0xFF5B && c <= 0xFF65) return true;
    return false;
}

char32_t to_lower(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 0x20;
    // Latin-1 uppercase block, minus the multiplication sign.
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
    return c;
}

}  // namespace mmtok
