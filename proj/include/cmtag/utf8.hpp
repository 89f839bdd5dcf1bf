#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 iteration. Invalid or truncated byte sequences are consumed
// one byte at a time and surfaced as that byte's value, so every function
// here is total over arbitrary std::string contents.

namespace cmtag::utf8 {

// Decodes the code point starting at byte offset `i` and advances `i`.
inline char32_t decode(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    auto cont = [&](std::size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    auto tail = [&](std::size_t k) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
    };
    if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | tail(1);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x0F) << 12) | (tail(1) << 6) | tail(2);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x07) << 18) | (tail(1) << 12) |
                      (tail(2) << 6) | tail(3);
        i += 4;
        return cp;
    }
    ++i;  // stray byte
    return b0;
}

// Byte offsets where code points start, plus s.size() as the final entry.
inline std::vector<std::size_t> boundaries(std::string_view s) {
    std::vector<std::size_t> out;
    std::size_t i = 0;
    while (i < s.size()) {
        out.push_back(i);
        decode(s, i);
    }
    out.push_back(s.size());
    return out;
}

inline std::size_t length(std::string_view s) {
    std::size_t n = 0, i = 0;
    while (i < s.size()) {
        decode(s, i);
        ++n;
    }
    return n;
}

inline bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

// Letter test for Roman-script chat text. ASCII letters, Latin-1 letters and
// the Latin extended blocks count; common punctuation/symbol/emoji ranges do
// not; anything else non-ASCII is treated as a letter.
inline bool is_letter(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
    if (cp < 0x80) return false;
    if (cp == 0xD7 || cp == 0xF7) return false;                 // × ÷
    if (cp >= 0xC0 && cp <= 0x24F) return true;                 // Latin-1 .. Latin Ext-B
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;             // punctuation, arrows, symbols
    if (cp >= 0x3000 && cp <= 0x303F) return false;             // CJK punctuation
    if (cp >= 0x1F000) return false;                            // emoji planes
    if (cp >= 0xA1 && cp <= 0xBF) return false;                 // Latin-1 punctuation
    return cp >= 0x80;
}

}  // namespace cmtag::utf8
