// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cdcr::text {

constexpr char32_t kReplacementChar = 0xFFFD;

struct DecodedChar {
    char32_t cp;
    int len;  // bytes consumed (>= 1 even for invalid input)
    bool valid;
};

// Decodes one UTF-8 sequence at pos. Invalid bytes decode to U+FFFD one
// byte at a time so that offsets always advance.
inline DecodedChar decode_utf8(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1, true};

    auto cont = [&](std::size_t i) {
        return pos + i < s.size() &&
               (static_cast<unsigned char>(s[pos + i]) & 0xC0) == 0x80;
    };
    auto bits = [&](std::size_t i) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[pos + i]) & 0x3F);
    };

    if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | bits(1);
        if (cp >= 0x80) return {cp, 2, true};
    } else if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x0F) << 12) | (bits(1) << 6) | bits(2);
        if (cp >= 0x800 && !(cp >= 0xD800 && cp <= 0xDFFF)) return {cp, 3, true};
    } else if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x07) << 18) | (bits(1) << 12) |
                      (bits(2) << 6) | bits(3);
        if (cp >= 0x10000 && cp <= 0x10FFFF) return {cp, 4, true};
    }
    return {kReplacementChar, 1, false};
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

struct SanitizeResult {
    std::string text;
    std::size_t replacements = 0;
};

// Re-encodes s as valid UTF-8, replacing each invalid byte with U+FFFD.
inline SanitizeResult sanitize_utf8(std::string_view s) {
    SanitizeResult r;
    r.text.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        DecodedChar d = decode_utf8(s, i);
        if (d.valid) {
            r.text.append(s.substr(i, d.len));
        } else {
            append_utf8(r.text, kReplacementChar);
            ++r.replacements;
        }
        i += d.len;
    }
    return r;
}

inline std::vector<char32_t> to_codepoints(std::string_view s) {
    std::vector<char32_t> cps;
    cps.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        DecodedChar d = decode_utf8(s, i);
        cps.push_back(d.cp);
        i += d.len;
    }
    return cps;
}

inline bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r':
        case 0x0B: case 0x0C:
        case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

inline bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

inline bool is_ascii_letter(char32_t cp) {
    return (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z');
}

// Unicode punctuation treated as token separators. Codepoints >= 0x80 not
// listed here and not whitespace count as word characters; full category
// tables are not worth carrying for this corpus.
inline bool is_separator_punct(char32_t cp) {
    if (cp < 0x80) return !is_ascii_letter(cp) && !is_ascii_digit(cp) && !is_space(cp);
    switch (cp) {
        case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
        case 0x2018: case 0x2019: case 0x201A: case 0x201C: case 0x201D: case 0x201E:
        case 0x2022: case 0x2026: case 0x2039: case 0x203A:
        case 0x00A1: case 0x00AB: case 0x00B7: case 0x00BB: case 0x00BF:
        case 0x00A2: case 0x00A3: case 0x00A4: case 0x00A5: case 0x20AC:  // currency
        case kReplacementChar:
            return true;
        default:
            return false;
    }
}

inline bool is_word_char(char32_t cp) {
    return !is_space(cp) && !is_separator_punct(cp);
}

// ASCII uppercase plus Latin-1 uppercase range (used by the capitalization
// heuristic; other scripts never count as capitalized).
inline bool is_upper(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return true;
    return cp >= 0xC0 && cp <= 0xDE && cp != 0xD7;
}

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = ascii_lower(c);
    return out;
}

// Whitespace-delimited split, zero-copy.
inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && static_cast<unsigned char>(s[i]) <= ' ') ++i;
        std::size_t start = i;
        while (i < s.size() && static_cast<unsigned char>(s[i]) > ' ') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace cdcr::text
