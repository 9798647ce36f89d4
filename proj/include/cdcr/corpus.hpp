// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cdcr/error.hpp"
#include "cdcr/text.hpp"

namespace cdcr {

// A document after format analysis: clean body, no markup.
struct Document {
    std::string id;
    std::string docType;                 // free-form category tag ("story", "sport", ...)
    std::optional<std::int32_t> timestamp;  // canonical yyyymmdd
    std::optional<std::string> headline;
    std::string body;
    std::string sourcePath;
    std::size_t encodingReplacements = 0;  // invalid UTF-8 bytes replaced on ingest
};

enum class TokenKind { word, number, punctuation };

struct Span {
    std::uint32_t begin = 0;  // byte offsets into Document::body
    std::uint32_t end = 0;

    bool overlaps(const Span& o) const { return begin < o.end && o.begin < end; }
    std::uint32_t length() const { return end - begin; }
    auto operator<=>(const Span&) const = default;
};

struct Token {
    std::string_view text;  // view into the body it was produced from
    Span span;
    TokenKind kind = TokenKind::word;
};

enum class CorpusFormat { plain, markup, jsonl_record };

namespace detail {

inline const char* entity_name(std::string_view s) {
    if (s == "amp") return "&";
    if (s == "lt") return "<";
    if (s == "gt") return ">";
    if (s == "quot") return "\"";
    if (s == "apos") return "'";
    return nullptr;
}

// Strips <...> tag sequences and decodes the five standard entities.
inline std::string strip_markup(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
        char c = raw[i];
        if (c == '<') {
            std::size_t close = raw.find('>', i + 1);
            if (close == std::string_view::npos) break;  // unterminated tag: drop the rest
            i = close + 1;
            continue;
        }
        if (c == '&') {
            std::size_t semi = raw.find(';', i + 1);
            if (semi != std::string_view::npos && semi - i <= 6) {
                if (const char* rep = entity_name(raw.substr(i + 1, semi - i - 1))) {
                    out += rep;
                    i = semi + 1;
                    continue;
                }
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

inline std::optional<std::int32_t> parse_timestamp_field(const nlohmann::json& v) {
    if (v.is_number_integer()) return static_cast<std::int32_t>(v.get<std::int64_t>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        std::string digits;
        for (char c : s)
            if (c >= '0' && c <= '9') digits.push_back(c);
        if (digits.size() == 8) return std::stoi(digits);
    }
    return std::nullopt;
}

}  // namespace detail

// Format analysis: produces a tag-free Document from raw input. For
// jsonl_record the raw string is one JSON object with fields id, type,
// date, headline, body.
inline Document analyze_format(std::string_view raw, CorpusFormat format,
                               std::string_view sourcePath = {}) {
    Document doc;
    doc.sourcePath = std::string(sourcePath);

    switch (format) {
        case CorpusFormat::plain: {
            auto clean = text::sanitize_utf8(raw);
            doc.body = std::move(clean.text);
            doc.encodingReplacements = clean.replacements;
            break;
        }
        case CorpusFormat::markup: {
            auto clean = text::sanitize_utf8(raw);
            doc.body = detail::strip_markup(clean.text);
            doc.encodingReplacements = clean.replacements;
            break;
        }
        case CorpusFormat::jsonl_record: {
            auto clean = text::sanitize_utf8(raw);
            doc.encodingReplacements = clean.replacements;
            nlohmann::json j = nlohmann::json::parse(clean.text, nullptr, false);
            if (j.is_discarded() || !j.is_object())
                throw DataError("ingest error: malformed jsonl record: " +
                                std::string(raw.substr(0, 120)));
            if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
                throw DataError("ingest error: jsonl record missing id: " +
                                std::string(raw.substr(0, 120)));
            doc.id = j["id"].get<std::string>();
            if (j.contains("type") && j["type"].is_string()) doc.docType = j["type"];
            if (j.contains("date")) doc.timestamp = detail::parse_timestamp_field(j["date"]);
            if (j.contains("headline") && j["headline"].is_string())
                doc.headline = j["headline"].get<std::string>();
            if (j.contains("body") && j["body"].is_string())
                doc.body = detail::strip_markup(j["body"].get<std::string>());
            break;
        }
    }
    return doc;
}

// Segments a format-analyzed body into tokens: maximal runs of word
// characters become word/number tokens, every other non-whitespace
// codepoint is a single punctuation token. Spans tile the non-whitespace
// bytes of the body exactly.
inline std::vector<Token> tokenize(std::string_view body) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < body.size()) {
        text::DecodedChar d = text::decode_utf8(body, i);
        if (text::is_space(d.cp)) {
            i += d.len;
            continue;
        }
        if (text::is_word_char(d.cp)) {
            std::size_t start = i;
            bool allDigits = true;
            while (i < body.size()) {
                text::DecodedChar w = text::decode_utf8(body, i);
                if (!text::is_word_char(w.cp)) break;
                allDigits = allDigits && text::is_ascii_digit(w.cp);
                i += w.len;
            }
            tokens.push_back(Token{
                body.substr(start, i - start),
                Span{static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(i)},
                allDigits ? TokenKind::number : TokenKind::word});
        } else {
            tokens.push_back(Token{
                body.substr(i, d.len),
                Span{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + d.len)},
                TokenKind::punctuation});
            i += d.len;
        }
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// Corpus loaders
// ---------------------------------------------------------------------------

// JSONL corpus: one document per line.
inline std::vector<Document> load_jsonl_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path.string());
    std::vector<Document> docs;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        try {
            docs.push_back(analyze_format(line, CorpusFormat::jsonl_record, path.string()));
        } catch (const DataError& e) {
            throw DataError(path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
        }
    }
    return docs;
}

// Directory of .txt files; document id is the path relative to the root.
inline std::vector<Document> load_txt_dir_corpus(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        throw DataError("corpus path is not a directory: " + root.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        Document doc = analyze_format(buf.str(), CorpusFormat::plain, f.string());
        doc.id = std::filesystem::relative(f, root).generic_string();
        docs.push_back(std::move(doc));
    }
    return docs;
}

namespace detail {

inline std::string extract_attr(std::string_view tag, std::string_view name) {
    std::size_t pos = tag.find(name);
    while (pos != std::string_view::npos) {
        std::size_t eq = pos + name.size();
        while (eq < tag.size() && (tag[eq] == ' ' || tag[eq] == '=')) ++eq;
        if (eq < tag.size() && (tag[eq] == '"' || tag[eq] == '\'')) {
            char quote = tag[eq];
            std::size_t close = tag.find(quote, eq + 1);
            if (close != std::string_view::npos)
                return std::string(tag.substr(eq + 1, close - eq - 1));
        }
        pos = tag.find(name, pos + 1);
    }
    return {};
}

inline std::string_view find_block(std::string_view s, std::string_view open,
                                   std::string_view close) {
    std::size_t b = s.find(open);
    if (b == std::string_view::npos) return {};
    b += open.size();
    std::size_t e = s.find(close, b);
    if (e == std::string_view::npos) return {};
    return s.substr(b, e - b);
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && static_cast<unsigned char>(s[b]) <= ' ') ++b;
    while (e > b && static_cast<unsigned char>(s[e - 1]) <= ' ') --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

// Markup corpus: <DOC id="..." type="..."> blocks with <HEADLINE> and
// <TEXT> sections, Gigaword style. One file may hold many documents.
inline std::vector<Document> load_markup_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    auto clean = text::sanitize_utf8(buf.str());
    std::string_view all = clean.text;

    std::vector<Document> docs;
    std::size_t pos = 0;
    std::size_t docIndex = 0;
    while (true) {
        std::size_t open = all.find("<DOC", pos);
        if (open == std::string_view::npos) break;
        std::size_t openEnd = all.find('>', open);
        if (openEnd == std::string_view::npos) break;
        std::size_t closeTag = all.find("</DOC>", openEnd);
        if (closeTag == std::string_view::npos) break;
        std::string_view tag = all.substr(open, openEnd - open + 1);
        std::string_view inner = all.substr(openEnd + 1, closeTag - openEnd - 1);
        ++docIndex;

        Document doc;
        doc.sourcePath = path.string();
        doc.id = detail::extract_attr(tag, "id");
        if (doc.id.empty())
            throw DataError("ingest error: <DOC> block " + std::to_string(docIndex) +
                            " in " + path.string() + " has no id attribute");
        doc.docType = detail::extract_attr(tag, "type");
        if (auto h = detail::find_block(inner, "<HEADLINE>", "</HEADLINE>"); !h.empty())
            doc.headline = detail::trim(detail::strip_markup(h));
        std::string_view body = detail::find_block(inner, "<TEXT>", "</TEXT>");
        doc.body = detail::trim(detail::strip_markup(body.empty() ? inner : body));
        doc.encodingReplacements = 0;
        docs.push_back(std::move(doc));
        pos = closeTag + 6;
    }
    // Replacement count is per-file; attribute it to the first document.
    if (!docs.empty()) docs.front().encodingReplacements = clean.replacements;
    return docs;
}

inline std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    switch (format) {
        case CorpusFormat::jsonl_record: return load_jsonl_corpus(path);
        case CorpusFormat::plain: return load_txt_dir_corpus(path);
        case CorpusFormat::markup: return load_markup_corpus(path);
    }
    throw ConfigError("unknown corpus format");
}

inline CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "plain" || name == "txt") return CorpusFormat::plain;
    if (name == "markup" || name == "sgml") return CorpusFormat::markup;
    if (name == "jsonl") return CorpusFormat::jsonl_record;
    throw ConfigError("unknown corpus format: " + std::string(name));
}

}  // namespace cdcr
