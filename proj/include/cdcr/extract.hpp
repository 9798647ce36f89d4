// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdcr/corpus.hpp"
#include "cdcr/error.hpp"
#include "cdcr/simfns.hpp"
#include "cdcr/text.hpp"

namespace cdcr {

enum class EntityMajor { person, organization, location, date, time, money, percent };

inline std::string_view to_string(EntityMajor m) {
    switch (m) {
        case EntityMajor::person: return "person";
        case EntityMajor::organization: return "organization";
        case EntityMajor::location: return "location";
        case EntityMajor::date: return "date";
        case EntityMajor::time: return "time";
        case EntityMajor::money: return "money";
        case EntityMajor::percent: return "percent";
    }
    return "person";
}

inline EntityMajor entity_major_from_string(std::string_view s) {
    if (s == "person") return EntityMajor::person;
    if (s == "organization") return EntityMajor::organization;
    if (s == "location") return EntityMajor::location;
    if (s == "date") return EntityMajor::date;
    if (s == "time") return EntityMajor::time;
    if (s == "money") return EntityMajor::money;
    if (s == "percent") return EntityMajor::percent;
    throw DataError("unknown entity type: " + std::string(s));
}

struct EntityType {
    EntityMajor major = EntityMajor::person;
    std::string subtype;  // free-form, empty allowed

    bool operator==(const EntityType&) const = default;
};

enum class MentionSource { gazetteer, grammar };

// Document metadata carried on each mention so later stages can featurize
// without the source document in hand.
struct DocMeta {
    std::string docType;
    std::optional<std::int32_t> timestamp;
    std::optional<std::string> headline;
};

struct Mention {
    std::string id;  // docId + ":" + begin + "-" + end
    std::string docId;
    std::string surface;  // exact body substring at span
    EntityType type;
    Span span;
    std::string context;  // up to W tokens each side, space-joined
    DocMeta docMeta;
    MentionSource source = MentionSource::grammar;
};

inline std::string mention_id(std::string_view docId, Span span) {
    std::string id(docId);
    id.push_back(':');
    id += std::to_string(span.begin);
    id.push_back('-');
    id += std::to_string(span.end);
    return id;
}

// ---------------------------------------------------------------------------
// Gazetteer
// ---------------------------------------------------------------------------

class Gazetteer {
public:
    explicit Gazetteer(bool caseSensitive = false) : caseSensitive_(caseSensitive) {}

    void add(std::string_view surface, EntityType type) {
        std::string key = normalize(surface);
        if (key.empty()) throw DataError("gazetteer entry has empty surface");
        std::size_t tokens = 1 + static_cast<std::size_t>(
            std::count(key.begin(), key.end(), ' '));
        maxTokens_ = std::max(maxTokens_, tokens);
        entries_[std::move(key)] = std::move(type);
    }

    std::optional<EntityType> lookup(std::string_view surface) const {
        auto it = entries_.find(normalize(surface));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    const EntityType* lookup_normalized(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return entries_.size(); }
    bool case_sensitive() const { return caseSensitive_; }
    std::size_t max_entry_tokens() const { return maxTokens_; }

    // Entries normalize through the corpus tokenizer so that surfaces with
    // internal punctuation ("B. Obama") line up with the token-stream scan.
    std::string normalize(std::string_view surface) const {
        std::string key;
        key.reserve(surface.size());
        for (const Token& t : tokenize(surface)) {
            if (!key.empty()) key.push_back(' ');
            for (char c : t.text) key.push_back(caseSensitive_ ? c : text::ascii_lower(c));
        }
        return key;
    }

    // UTF-8 TSV: surface TAB major-type TAB subtype (subtype optional),
    // '#' lines are comments.
    static Gazetteer load(const std::filesystem::path& path, bool caseSensitive = false) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open gazetteer: " + path.string());
        Gazetteer gaz(caseSensitive);
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::size_t t1 = line.find('\t');
            if (t1 == std::string::npos)
                throw DataError(path.string() + ":" + std::to_string(lineNo) +
                                ": expected surface TAB type [TAB subtype]");
            std::size_t t2 = line.find('\t', t1 + 1);
            EntityType type;
            std::string majorField = t2 == std::string::npos
                                         ? line.substr(t1 + 1)
                                         : line.substr(t1 + 1, t2 - t1 - 1);
            try {
                type.major = entity_major_from_string(majorField);
            } catch (const DataError& e) {
                throw DataError(path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
            }
            if (t2 != std::string::npos) type.subtype = line.substr(t2 + 1);
            gaz.add(line.substr(0, t1), std::move(type));
        }
        return gaz;
    }

private:
    std::unordered_map<std::string, EntityType> entries_;
    bool caseSensitive_;
    std::size_t maxTokens_ = 1;
};

// ---------------------------------------------------------------------------
// Extraction config
// ---------------------------------------------------------------------------

struct ExtractConfig {
    std::size_t contextWindow = 10;  // tokens kept on each side of a mention
    EntityMajor defaultCapitalizedType = EntityMajor::person;
    bool enableGrammar = true;
    bool enableCapitalization = true;
    std::size_t maxGazetteerTokens = 5;
};

namespace detail {

// Surface text between two tokens of the same tokenize() run, including
// whatever whitespace lies between them.
inline std::string_view token_range_text(const std::vector<Token>& tokens, std::size_t first,
                                         std::size_t last) {
    const char* begin = tokens[first].text.data();
    const char* end = tokens[last].text.data() + tokens[last].text.size();
    return {begin, static_cast<std::size_t>(end - begin)};
}

inline Span token_range_span(const std::vector<Token>& tokens, std::size_t first,
                             std::size_t last) {
    return {tokens[first].span.begin, tokens[last].span.end};
}

inline bool adjacent(const Token& a, const Token& b) { return a.span.end == b.span.begin; }

inline bool is_number_of_len(const Token& t, std::size_t minLen, std::size_t maxLen) {
    return t.kind == TokenKind::number && t.text.size() >= minLen && t.text.size() <= maxLen;
}

inline int to_int(std::string_view digits) {
    int v = 0;
    for (char c : digits) v = v * 10 + (c - '0');
    return v;
}

inline bool is_punct(const Token& t, std::string_view p) {
    return t.kind == TokenKind::punctuation && t.text == p;
}

inline bool is_currency_symbol(const Token& t) {
    if (t.kind != TokenKind::punctuation) return false;
    if (t.text == "$") return true;
    char32_t cp = text::decode_utf8(t.text, 0).cp;
    return cp == 0xA2 || cp == 0xA3 || cp == 0xA4 || cp == 0xA5 || cp == 0x20AC;
}

inline bool capitalized_word(const Token& t) {
    return t.kind == TokenKind::word && text::is_upper(text::decode_utf8(t.text, 0).cp);
}

inline bool title_prefix(std::string_view word) {
    static constexpr std::array<std::string_view, 5> titles = {"mr", "mrs", "dr", "president",
                                                               "senator"};
    const std::string lower = text::to_lower_ascii(word);
    return std::find(titles.begin(), titles.end(), lower) != titles.end();
}

inline bool org_designator(std::string_view word) {
    static constexpr std::array<std::string_view, 3> designators = {"inc", "corp", "ltd"};
    const std::string lower = text::to_lower_ascii(word);
    return std::find(designators.begin(), designators.end(), lower) != designators.end();
}

// Matches one value rule (date/time/money/percent) starting at token i.
// Returns the index one past the match, or i if nothing matched.
inline std::size_t match_value_rule(const std::vector<Token>& tokens, std::size_t i,
                                    EntityMajor& typeOut) {
    const std::size_t n = tokens.size();

    // MonthName day[, year]
    if (tokens[i].kind == TokenKind::word && i + 1 < n &&
        is_number_of_len(tokens[i + 1], 1, 2)) {
        const int month = sim::detail::month_from_name(tokens[i].text);
        const int day = to_int(tokens[i + 1].text);
        if (month != 0 && day >= 1 && day <= 31) {
            std::size_t last = i + 1;
            if (last + 2 < n && is_punct(tokens[last + 1], ",") &&
                is_number_of_len(tokens[last + 2], 4, 4)) {
                const int year = to_int(tokens[last + 2].text);
                if (year >= 1000 && year <= 2999 &&
                    sim::detail::valid_date(year, month, day))
                    last += 2;
            } else if (last + 1 < n && is_number_of_len(tokens[last + 1], 4, 4)) {
                const int year = to_int(tokens[last + 1].text);
                if (year >= 1000 && year <= 2999 &&
                    sim::detail::valid_date(year, month, day))
                    last += 1;
            }
            typeOut = EntityMajor::date;
            return last + 1;
        }
    }

    // dd/mm/yyyy (contiguous) and yyyy-mm-dd (contiguous)
    if (i + 4 < n && tokens[i].kind == TokenKind::number) {
        const Token& a = tokens[i];
        const Token& s1 = tokens[i + 1];
        const Token& b = tokens[i + 2];
        const Token& s2 = tokens[i + 3];
        const Token& c = tokens[i + 4];
        const bool contiguous = adjacent(a, s1) && adjacent(s1, b) && adjacent(b, s2) &&
                                adjacent(s2, c);
        if (contiguous && b.kind == TokenKind::number && c.kind == TokenKind::number) {
            if (is_punct(s1, "/") && is_punct(s2, "/") && a.text.size() <= 2 &&
                b.text.size() <= 2 && c.text.size() == 4 &&
                sim::detail::valid_date(to_int(c.text), to_int(b.text), to_int(a.text))) {
                typeOut = EntityMajor::date;
                return i + 5;
            }
            if (is_punct(s1, "-") && is_punct(s2, "-") && a.text.size() == 4 &&
                b.text.size() <= 2 && c.text.size() <= 2 &&
                sim::detail::valid_date(to_int(a.text), to_int(b.text), to_int(c.text))) {
                typeOut = EntityMajor::date;
                return i + 5;
            }
            if (is_punct(s1, ":") && is_punct(s2, ":") && a.text.size() <= 2 &&
                b.text.size() == 2 && c.text.size() == 2 && to_int(a.text) <= 23 &&
                to_int(b.text) <= 59 && to_int(c.text) <= 59) {
                typeOut = EntityMajor::time;
                return i + 5;
            }
        }
    }

    // hh:mm
    if (i + 2 < n && is_number_of_len(tokens[i], 1, 2) && is_punct(tokens[i + 1], ":") &&
        is_number_of_len(tokens[i + 2], 2, 2) && adjacent(tokens[i], tokens[i + 1]) &&
        adjacent(tokens[i + 1], tokens[i + 2]) && to_int(tokens[i].text) <= 23 &&
        to_int(tokens[i + 2].text) <= 59) {
        typeOut = EntityMajor::time;
        return i + 3;
    }

    // currency symbol + number [.,] number ...
    if (is_currency_symbol(tokens[i]) && i + 1 < n &&
        tokens[i + 1].kind == TokenKind::number && adjacent(tokens[i], tokens[i + 1])) {
        std::size_t last = i + 1;
        while (last + 2 < n &&
               (is_punct(tokens[last + 1], ".") || is_punct(tokens[last + 1], ",")) &&
               tokens[last + 2].kind == TokenKind::number &&
               adjacent(tokens[last], tokens[last + 1]) &&
               adjacent(tokens[last + 1], tokens[last + 2]))
            last += 2;
        typeOut = EntityMajor::money;
        return last + 1;
    }

    // number ['.' number] '%'
    if (tokens[i].kind == TokenKind::number) {
        std::size_t last = i;
        if (last + 2 < n && is_punct(tokens[last + 1], ".") &&
            tokens[last + 2].kind == TokenKind::number &&
            adjacent(tokens[last], tokens[last + 1]) &&
            adjacent(tokens[last + 1], tokens[last + 2]))
            last += 2;
        if (last + 1 < n && is_punct(tokens[last + 1], "%") &&
            adjacent(tokens[last], tokens[last + 1])) {
            typeOut = EntityMajor::percent;
            return last + 2;
        }
    }

    return i;
}

inline Mention make_bare_mention(const std::vector<Token>& tokens, std::size_t first,
                                 std::size_t last, EntityType type, MentionSource source) {
    Mention m;
    m.surface = std::string(token_range_text(tokens, first, last));
    m.span = token_range_span(tokens, first, last);
    m.type = std::move(type);
    m.source = source;
    return m;
}

}  // namespace detail

// Longest-match-wins left-to-right scan of token n-grams (n bounded by the
// config cap) against the gazetteer. Matches never overlap.
inline std::vector<Mention> gazetteer_lookup(const std::vector<Token>& tokens,
                                             const Gazetteer& gaz,
                                             std::size_t maxTokens = 5) {
    std::vector<Mention> out;
    const std::size_t cap = std::min(maxTokens, gaz.max_entry_tokens());
    std::size_t i = 0;
    std::string key;
    while (i < tokens.size()) {
        std::size_t matchedLen = 0;
        const EntityType* matchedType = nullptr;
        const std::size_t maxN = std::min(cap, tokens.size() - i);
        for (std::size_t n = maxN; n >= 1; --n) {
            key.clear();
            for (std::size_t k = 0; k < n; ++k) {
                if (k) key.push_back(' ');
                for (char c : tokens[i + k].text)
                    key.push_back(gaz.case_sensitive() ? c : text::ascii_lower(c));
            }
            if (const EntityType* t = gaz.lookup_normalized(key)) {
                matchedLen = n;
                matchedType = t;
                break;
            }
        }
        if (matchedType) {
            out.push_back(detail::make_bare_mention(tokens, i, i + matchedLen - 1,
                                                    *matchedType, MentionSource::gazetteer));
            i += matchedLen;
        } else {
            ++i;
        }
    }
    return out;
}

// Built-in grammar: date/time/money/percent value rules plus the
// capitalization heuristic for untyped name candidates.
inline std::vector<Mention> apply_grammar(const std::vector<Token>& tokens,
                                          const ExtractConfig& config = {}) {
    std::vector<Mention> out;
    std::vector<bool> consumed(tokens.size(), false);

    for (std::size_t i = 0; i < tokens.size();) {
        EntityMajor type;
        const std::size_t next = detail::match_value_rule(tokens, i, type);
        if (next > i) {
            out.push_back(detail::make_bare_mention(tokens, i, next - 1, EntityType{type, ""},
                                                    MentionSource::grammar));
            for (std::size_t k = i; k < next; ++k) consumed[k] = true;
            i = next;
        } else {
            ++i;
        }
    }

    if (!config.enableCapitalization) return out;

    // Sentence-initial = first token of the body or first token after . ! ?
    std::vector<bool> sentenceInitial(tokens.size(), false);
    bool boundary = true;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind == TokenKind::punctuation) {
            if (tokens[i].text == "." || tokens[i].text == "!" || tokens[i].text == "?")
                boundary = true;
            continue;
        }
        sentenceInitial[i] = boundary;
        boundary = false;
    }

    std::size_t i = 0;
    while (i < tokens.size()) {
        if (consumed[i] || !detail::capitalized_word(tokens[i])) {
            ++i;
            continue;
        }
        std::size_t first = i;
        std::size_t last = i;
        while (last + 1 < tokens.size() && !consumed[last + 1] &&
               detail::capitalized_word(tokens[last + 1]))
            ++last;
        i = last + 1;

        // False-positive mitigation: a sentence-opening capital carries no
        // name signal, so the run starts after it.
        if (sentenceInitial[first]) {
            if (first == last) continue;
            ++first;
        }

        EntityType type{config.defaultCapitalizedType, ""};
        if (detail::title_prefix(tokens[first].text)) {
            if (first == last) continue;  // a bare title is not a mention
            type.major = EntityMajor::person;
        } else if (detail::org_designator(tokens[last].text)) {
            if (first == last) continue;  // a bare designator is not a mention
            type.major = EntityMajor::organization;
        }
        out.push_back(detail::make_bare_mention(tokens, first, last, std::move(type),
                                                MentionSource::grammar));
    }

    std::sort(out.begin(), out.end(),
              [](const Mention& a, const Mention& b) { return a.span.begin < b.span.begin; });
    return out;
}

// Full per-document extraction: gazetteer plus grammar, overlaps resolved
// (gazetteer wins, then longer span, then leftmost), ids and context
// windows attached.
inline std::vector<Mention> extract_mentions(const Document& doc, const Gazetteer& gaz,
                                             const ExtractConfig& config = {}) {
    const std::vector<Token> tokens = tokenize(doc.body);

    std::vector<Mention> candidates = gazetteer_lookup(tokens, gaz, config.maxGazetteerTokens);
    if (config.enableGrammar) {
        std::vector<Mention> grammar = apply_grammar(tokens, config);
        candidates.insert(candidates.end(), std::make_move_iterator(grammar.begin()),
                          std::make_move_iterator(grammar.end()));
    }

    std::sort(candidates.begin(), candidates.end(), [](const Mention& a, const Mention& b) {
        const bool ga = a.source == MentionSource::gazetteer;
        const bool gb = b.source == MentionSource::gazetteer;
        if (ga != gb) return ga;
        if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
        if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
        return a.span.end < b.span.end;
    });

    std::vector<Mention> accepted;
    for (Mention& c : candidates) {
        bool overlaps = false;
        for (const Mention& a : accepted) {
            if (c.span.overlaps(a.span)) {
                overlaps = true;
                break;
            }
        }
        if (!overlaps) accepted.push_back(std::move(c));
    }

    std::sort(accepted.begin(), accepted.end(),
              [](const Mention& a, const Mention& b) { return a.span.begin < b.span.begin; });

    for (Mention& m : accepted) {
        m.docId = doc.id;
        m.id = mention_id(doc.id, m.span);
        m.docMeta = DocMeta{doc.docType, doc.timestamp, doc.headline};

        // Context window: up to W tokens on each side, mention tokens excluded.
        std::size_t firstTok = 0;
        while (firstTok < tokens.size() && tokens[firstTok].span.end <= m.span.begin) ++firstTok;
        std::size_t pastTok = firstTok;
        while (pastTok < tokens.size() && tokens[pastTok].span.begin < m.span.end) ++pastTok;

        const std::size_t left = firstTok > config.contextWindow
                                     ? firstTok - config.contextWindow
                                     : 0;
        const std::size_t right = std::min(tokens.size(), pastTok + config.contextWindow);
        std::string ctx;
        for (std::size_t k = left; k < firstTok; ++k) {
            if (!ctx.empty()) ctx.push_back(' ');
            ctx += tokens[k].text;
        }
        for (std::size_t k = pastTok; k < right; ++k) {
            if (!ctx.empty()) ctx.push_back(' ');
            ctx += tokens[k].text;
        }
        m.context = std::move(ctx);
    }
    return accepted;
}

}  // namespace cdcr
