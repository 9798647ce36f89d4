// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdcr/error.hpp"
#include "cdcr/text.hpp"

namespace cdcr::sim {

// ---------------------------------------------------------------------------
// Character-based functions
// ---------------------------------------------------------------------------

// Levenshtein distance over codepoints, unit cost for insert/delete/substitute.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    if (a == b) return 0;
    const auto ca = text::to_codepoints(a);
    const auto cb = text::to_codepoints(b);
    if (ca.empty()) return cb.size();
    if (cb.empty()) return ca.size();

    std::vector<std::size_t> prev(cb.size() + 1), cur(cb.size() + 1);
    for (std::size_t j = 0; j <= cb.size(); ++j) prev[j] = j;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        cur[0] = i + 1;
        for (std::size_t j = 0; j < cb.size(); ++j) {
            const std::size_t cost = (ca[i] == cb[j]) ? 0 : 1;
            cur[j + 1] = std::min({cur[j] + 1, prev[j + 1] + 1, prev[j] + cost});
        }
        prev.swap(cur);
    }
    return prev[cb.size()];
}

// Normalized edit similarity: 1 - d / max(len). Both empty -> 1.
inline double edit_similarity(std::string_view a, std::string_view b) {
    const auto ca = text::to_codepoints(a);
    const auto cb = text::to_codepoints(b);
    const std::size_t longest = std::max(ca.size(), cb.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

// Jaro similarity: common characters within the match window plus
// transpositions, (m/|a| + m/|b| + (m-t)/m) / 3.
inline double jaro(std::string_view a, std::string_view b) {
    const auto ca = text::to_codepoints(a);
    const auto cb = text::to_codepoints(b);
    if (ca.empty() && cb.empty()) return 1.0;
    if (ca.empty() || cb.empty()) return 0.0;

    const std::size_t window =
        std::max(ca.size(), cb.size()) / 2 == 0 ? 0 : std::max(ca.size(), cb.size()) / 2 - 1;
    std::vector<bool> aMatched(ca.size(), false), bMatched(cb.size(), false);

    std::size_t matches = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(cb.size(), i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!bMatched[j] && ca[i] == cb[j]) {
                aMatched[i] = bMatched[j] = true;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) return 0.0;

    std::size_t halfTranspositions = 0;
    for (std::size_t i = 0, j = 0; i < ca.size(); ++i) {
        if (!aMatched[i]) continue;
        while (!bMatched[j]) ++j;
        if (ca[i] != cb[j]) ++halfTranspositions;
        ++j;
    }
    const double m = static_cast<double>(matches);
    const double t = static_cast<double>(halfTranspositions) / 2.0;
    return (m / static_cast<double>(ca.size()) + m / static_cast<double>(cb.size()) +
            (m - t) / m) /
           3.0;
}

// Jaro-Winkler: boosts Jaro by the common prefix, capped at 4 characters.
inline double jaro_winkler(std::string_view a, std::string_view b,
                           double prefixScale = 0.1) {
    if (prefixScale < 0.0 || prefixScale > 0.25)
        throw ConfigError("jaro_winkler prefix scale must be in [0, 0.25]");
    const double j = jaro(a, b);
    std::size_t prefix = 0;
    const std::size_t limit = std::min({a.size(), b.size(), std::size_t{4}});
    while (prefix < limit && a[prefix] == b[prefix]) ++prefix;
    return j + static_cast<double>(prefix) * prefixScale * (1.0 - j);
}

// ---------------------------------------------------------------------------
// Q-grams
// ---------------------------------------------------------------------------

enum class QGramDenominator { minimum, average, maximum };

struct QGramConfig {
    std::size_t q = 2;
    QGramDenominator denominator = QGramDenominator::maximum;
};

// Contiguous q-character substrings (codepoint-based). Strings shorter than
// q have an empty q-gram multiset.
inline std::vector<std::string> qgrams(std::string_view s, std::size_t q) {
    if (q < 1) throw ConfigError("q-gram size must be >= 1");
    std::vector<std::string> grams;
    // Codepoint start offsets, so multibyte input slices cleanly.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < s.size();) {
        starts.push_back(i);
        i += text::decode_utf8(s, i).len;
    }
    starts.push_back(s.size());
    if (starts.size() <= q) return grams;
    grams.reserve(starts.size() - 1 - q + 1);
    for (std::size_t i = 0; i + q < starts.size(); ++i)
        grams.emplace_back(s.substr(starts[i], starts[i + q] - starts[i]));
    return grams;
}

// Multiset q-gram overlap divided by the configured denominator.
inline double qgram_similarity(std::string_view a, std::string_view b,
                               const QGramConfig& cfg = {}) {
    auto ga = qgrams(a, cfg.q);
    auto gb = qgrams(b, cfg.q);
    if (ga.empty() && gb.empty()) return 1.0;
    if (ga.empty() || gb.empty()) return 0.0;

    std::sort(ga.begin(), ga.end());
    std::sort(gb.begin(), gb.end());
    std::size_t common = 0;
    for (std::size_t i = 0, j = 0; i < ga.size() && j < gb.size();) {
        if (ga[i] == gb[j]) {
            ++common, ++i, ++j;
        } else if (ga[i] < gb[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    double denom = 0;
    switch (cfg.denominator) {
        case QGramDenominator::minimum:
            denom = static_cast<double>(std::min(ga.size(), gb.size()));
            break;
        case QGramDenominator::average:
            denom = (static_cast<double>(ga.size()) + static_cast<double>(gb.size())) / 2.0;
            break;
        case QGramDenominator::maximum:
            denom = static_cast<double>(std::max(ga.size(), gb.size()));
            break;
    }
    return static_cast<double>(common) / denom;
}

// ---------------------------------------------------------------------------
// Token-based functions
// ---------------------------------------------------------------------------

namespace detail {

// Deduplicated whitespace tokens; tiny inputs, so linear dedup beats a set.
inline void unique_tokens(std::string_view s, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && static_cast<unsigned char>(s[i]) <= ' ') ++i;
        std::size_t start = i;
        while (i < s.size() && static_cast<unsigned char>(s[i]) > ' ') ++i;
        if (i > start) {
            std::string_view tok = s.substr(start, i - start);
            if (std::find(out.begin(), out.end(), tok) == out.end()) out.push_back(tok);
        }
    }
}

}  // namespace detail

// Jaccard on whitespace token sets: |S n T| / |S u T|. Both empty -> 1.
inline double jaccard(std::string_view a, std::string_view b) {
    std::vector<std::string_view> sa, sb;
    detail::unique_tokens(a, sa);
    detail::unique_tokens(b, sb);
    if (sa.empty() && sb.empty()) return 1.0;
    if (sa.empty() || sb.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& t : sa)
        if (std::find(sb.begin(), sb.end(), t) != sb.end()) ++common;
    const std::size_t unionSize = sa.size() + sb.size() - common;
    return static_cast<double>(common) / static_cast<double>(unionSize);
}

// Document-frequency statistics for idf weighting. Built once over the run's
// corpus, immutable afterwards (finalize() precomputes the idf table).
class CorpusStats {
public:
    CorpusStats() = default;

    // Counts each distinct token of `tokens` once toward its document frequency.
    void add_document(const std::vector<std::string_view>& tokens) {
        ++docCount_;
        seen_.clear();
        for (auto t : tokens) {
            if (std::find(seen_.begin(), seen_.end(), t) != seen_.end()) continue;
            seen_.push_back(t);
            ++docFreq_[std::string(t)];
        }
    }

    void add_document_text(std::string_view body) {
        add_document(text::split_ws(body));
    }

    void merge(const CorpusStats& other) {
        docCount_ += other.docCount_;
        for (const auto& [tok, df] : other.docFreq_) docFreq_[tok] += df;
        idf_.clear();
    }

    // Freezes the stats and builds the hashed idf lookup used by
    // tfidf_cosine. idf = ln(N / df); unseen tokens get df = 1.
    void finalize() {
        if (docCount_ == 0) return;
        idf_.clear();
        idf_.reserve(docFreq_.size() * 2);
        for (const auto& [tok, df] : docFreq_)
            idf_.emplace(text::fnv1a64(tok), idf_value(df));
        defaultIdf_ = idf_value(1);
    }

    std::uint64_t doc_count() const { return docCount_; }
    const std::map<std::string, std::uint64_t>& doc_freq() const { return docFreq_; }

    std::uint64_t df(std::string_view token) const {
        auto it = docFreq_.find(std::string(token));
        return it == docFreq_.end() ? 1 : it->second;
    }

    double idf_by_hash(std::uint64_t tokenHash) const {
        auto it = idf_.find(tokenHash);
        return it == idf_.end() ? defaultIdf_ : it->second;
    }

    bool finalized() const { return !idf_.empty() || docFreq_.empty(); }

private:
    double idf_value(std::uint64_t df) const {
        return std::log(static_cast<double>(docCount_) / static_cast<double>(df));
    }

    std::uint64_t docCount_ = 0;
    std::map<std::string, std::uint64_t> docFreq_;
    std::unordered_map<std::uint64_t, double> idf_;
    double defaultIdf_ = 0.0;
    std::vector<std::string_view> seen_;
};

namespace detail {

struct WeightedTerm {
    std::uint64_t hash;
    double weight;
};

// tf-idf terms of one string, sorted by token hash; returns the vector norm.
inline double weighted_terms(std::string_view s, const CorpusStats& stats,
                             std::vector<WeightedTerm>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && static_cast<unsigned char>(s[i]) <= ' ') ++i;
        std::size_t start = i;
        while (i < s.size() && static_cast<unsigned char>(s[i]) > ' ') ++i;
        if (i > start)
            out.push_back({text::fnv1a64(s.substr(start, i - start)), 1.0});
    }
    if (out.empty()) return 0.0;
    std::sort(out.begin(), out.end(),
              [](const WeightedTerm& x, const WeightedTerm& y) { return x.hash < y.hash; });
    // Collapse duplicates into term frequencies.
    std::size_t w = 0;
    for (std::size_t r = 1; r < out.size(); ++r) {
        if (out[r].hash == out[w].hash)
            out[w].weight += 1.0;
        else
            out[++w] = out[r];
    }
    out.resize(w + 1);
    double norm2 = 0.0;
    for (auto& term : out) {
        term.weight *= stats.idf_by_hash(term.hash);
        norm2 += term.weight * term.weight;
    }
    return std::sqrt(norm2);
}

}  // namespace detail

// Cosine of tf-idf vectors; tf from the strings themselves, idf from stats.
// Zero vector on either side -> 0.
inline double tfidf_cosine(std::string_view a, std::string_view b, const CorpusStats& stats) {
    if (stats.doc_count() == 0)
        throw ConfigError("tfidf_cosine requires corpus statistics with at least one document");
    thread_local std::vector<detail::WeightedTerm> ta, tb;
    const double na = detail::weighted_terms(a, stats, ta);
    const double nb = detail::weighted_terms(b, stats, tb);
    if (na == 0.0 || nb == 0.0) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0, j = 0; i < ta.size() && j < tb.size();) {
        if (ta[i].hash == tb[j].hash) {
            dot += ta[i].weight * tb[j].weight;
            ++i, ++j;
        } else if (ta[i].hash < tb[j].hash) {
            ++i;
        } else {
            ++j;
        }
    }
    const double cosine = dot / (na * nb);
    return std::clamp(cosine, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Phonetic
// ---------------------------------------------------------------------------

namespace detail {

inline char soundex_code(char c) {
    switch (c) {
        case 'b': case 'f': case 'p': case 'v': return '1';
        case 'c': case 'g': case 'j': case 'k': case 'q': case 's': case 'x': case 'z':
            return '2';
        case 'd': case 't': return '3';
        case 'l': return '4';
        case 'm': case 'n': return '5';
        case 'r': return '6';
        default: return 0;  // vowels, h, w, y and anything non-alphabetic
    }
}

}  // namespace detail

// Four-step table soundex: keep the first letter, drop vowels and h/w/y
// elsewhere, map the remaining consonants to digits, collapse consecutive
// identical digits, pad or truncate to three digits. This is the plain
// table variant, not ANSI soundex (no h/w separator rule).
inline std::string soundex(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && !text::is_ascii_letter(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) throw DomainError("soundex requires at least one ASCII letter");

    std::string out(1, text::ascii_lower(s[i]));
    std::string digits;
    char prev = 0;
    for (++i; i < s.size() && digits.size() < 3; ++i) {
        const char c = text::ascii_lower(s[i]);
        if (!text::is_ascii_letter(static_cast<unsigned char>(c))) {
            prev = 0;
            continue;
        }
        const char code = detail::soundex_code(c);
        if (code == 0) {  // dropped letter; it does not break a digit pair
            continue;
        }
        if (code != prev) digits.push_back(code);
        prev = code;
    }
    digits.resize(3, '0');
    return out + digits;
}

// Soundex equality as a pair score: 1 if the codes match, else 0.
inline double phonetic_equal(std::string_view a, std::string_view b) {
    return soundex(a) == soundex(b) ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------
// Numeric, date, categorical
// ---------------------------------------------------------------------------

// Substitution count between equal-length digit strings.
inline std::size_t hamming_distance(std::string_view a, std::string_view b) {
    if (a.size() != b.size())
        throw DomainError("hamming_distance requires equal-length inputs (" +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++diff;
    return diff;
}

// Similarity form of the relative distance: 1 - |x-y| / max(x,y).
inline double relative_distance_similarity(double x, double y) {
    if (x <= 0.0 || y <= 0.0)
        throw DomainError("relative distance requires positive operands");
    return 1.0 - std::abs(x - y) / std::max(x, y);
}

enum class DateFormat { ddmmyyyy, mmddyyyy, iso, month_name };

namespace detail {

inline bool valid_date(int y, int m, int d) {
    if (y < 1 || m < 1 || m > 12 || d < 1) return false;
    static constexpr std::array<int, 12> days = {31, 28, 31, 30, 31, 30,
                                                 31, 31, 30, 31, 30, 31};
    int dim = days[static_cast<std::size_t>(m - 1)];
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) dim = 29;
    return d <= dim;
}

inline int month_from_name(std::string_view name) {
    static constexpr std::array<std::string_view, 12> months = {
        "january", "february", "march", "april", "may", "june",
        "july", "august", "september", "october", "november", "december"};
    const std::string lower = text::to_lower_ascii(name);
    for (std::size_t m = 0; m < months.size(); ++m) {
        if (lower == months[m]) return static_cast<int>(m + 1);
        if (lower.size() == 3 && months[m].substr(0, 3) == lower) return static_cast<int>(m + 1);
    }
    return 0;
}

// Days since civil epoch 1970-01-01 (Howard Hinnant's algorithm).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace detail

// Converts a date string to the canonical yyyymmdd integer. Separator
// characters '-', '/', '.', ':' are removed before field extraction.
inline std::int32_t normalize_date(std::string_view s, DateFormat format) {
    const auto fail = [&] {
        throw DataError("cannot parse date '" + std::string(s) + "'");
    };

    int y = 0, m = 0, d = 0;
    if (format == DateFormat::month_name) {
        // "August 4, 1961" (commas optional, month abbreviations accepted)
        std::vector<std::string_view> parts;
        std::string cleaned(s);
        for (char& c : cleaned)
            if (c == ',') c = ' ';
        for (auto p : text::split_ws(cleaned)) parts.push_back(p);
        if (parts.size() != 3) fail();
        m = detail::month_from_name(parts[0]);
        if (m == 0) fail();
        for (char c : parts[1]) {
            if (!text::is_ascii_digit(static_cast<unsigned char>(c))) fail();
            d = d * 10 + (c - '0');
        }
        for (char c : parts[2]) {
            if (!text::is_ascii_digit(static_cast<unsigned char>(c))) fail();
            y = y * 10 + (c - '0');
        }
    } else {
        std::string digits;
        for (char c : s) {
            if (c == '-' || c == '/' || c == '.' || c == ':' || c == ' ') continue;
            if (!text::is_ascii_digit(static_cast<unsigned char>(c))) fail();
            digits.push_back(c);
        }
        if (digits.size() != 8) fail();
        auto field = [&](std::size_t pos, std::size_t len) {
            int v = 0;
            for (std::size_t k = 0; k < len; ++k) v = v * 10 + (digits[pos + k] - '0');
            return v;
        };
        switch (format) {
            case DateFormat::ddmmyyyy: d = field(0, 2); m = field(2, 2); y = field(4, 4); break;
            case DateFormat::mmddyyyy: m = field(0, 2); d = field(2, 2); y = field(4, 4); break;
            case DateFormat::iso:      y = field(0, 4); m = field(4, 2); d = field(6, 2); break;
            default: fail();
        }
    }
    if (!detail::valid_date(y, m, d)) fail();
    return y * 10000 + m * 100 + d;
}

// 1 / (1 + |days apart|) over canonical yyyymmdd dates.
inline double date_similarity(std::int32_t d1, std::int32_t d2) {
    const auto toDays = [](std::int32_t v) {
        return detail::days_from_civil(v / 10000, (v / 100) % 100, v % 100);
    };
    const std::int64_t gap = std::llabs(toDays(d1) - toDays(d2));
    return 1.0 / (1.0 + static_cast<double>(gap));
}

// User-defined similarity scores between categorical values. Symmetric,
// diagonal fixed at 1, absent pairs score 0.
class CategoryTable {
public:
    CategoryTable() = default;

    void set(std::string_view c1, std::string_view c2, double score) {
        if (score < 0.0 || score > 1.0)
            throw ConfigError("category score out of [0,1]: " + std::to_string(score));
        scores_[key(c1, c2)] = score;
    }

    double lookup(std::string_view c1, std::string_view c2) const {
        if (c1 == c2) return 1.0;
        auto it = scores_.find(key(c1, c2));
        return it == scores_.end() ? 0.0 : it->second;
    }

    bool contains(std::string_view c1, std::string_view c2) const {
        return c1 == c2 || scores_.count(key(c1, c2)) > 0;
    }

    std::size_t size() const { return scores_.size(); }

    // TAB-separated triples: value1 TAB value2 TAB score. '#' lines are
    // comments. Symmetric closure is applied by the symmetric key.
    static CategoryTable load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open category table: " + path.string());
        CategoryTable table;
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.empty() || line[0] == '#') continue;
            std::size_t t1 = line.find('\t');
            std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
            if (t2 == std::string::npos)
                throw DataError(path.string() + ":" + std::to_string(lineNo) +
                                ": expected value1 TAB value2 TAB score");
            try {
                table.set(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1),
                          std::stod(line.substr(t2 + 1)));
            } catch (const std::invalid_argument&) {
                throw DataError(path.string() + ":" + std::to_string(lineNo) +
                                ": bad score field");
            }
        }
        return table;
    }

private:
    static std::string key(std::string_view c1, std::string_view c2) {
        // Order-free key gives the symmetric closure for free.
        if (c2 < c1) std::swap(c1, c2);
        std::string k(c1);
        k.push_back('\x1f');
        k.append(c2);
        return k;
    }

    std::unordered_map<std::string, double> scores_;
};

inline double categorical_similarity(std::string_view c1, std::string_view c2,
                                     const CategoryTable& table) {
    return table.lookup(c1, c2);
}

}  // namespace cdcr::sim
