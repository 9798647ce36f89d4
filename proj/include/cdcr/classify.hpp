// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cdcr/block.hpp"
#include "cdcr/corpus.hpp"
#include "cdcr/error.hpp"
#include "cdcr/extract.hpp"
#include "cdcr/simfns.hpp"

namespace cdcr {

// ---------------------------------------------------------------------------
// Feature registry
// ---------------------------------------------------------------------------

enum class FeatureLevel { entity, document, metadata };

enum class FeatureFn {
    jaro_winkler,
    jaro,
    edit,
    qgram,
    jaccard,
    tfidf_cosine,
    exact,       // string equality (soundex codes)
    categorical, // CategoryTable lookup
    date         // 1 / (1 + days apart)
};

inline std::string_view to_string(FeatureFn fn) {
    switch (fn) {
        case FeatureFn::jaro_winkler: return "jaro_winkler";
        case FeatureFn::jaro: return "jaro";
        case FeatureFn::edit: return "edit";
        case FeatureFn::qgram: return "qgram";
        case FeatureFn::jaccard: return "jaccard";
        case FeatureFn::tfidf_cosine: return "tfidf_cosine";
        case FeatureFn::exact: return "exact";
        case FeatureFn::categorical: return "categorical";
        case FeatureFn::date: return "date";
    }
    return "exact";
}

inline FeatureFn feature_fn_from_string(std::string_view s) {
    if (s == "jaro_winkler") return FeatureFn::jaro_winkler;
    if (s == "jaro") return FeatureFn::jaro;
    if (s == "edit") return FeatureFn::edit;
    if (s == "qgram") return FeatureFn::qgram;
    if (s == "jaccard") return FeatureFn::jaccard;
    if (s == "tfidf_cosine") return FeatureFn::tfidf_cosine;
    if (s == "exact") return FeatureFn::exact;
    if (s == "categorical") return FeatureFn::categorical;
    if (s == "date") return FeatureFn::date;
    throw ConfigError("unknown similarity function: " + std::string(s));
}

struct FeatureSpec {
    std::string name;
    FeatureLevel level = FeatureLevel::entity;
    FeatureFn fn = FeatureFn::exact;
    double weight = 1.0;  // normalized across enabled features before use
    double prefixScale = 0.1;
    sim::QGramConfig qgram;
};

// A feature value is a string, a canonical yyyymmdd date, or a shared text
// blob (document bodies, shared across the document's mentions).
using FeatureValue = std::variant<std::string, std::int32_t, std::shared_ptr<const std::string>>;

using FeatureVector = std::map<std::string, FeatureValue>;

inline std::string_view feature_text(const FeatureValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* p = std::get_if<std::shared_ptr<const std::string>>(&v)) return **p;
    return {};
}

// The feature names featurize() knows how to compute.
//   surface       raw mention string                      (entity)
//   surface_norm  lowercase, whitespace-collapsed surface (entity)
//   soundex       soundex code of the first surface token (entity)
//   context       window tokens around the mention        (document)
//   headline      document headline                       (document)
//   body          document body tokens, shared            (document)
//   doc_type      document category tag                   (metadata)
//   date          document timestamp                      (metadata)
inline FeatureLevel feature_level_for(std::string_view name) {
    if (name == "surface" || name == "surface_norm" || name == "soundex")
        return FeatureLevel::entity;
    if (name == "context" || name == "headline" || name == "body")
        return FeatureLevel::document;
    if (name == "doc_type" || name == "date") return FeatureLevel::metadata;
    throw ConfigError("unknown feature name: " + std::string(name) +
                      " (expected one of surface, surface_norm, soundex, context, "
                      "headline, body, doc_type, date)");
}

inline std::vector<FeatureSpec> default_feature_registry() {
    // Name comparison, phonetic code, and local context carry the coreference
    // signal; body/headline/metadata features are available via config.
    std::vector<FeatureSpec> fs;
    fs.push_back({"surface", FeatureLevel::entity, FeatureFn::jaro_winkler, 1.0, 0.1, {}});
    fs.push_back({"soundex", FeatureLevel::entity, FeatureFn::exact, 1.0, 0.1, {}});
    fs.push_back({"context", FeatureLevel::document, FeatureFn::jaccard, 1.0, 0.1, {}});
    return fs;
}

// ---------------------------------------------------------------------------
// Scoring configuration
// ---------------------------------------------------------------------------

struct ScoringConfig {
    std::vector<FeatureSpec> features = default_feature_registry();
    double lower = 0.5;
    double upper = 0.5;
    sim::CategoryTable categories;         // doc_type scores; same value always 1
    sim::CategoryTable aliases;            // known name equivalences, applied to
    bool hasAliases = false;               // entity-level string features
    const sim::CorpusStats* stats = nullptr;  // required by tfidf_cosine features

    void validate() const {
        if (lower < 0.0 || upper > 1.0 || lower > upper)
            throw ConfigError("thresholds must satisfy 0 <= lower <= upper <= 1");
        if (features.empty()) throw ConfigError("no features enabled");
        double total = 0;
        for (const auto& f : features) {
            if (f.weight < 0) throw ConfigError("negative feature weight: " + f.name);
            total += f.weight;
        }
        if (total <= 0) throw ConfigError("feature weights sum to zero");
    }
};

// JSON config: {"lower":0.5,"upper":0.5,"features":[{"name":...,"function":...,
// "weight":...,"prefix_scale":...,"q":...,"q_denominator":...}],
// "doc_type_table":path,"alias_table":path}
inline ScoringConfig load_scoring_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open classifier config: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ConfigError("classifier config is not a JSON object: " + path.string());

    ScoringConfig cfg;
    if (j.contains("threshold")) {
        cfg.lower = cfg.upper = j["threshold"].get<double>();
    }
    if (j.contains("lower")) cfg.lower = j["lower"].get<double>();
    if (j.contains("upper")) cfg.upper = j["upper"].get<double>();
    if (j.contains("features")) {
        cfg.features.clear();
        for (const auto& f : j["features"]) {
            FeatureSpec spec;
            spec.name = f.at("name").get<std::string>();
            spec.level = feature_level_for(spec.name);
            if (f.contains("function"))
                spec.fn = feature_fn_from_string(f["function"].get<std::string>());
            if (f.contains("weight")) spec.weight = f["weight"].get<double>();
            if (f.contains("prefix_scale")) spec.prefixScale = f["prefix_scale"].get<double>();
            if (f.contains("q")) spec.qgram.q = f["q"].get<std::size_t>();
            if (f.contains("q_denominator")) {
                const std::string d = f["q_denominator"].get<std::string>();
                if (d == "minimum") spec.qgram.denominator = sim::QGramDenominator::minimum;
                else if (d == "average") spec.qgram.denominator = sim::QGramDenominator::average;
                else if (d == "maximum") spec.qgram.denominator = sim::QGramDenominator::maximum;
                else throw ConfigError("unknown q_denominator: " + d);
            }
            cfg.features.push_back(std::move(spec));
        }
    }
    auto resolve = [&](const std::string& p) {
        std::filesystem::path t(p);
        return t.is_absolute() ? t : path.parent_path() / t;
    };
    if (j.contains("doc_type_table"))
        cfg.categories = sim::CategoryTable::load(resolve(j["doc_type_table"]));
    if (j.contains("alias_table")) {
        cfg.aliases = sim::CategoryTable::load(resolve(j["alias_table"]));
        cfg.hasAliases = true;
    }
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Featurization
// ---------------------------------------------------------------------------

inline std::string normalize_surface(std::string_view surface) {
    std::string out;
    for (auto tok : text::split_ws(surface)) {
        if (!out.empty()) out.push_back(' ');
        for (char c : tok) out.push_back(text::ascii_lower(c));
    }
    return out;
}

// Clean body token text used for the body feature and for CorpusStats:
// word and number tokens, space-joined, original case.
inline std::string body_token_text(const Document& doc) {
    std::string out;
    for (const Token& t : tokenize(doc.body)) {
        if (t.kind == TokenKind::punctuation) continue;
        if (!out.empty()) out.push_back(' ');
        out += t.text;
    }
    return out;
}

inline std::optional<std::string> soundex_of_first_token(std::string_view surface) {
    for (auto tok : text::split_ws(surface)) {
        for (char c : tok) {
            if (text::is_ascii_letter(static_cast<unsigned char>(c)))
                return sim::soundex(tok);
        }
    }
    return std::nullopt;
}

// Computes the enabled features of one mention. Missing metadata yields
// absent entries, never defaults. `sharedBody` is the document's
// body_token_text, shared across its mentions; pass nullptr when the body
// feature is disabled.
inline FeatureVector featurize(const Mention& m, const std::vector<FeatureSpec>& registry,
                               std::shared_ptr<const std::string> sharedBody = nullptr) {
    FeatureVector fv;
    for (const FeatureSpec& spec : registry) {
        if (spec.name == "surface") {
            fv.emplace("surface", m.surface);
        } else if (spec.name == "surface_norm") {
            fv.emplace("surface_norm", normalize_surface(m.surface));
        } else if (spec.name == "soundex") {
            if (auto code = soundex_of_first_token(m.surface))
                fv.emplace("soundex", std::move(*code));
        } else if (spec.name == "context") {
            fv.emplace("context", m.context);
        } else if (spec.name == "headline") {
            if (m.docMeta.headline) fv.emplace("headline", *m.docMeta.headline);
        } else if (spec.name == "body") {
            if (sharedBody) fv.emplace("body", sharedBody);
        } else if (spec.name == "doc_type") {
            if (!m.docMeta.docType.empty()) fv.emplace("doc_type", m.docMeta.docType);
        } else if (spec.name == "date") {
            if (m.docMeta.timestamp) fv.emplace("date", *m.docMeta.timestamp);
        }
    }
    return fv;
}

// ---------------------------------------------------------------------------
// Pair scoring and decisions
// ---------------------------------------------------------------------------

struct PairScore {
    CandidatePair pair;
    std::map<std::string, double> perFeature;
    double combined = 0.0;
};

enum class Verdict { coreferent, possible, nonCoreferent };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::coreferent: return "coreferent";
        case Verdict::possible: return "possible";
        case Verdict::nonCoreferent: return "non-coreferent";
    }
    return "non-coreferent";
}

struct PairDecision {
    CandidatePair pair;
    Verdict verdict = Verdict::nonCoreferent;
    double combined = 0.0;
};

namespace detail {

inline double score_feature(const FeatureSpec& spec, const FeatureValue& va,
                            const FeatureValue& vb, const ScoringConfig& cfg) {
    if (spec.fn == FeatureFn::date) {
        const auto* da = std::get_if<std::int32_t>(&va);
        const auto* db = std::get_if<std::int32_t>(&vb);
        if (!da || !db) throw DataError("date feature holds non-date value");
        return sim::date_similarity(*da, *db);
    }
    const std::string_view sa = feature_text(va);
    const std::string_view sb = feature_text(vb);

    // Known alias pairs short-circuit string comparison for entity-level
    // features ("Richard" / "Dick" scores from the table, typically 1).
    if (cfg.hasAliases && spec.level == FeatureLevel::entity &&
        spec.fn != FeatureFn::exact && spec.fn != FeatureFn::categorical) {
        const std::string na = normalize_surface(sa);
        const std::string nb = normalize_surface(sb);
        if (na != nb && cfg.aliases.contains(na, nb)) return cfg.aliases.lookup(na, nb);
    }

    switch (spec.fn) {
        case FeatureFn::jaro_winkler: return sim::jaro_winkler(sa, sb, spec.prefixScale);
        case FeatureFn::jaro: return sim::jaro(sa, sb);
        case FeatureFn::edit: return sim::edit_similarity(sa, sb);
        case FeatureFn::qgram: return sim::qgram_similarity(sa, sb, spec.qgram);
        case FeatureFn::jaccard: return sim::jaccard(sa, sb);
        case FeatureFn::tfidf_cosine:
            if (!cfg.stats)
                throw ConfigError("tfidf_cosine feature requires corpus statistics");
            return sim::tfidf_cosine(sa, sb, *cfg.stats);
        case FeatureFn::exact: return sa == sb ? 1.0 : 0.0;
        case FeatureFn::categorical: return sim::categorical_similarity(sa, sb, cfg.categories);
        case FeatureFn::date: break;  // handled above
    }
    return 0.0;
}

// Scores every enabled feature present on both sides into `scores`
// (aligned with cfg.features; absent features get -1). Returns false when
// no feature is present on both sides.
inline bool score_features(const FeatureVector& a, const FeatureVector& b,
                           const ScoringConfig& cfg, std::vector<double>& scores,
                           double& combined) {
    scores.assign(cfg.features.size(), -1.0);
    double weightSum = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < cfg.features.size(); ++i) {
        const FeatureSpec& spec = cfg.features[i];
        auto ia = a.find(spec.name);
        auto ib = b.find(spec.name);
        if (ia == a.end() || ib == b.end()) continue;  // skipped, weights renormalize
        const double s = score_feature(spec, ia->second, ib->second, cfg);
        scores[i] = s;
        acc += spec.weight * s;
        weightSum += spec.weight;
    }
    if (weightSum == 0.0) return false;
    combined = acc / weightSum;
    return true;
}

}  // namespace detail

// Scores one candidate pair feature-by-feature; combined score is the
// weighted mean over the features present on both sides.
inline PairScore score_pair(const FeatureVector& a, const FeatureVector& b,
                            const ScoringConfig& cfg, CandidatePair pair = {}) {
    std::vector<double> scores;
    double combined = 0.0;
    if (!detail::score_features(a, b, cfg, scores, combined))
        throw DataError("no scorable features for pair " + pair.a + " / " + pair.b);
    PairScore ps;
    ps.pair = std::move(pair);
    ps.combined = combined;
    for (std::size_t i = 0; i < cfg.features.size(); ++i)
        if (scores[i] >= 0.0) ps.perFeature[cfg.features[i].name] = scores[i];
    return ps;
}

// Two-threshold coreference decision: combined >= upper is coreferent,
// combined < lower is non-coreferent, between the two is a possible match.
// With the default lower = upper = 0.5, >= 0.5 means coreferent.
inline Verdict decide_verdict(double combined, double lower, double upper) {
    if (lower < 0.0 || upper > 1.0 || lower > upper)
        throw ConfigError("thresholds must satisfy 0 <= lower <= upper <= 1");
    if (combined >= upper) return Verdict::coreferent;
    if (combined < lower) return Verdict::nonCoreferent;
    return Verdict::possible;
}

inline PairDecision decide(const PairScore& score, double lower = 0.5, double upper = 0.5) {
    return PairDecision{score.pair, decide_verdict(score.combined, lower, upper),
                        score.combined};
}

}  // namespace cdcr
