// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdcr/error.hpp"
#include "cdcr/extract.hpp"
#include "cdcr/simfns.hpp"

namespace cdcr::synth {

struct NoiseModel {
    double typoRate = 0.0;
    double abbrevRate = 0.0;
    double reorderRate = 0.0;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t docCount = 100;
    std::size_t entityCount = 20;
    NoiseModel noise;
    std::size_t mentionsPerDoc = 3;
    std::size_t subtypeGroups = 8;  // 0 = all mentions share an empty subtype
    std::size_t fillerVocabulary = 4000;
};

struct SynthEntity {
    std::string id;
    std::string canonicalName;  // "First Last"
    std::string subtype;
};

struct SynthResult {
    std::filesystem::path corpusFile;     // JSONL documents
    std::filesystem::path goldFile;       // mentionId TAB entityId
    std::filesystem::path goldMentions;   // docId TAB start TAB end TAB type
    std::filesystem::path gazetteerFile;  // every planted surface
    std::size_t documents = 0;
    std::size_t mentions = 0;
    std::size_t entities = 0;
};

namespace detail {

inline std::string syllable_word(std::mt19937_64& rng, int syllables) {
    static constexpr std::string_view onsets = "bdfgklmnprstv";
    static constexpr std::string_view vowels = "aeiou";
    static constexpr std::string_view codas = "nrsltk";
    std::uniform_int_distribution<std::size_t> onset(0, onsets.size() - 1);
    std::uniform_int_distribution<std::size_t> vowel(0, vowels.size() - 1);
    std::uniform_int_distribution<std::size_t> coda(0, codas.size() - 1);
    std::uniform_int_distribution<int> addCoda(0, 3);
    std::string w;
    for (int s = 0; s < syllables; ++s) {
        w.push_back(onsets[onset(rng)]);
        w.push_back(vowels[vowel(rng)]);
    }
    if (addCoda(rng) == 0) w.push_back(codas[coda(rng)]);
    return w;
}

inline std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z')
        w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

// yyyymmdd for a day offset from 2000-01-01 (civil-from-days).
inline std::int32_t date_for_offset(std::int64_t offset) {
    std::int64_t z = offset + 10957 + 719468;  // days from 0000-03-01 to 2000-01-01
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    const std::int64_t year = y + (m <= 2);
    return static_cast<std::int32_t>(year * 10000 + m * 100 + d);
}

// One random single-character edit on a name, keeping the first character
// and never touching separators, so the result stays extractable and is
// always at edit distance >= 1 from the original.
inline std::string apply_typo(std::mt19937_64& rng, const std::string& name) {
    std::vector<std::size_t> editable;
    for (std::size_t i = 1; i < name.size(); ++i) {
        if (name[i] >= 'a' && name[i] <= 'z') editable.push_back(i);
    }
    if (editable.empty()) return name;
    std::uniform_int_distribution<std::size_t> posPick(0, editable.size() - 1);
    std::uniform_int_distribution<int> opPick(0, 2);
    std::uniform_int_distribution<int> letter(0, 25);
    std::string out = name;
    const std::size_t pos = editable[posPick(rng)];
    switch (opPick(rng)) {
        case 0: {  // substitution with a different letter
            char c = static_cast<char>('a' + letter(rng));
            while (c == out[pos]) c = static_cast<char>('a' + letter(rng));
            out[pos] = c;
            break;
        }
        case 1:  // deletion
            out.erase(pos, 1);
            break;
        default:  // insertion
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos),
                       static_cast<char>('a' + letter(rng)));
            break;
    }
    return out;
}

inline std::string abbreviate(const std::string& name) {
    const auto space = name.find(' ');
    if (space == std::string::npos || space == 0) return name;
    return name.substr(0, 1) + ". " + name.substr(space + 1);
}

inline std::string reorder(const std::string& name) {
    const auto space = name.find(' ');
    if (space == std::string::npos) return name;
    return name.substr(space + 1) + " " + name.substr(0, space);
}

}  // namespace detail

// Generates entity canonical names whose pairwise Jaro-Winkler similarity
// stays low and whose first-token soundex codes are distinct, so that the
// zero-noise corpus clusters perfectly under the default classifier.
inline std::vector<SynthEntity> generate_entities(std::mt19937_64& rng,
                                                  const SynthConfig& cfg) {
    std::vector<SynthEntity> entities;
    std::set<std::string> soundexCodes;
    std::set<std::string> nameTokens;
    std::uniform_int_distribution<int> syl(2, 3);

    for (std::size_t e = 0; e < cfg.entityCount; ++e) {
        bool placed = false;
        for (int attempt = 0; attempt < 500 && !placed; ++attempt) {
            const std::string first = detail::capitalize(detail::syllable_word(rng, syl(rng)));
            const std::string last = detail::capitalize(detail::syllable_word(rng, syl(rng)));
            if (first == last) continue;
            const std::string name = first + " " + last;
            const std::string code = sim::soundex(first);
            if (soundexCodes.count(code)) continue;
            bool tooClose = false;
            for (const auto& other : entities) {
                if (sim::jaro_winkler(name, other.canonicalName) > 0.7) {
                    tooClose = true;
                    break;
                }
            }
            if (tooClose) continue;

            SynthEntity ent;
            char id[16];
            std::snprintf(id, sizeof id, "E%04zu", e + 1);
            ent.id = id;
            ent.canonicalName = name;
            if (cfg.subtypeGroups > 0)
                ent.subtype = "g" + std::to_string(e % cfg.subtypeGroups);
            soundexCodes.insert(code);
            nameTokens.insert(text::to_lower_ascii(first));
            nameTokens.insert(text::to_lower_ascii(last));
            entities.push_back(std::move(ent));
            placed = true;
        }
        if (!placed)
            throw ConfigError(
                "cannot generate " + std::to_string(cfg.entityCount) +
                " sufficiently distinct entity names; lower the entity count");
    }
    return entities;
}

// Lowercase filler vocabulary disjoint from every entity name token, so the
// gazetteer can never match inside filler text.
inline std::vector<std::string> generate_fillers(std::mt19937_64& rng, const SynthConfig& cfg,
                                                 const std::vector<SynthEntity>& entities) {
    std::set<std::string> reserved;
    for (const auto& e : entities)
        for (auto tok : text::split_ws(e.canonicalName))
            reserved.insert(text::to_lower_ascii(tok));

    std::set<std::string> vocab;
    std::uniform_int_distribution<int> syl(1, 3);
    int guard = 0;
    while (vocab.size() < cfg.fillerVocabulary && guard < 1000000) {
        ++guard;
        std::string w = detail::syllable_word(rng, syl(rng));
        if (w.size() < 3 || reserved.count(w)) continue;
        vocab.insert(std::move(w));
    }
    return {vocab.begin(), vocab.end()};
}

// Deterministic synthetic corpus with exact gold labels. Documents embed
// name variants (typos, abbreviations, token reorder) of synthetic person
// entities at the configured rates; every planted surface is written to the
// gazetteer so extraction recovers exactly the planted mentions.
inline SynthResult synth_corpus(const SynthConfig& cfg, const std::filesystem::path& outDir) {
    if (cfg.docCount == 0 || cfg.entityCount == 0)
        throw ConfigError("synth requires positive document and entity counts");
    std::filesystem::create_directories(outDir);
    std::mt19937_64 rng(cfg.seed);

    const std::vector<SynthEntity> entities = generate_entities(rng, cfg);
    const std::vector<std::string> fillers = generate_fillers(rng, cfg, entities);
    if (fillers.size() < 50) throw ConfigError("filler vocabulary came out too small");

    std::uniform_int_distribution<std::size_t> fillerPick(0, fillers.size() - 1);
    std::uniform_int_distribution<std::size_t> entityPick(0, entities.size() - 1);
    std::uniform_int_distribution<int> sentenceLead(2, 5);
    std::uniform_int_distribution<int> sentenceTail(1, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const char* docTypes[] = {"story", "sport", "history"};

    SynthResult result;
    result.corpusFile = outDir / "corpus.jsonl";
    result.goldFile = outDir / "gold.tsv";
    result.goldMentions = outDir / "gold_mentions.tsv";
    result.gazetteerFile = outDir / "gazetteer.tsv";
    result.entities = entities.size();

    std::ofstream corpus(result.corpusFile, std::ios::binary | std::ios::trunc);
    std::ofstream gold(result.goldFile, std::ios::binary | std::ios::trunc);
    std::ofstream goldMentions(result.goldMentions, std::ios::binary | std::ios::trunc);
    if (!corpus || !gold || !goldMentions)
        throw DataError("cannot write synthetic corpus under " + outDir.string());

    // Gazetteer entries accumulate as variants appear.
    std::set<std::string> gazLines;
    for (const auto& e : entities)
        gazLines.insert(e.canonicalName + "\tperson\t" + e.subtype);

    for (std::size_t d = 0; d < cfg.docCount; ++d) {
        char docId[16];
        std::snprintf(docId, sizeof docId, "d%05zu", d + 1);

        std::string body;
        struct Planted {
            std::size_t begin, end;
            const SynthEntity* entity;
        };
        std::vector<Planted> planted;

        for (std::size_t mi = 0; mi < cfg.mentionsPerDoc; ++mi) {
            const int lead = sentenceLead(rng);
            for (int w = 0; w < lead; ++w) {
                if (!body.empty()) body.push_back(' ');
                body += fillers[fillerPick(rng)];
            }
            const SynthEntity& ent = entities[entityPick(rng)];
            std::string surface = ent.canonicalName;
            const double u = unit(rng);
            if (u < cfg.noise.typoRate) {
                surface = detail::apply_typo(rng, surface);
            } else if (u < cfg.noise.typoRate + cfg.noise.abbrevRate) {
                surface = detail::abbreviate(surface);
            } else if (u < cfg.noise.typoRate + cfg.noise.abbrevRate + cfg.noise.reorderRate) {
                surface = detail::reorder(surface);
            }
            body.push_back(' ');
            const std::size_t begin = body.size();
            body += surface;
            planted.push_back({begin, body.size(), &ent});
            gazLines.insert(surface + "\tperson\t" + ent.subtype);

            const int tail = sentenceTail(rng);
            for (int w = 0; w < tail; ++w) {
                body.push_back(' ');
                body += fillers[fillerPick(rng)];
            }
            body += " .";
        }

        std::string headline = fillers[fillerPick(rng)];
        headline.push_back(' ');
        headline += fillers[fillerPick(rng)];

        nlohmann::json j;
        j["id"] = docId;
        j["type"] = docTypes[d % 3];
        j["date"] = detail::date_for_offset(static_cast<std::int64_t>(d % 3650));
        j["headline"] = headline;
        j["body"] = body;
        corpus << j.dump() << "\n";

        for (const auto& p : planted) {
            const std::string mid = std::string(docId) + ":" + std::to_string(p.begin) + "-" +
                                    std::to_string(p.end);
            gold << mid << "\t" << p.entity->id << "\n";
            goldMentions << docId << "\t" << p.begin << "\t" << p.end << "\tperson\n";
            ++result.mentions;
        }
        ++result.documents;
    }

    std::ofstream gaz(result.gazetteerFile, std::ios::binary | std::ios::trunc);
    gaz << "# synthetic gazetteer: every planted surface variant\n";
    for (const auto& line : gazLines) gaz << line << "\n";

    return result;
}

}  // namespace cdcr::synth
