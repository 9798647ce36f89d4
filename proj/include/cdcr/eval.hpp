// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdcr/cluster.hpp"
#include "cdcr/error.hpp"
#include "cdcr/extract.hpp"

namespace cdcr::eval {

struct MetricReport {
    double precision = 0.0;
    double recall = 0.0;
    double fMeasure = 0.0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
};

inline double f_measure(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

struct GoldMentionKey {
    std::string docId;
    Span span;
    EntityMajor major = EntityMajor::person;

    auto operator<=>(const GoldMentionKey&) const = default;
};

struct GoldStandard {
    std::map<std::string, std::string> mentionLabels;  // mention id -> gold entity id
    std::vector<GoldMentionKey> goldMentions;          // for identification scoring

    // TAB-separated mentionId TAB goldEntityId.
    static GoldStandard load_labels(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open gold file: " + path.string());
        GoldStandard gold;
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const std::size_t tab = line.find('\t');
            if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
                throw DataError(path.string() + ":" + std::to_string(lineNo) +
                                ": expected mentionId TAB entityId");
            gold.mentionLabels[line.substr(0, tab)] = line.substr(tab + 1);
        }
        return gold;
    }

    // TAB-separated docId TAB start TAB end TAB type.
    void load_gold_mentions(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open gold mention file: " + path.string());
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> cols;
            std::size_t pos = 0;
            while (true) {
                const std::size_t tab = line.find('\t', pos);
                cols.push_back(line.substr(pos, tab - pos));
                if (tab == std::string::npos) break;
                pos = tab + 1;
            }
            if (cols.size() != 4)
                throw DataError(path.string() + ":" + std::to_string(lineNo) +
                                ": expected docId TAB start TAB end TAB type");
            GoldMentionKey k;
            k.docId = cols[0];
            k.span = Span{static_cast<std::uint32_t>(std::stoul(cols[1])),
                          static_cast<std::uint32_t>(std::stoul(cols[2]))};
            k.major = entity_major_from_string(cols[3]);
            goldMentions.push_back(std::move(k));
        }
    }
};

enum class MatchMode { exact_span, overlap };

// Mention identification P/R/F against gold mentions. Exact mode requires
// identical (doc, span, type); overlap mode accepts any span overlap with
// matching type. The degenerate empty-output case scores P = 0 by decision
// (both sides empty scores a perfect 1).
inline MetricReport identification_prf(const std::vector<Mention>& system,
                                       const GoldStandard& gold, MatchMode mode) {
    MetricReport r;
    const std::uint64_t extracted = system.size();
    const std::uint64_t goldCount = gold.goldMentions.size();
    if (extracted == 0 && goldCount == 0) {
        r.precision = r.recall = r.fMeasure = 1.0;
        return r;
    }

    std::uint64_t correct = 0;
    std::vector<bool> goldCovered(gold.goldMentions.size(), false);
    if (mode == MatchMode::exact_span) {
        std::map<GoldMentionKey, std::size_t> goldIndex;
        for (std::size_t i = 0; i < gold.goldMentions.size(); ++i)
            goldIndex.emplace(gold.goldMentions[i], i);
        for (const Mention& m : system) {
            auto it = goldIndex.find(GoldMentionKey{m.docId, m.span, m.type.major});
            if (it != goldIndex.end()) {
                ++correct;
                goldCovered[it->second] = true;
            }
        }
    } else {
        for (const Mention& m : system) {
            bool matched = false;
            for (std::size_t i = 0; i < gold.goldMentions.size(); ++i) {
                const GoldMentionKey& g = gold.goldMentions[i];
                if (g.docId == m.docId && g.major == m.type.major && g.span.overlaps(m.span)) {
                    matched = true;
                    goldCovered[i] = true;
                }
            }
            if (matched) ++correct;
        }
    }
    const std::uint64_t covered =
        static_cast<std::uint64_t>(std::count(goldCovered.begin(), goldCovered.end(), true));

    r.tp = correct;
    r.fp = extracted - correct;
    r.fn = goldCount - covered;
    r.precision = extracted == 0 ? 0.0 : static_cast<double>(correct) / extracted;
    r.recall = goldCount == 0 ? 0.0 : static_cast<double>(covered) / goldCount;
    r.fMeasure = f_measure(r.precision, r.recall);
    return r;
}

namespace detail {

// mention id -> cluster index, validating disjointness.
inline std::unordered_map<std::string, std::size_t> membership(
    const std::vector<EntityCluster>& clustering, std::string_view side) {
    std::unordered_map<std::string, std::size_t> m;
    for (std::size_t c = 0; c < clustering.size(); ++c) {
        for (const auto& id : clustering[c].members) {
            if (!m.emplace(id, c).second)
                throw DataError("mention appears in two " + std::string(side) +
                                " clusters: " + id);
        }
    }
    return m;
}

inline void require_same_universe(const std::unordered_map<std::string, std::size_t>& sys,
                                  const std::unordered_map<std::string, std::size_t>& gold) {
    if (sys.size() != gold.size())
        throw DataError("evaluation error: mention sets differ (" +
                        std::to_string(sys.size()) + " system vs " +
                        std::to_string(gold.size()) + " gold)");
    for (const auto& [id, c] : sys) {
        if (!gold.count(id))
            throw DataError("evaluation error: system mention not in gold: " + id);
    }
}

}  // namespace detail

// Builds single-member-per-mention clusterings from a gold label map.
inline std::vector<EntityCluster> clustering_from_labels(
    const std::map<std::string, std::string>& labels) {
    std::map<std::string, EntityCluster> byEntity;
    for (const auto& [mentionId, entityId] : labels) {
        EntityCluster& c = byEntity[entityId];
        c.id = entityId;
        c.members.push_back(mentionId);
    }
    std::vector<EntityCluster> out;
    out.reserve(byEntity.size());
    for (auto& [_, c] : byEntity) {
        std::sort(c.members.begin(), c.members.end());
        out.push_back(std::move(c));
    }
    return out;
}

// Link-based F: links are all unordered within-cluster pairs; precision is
// the share of system links also in gold, recall the share of gold links
// recovered. An empty link set on one side scores 1 for its own ratio
// (0 common / 0 links).
inline MetricReport link_f(const std::vector<EntityCluster>& system,
                           const std::vector<EntityCluster>& gold) {
    const auto sysOf = detail::membership(system, "system");
    const auto goldOf = detail::membership(gold, "gold");
    detail::require_same_universe(sysOf, goldOf);

    std::uint64_t sysLinks = 0, goldLinks = 0, common = 0;
    for (const auto& c : system) {
        const std::uint64_t n = c.members.size();
        sysLinks += n * (n - 1) / 2;
        for (std::size_t i = 0; i + 1 < c.members.size(); ++i)
            for (std::size_t j = i + 1; j < c.members.size(); ++j)
                if (goldOf.at(c.members[i]) == goldOf.at(c.members[j])) ++common;
    }
    for (const auto& c : gold) {
        const std::uint64_t n = c.members.size();
        goldLinks += n * (n - 1) / 2;
    }

    MetricReport r;
    r.tp = common;
    r.fp = sysLinks - common;
    r.fn = goldLinks - common;
    r.precision = sysLinks == 0 ? 1.0 : static_cast<double>(common) / sysLinks;
    r.recall = goldLinks == 0 ? 1.0 : static_cast<double>(common) / goldLinks;
    r.fMeasure = f_measure(r.precision, r.recall);
    return r;
}

// B-cubed: per-mention precision |sys(m) n gold(m)| / |sys(m)| and recall
// |sys(m) n gold(m)| / |gold(m)|, averaged uniformly.
inline MetricReport bcubed(const std::vector<EntityCluster>& system,
                           const std::vector<EntityCluster>& gold) {
    const auto sysOf = detail::membership(system, "system");
    const auto goldOf = detail::membership(gold, "gold");
    detail::require_same_universe(sysOf, goldOf);

    MetricReport r;
    if (sysOf.empty()) {
        r.precision = r.recall = r.fMeasure = 1.0;
        return r;
    }

    // Overlap counts per (system cluster, gold cluster) cell.
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> cell;
    for (const auto& [id, sc] : sysOf) cell[{sc, goldOf.at(id)}]++;

    double pSum = 0.0, rSum = 0.0;
    for (const auto& [id, sc] : sysOf) {
        const std::size_t gc = goldOf.at(id);
        const double overlap = static_cast<double>(cell.at({sc, gc}));
        pSum += overlap / static_cast<double>(system[sc].members.size());
        rSum += overlap / static_cast<double>(gold[gc].members.size());
    }
    const double n = static_cast<double>(sysOf.size());
    r.precision = pSum / n;
    r.recall = rSum / n;
    r.fMeasure = f_measure(r.precision, r.recall);
    return r;
}

}  // namespace cdcr::eval
