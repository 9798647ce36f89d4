// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdcr/classify.hpp"
#include "cdcr/error.hpp"
#include "cdcr/extract.hpp"

namespace cdcr {

struct EntityCluster {
    std::string id;
    std::vector<std::string> members;  // mention ids, sorted
    std::string canonicalLabel;        // longest member surface, ties lexicographic
};

// Union-find over dense indices with union by size and path compression.
// Shards build local structures over the same index space and merge them
// deterministically.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n = 0) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
        size_.assign(n, 1);
    }

    std::size_t size() const { return parent_.size(); }

    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            std::size_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    // Folds another structure over the same index space into this one.
    void merge(DisjointSet& other) {
        for (std::size_t i = 0; i < other.parent_.size(); ++i) {
            const std::size_t r = other.find(i);
            if (r != i) unite(i, r);
        }
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

namespace detail {

// Assembles canonical clusters from a root assignment: members sorted,
// clusters ordered by least member id, ids e000001, e000002, ...
inline std::vector<EntityCluster> assemble_clusters(
    const std::vector<std::string>& ids, const std::vector<std::string>& surfaces,
    DisjointSet& ds) {
    std::unordered_map<std::size_t, std::vector<std::size_t>> byRoot;
    for (std::size_t i = 0; i < ids.size(); ++i) byRoot[ds.find(i)].push_back(i);

    std::vector<EntityCluster> clusters;
    clusters.reserve(byRoot.size());
    for (auto& [root, idx] : byRoot) {
        EntityCluster c;
        c.members.reserve(idx.size());
        std::string_view label;
        for (std::size_t i : idx) {
            c.members.push_back(ids[i]);
            std::string_view s = surfaces.empty() ? std::string_view{} : surfaces[i];
            if (label.empty() || s.size() > label.size() ||
                (s.size() == label.size() && s < label))
                label = s;
        }
        std::sort(c.members.begin(), c.members.end());
        c.canonicalLabel = std::string(label);
        clusters.push_back(std::move(c));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const EntityCluster& a, const EntityCluster& b) {
                  return a.members.front() < b.members.front();
              });
    char buf[24];
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        std::snprintf(buf, sizeof buf, "e%06zu", i + 1);
        clusters[i].id = buf;
    }
    return clusters;
}

}  // namespace detail

// Indexes a mention universe so edge lists can work over dense indices.
struct MentionUniverse {
    std::vector<std::string> ids;       // sorted
    std::vector<std::string> surfaces;  // aligned with ids
    std::unordered_map<std::string, std::size_t> index;

    explicit MentionUniverse(const std::vector<Mention>& mentions) {
        std::vector<const Mention*> sorted;
        sorted.reserve(mentions.size());
        for (const auto& m : mentions) sorted.push_back(&m);
        std::sort(sorted.begin(), sorted.end(),
                  [](const Mention* a, const Mention* b) { return a->id < b->id; });
        ids.reserve(sorted.size());
        surfaces.reserve(sorted.size());
        for (const Mention* m : sorted) {
            index.emplace(m->id, ids.size());
            ids.push_back(m->id);
            surfaces.push_back(m->surface);
        }
    }

    std::size_t at(const std::string& id) const {
        auto it = index.find(id);
        if (it == index.end()) throw DataError("decision references unknown mention: " + id);
        return it->second;
    }
};

// Transitive closure over coreferent verdicts: connected components of the
// decision graph; mentions without any coreferent edge become singletons.
// Output is invariant to edge order and sharding.
inline std::vector<EntityCluster> connected_components(
    const std::vector<PairDecision>& decisions, const std::vector<Mention>& allMentions,
    std::size_t shards = 1) {
    MentionUniverse u(allMentions);

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(decisions.size());
    for (const PairDecision& d : decisions) {
        if (d.verdict != Verdict::coreferent) continue;
        edges.emplace_back(u.at(d.pair.a), u.at(d.pair.b));
    }

    if (shards <= 1 || edges.size() < 2) {
        DisjointSet ds(u.ids.size());
        for (auto [a, b] : edges) ds.unite(a, b);
        return detail::assemble_clusters(u.ids, u.surfaces, ds);
    }

    // Shard-local unions, then a deterministic sequential merge.
    std::vector<DisjointSet> local(shards, DisjointSet(u.ids.size()));
    const std::size_t chunk = (edges.size() + shards - 1) / shards;
    for (std::size_t s = 0; s < shards; ++s) {
        const std::size_t lo = s * chunk;
        const std::size_t hi = std::min(edges.size(), lo + chunk);
        for (std::size_t e = lo; e < hi; ++e) local[s].unite(edges[e].first, edges[e].second);
    }
    DisjointSet ds(u.ids.size());
    for (auto& l : local) ds.merge(l);
    return detail::assemble_clusters(u.ids, u.surfaces, ds);
}

// Greedy single-link agglomerative clustering: repeatedly merge the two
// clusters with the highest inter-cluster score until the best score drops
// below stopThreshold. Ties break by canonical pair order. Equivalent to
// processing pairs by descending score, which is how it is executed.
inline std::vector<EntityCluster> agglomerative_single_link(
    const std::vector<Mention>& mentions, const std::vector<PairScore>& pairScores,
    double stopThreshold) {
    MentionUniverse u(mentions);

    struct Edge {
        double score;
        std::size_t a, b;
        const std::string* ida;
        const std::string* idb;
    };
    std::vector<Edge> edges;
    edges.reserve(pairScores.size());
    for (const PairScore& ps : pairScores) {
        if (ps.combined < stopThreshold) continue;
        edges.push_back(
            {ps.combined, u.at(ps.pair.a), u.at(ps.pair.b), &ps.pair.a, &ps.pair.b});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.score != y.score) return x.score > y.score;
        if (*x.ida != *y.ida) return *x.ida < *y.ida;
        return *x.idb < *y.idb;
    });

    DisjointSet ds(u.ids.size());
    for (const Edge& e : edges) ds.unite(e.a, e.b);
    return detail::assemble_clusters(u.ids, u.surfaces, ds);
}

// ---------------------------------------------------------------------------
// Streaming clustering (update / merge with radius doubling)
// ---------------------------------------------------------------------------

struct StreamingConfig {
    std::size_t maxClusters = 0;  // K; must be >= 1
    double radiusLimit = 0.3;     // distance bound, with distance = 1 - similarity
};

struct StreamingState {
    struct Cluster {
        std::size_t centerIdx;             // index into the accepted stream
        std::vector<std::size_t> members;  // stream indices
    };
    std::vector<Cluster> clusters;
    double radius = 0.0;
};

// Single-pass stream clustering: each mention joins the nearest center
// within the current radius or opens a new cluster; when the cluster count
// exceeds K the radius doubles and centers within the new radius merge
// greedily (in creation order) until the count fits. `sim` maps a mention
// pair to a similarity in [0,1]; distance is 1 - sim.
inline std::vector<EntityCluster> streaming_cluster(
    const std::vector<Mention>& stream,
    const std::function<double(const Mention&, const Mention&)>& sim,
    const StreamingConfig& config, std::vector<std::string>* centerIdsOut = nullptr) {
    if (config.maxClusters < 1) throw ConfigError("streaming clustering requires K >= 1");
    StreamingState st;
    st.radius = config.radiusLimit;

    const auto dist = [&](std::size_t i, std::size_t j) {
        return 1.0 - sim(stream[i], stream[j]);
    };

    for (std::size_t i = 0; i < stream.size(); ++i) {
        // Update: nearest center, deterministic first-wins on ties.
        std::size_t best = SIZE_MAX;
        double bestDist = 0.0;
        for (std::size_t c = 0; c < st.clusters.size(); ++c) {
            const double d = dist(i, st.clusters[c].centerIdx);
            if (best == SIZE_MAX || d < bestDist) {
                best = c;
                bestDist = d;
            }
        }
        if (best != SIZE_MAX && bestDist <= st.radius) {
            st.clusters[best].members.push_back(i);
        } else {
            st.clusters.push_back({i, {i}});
        }

        // Merge: double the radius and fold nearby centers together until
        // the cluster count fits again.
        while (st.clusters.size() > config.maxClusters) {
            if (st.radius <= 0.0) {
                double minPos = 0.0;
                for (std::size_t a = 0; a < st.clusters.size(); ++a)
                    for (std::size_t b = a + 1; b < st.clusters.size(); ++b) {
                        const double d = dist(st.clusters[a].centerIdx,
                                              st.clusters[b].centerIdx);
                        if (d > 0.0 && (minPos == 0.0 || d < minPos)) minPos = d;
                    }
                st.radius = minPos > 0.0 ? minPos : 1.0;
            } else {
                st.radius *= 2.0;
            }
            std::vector<StreamingState::Cluster> kept;
            for (auto& cluster : st.clusters) {
                bool merged = false;
                for (auto& k : kept) {
                    if (dist(cluster.centerIdx, k.centerIdx) <= st.radius) {
                        k.members.insert(k.members.end(), cluster.members.begin(),
                                         cluster.members.end());
                        merged = true;
                        break;
                    }
                }
                if (!merged) kept.push_back(std::move(cluster));
            }
            st.clusters = std::move(kept);
        }
    }

    // Materialize clusters over the mention ids, keeping centers aligned.
    struct Built {
        EntityCluster cluster;
        std::string centerId;
    };
    std::vector<Built> built;
    built.reserve(st.clusters.size());
    for (const auto& cluster : st.clusters) {
        Built b;
        b.centerId = stream[cluster.centerIdx].id;
        std::string_view label;
        for (std::size_t i : cluster.members) {
            b.cluster.members.push_back(stream[i].id);
            std::string_view s = stream[i].surface;
            if (label.empty() || s.size() > label.size() ||
                (s.size() == label.size() && s < label))
                label = s;
        }
        std::sort(b.cluster.members.begin(), b.cluster.members.end());
        b.cluster.canonicalLabel = std::string(label);
        built.push_back(std::move(b));
    }
    std::sort(built.begin(), built.end(), [](const Built& a, const Built& b) {
        return a.cluster.members.front() < b.cluster.members.front();
    });
    std::vector<EntityCluster> out;
    out.reserve(built.size());
    if (centerIdsOut) centerIdsOut->clear();
    char buf[24];
    for (std::size_t i = 0; i < built.size(); ++i) {
        std::snprintf(buf, sizeof buf, "e%06zu", i + 1);
        built[i].cluster.id = buf;
        if (centerIdsOut) centerIdsOut->push_back(built[i].centerId);
        out.push_back(std::move(built[i].cluster));
    }
    return out;
}

// Maximum distance from any member to its cluster's center, under the
// similarity the stream was clustered with. Diagnostic for the doubling
// bound; centerIds comes from streaming_cluster.
inline double max_cluster_radius(const std::vector<EntityCluster>& clusters,
                                 const std::vector<std::string>& centerIds,
                                 const std::vector<Mention>& mentions,
                                 const std::function<double(const Mention&, const Mention&)>& sim) {
    std::unordered_map<std::string, const Mention*> byId;
    for (const auto& m : mentions) byId[m.id] = &m;
    double worst = 0.0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const Mention* center = byId.at(centerIds.at(c));
        for (const auto& id : clusters[c].members)
            worst = std::max(worst, 1.0 - sim(*center, *byId.at(id)));
    }
    return worst;
}

}  // namespace cdcr
