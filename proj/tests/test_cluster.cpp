// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cdcr/cluster.hpp"
#include "oracles.hpp"

using namespace cdcr;
using Catch::Approx;

namespace {

Mention mk(std::string id, std::string surface = "") {
    Mention m;
    m.id = std::move(id);
    m.surface = surface.empty() ? m.id : std::move(surface);
    return m;
}

PairDecision edge(std::string a, std::string b, Verdict v = Verdict::coreferent) {
    PairDecision d;
    d.pair.a = std::move(a);
    d.pair.b = std::move(b);
    d.verdict = v;
    d.combined = v == Verdict::coreferent ? 1.0 : 0.0;
    return d;
}

}  // namespace

TEST_CASE("connected components with transitive closure") {
    std::vector<Mention> ms = {mk("a"), mk("b"), mk("c"), mk("d")};
    auto clusters = connected_components({edge("a", "b"), edge("b", "c")}, ms);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].members == std::vector<std::string>{"a", "b", "c"});
    CHECK(clusters[1].members == std::vector<std::string>{"d"});
    CHECK(clusters[0].id == "e000001");
    CHECK(clusters[1].id == "e000002");
}

TEST_CASE("no edges gives all singletons") {
    std::vector<Mention> ms = {mk("a"), mk("b")};
    auto clusters = connected_components({}, ms);
    CHECK(clusters.size() == 2);
}

TEST_CASE("non-coreferent verdicts are ignored") {
    std::vector<Mention> ms = {mk("a"), mk("b")};
    auto clusters = connected_components({edge("a", "b", Verdict::nonCoreferent)}, ms);
    CHECK(clusters.size() == 2);
    auto clusters2 = connected_components({edge("a", "b", Verdict::possible)}, ms);
    CHECK(clusters2.size() == 2);
}

TEST_CASE("unknown mention in a decision is a data error") {
    std::vector<Mention> ms = {mk("a")};
    CHECK_THROWS_AS(connected_components({edge("a", "zz")}, ms), DataError);
}

TEST_CASE("canonical label is longest surface, ties lexicographic") {
    std::vector<Mention> ms = {mk("m1", "Obama"), mk("m2", "Barack Obama"), mk("m3", "alpha"),
                               mk("m4", "gamma")};
    auto clusters = connected_components({edge("m1", "m2"), edge("m3", "m4")}, ms);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].canonicalLabel == "Barack Obama");
    CHECK(clusters[1].canonicalLabel == "alpha");  // same length, lexicographically least
}

TEST_CASE("components match the reachability oracle on random graphs") {
    std::mt19937 rng(211);
    for (int iter = 0; iter < 100; ++iter) {
        std::uniform_int_distribution<int> nodeCount(1, 30);
        const int n = nodeCount(rng);
        std::uniform_int_distribution<int> edgeCount(0, 2 * n);
        std::uniform_int_distribution<int> pick(0, n - 1);

        std::vector<Mention> ms;
        for (int i = 0; i < n; ++i)
            ms.push_back(mk("n" + std::to_string(100 + i)));
        std::vector<std::pair<int, int>> rawEdges;
        std::vector<PairDecision> decisions;
        const int e = edgeCount(rng);
        for (int k = 0; k < e; ++k) {
            int a = pick(rng), b = pick(rng);
            if (a == b) continue;
            rawEdges.emplace_back(a, b);
            decisions.push_back(edge(ms[static_cast<std::size_t>(std::min(a, b))].id,
                                     ms[static_cast<std::size_t>(std::max(a, b))].id));
        }

        auto reach = oracle::reachability(n, rawEdges);
        auto clusters = connected_components(decisions, ms);

        std::map<std::string, std::size_t> clusterOf;
        for (std::size_t c = 0; c < clusters.size(); ++c)
            for (const auto& id : clusters[c].members) clusterOf[id] = c;

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const bool together = clusterOf.at(ms[static_cast<std::size_t>(i)].id) ==
                                      clusterOf.at(ms[static_cast<std::size_t>(j)].id);
                CHECK(together == reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            }
    }
}

TEST_CASE("component output invariant under edge order and shard count") {
    std::mt19937 rng(223);
    std::vector<Mention> ms;
    for (int i = 0; i < 40; ++i) ms.push_back(mk("n" + std::to_string(100 + i)));
    std::vector<PairDecision> decisions;
    std::uniform_int_distribution<int> pick(0, 39);
    for (int k = 0; k < 60; ++k) {
        int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        decisions.push_back(edge(ms[static_cast<std::size_t>(std::min(a, b))].id,
                                 ms[static_cast<std::size_t>(std::max(a, b))].id));
    }
    auto base = connected_components(decisions, ms, 1);

    auto shuffled = decisions;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t shards : {1u, 2u, 4u, 7u}) {
        auto other = connected_components(shuffled, ms, shards);
        REQUIRE(other.size() == base.size());
        for (std::size_t c = 0; c < base.size(); ++c) {
            CHECK(other[c].members == base[c].members);
            CHECK(other[c].id == base[c].id);
        }
    }
}

TEST_CASE("partition property: every mention in exactly one cluster") {
    std::vector<Mention> ms = {mk("a"), mk("b"), mk("c")};
    auto clusters = connected_components({edge("a", "c")}, ms);
    std::set<std::string> seen;
    for (const auto& c : clusters) {
        CHECK_FALSE(c.members.empty());
        for (const auto& id : c.members) CHECK(seen.insert(id).second);
    }
    CHECK(seen.size() == 3);
}

namespace {

PairScore scored(std::string a, std::string b, double s) {
    PairScore ps;
    ps.pair.a = std::move(a);
    ps.pair.b = std::move(b);
    ps.combined = s;
    return ps;
}

}  // namespace

TEST_CASE("agglomerative single link") {
    std::vector<Mention> ms = {mk("a"), mk("b"), mk("c"), mk("d"), mk("e")};

    SECTION("stop threshold 1.0 with imperfect scores keeps singletons") {
        auto clusters = agglomerative_single_link(
            ms, {scored("a", "b", 0.9), scored("c", "d", 0.99)}, 1.0);
        CHECK(clusters.size() == 5);
    }

    SECTION("stop threshold 0 merges every scored component") {
        auto clusters = agglomerative_single_link(
            ms, {scored("a", "b", 0.1), scored("b", "c", 0.05)}, 0.0);
        REQUIRE(clusters.size() == 3);  // {a,b,c}, {d}, {e}
        CHECK(clusters[0].members == std::vector<std::string>{"a", "b", "c"});
    }

    SECTION("hand-traced merge sequence on a 5-mention fixture") {
        // Scores: (a,b)=0.9, (b,c)=0.8, (d,e)=0.85, (c,d)=0.4.
        // Greedy: merge (a,b) at 0.9, then (d,e) at 0.85, then {a,b} with c
        // at 0.8, and stop before 0.4 with threshold 0.5.
        auto clusters = agglomerative_single_link(ms,
                                                  {scored("a", "b", 0.9), scored("b", "c", 0.8),
                                                   scored("d", "e", 0.85), scored("c", "d", 0.4)},
                                                  0.5);
        REQUIRE(clusters.size() == 2);
        CHECK(clusters[0].members == std::vector<std::string>{"a", "b", "c"});
        CHECK(clusters[1].members == std::vector<std::string>{"d", "e"});
    }

    SECTION("deterministic tie-break by canonical pair order") {
        auto c1 = agglomerative_single_link(
            ms, {scored("a", "b", 0.7), scored("a", "c", 0.7), scored("d", "e", 0.7)}, 0.7);
        auto c2 = agglomerative_single_link(
            ms, {scored("d", "e", 0.7), scored("a", "c", 0.7), scored("a", "b", 0.7)}, 0.7);
        REQUIRE(c1.size() == c2.size());
        for (std::size_t i = 0; i < c1.size(); ++i) CHECK(c1[i].members == c2[i].members);
    }
}

TEST_CASE("streaming clustering") {
    auto surfaceSim = [](const Mention& a, const Mention& b) {
        return a.surface == b.surface ? 1.0 : 0.0;
    };

    SECTION("radius 0 with large K keeps one cluster per distinct surface") {
        std::vector<Mention> stream = {mk("1", "x"), mk("2", "y"), mk("3", "x"), mk("4", "z")};
        StreamingConfig cfg{100, 0.0};
        auto clusters = streaming_cluster(stream, surfaceSim, cfg);
        CHECK(clusters.size() == 3);
    }

    SECTION("identical surfaces collapse regardless of K") {
        std::vector<Mention> stream;
        for (int i = 0; i < 10; ++i) stream.push_back(mk(std::to_string(i), "same"));
        StreamingConfig cfg{1, 0.0};
        auto clusters = streaming_cluster(stream, surfaceSim, cfg);
        REQUIRE(clusters.size() == 1);
        CHECK(clusters[0].members.size() == 10);
    }

    SECTION("K < 1 is a config error") {
        CHECK_THROWS_AS(streaming_cluster({}, surfaceSim, StreamingConfig{0, 0.3}), ConfigError);
    }

    SECTION("doubling keeps cluster count at K and radius near optimal") {
        // 20 synthetic points on a line, encoded in the surface; the
        // similarity is a true metric: 1 - |x-y| / 100.
        std::vector<double> xs = {1, 2, 3, 4, 30, 31, 32, 33, 34, 35,
                                  70, 71, 72, 74, 75, 76, 77, 78, 96, 99};
        std::vector<Mention> stream;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            Mention m = mk("p" + std::to_string(10 + i), std::to_string(xs[i]));
            stream.push_back(m);
        }
        auto lineSim = [&](const Mention& a, const Mention& b) {
            return 1.0 - std::abs(std::stod(a.surface) - std::stod(b.surface)) / 100.0;
        };

        StreamingConfig cfg{3, 0.02};
        std::vector<std::string> centers;
        auto clusters = streaming_cluster(stream, lineSim, cfg, &centers);
        REQUIRE(clusters.size() <= 3);
        REQUIRE(centers.size() == clusters.size());

        const double algRadius = max_cluster_radius(clusters, centers, stream, lineSim);

        std::vector<std::vector<double>> dist(xs.size(), std::vector<double>(xs.size()));
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < xs.size(); ++j)
                dist[i][j] = std::abs(xs[i] - xs[j]) / 100.0;
        const double opt = oracle::optimal_k_center_radius(dist, 3);
        CHECK(algRadius <= 8.0 * opt + 1e-12);

        // Partition property holds for the stream.
        std::size_t total = 0;
        for (const auto& c : clusters) total += c.members.size();
        CHECK(total == stream.size());
    }
}
