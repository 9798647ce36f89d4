// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
// Independent reference implementations used only by tests. These evaluate
// the defining formulas directly and must stay decoupled from the library's
// production code paths.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

// Textbook top-down evaluation of the edit distance recurrence, memoized on
// (i, j). Independent of the two-row iterative implementation under test.
inline std::size_t edit_distance_recursive(std::string_view a, std::string_view b) {
    std::vector<std::vector<std::int64_t>> memo(a.size() + 1,
                                                std::vector<std::int64_t>(b.size() + 1, -1));
    auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
        if (i == 0) return j;
        if (j == 0) return i;
        auto& slot = memo[i][j];
        if (slot >= 0) return static_cast<std::size_t>(slot);
        const std::size_t sub = self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
        const std::size_t del = self(self, i - 1, j) + 1;
        const std::size_t ins = self(self, i, j - 1) + 1;
        const std::size_t best = std::min({sub, del, ins});
        slot = static_cast<std::int64_t>(best);
        return best;
    };
    return rec(rec, a.size(), b.size());
}

// B-cubed by the defining per-mention loop with explicit set intersections.
struct PrfTriple {
    double p = 0, r = 0, f = 0;
};

using Clustering = std::vector<std::vector<std::string>>;

inline PrfTriple bcubed_bruteforce(const Clustering& system, const Clustering& gold) {
    std::map<std::string, std::set<std::string>> sysSet, goldSet;
    for (const auto& c : system) {
        std::set<std::string> s(c.begin(), c.end());
        for (const auto& m : c) sysSet[m] = s;
    }
    for (const auto& c : gold) {
        std::set<std::string> s(c.begin(), c.end());
        for (const auto& m : c) goldSet[m] = s;
    }
    double pSum = 0, rSum = 0;
    std::size_t n = 0;
    for (const auto& [m, sys] : sysSet) {
        const auto& g = goldSet.at(m);
        std::size_t inter = 0;
        for (const auto& x : sys)
            if (g.count(x)) ++inter;
        pSum += static_cast<double>(inter) / static_cast<double>(sys.size());
        rSum += static_cast<double>(inter) / static_cast<double>(g.size());
        ++n;
    }
    PrfTriple t;
    if (n == 0) {
        t.p = t.r = t.f = 1.0;
        return t;
    }
    t.p = pSum / static_cast<double>(n);
    t.r = rSum / static_cast<double>(n);
    t.f = t.p + t.r > 0 ? 2 * t.p * t.r / (t.p + t.r) : 0.0;
    return t;
}

// Link-based F by explicit pair-set construction.
inline PrfTriple link_f_bruteforce(const Clustering& system, const Clustering& gold) {
    auto links = [](const Clustering& cs) {
        std::set<std::pair<std::string, std::string>> out;
        for (const auto& c : cs) {
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = i + 1; j < c.size(); ++j)
                    out.emplace(std::min(c[i], c[j]), std::max(c[i], c[j]));
        }
        return out;
    };
    const auto sl = links(system);
    const auto gl = links(gold);
    std::size_t common = 0;
    for (const auto& l : sl)
        if (gl.count(l)) ++common;
    PrfTriple t;
    t.p = sl.empty() ? 1.0 : static_cast<double>(common) / static_cast<double>(sl.size());
    t.r = gl.empty() ? 1.0 : static_cast<double>(common) / static_cast<double>(gl.size());
    t.f = t.p + t.r > 0 ? 2 * t.p * t.r / (t.p + t.r) : 0.0;
    return t;
}

// All set partitions of {0..n-1} via restricted growth strings.
inline std::vector<std::vector<std::vector<int>>> all_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    auto emit = [&] {
        int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<int>> p(static_cast<std::size_t>(blocks));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i);
        out.push_back(std::move(p));
    };
    auto rec = [&](auto&& self, int i, int maxSoFar) -> void {
        if (i == n) {
            emit();
            return;
        }
        for (int v = 0; v <= maxSoFar + 1; ++v) {
            rgs[static_cast<std::size_t>(i)] = v;
            self(self, i + 1, std::max(maxSoFar, v));
        }
    };
    if (n == 0) {
        out.push_back({});
        return out;
    }
    rec(rec, 1, 0);  // first element always in block 0
    return out;
}

// Reachability closure over an undirected edge list (Floyd-Warshall).
inline std::vector<std::vector<bool>> reachability(int n,
                                                   const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                         std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i) reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
    for (auto [a, b] : edges) {
        reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
        reach[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
                    reach[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
                    reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    return reach;
}

// Optimal k-center radius by exhaustive center enumeration.
inline double optimal_k_center_radius(const std::vector<std::vector<double>>& dist, int k) {
    const int n = static_cast<int>(dist.size());
    std::vector<int> centers;
    double best = 1e300;
    auto evaluate = [&] {
        double radius = 0;
        for (int p = 0; p < n; ++p) {
            double nearest = 1e300;
            for (int c : centers)
                nearest = std::min(nearest, dist[static_cast<std::size_t>(p)][static_cast<std::size_t>(c)]);
            radius = std::max(radius, nearest);
        }
        best = std::min(best, radius);
    };
    auto rec = [&](auto&& self, int start, int left) -> void {
        if (left == 0) {
            evaluate();
            return;
        }
        for (int c = start; c <= n - left; ++c) {
            centers.push_back(c);
            self(self, c + 1, left - 1);
            centers.pop_back();
        }
    };
    rec(rec, 0, k);
    return best;
}

}  // namespace oracle
