// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cdcr/extract.hpp"

namespace cdcr {

// Blocking key: mentions are only compared within the same (major, subtype)
// group.
struct PartitionKey {
    EntityMajor major = EntityMajor::person;
    std::string subtype;

    auto operator<=>(const PartitionKey&) const = default;

    std::string str() const {
        std::string s(to_string(major));
        s.push_back('/');
        s += subtype;
        return s;
    }
};

struct Partition {
    PartitionKey key;
    std::vector<std::string> members;  // mention ids, sorted ascending
};

struct CandidatePair {
    std::string a;  // canonical: a < b
    std::string b;
    PartitionKey key;

    bool operator==(const CandidatePair&) const = default;
};

struct BlockConfig {
    // Relaxes blocking to the major type only (empty-subtype mentions then
    // pair with subtyped ones of the same major type).
    bool mergeEmptySubtype = false;
};

inline PartitionKey partition_key_for(const Mention& m, const BlockConfig& config = {}) {
    return PartitionKey{m.type.major, config.mergeEmptySubtype ? "" : m.type.subtype};
}

// Groups mentions by (major, subtype); members sorted by id. Every mention
// lands in exactly one partition.
inline std::vector<Partition> partition_mentions(const std::vector<Mention>& mentions,
                                                 const BlockConfig& config = {}) {
    std::map<PartitionKey, std::vector<std::string>> groups;
    for (const Mention& m : mentions)
        groups[partition_key_for(m, config)].push_back(m.id);
    std::vector<Partition> out;
    out.reserve(groups.size());
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end());
        out.push_back(Partition{key, std::move(members)});
    }
    return out;
}

inline std::uint64_t pair_count(std::uint64_t n) { return n * (n - 1) / 2; }

inline std::uint64_t pair_count(const Partition& p) {
    return pair_count(static_cast<std::uint64_t>(p.members.size()));
}

// Streams the C(n,2) candidate pairs of a partition in canonical order
// (members are sorted, so i<j enumeration is already sorted by (a,b)).
// Pairs are never materialized as a whole.
template <typename Fn>
void for_each_pair(const Partition& p, Fn&& fn) {
    for (std::size_t i = 0; i + 1 < p.members.size(); ++i)
        for (std::size_t j = i + 1; j < p.members.size(); ++j)
            fn(CandidatePair{p.members[i], p.members[j], p.key});
}

// Materializing helper for tests and small partitions.
inline std::vector<CandidatePair> generate_pairs(const Partition& p) {
    std::vector<CandidatePair> out;
    out.reserve(pair_count(p));
    for_each_pair(p, [&](CandidatePair pair) { out.push_back(std::move(pair)); });
    return out;
}

// Maps a flat pair index in [0, C(n,2)) to its (i, j) member indices,
// i < j, following the same enumeration order as for_each_pair. Lets
// workers carve the pair stream into ranges without coordination.
inline std::pair<std::uint64_t, std::uint64_t> pair_from_index(std::uint64_t index,
                                                               std::uint64_t n) {
    // Row i starts at offset i*n - i*(i+1)/2 - i... solved by scanning rows
    // via the closed form: find largest i with C(n,2) - C(n-i,2) <= index.
    std::uint64_t i = 0;
    std::uint64_t rowStart = 0;
    std::uint64_t lo = 0, hi = n - 1;
    while (lo < hi) {
        const std::uint64_t mid = (lo + hi) / 2;
        const std::uint64_t start = pair_count(n) - pair_count(n - mid);
        if (start <= index)
            lo = mid + 1;
        else
            hi = mid;
    }
    i = lo - 1;
    rowStart = pair_count(n) - pair_count(n - i);
    const std::uint64_t j = i + 1 + (index - rowStart);
    return {i, j};
}

}  // namespace cdcr
