// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cdcr/error.hpp"
#include "cdcr/text.hpp"

namespace cdcr {

// Runs shard indices [0, shardCount) across a worker pool. Workers pull the
// next shard from a shared counter; fn(shard, worker) must write results
// into per-shard slots so the merge order is the shard order, independent
// of scheduling.
inline void run_sharded(std::size_t shardCount, std::size_t workers,
                        const std::function<void(std::size_t shard, std::size_t worker)>& fn) {
    if (workers < 1) throw ConfigError("worker count must be >= 1");
    if (shardCount == 0) return;
    if (workers == 1) {
        for (std::size_t s = 0; s < shardCount; ++s) fn(s, 0);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr firstError;
    std::mutex errorMutex;
    const std::size_t n = std::min(workers, shardCount);
    pool.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
            while (true) {
                const std::size_t s = next.fetch_add(1);
                if (s >= shardCount) break;
                try {
                    fn(s, w);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(errorMutex);
                    if (!firstError) firstError = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (firstError) std::rethrow_exception(firstError);
}

// Shard boundaries for n items at the given shard size.
struct ShardPlan {
    std::size_t itemCount = 0;
    std::size_t shardSize = 1;

    std::size_t shards() const {
        return itemCount == 0 ? 0 : (itemCount + shardSize - 1) / shardSize;
    }
    std::size_t begin(std::size_t shard) const { return shard * shardSize; }
    std::size_t end(std::size_t shard) const {
        return std::min(itemCount, (shard + 1) * shardSize);
    }
};

// Maps each item of `items` through fn on the worker pool; results arrive
// concatenated in input order regardless of worker count.
template <typename In, typename Out>
std::vector<Out> parallel_map(const std::vector<In>& items, std::size_t workers,
                              std::size_t shardSize,
                              const std::function<Out(const In&)>& fn,
                              std::vector<std::uint64_t>* perWorkerCounts = nullptr) {
    ShardPlan plan{items.size(), std::max<std::size_t>(1, shardSize)};
    std::vector<Out> out(items.size());
    std::vector<std::uint64_t> counts(std::max<std::size_t>(workers, 1), 0);
    run_sharded(plan.shards(), workers, [&](std::size_t shard, std::size_t worker) {
        for (std::size_t i = plan.begin(shard); i < plan.end(shard); ++i) {
            out[i] = fn(items[i]);
            ++counts[worker];
        }
    });
    if (perWorkerCounts) *perWorkerCounts = std::move(counts);
    return out;
}

// Stable worker assignment for a keyed group.
inline std::size_t worker_for_key(std::string_view key, std::size_t workers) {
    return workers <= 1 ? 0 : static_cast<std::size_t>(text::fnv1a64(key) % workers);
}

// Shuffle phase: groups records by key; each group's contents are sorted
// canonically and the group list is ordered by key, so the result is
// independent of worker count and input order.
template <typename Record, typename KeyFn>
std::map<std::string, std::vector<Record>> shuffle_by_key(std::vector<Record> records,
                                                          KeyFn&& keyFn) {
    std::map<std::string, std::vector<Record>> groups;
    for (auto& r : records) {
        std::string key = keyFn(r);
        groups[std::move(key)].push_back(std::move(r));
    }
    for (auto& [key, group] : groups) std::sort(group.begin(), group.end());
    return groups;
}

}  // namespace cdcr
