// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cdcr/error.hpp"
#include "cdcr/text.hpp"

namespace cdcr {

// Embedded append-only record store backing the pipeline's knowledge base.
// Records live in per-kind segment files; a JSON manifest lists committed
// segments with checksums. Writers append segments and commit the manifest
// atomically at stage end, so segment files from an aborted run are simply
// absent from the manifest and ignored on reopen.
class EntityStore {
public:
    struct Segment {
        std::string kind;
        std::string file;
        std::uint64_t records = 0;
        std::uint64_t checksum = 0;
    };

    struct Access {
        std::string stage;
        std::string kind;
        bool write = false;
    };

    explicit EntityStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
        const auto manifestPath = dir_ / "manifest.json";
        if (std::filesystem::exists(manifestPath)) load_manifest(manifestPath);
    }

    const std::filesystem::path& dir() const { return dir_; }

    void begin_stage(std::string name) { stage_ = std::move(name); }
    const std::string& current_stage() const { return stage_; }

    // Appends one segment of `kind` holding newline-terminated records.
    // The segment becomes visible to readers only after commit().
    void write_segment(std::string_view kind, const std::string& payload,
                       std::uint64_t recordCount) {
        Segment seg;
        seg.kind = std::string(kind);
        seg.records = recordCount;
        seg.checksum = text::fnv1a64(payload);
        seg.file = seg.kind + "-" + std::to_string(next_index(seg.kind)) + ".seg";

        const auto path = dir_ / seg.file;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write store segment: " + path.string());
        out << payload;
        out.close();
        if (!out) throw DataError("short write on store segment: " + path.string());

        pending_.push_back(std::move(seg));
        trace_.push_back({stage_, std::string(kind), true});
    }

    // Publishes pending segments and the completed stage atomically
    // (manifest written to a temp file, then renamed).
    void commit() {
        for (auto& seg : pending_) segments_.push_back(std::move(seg));
        pending_.clear();
        if (!stage_.empty() &&
            std::find(completedStages_.begin(), completedStages_.end(), stage_) ==
                completedStages_.end())
            completedStages_.push_back(stage_);

        nlohmann::json j;
        j["version"] = 1;
        j["stages"] = completedStages_;
        auto& segs = j["segments"] = nlohmann::json::array();
        for (const auto& s : segments_) {
            segs.push_back({{"kind", s.kind},
                            {"file", s.file},
                            {"records", s.records},
                            {"checksum", to_hex(s.checksum)}});
        }
        const auto tmp = dir_ / "manifest.json.tmp";
        const auto final_ = dir_ / "manifest.json";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw DataError("cannot write manifest: " + tmp.string());
            out << j.dump(2) << "\n";
        }
        std::filesystem::rename(tmp, final_);
    }

    bool stage_completed(std::string_view name) const {
        return std::find(completedStages_.begin(), completedStages_.end(), name) !=
               completedStages_.end();
    }

    std::uint64_t record_count(std::string_view kind) const {
        std::uint64_t n = 0;
        for (const auto& s : segments_)
            if (s.kind == kind) n += s.records;
        return n;
    }

    bool has_kind(std::string_view kind) const {
        for (const auto& s : segments_)
            if (s.kind == kind) return true;
        return false;
    }

    // Reads all committed records of `kind` (concatenated segment payloads),
    // validating checksums.
    std::string read_all(std::string_view kind) {
        trace_.push_back({stage_, std::string(kind), false});
        std::string all;
        for (const auto& s : segments_) {
            if (s.kind != kind) continue;
            const auto path = dir_ / s.file;
            std::ifstream in(path, std::ios::binary);
            if (!in) throw DataError("missing store segment: " + path.string());
            std::ostringstream buf;
            buf << in.rdbuf();
            std::string payload = buf.str();
            if (text::fnv1a64(payload) != s.checksum)
                throw DataError("store corruption: checksum mismatch in segment " + s.file);
            all += payload;
        }
        return all;
    }

    // Streams committed records of `kind` line by line.
    void for_each_line(std::string_view kind, const std::function<void(std::string_view)>& fn) {
        const std::string all = read_all(kind);
        std::size_t pos = 0;
        while (pos < all.size()) {
            std::size_t nl = all.find('\n', pos);
            if (nl == std::string::npos) nl = all.size();
            if (nl > pos) fn(std::string_view(all).substr(pos, nl - pos));
            pos = nl + 1;
        }
    }

    // Linear scan lookup by a caller-supplied key extractor; desk-scale
    // collections keep this simple path adequate.
    std::optional<std::string> find_line(std::string_view kind,
                                         const std::function<bool(std::string_view)>& match) {
        std::optional<std::string> found;
        for_each_line(kind, [&](std::string_view line) {
            if (!found && match(line)) found = std::string(line);
        });
        return found;
    }

    const std::vector<Access>& access_trace() const { return trace_; }
    const std::vector<Segment>& segments() const { return segments_; }

private:
    static std::string to_hex(std::uint64_t v) {
        char buf[19];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
        return buf;
    }

    static std::uint64_t from_hex(const std::string& s) {
        return std::stoull(s, nullptr, 16);
    }

    std::size_t next_index(const std::string& kind) const {
        std::size_t n = 0;
        for (const auto& s : segments_)
            if (s.kind == kind) ++n;
        for (const auto& s : pending_)
            if (s.kind == kind) ++n;
        return n;
    }

    void load_manifest(const std::filesystem::path& path) {
        std::ifstream in(path);
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw DataError("corrupt store manifest: " + path.string());
        if (j.contains("stages"))
            completedStages_ = j["stages"].get<std::vector<std::string>>();
        for (const auto& s : j["segments"]) {
            Segment seg;
            seg.kind = s.at("kind").get<std::string>();
            seg.file = s.at("file").get<std::string>();
            seg.records = s.at("records").get<std::uint64_t>();
            seg.checksum = from_hex(s.at("checksum").get<std::string>());
            segments_.push_back(std::move(seg));
        }
    }

    std::filesystem::path dir_;
    std::string stage_;
    std::vector<Segment> segments_;
    std::vector<Segment> pending_;
    std::vector<std::string> completedStages_;
    std::vector<Access> trace_;
};

}  // namespace cdcr
