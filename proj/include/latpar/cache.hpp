#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace latpar {

// Append-only JSON-lines result store. Each line holds {"key": {...},
// "payload": {...}} where the key is (task, params, version). Lookups scan
// the loaded entries last-match-first so re-stored results win.
class ResultCache {
public:
    explicit ResultCache(std::string path);

    static nlohmann::json make_key(const std::string& task, const nlohmann::json& params);

    std::optional<nlohmann::json> lookup(const nlohmann::json& key) const;
    void store(const nlohmann::json& key, const nlohmann::json& payload);

    struct Entry {
        nlohmann::json key;
        nlohmann::json payload;
    };
    const std::vector<Entry>& entries() const { return entries_; }
    const std::string& path() const { return path_; }

    // Removes volatile timing fields so payloads can be compared across
    // runs. threads is kept: it is part of the run parameters.
    static nlohmann::json strip_elapsed(nlohmann::json j);

private:
    std::string path_;
    std::vector<Entry> entries_;
};

}  // namespace latpar
