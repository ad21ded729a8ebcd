#include "latpar/cache.hpp"

#include <fstream>

#include "latpar/errors.hpp"
#include "latpar/report.hpp"

namespace latpar {

ResultCache::ResultCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in.is_open()) return;  // a missing file is an empty cache
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("key") || !j.contains("payload")) {
            throw InvalidArgument("cache file " + path_ + " is corrupt at line " +
                                  std::to_string(lineno));
        }
        entries_.push_back({j["key"], j["payload"]});
    }
}

nlohmann::json ResultCache::make_key(const std::string& task, const nlohmann::json& params) {
    return {{"task", task}, {"params", params}, {"version", kVersion}};
}

std::optional<nlohmann::json> ResultCache::lookup(const nlohmann::json& key) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->key == key) return it->payload;
    }
    return std::nullopt;
}

void ResultCache::store(const nlohmann::json& key, const nlohmann::json& payload) {
    std::ofstream out(path_, std::ios::app);
    if (!out.is_open()) throw InvalidArgument("cannot open cache file " + path_);
    out << nlohmann::json{{"key", key}, {"payload", payload}}.dump() << "\n";
    entries_.push_back({key, payload});
}

nlohmann::json ResultCache::strip_elapsed(nlohmann::json j) {
    if (j.is_object()) {
        j.erase("elapsed_ms");
        for (auto& [k, v] : j.items()) v = strip_elapsed(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_elapsed(v);
    }
    return j;
}

}  // namespace latpar
