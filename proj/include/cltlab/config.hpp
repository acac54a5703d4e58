#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cltlab/errors.hpp"

namespace cltlab {

/// A parsed experiment configuration: one JSON document with a schema version,
/// addressed by dotted keys. Every retrieval error names the offending key.
class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_json(nlohmann::json root, std::string origin = "<inline>");

    /// Applies "a.b.c=value" (value parsed as JSON when possible, else string).
    void apply_override(const std::string& assignment);

    const nlohmann::json& root() const { return root_; }
    const std::string& origin() const { return origin_; }

    bool has(const std::string& dotted) const { return find(dotted) != nullptr; }
    const nlohmann::json* find(const std::string& dotted) const;

    template <class T>
    T require(const std::string& dotted) const {
        const nlohmann::json* node = find(dotted);
        if (!node) throw ConfigError("config key '" + dotted + "': missing");
        try {
            return node->get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key '" + dotted + "': " + e.what());
        }
    }

    template <class T>
    T get_or(const std::string& dotted, T fallback) const {
        const nlohmann::json* node = find(dotted);
        if (!node) return fallback;
        try {
            return node->get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key '" + dotted + "': " + e.what());
        }
    }

private:
    nlohmann::json root_;
    std::string origin_;
};

} // namespace cltlab
