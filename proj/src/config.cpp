#include "cltlab/config.hpp"

#include <fstream>
#include <sstream>

namespace cltlab {

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file '" + path + "': cannot open");
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    return from_json(std::move(root), path);
}

Config Config::from_json(nlohmann::json root, std::string origin) {
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    Config c;
    c.root_ = std::move(root);
    c.origin_ = std::move(origin);
    return c;
}

const nlohmann::json* Config::find(const std::string& dotted) const {
    const nlohmann::json* node = &root_;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object()) return nullptr;
        const auto it = node->find(part);
        if (it == node->end()) return nullptr;
        node = &*it;
        if (dot == std::string::npos) return node;
        start = dot + 1;
    }
    return nullptr;
}

void Config::apply_override(const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception&) {
        value = raw; // plain string
    }
    nlohmann::json* node = &root_;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("override '" + assignment + "': empty key segment");
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        if (!node->is_object() && !node->is_null())
            throw ConfigError("override '" + assignment + "': '" + key.substr(0, dot) + "' is not an object");
        start = dot + 1;
    }
}

} // namespace cltlab
