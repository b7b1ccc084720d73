#include "bwu/harness/config.hpp"

#include <fstream>

namespace bwu::harness {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_text(text);
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config is not valid JSON");
    return from_json(std::move(doc));
}

ExperimentConfig ExperimentConfig::from_json(nlohmann::json doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw ConfigError("config needs a string field 'kind'");
    ExperimentConfig cfg;
    cfg.doc_ = std::move(doc);
    return cfg;
}

std::string ExperimentConfig::kind() const { return doc_.at("kind").get<std::string>(); }

std::string ExperimentConfig::canonical_text() const {
    // sorted keys, no whitespace: stable across round trips
    return doc_.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical_text()); }

const nlohmann::json& ExperimentConfig::need(const std::string& key) const {
    if (!doc_.contains(key))
        throw ConfigError("config field missing: '" + key + "' (kind=" + kind() + ")");
    return doc_.at(key);
}

} // namespace bwu::harness
