#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace bwu::harness {

/// Configuration problems carry exit code 3 at the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Experiment description: a JSON document with a `kind` field plus the
/// experiment's parameters. Canonical text round-trips bit-exactly.
class ExperimentConfig {
public:
    static ExperimentConfig from_file(const std::filesystem::path& path);
    static ExperimentConfig from_json(nlohmann::json doc);
    static ExperimentConfig from_text(const std::string& text);

    const nlohmann::json& doc() const { return doc_; }
    std::string kind() const;
    std::string canonical_text() const;
    std::uint64_t hash() const; // FNV-1a of the canonical text

    /// Field access with a named error on absence.
    const nlohmann::json& need(const std::string& key) const;

private:
    nlohmann::json doc_;
};

std::uint64_t fnv1a64(const std::string& text);

} // namespace bwu::harness
