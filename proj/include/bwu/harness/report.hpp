#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bwu::harness {

/// CSV table: a fixed header plus formatted rows, written deterministically.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    std::string to_text() const;
    void write(const std::filesystem::path& path) const;
    std::size_t row_count() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string csv_num(double v);

struct RunReport {
    std::string kind;
    std::uint64_t config_hash = 0;
    int assertions_passed = 0;
    int assertions_failed = 0;
    std::vector<std::string> failures;
    std::vector<std::string> csv_files;
    nlohmann::json summary;
    double wall_ms = 0.0;

    bool ok() const { return assertions_failed == 0; }
    void check(bool condition, const std::string& what);
    void write_summary(const std::filesystem::path& path) const;
};

} // namespace bwu::harness
