#include "bwu/harness/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bwu::harness {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("CsvTable: row width mismatch");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::to_text() const {
    std::string out;
    auto quote = [](const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string quoted = "\"";
        for (char c : cell) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        return quoted;
    };
    auto append_line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += quote(cells[i]);
        }
        out += '\n';
    };
    append_line(header_);
    for (const auto& row : rows_) append_line(row);
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write CSV: " + path.string());
    out << to_text();
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void RunReport::check(bool condition, const std::string& what) {
    if (condition) {
        ++assertions_passed;
    } else {
        ++assertions_failed;
        failures.push_back(what);
    }
}

void RunReport::write_summary(const std::filesystem::path& path) const {
    nlohmann::json doc;
    doc["kind"] = kind;
    doc["config_hash"] = config_hash;
    doc["assertions_passed"] = assertions_passed;
    doc["assertions_failed"] = assertions_failed;
    doc["failures"] = failures;
    doc["csv_files"] = csv_files;
    doc["summary"] = summary;
    doc["wall_ms"] = wall_ms; // only nondeterministic field
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary: " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace bwu::harness
