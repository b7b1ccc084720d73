#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bwu/grid.hpp"

namespace bwu::harness {

struct CorpusEntry {
    std::string label;
    std::string catalog;
    std::vector<double> params;
    std::uint64_t seed = 0;
};

struct CorpusSpec {
    int dim = 1;
    double h = 1.0 / 64.0;
    double r_max = 8.0;
    std::vector<CorpusEntry> entries;
};

/// The standard 12-function mix: smooth, rough, growing and random entries.
CorpusSpec default_corpus_spec(int dim = 1, double h = 1.0 / 64.0, double r_max = 8.0);

/// Instantiates the catalog entries. Requires at least 8 entries covering
/// the smooth/rough/growing/random groups.
std::vector<GridFunction> make_corpus(const CorpusSpec& spec);

CorpusSpec corpus_spec_from_json(const nlohmann::json& doc);

/// Grid file format: <label>.json manifest next to <label>.csv samples.
void write_grid_function(const GridFunction& f, const std::filesystem::path& dir);
GridFunction load_grid_function(const std::filesystem::path& manifest);

} // namespace bwu::harness
