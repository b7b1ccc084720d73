#include "bwu/harness/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "bwu/harness/config.hpp"

namespace bwu::harness {

CorpusSpec default_corpus_spec(int dim, double h, double r_max) {
    CorpusSpec spec;
    spec.dim = dim;
    spec.h = h;
    spec.r_max = r_max;
    spec.entries = {
        {"const_one", "constant", {1.0}, 0},
        {"indicator_q1", "indicator_cube", {1.0}, 0},
        {"indicator_q2", "indicator_cube", {2.0}, 0},
        {"step_half", "step", {0.5}, 0},
        {"bump_q1", "bump", {1.0}, 0},
        {"bump_q3", "bump", {3.0}, 0},
        {"sine_k2_q2", "sine", {2.0, 2.0}, 0},
        {"sine_k5_q1", "sine", {5.0, 1.0}, 0},
        {"powerabs_075", "power_abs", {0.75}, 0},
        {"powerabs_neg05_q1", "power_abs", {-0.5, 1.0}, 0},
        {"random_q1_s7", "random_field", {1.0}, 7},
        {"random_q4_s11", "random_field", {4.0}, 11},
    };
    return spec;
}

std::vector<GridFunction> make_corpus(const CorpusSpec& spec) {
    if (spec.entries.empty()) throw ConfigError("corpus spec has no entries");
    if (spec.entries.size() < 8)
        throw ConfigError("corpus spec needs at least 8 entries");
    std::set<std::string> groups;
    for (const auto& e : spec.entries) {
        if (e.catalog == "bump" || e.catalog == "sine" || e.catalog == "constant")
            groups.insert("smooth");
        else if (e.catalog == "indicator_cube" || e.catalog == "step")
            groups.insert("rough");
        else if (e.catalog == "power_abs")
            groups.insert("growing");
        else if (e.catalog == "random_field")
            groups.insert("random");
    }
    for (const char* need : {"smooth", "rough", "growing", "random"})
        if (!groups.count(need))
            throw ConfigError(std::string("corpus spec misses the ") + need + " group");

    std::vector<GridFunction> corpus;
    std::set<std::string> labels;
    corpus.reserve(spec.entries.size());
    for (const auto& e : spec.entries) {
        if (!labels.insert(e.label).second)
            throw ConfigError("duplicate corpus label: " + e.label);
        corpus.push_back(make_grid_function(e.catalog, e.params, spec.dim, spec.h,
                                            spec.r_max, e.seed)
                             .with_label(e.label));
    }
    return corpus;
}

CorpusSpec corpus_spec_from_json(const nlohmann::json& doc) {
    CorpusSpec spec;
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        spec.dim = g.value("dim", 1);
        spec.h = g.value("h", 1.0 / 64.0);
        spec.r_max = g.value("r_max", 8.0);
    }
    if (!doc.contains("entries") || doc.at("entries") == "default") {
        auto dflt = default_corpus_spec(spec.dim, spec.h, spec.r_max);
        spec.entries = std::move(dflt.entries);
        return spec;
    }
    for (const auto& e : doc.at("entries")) {
        CorpusEntry entry;
        entry.label = e.at("label").get<std::string>();
        entry.catalog = e.at("catalog").get<std::string>();
        for (const auto& p : e.value("params", nlohmann::json::array()))
            entry.params.push_back(p.get<double>());
        entry.seed = e.value("seed", 0ULL);
        spec.entries.push_back(std::move(entry));
    }
    return spec;
}

void write_grid_function(const GridFunction& f, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["dim"] = f.dim();
    manifest["h"] = f.h();
    manifest["r_max"] = f.r_max();
    manifest["label"] = f.label();
    manifest["count"] = f.cell_count();
    manifest["samples_csv"] = f.label() + ".csv";
    {
        std::ofstream out(dir / (f.label() + ".json"), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write grid manifest");
        out << manifest.dump(2) << '\n';
    }
    std::ofstream out(dir / (f.label() + ".csv"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write grid samples");
    char buf[40];
    const int n = f.cells_per_axis();
    const int rows = f.dim() == 1 ? 1 : n;
    for (int iy = 0; iy < rows; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double v = f.dim() == 1 ? f.at(ix) : f.at(ix, iy);
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << (ix ? "," : "") << buf;
        }
        out << '\n';
    }
}

GridFunction load_grid_function(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path.string());
    nlohmann::json manifest = nlohmann::json::parse(in);
    const auto dir = manifest_path.parent_path();
    const std::string csv_name = manifest.at("samples_csv").get<std::string>();

    std::ifstream csv(dir / csv_name);
    if (!csv) throw std::runtime_error("cannot open samples: " + csv_name);
    std::vector<double> samples;
    std::string line;
    while (std::getline(csv, line)) {
        std::size_t pos = 0;
        while (pos < line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            samples.push_back(std::stod(line.substr(pos, next - pos)));
            pos = next + 1;
        }
    }
    const auto expected = manifest.at("count").get<std::size_t>();
    if (samples.size() != expected)
        throw std::runtime_error("grid file sample count mismatch in " + csv_name);
    return GridFunction::create(manifest.at("dim").get<int>(),
                                manifest.at("h").get<double>(),
                                manifest.at("r_max").get<double>(),
                                manifest.at("label").get<std::string>(),
                                std::move(samples));
}

} // namespace bwu::harness
