#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bwu/harness/acceptance.hpp"
#include "bwu/harness/config.hpp"
#include "bwu/harness/corpus.hpp"
#include "bwu/harness/experiments.hpp"
#include "bwu/interpolate.hpp"

using namespace bwu;
using namespace bwu::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
        : path(std::filesystem::temp_directory_path() / ("bwu_test_" + tag)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

const char* kSmallGrid = R"({"dim": 1, "h": 0.03125, "r_max": 4.0})";

nlohmann::json small_grid() { return nlohmann::json::parse(kSmallGrid); }

} // namespace

TEST_CASE("experiment config: parsing, hashing, canonical round trip") {
    const auto cfg = ExperimentConfig::from_text(R"({"kind":"norm","u":"inf"})");
    CHECK(cfg.kind() == "norm");
    const auto again = ExperimentConfig::from_text(cfg.canonical_text());
    CHECK(again.canonical_text() == cfg.canonical_text());
    CHECK(again.hash() == cfg.hash());

    CHECK_THROWS_AS(ExperimentConfig::from_text("not json"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text(R"({"no_kind":1})"), ConfigError);
    CHECK_THROWS_AS((void)cfg.need("missing_field"), ConfigError);
}

TEST_CASE("corpus: default mix, determinism on disk, loader validation") {
    const auto spec = default_corpus_spec(1, 1.0 / 32.0, 4.0);
    const auto corpus = make_corpus(spec);
    CHECK(corpus.size() == 12);

    TempDir dir("corpus");
    write_grid_function(corpus[1], dir.path);
    const auto first = slurp(dir.path / (corpus[1].label() + ".csv"));
    write_grid_function(corpus[1], dir.path);
    CHECK(slurp(dir.path / (corpus[1].label() + ".csv")) == first);

    const auto loaded = load_grid_function(dir.path / (corpus[1].label() + ".json"));
    CHECK(loaded.samples() == corpus[1].samples());
    CHECK(loaded.label() == corpus[1].label());

    // corrupting the sample file must trip the count invariant
    {
        std::ofstream out(dir.path / (corpus[1].label() + ".csv"), std::ios::binary);
        out << "1.0,2.0\n";
    }
    CHECK_THROWS(load_grid_function(dir.path / (corpus[1].label() + ".json")));

    CorpusSpec empty;
    CHECK_THROWS_AS((void)make_corpus(empty), ConfigError);
    CorpusSpec missing_group = spec;
    missing_group.entries.erase(
        std::remove_if(missing_group.entries.begin(), missing_group.entries.end(),
                       [](const CorpusEntry& e) { return e.catalog == "random_field"; }),
        missing_group.entries.end());
    CHECK_THROWS_AS((void)make_corpus(missing_group), ConfigError);
}

TEST_CASE("norm experiment: expectation gate and byte-identical reruns") {
    TempDir dir("norm");
    nlohmann::json doc{
        {"kind", "norm"},
        {"grid", small_grid()},
        {"E", "Lp{p=1}"},
        {"w", "power{sigma=1}"},
        {"u", "inf"},
        {"homogeneous", false},
        {"window", {{"r_min", 1.0}, {"rho", 1.1892071150027210667}, {"r_max", 4.0}}},
        {"expect", nlohmann::json::array(
                       {{{"label", "indicator_q1"}, {"value", 2.0}, {"tol", 0.07}}})},
    };
    RunOptions opt;
    opt.out_dir = dir.path;
    const RunReport rep = run(ExperimentConfig::from_json(doc), opt);
    CHECK(rep.ok());
    CHECK(rep.assertions_passed >= 1);

    const auto csv1 = slurp(dir.path / "norms.csv");
    const RunReport rep2 = run(ExperimentConfig::from_json(doc), opt);
    CHECK(rep2.ok());
    CHECK(slurp(dir.path / "norms.csv") == csv1);
    CHECK(rep2.config_hash == rep.config_hash);
}

TEST_CASE("classcheck experiment honors expected failures") {
    TempDir dir("classcheck");
    nlohmann::json doc{
        {"kind", "classcheck"},
        {"probe", {{"r_min", 0.0625}, {"rho", 1.1892071150027210667}, {"r_max", 16.0}}},
        {"checks",
         nlohmann::json::array(
             {{{"check", "W_star"}, {"w", "power{sigma=2}"}, {"expect", "pass"}},
              {{"check", "W_star"}, {"w", "power{sigma=0}"}, {"expect", "fail"}},
              {{"check", "theta"}, {"theta", "power{theta=1.2}"}, {"expect", "fail"}},
              {{"check", "Wu"}, {"w", "power{sigma=1}"}, {"u", 1.0}, {"expect", "pass"}}})},
    };
    RunOptions opt;
    opt.out_dir = dir.path;
    const RunReport rep = run(ExperimentConfig::from_json(doc), opt);
    CHECK(rep.ok());
    CHECK(rep.assertions_passed == 4);
}

TEST_CASE("decompose experiment writes per-pair rows") {
    TempDir dir("decompose");
    nlohmann::json doc{
        {"kind", "decompose"},
        {"grid", small_grid()},
        {"E", "Lp{p=1}"},
        {"method", "lattice"},
        {"r_window", {{"r_min", 0.5}, {"rho", 2.0}, {"count", 2}}},
        {"t_window", {{"r_min", 0.25}, {"rho", 1.4142135623730951}, {"r_max", 4.0}}},
        {"thresholds", {{"c0", 1.000001}, {"c1", 1.000001}, {"vanish", 1e-12}}},
    };
    RunOptions opt;
    opt.out_dir = dir.path;
    const RunReport rep = run(ExperimentConfig::from_json(doc), opt);
    CHECK(rep.ok());
    CHECK(std::filesystem::exists(dir.path / "decompositions.csv"));
}

TEST_CASE("sandwich experiment emits certificates per function") {
    TempDir dir("sandwich");
    nlohmann::json doc{
        {"kind", "sandwich"},
        {"grid", small_grid()},
        {"E", "Lp{p=1}"},
        {"w0", "power{sigma=2}"},
        {"w1", "power{sigma=0.5}"},
        {"theta", "power{theta=0.5}"},
        {"u0", "inf"},
        {"u1", "inf"},
        {"u", "inf"},
        {"homogeneous", true},
        {"window", {{"r_min", 0.125}, {"rho", 1.1892071150027210667}, {"r_max", 4.0}}},
    };
    RunOptions opt;
    opt.out_dir = dir.path;
    opt.threads = 2;
    const RunReport rep = run(ExperimentConfig::from_json(doc), opt);
    CHECK(rep.ok());
    const auto text = slurp(dir.path / "sandwich.csv");
    CHECK(text.find("shifted_almost_increasing") != std::string::npos);
}

TEST_CASE("operator experiment: hypothesis gate maps to a failed run") {
    TempDir dir("operator");
    nlohmann::json doc{
        {"kind", "operator"},
        {"grid", small_grid()},
        {"op", {{"tag", "maximal"}, {"alpha", 0.0}}},
        {"params", {{"sigma", 0.25}, {"tau", 0.1}}},
        {"window", {{"r_min", 1.0}, {"rho", 1.4142135623730951}, {"r_max", 4.0}}},
        {"source",
         {{"E", "Morrey{p=2,lambda=-0.25}"},
          {"w", "composite{w0=power{sigma=0.25},w1=power{sigma=0.15},"
                "theta=power{theta=0.5}}"},
          {"u", "inf"},
          {"homogeneous", false}}},
    };
    doc["target"] = doc["source"];
    RunOptions opt;
    opt.out_dir = dir.path;
    const RunReport rep = run(ExperimentConfig::from_json(doc), opt);
    CHECK(rep.ok());
    CHECK(rep.summary.contains("sup_ratio"));

    doc["params"]["sigma"] = 0.5; // budget violated
    CHECK_THROWS_AS((void)run(ExperimentConfig::from_json(doc), opt), HypothesisError);
}

TEST_CASE("hardy experiment: model pair passes its gates") {
    TempDir dir("hardy");
    nlohmann::json doc{
        {"kind", "hardy"},
        {"window", {{"r_min", 0.0625}, {"rho", 1.1892071150027210667}, {"r_max", 8.0}}},
        {"pairs",
         nlohmann::json::array(
             {{{"U", "power{sigma=1}"},
               {"V", "power{sigma=0}"},
               {"p", 2.0},
               {"direction", "up"},
               {"expect_condition", {{"value", 1.0}, {"tol", 1e-6}}}}})},
    };
    RunOptions opt;
    opt.out_dir = dir.path;
    const RunReport rep = run(ExperimentConfig::from_json(doc), opt);
    CHECK(rep.ok());
}

TEST_CASE("unknown experiment kinds are config errors") {
    TempDir dir("unknown");
    RunOptions opt;
    opt.out_dir = dir.path;
    CHECK_THROWS_AS(
        (void)run(ExperimentConfig::from_text(R"({"kind":"mystery"})"), opt),
        ConfigError);
}

TEST_CASE("parallel_for covers every index an exact once") {
    std::vector<int> hits(257, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (int h : hits) CHECK(h == 1);
}
