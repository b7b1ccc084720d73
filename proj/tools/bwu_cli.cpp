// Command-line front end: config-driven experiments plus a flag-driven
// operator runner. Exit codes: 0 all assertions pass, 2 assertion or
// hypothesis failures, 3 configuration errors.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwu/harness/acceptance.hpp"
#include "bwu/harness/config.hpp"
#include "bwu/harness/experiments.hpp"
#include "bwu/interpolate.hpp"

namespace {

using bwu::harness::ConfigError;
using bwu::harness::ExperimentConfig;
using bwu::harness::RunOptions;
using bwu::harness::RunReport;

int finish(const RunReport& report) {
    std::printf("%s: %d passed, %d failed (config %016llx)\n", report.kind.c_str(),
                report.assertions_passed, report.assertions_failed,
                static_cast<unsigned long long>(report.config_hash));
    for (const auto& f : report.failures) std::printf("  FAIL %s\n", f.c_str());
    return report.ok() ? 0 : 2;
}

int run_kind(const std::string& kind, const std::string& config_path,
             const RunOptions& options, const nlohmann::json& fallback) {
    nlohmann::json doc;
    if (!config_path.empty()) {
        doc = ExperimentConfig::from_file(config_path).doc();
        if (doc.value("kind", kind) != kind)
            throw ConfigError("config kind '" + doc.value("kind", std::string()) +
                              "' does not match subcommand '" + kind + "'");
        doc["kind"] = kind;
    } else if (!fallback.is_null()) {
        doc = fallback;
        doc["kind"] = kind;
    } else {
        throw ConfigError("subcommand '" + kind + "' needs --config");
    }
    return finish(bwu::harness::run(ExperimentConfig::from_json(doc), options));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"B_w^u function-space laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "reports";
    RunOptions options;
    app.add_option("--config", config_path, "experiment config (JSON)");
    app.add_option("--out-dir", out_dir, "report output directory");
    app.add_option("--threads", options.threads, "worker threads for corpus rows");
    app.add_flag("--refine", options.refine, "echo the run at h/2 and sqrt(rho)");

    for (const char* kind : {"norm", "classcheck", "decompose", "sandwich", "hardy"})
        app.add_subcommand(kind, "config-driven experiment")->fallthrough();

    auto* corpus_cmd = app.add_subcommand("corpus", "write the deterministic corpus");
    corpus_cmd->fallthrough();

    auto* op_cmd = app.add_subcommand("operator", "boundedness table for one operator");
    op_cmd->fallthrough();
    std::string op_tag = "maximal";
    double op_alpha = 0.0, op_eta = 0.0;
    double opt_sigma = 0.25, opt_tau = 0.1, opt_kappa = 1.0;
    std::string source_e = "Morrey{p=2,lambda=-0.25}";
    std::string target_e = "Morrey{p=2,lambda=-0.25}";
    std::string weight_text;
    std::string op_u = "inf";
    double win_rmin = 1.0, win_rho = 1.1892071150027210667;
    int win_count = 13;
    std::vector<std::string> corpus_files;
    op_cmd->add_option("--tag", op_tag, "operator tag");
    op_cmd->add_option("--alpha", op_alpha, "fractional order");
    op_cmd->add_option("--eta", op_eta, "truncation radius (0 -> h/2)");
    op_cmd->add_option("--sigma", opt_sigma, "weight decay sigma");
    op_cmd->add_option("--tau", opt_tau, "weight shift tau (sigma > tau > 0)");
    op_cmd->add_option("--kappa", opt_kappa, "kernel regularity kappa");
    op_cmd->add_option("--source-E", source_e, "source local space");
    op_cmd->add_option("--target-E", target_e, "target local space");
    op_cmd->add_option("--w", weight_text, "weight (default composite from sigma/tau)");
    op_cmd->add_option("--u", op_u, "outer exponent (number or inf)");
    op_cmd->add_option("--r-min", win_rmin, "window start");
    op_cmd->add_option("--rho", win_rho, "window ratio");
    op_cmd->add_option("--count", win_count, "window node count");
    op_cmd->add_option("--corpus-file", corpus_files, "grid manifests (JSON)");

    auto* suite_cmd = app.add_subcommand("suite", "run the verification suite");
    suite_cmd->fallthrough();
    std::string suite_name = "paper-checks";
    suite_cmd->add_option("--name", suite_name, "suite name");

    CLI11_PARSE(app, argc, argv);
    options.out_dir = out_dir;

    try {
        const std::string kind = app.get_subcommands().front()->get_name();
        nlohmann::json fallback;
        if (kind == "corpus") {
            fallback = {{"kind", "corpus"}};
            (void)corpus_cmd;
        } else if (kind == "suite") {
            fallback = {{"kind", "suite"}, {"name", suite_name}};
        } else if (kind == "operator" && config_path.empty()) {
            if (weight_text.empty())
                weight_text = "composite{w0=power{sigma=" + std::to_string(opt_sigma) +
                              "},w1=power{sigma=" + std::to_string(opt_sigma - opt_tau) +
                              "},theta=power{theta=0.5}}";
            fallback = {
                {"kind", "operator"},
                {"op", {{"tag", op_tag}, {"alpha", op_alpha}, {"eta", op_eta}}},
                {"params",
                 {{"sigma", opt_sigma}, {"tau", opt_tau}, {"kappa", opt_kappa}}},
                {"window",
                 {{"r_min", win_rmin}, {"rho", win_rho}, {"count", win_count}}},
                {"source",
                 {{"E", source_e}, {"w", weight_text}, {"u", op_u}, {"homogeneous", false}}},
                {"target",
                 {{"E", target_e}, {"w", weight_text}, {"u", op_u}, {"homogeneous", false}}},
            };
            if (op_u != "inf") fallback["source"]["u"] = std::stod(op_u);
            if (op_u != "inf") fallback["target"]["u"] = std::stod(op_u);
            if (!corpus_files.empty()) fallback["corpus_files"] = corpus_files;
        }
        return run_kind(kind, config_path, options, fallback);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const bwu::HypothesisError& e) {
        std::fprintf(stderr, "hypothesis failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
