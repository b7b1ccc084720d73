#include "bwu/harness/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "bwu/bwu_norms.hpp"
#include "bwu/decompose.hpp"
#include "bwu/hardy.hpp"
#include "bwu/harness/acceptance.hpp"
#include "bwu/harness/corpus.hpp"
#include "bwu/interpolate.hpp"
#include "bwu/operators.hpp"

namespace bwu::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RadiusGrid window_from(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("window must be an object");
    const double r_min = j.value("r_min", 0.0);
    const double rho = j.value("rho", 0.0);
    if (r_min <= 0.0 || rho <= 1.0)
        throw ConfigError("window needs r_min > 0 and rho > 1");
    if (j.contains("count")) return RadiusGrid::geometric(r_min, rho, j.at("count"));
    if (j.contains("r_max")) return RadiusGrid::spanning(r_min, j.at("r_max"), rho);
    throw ConfigError("window needs either 'count' or 'r_max'");
}

double u_from(const nlohmann::json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kInf;
        throw ConfigError("exponent u must be a number or \"inf\"");
    }
    return v.get<double>();
}

std::string u_text(double u) { return std::isinf(u) ? "inf" : csv_num(u); }

BwuSpec bwu_spec_from(const nlohmann::json& j, const RadiusGrid& window) {
    BwuSpec spec{parse_space_spec(j.at("E").get<std::string>()),
                 parse_weight(j.at("w").get<std::string>()), u_from(j.at("u")),
                 j.value("homogeneous", true), window};
    return spec;
}

std::vector<GridFunction> corpus_from(const ExperimentConfig& cfg) {
    return make_corpus(corpus_spec_from_json(cfg.doc()));
}

void run_corpus(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    const CorpusSpec spec = corpus_spec_from_json(cfg.doc());
    const auto corpus = make_corpus(spec);
    const auto dir = opt.out_dir / "corpus";
    CsvTable index({"label", "catalog", "params", "seed", "manifest"});
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        write_grid_function(corpus[i], dir);
        std::string params;
        for (std::size_t k = 0; k < spec.entries[i].params.size(); ++k)
            params += (k ? ";" : "") + csv_num(spec.entries[i].params[k]);
        index.add_row({corpus[i].label(), spec.entries[i].catalog, params,
                       std::to_string(spec.entries[i].seed),
                       corpus[i].label() + ".json"});
    }
    index.write(opt.out_dir / "corpus_index.csv");
    rep.csv_files.push_back("corpus_index.csv");
    rep.summary["functions"] = corpus.size();
    rep.check(true, "corpus written");
}

void run_norm(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    const auto corpus = corpus_from(cfg);
    const RadiusGrid window = window_from(cfg.need("window"));
    const BwuSpec spec = bwu_spec_from(cfg.doc(), window);

    CsvTable table({"label", "E", "w", "u", "homogeneous", "r_min", "rho", "count",
                    "value"});
    std::vector<double> values(corpus.size());
    parallel_for(corpus.size(), opt.threads,
                 [&](std::size_t i) { values[i] = bwu_norm(corpus[i], spec); });
    for (std::size_t i = 0; i < corpus.size(); ++i)
        table.add_row({corpus[i].label(), spec.E.text(), spec.w.text(), u_text(spec.u),
                       spec.homogeneous ? "1" : "0", csv_num(window.r_min()),
                       csv_num(window.rho()), std::to_string(window.count()),
                       csv_num(values[i])});
    table.write(opt.out_dir / "norms.csv");
    rep.csv_files.push_back("norms.csv");

    if (cfg.doc().contains("expect")) {
        for (const auto& e : cfg.doc().at("expect")) {
            const std::string label = e.at("label").get<std::string>();
            const double want = e.at("value").get<double>();
            const double tol = e.at("tol").get<double>();
            bool found = false;
            for (std::size_t i = 0; i < corpus.size(); ++i)
                if (corpus[i].label() == label) {
                    found = true;
                    rep.check(std::abs(values[i] - want) <= tol,
                              label + ": value " + csv_num(values[i]) +
                                  " not within " + csv_num(tol) + " of " + csv_num(want));
                }
            if (!found) throw ConfigError("expect names unknown label: " + label);
        }
    } else {
        rep.check(true, "norms computed");
    }
}

void run_classcheck(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    const RadiusGrid probe = window_from(cfg.need("probe"));
    CsvTable table({"target", "check", "constant", "witness_r", "witness_s", "verdict",
                    "expected", "ok"});
    for (const auto& item : cfg.need("checks")) {
        const std::string check = item.at("check").get<std::string>();
        ClassReport result;
        std::string target;
        if (check == "theta") {
            target = item.at("theta").get<std::string>();
            result = check_theta_class(parse_theta(target), probe);
        } else {
            target = item.at("w").get<std::string>();
            const Weight w = parse_weight(target);
            if (check == "doubling")
                result = check_doubling(w, probe);
            else if (check == "almost_decreasing")
                result = check_almost_decreasing(w, probe);
            else if (check == "almost_increasing")
                result = check_almost_increasing(w, probe);
            else if (check == "W_star")
                result = check_W_star(w, probe);
            else if (check == "Wu")
                result = check_membership_Wu(w, u_from(item.at("u")), probe);
            else if (check == "shifted_increasing")
                result = check_power_shifted_almost_increasing(w, probe);
            else
                throw ConfigError("unknown classcheck '" + check + "'");
        }
        std::string expected = item.value("expect", std::string("pass"));
        const bool ok = (expected == "pass") == result.pass;
        table.add_row({target, check, csv_num(result.constant),
                       csv_num(result.witness_r), csv_num(result.witness_s),
                       result.pass ? "pass" : "fail", expected, ok ? "1" : "0"});
        rep.check(ok, target + " " + check + ": verdict " +
                          (result.pass ? "pass" : "fail") + ", expected " + expected);
    }
    table.write(opt.out_dir / "classchecks.csv");
    rep.csv_files.push_back("classchecks.csv");
}

void run_decompose(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    const auto corpus = corpus_from(cfg);
    const SpaceSpec e = parse_space_spec(cfg.need("E").get<std::string>());
    const RadiusGrid r_window = window_from(cfg.need("r_window"));
    const RadiusGrid t_window = window_from(cfg.need("t_window"));
    const std::string method = cfg.doc().value("method", std::string("auto"));
    const auto thresholds = cfg.doc().value("thresholds", nlohmann::json::object());
    const double c0_max = thresholds.value("c0", kInf);
    const double c1_max = thresholds.value("c1", kInf);
    const double vanish_tol = thresholds.value("vanish", 1e-12);

    CsvTable table({"label", "E", "method", "r", "t", "side", "lhs", "bound", "ratio",
                    "skipped"});
    for (const auto& f : corpus) {
        double worst_c0 = 0.0, worst_c1 = 0.0, worst_vanish = 0.0;
        for (double r : r_window.nodes()) {
            const double snapped = snap_radius(r, f.h());
            const Decomposition dec = method == "lattice"
                                          ? lattice_decompose(f, snapped)
                                          : method == "campanato"
                                                ? campanato_decompose(f, snapped)
                                                : decompose_for(f, snapped, e);
            const DecompositionCheck check = verify_decomposition(f, dec, e, t_window);
            worst_c0 = std::max(worst_c0, check.c0);
            worst_c1 = std::max(worst_c1, check.c1);
            worst_vanish = std::max(worst_vanish, check.f1_small_t_max);
            for (const auto& row : check.rows)
                table.add_row({f.label(), e.text(), dec.method, csv_num(dec.r),
                               csv_num(row.t), row.side == 0 ? "f0" : "f1",
                               csv_num(row.lhs), csv_num(row.bound), csv_num(row.ratio),
                               row.skipped ? "1" : "0"});
        }
        rep.check(worst_c0 <= c0_max, f.label() + ": C0 " + csv_num(worst_c0) +
                                          " exceeds " + csv_num(c0_max));
        rep.check(worst_c1 <= c1_max, f.label() + ": C1 " + csv_num(worst_c1) +
                                          " exceeds " + csv_num(c1_max));
        rep.check(worst_vanish <= vanish_tol,
                  f.label() + ": f1 fails to vanish below the split radius (" +
                      csv_num(worst_vanish) + ")");
    }
    table.write(opt.out_dir / "decompositions.csv");
    rep.csv_files.push_back("decompositions.csv");
}

void run_sandwich(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    const auto corpus = corpus_from(cfg);
    const RadiusGrid window = window_from(cfg.need("window"));
    const SpaceSpec e = parse_space_spec(cfg.need("E").get<std::string>());
    const Weight w0 = parse_weight(cfg.need("w0").get<std::string>());
    const Weight w1 = parse_weight(cfg.need("w1").get<std::string>());
    const ThetaFunction theta = parse_theta(cfg.need("theta").get<std::string>());
    const double u0 = u_from(cfg.need("u0"));
    const double u1 = u_from(cfg.need("u1"));
    const double u = u_from(cfg.need("u"));
    const bool homogeneous = cfg.doc().value("homogeneous", true);

    const CoupleSpec couple{BwuSpec{e, w0, u0, homogeneous, window},
                            BwuSpec{e, w1, u1, homogeneous, window}};

    CsvTable table({"label", "E", "w0", "w1", "theta", "u0", "u1", "u", "lower_C",
                    "upper_C", "swapped", "certificates"});
    std::vector<SandwichResult> results(corpus.size());
    parallel_for(corpus.size(), opt.threads, [&](std::size_t i) {
        results[i] = sandwich_check(corpus[i], couple, theta, u);
    });
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        std::string certs;
        for (const auto& c : results[i].certificates) certs += c + ";";
        table.add_row({corpus[i].label(), e.text(), w0.text(), w1.text(), theta.text(),
                       u_text(u0), u_text(u1), u_text(u), csv_num(results[i].lower_c),
                       csv_num(results[i].upper_c), results[i].swapped ? "1" : "0",
                       certs});
        rep.check(std::isfinite(results[i].lower_c) && std::isfinite(results[i].upper_c),
                  corpus[i].label() + ": sandwich constants not finite");
    }
    table.write(opt.out_dir / "sandwich.csv");
    rep.csv_files.push_back("sandwich.csv");
}

void run_operator(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    std::vector<GridFunction> corpus;
    CorpusSpec corpus_spec;
    const bool from_files = cfg.doc().contains("corpus_files");
    if (from_files) {
        for (const auto& path : cfg.doc().at("corpus_files"))
            corpus.push_back(load_grid_function(path.get<std::string>()));
        if (opt.refine)
            throw ConfigError("--refine needs catalog corpora, not corpus_files");
    } else {
        corpus_spec = corpus_spec_from_json(cfg.doc());
        corpus = make_corpus(corpus_spec);
    }
    const RadiusGrid window = window_from(cfg.need("window"));

    OperatorSpec op;
    const auto& oj = cfg.need("op");
    op.tag = oj.at("tag").get<std::string>();
    op.alpha = oj.value("alpha", 0.0);
    op.eta = oj.value("eta", 0.0);
    op.phase_p = oj.value("phase_p", 2.0);

    TupleParams params;
    const auto& pj = cfg.need("params");
    params.sigma = pj.value("sigma", 0.0);
    params.tau = pj.value("tau", 0.0);
    params.kappa = pj.value("kappa", 1.0);

    const BwuSpec source = bwu_spec_from(cfg.need("source"), window);
    const BwuSpec target = bwu_spec_from(cfg.need("target"), window);

    const OperatorReport base =
        boundedness_table(op, corpus, source, target, params);
    CsvTable table({"label", "source_norm", "target_norm", "ratio", "boundary_flag"});
    for (const auto& row : base.rows)
        table.add_row({row.label, csv_num(row.source_norm), csv_num(row.target_norm),
                       csv_num(row.ratio), row.boundary_flagged ? "1" : "0"});
    table.write(opt.out_dir / "operator.csv");
    rep.csv_files.push_back("operator.csv");
    rep.summary["sup_ratio"] = base.sup_ratio;
    rep.summary["hypotheses"] = base.hypothesis_ids;
    rep.check(std::isfinite(base.sup_ratio), "sup ratio not finite");

    if (opt.refine) {
        CorpusSpec fine = corpus_spec;
        fine.h /= 2.0;
        const auto corpus_h2 = make_corpus(fine);
        const OperatorReport rep_h2 =
            boundedness_table(op, corpus_h2, source, target, params);

        const RadiusGrid window_rho = RadiusGrid::geometric(
            window.r_min(), std::sqrt(window.rho()), 2 * window.count() - 1);
        BwuSpec source_rho = source;
        source_rho.radii = window_rho;
        BwuSpec target_rho = target;
        target_rho.radii = window_rho;
        const OperatorReport rep_rho =
            boundedness_table(op, corpus, source_rho, target_rho, params);

        rep.summary["sup_ratio_h_refined"] = rep_h2.sup_ratio;
        rep.summary["sup_ratio_rho_refined"] = rep_rho.sup_ratio;
        const double delta = std::max(
            std::abs(rep_h2.sup_ratio - base.sup_ratio) / base.sup_ratio,
            std::abs(rep_rho.sup_ratio - base.sup_ratio) / base.sup_ratio);
        rep.summary["max_refinement_delta"] = delta;
        const double tol = cfg.doc().value("stability_tol", 0.2);
        rep.check(delta <= tol, "refinement delta " + csv_num(delta) + " exceeds " +
                                    csv_num(tol));
    }
}

void run_hardy(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    const RadiusGrid window = window_from(cfg.need("window"));
    CsvTable table({"U", "V", "p", "direction", "condition", "test", "ratio"});

    for (const auto& pj : cfg.need("pairs")) {
        HardyPair pair;
        pair.U = parse_weight(pj.at("U").get<std::string>());
        pair.V = parse_weight(pj.at("V").get<std::string>());
        pair.p = u_from(pj.at("p"));
        pair.direction = pj.value("direction", std::string("up")) == "down"
                             ? HardyPair::Direction::FStarDown
                             : HardyPair::Direction::FStarUp;
        const double condition = muckenhoupt_condition(pair, window);
        table.add_row({pair.U.text(), pair.V.text(), u_text(pair.p),
                       pj.value("direction", std::string("up")), csv_num(condition), "-",
                       "-"});
        if (pj.contains("expect_condition")) {
            const double want = u_from(pj.at("expect_condition").at("value"));
            const double tol = pj.at("expect_condition").at("tol").get<double>();
            rep.check(std::isinf(want) ? std::isinf(condition)
                                       : std::abs(condition - want) <= tol,
                      "condition " + csv_num(condition) + " not within " + csv_num(tol) +
                          " of " + csv_num(want));
        }
        if (pj.value("test_ratios", true) && std::isfinite(condition)) {
            const auto tests = {std::pair{1.0, 2.0}, std::pair{2.0, 4.0},
                                std::pair{window.r_min(), window.nodes().back()}};
            const double cap = pj.value("ratio_cap_multiple", 4.0);
            for (const auto& [a, b] : tests) {
                const TableFunction test =
                    TableFunction::indicator(window.nodes(), a, b);
                const double ratio = hardy_inequality_ratio(pair, test);
                table.add_row({pair.U.text(), pair.V.text(), u_text(pair.p),
                               pj.value("direction", std::string("up")),
                               csv_num(condition),
                               "indicator[" + csv_num(a) + "," + csv_num(b) + "]",
                               csv_num(ratio)});
                rep.check(ratio <= cap * condition + 1e-12,
                          "hardy ratio " + csv_num(ratio) + " exceeds " + csv_num(cap) +
                              "x condition");
            }
        }
        if (pj.contains("growth")) {
            // ratio growth when the window top is stretched by the factor
            const auto& gj = pj.at("growth");
            const double factor = gj.value("factor", 10.0);
            CsvTable growth({"U", "V", "p", "direction", "top", "ratio"});
            const TableFunction base = TableFunction::indicator(window.nodes(), 1.0, 2.0);
            const double r0 = hardy_inequality_ratio(pair, base);
            const RadiusGrid wide = RadiusGrid::spanning(
                window.r_min(), window.nodes().back() * factor, window.rho());
            const TableFunction ext = TableFunction::indicator(wide.nodes(), 1.0, 2.0);
            const double r1 = hardy_inequality_ratio(pair, ext);
            const std::string dir_text = pj.value("direction", std::string("up"));
            growth.add_row({pair.U.text(), pair.V.text(), u_text(pair.p), dir_text,
                            csv_num(window.nodes().back()), csv_num(r0)});
            growth.add_row({pair.U.text(), pair.V.text(), u_text(pair.p), dir_text,
                            csv_num(wide.nodes().back()), csv_num(r1)});
            growth.write(opt.out_dir / "hardy_growth.csv");
            rep.csv_files.push_back("hardy_growth.csv");
            if (gj.contains("min_growth"))
                rep.check(r1 >= gj.at("min_growth").get<double>() * r0,
                          "window extension grew the ratio by only " +
                              csv_num(r0 > 0 ? r1 / r0 : 0.0) + "x");
        }
    }
    table.write(opt.out_dir / "hardy.csv");
    rep.csv_files.push_back("hardy.csv");
}

void run_suite(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep) {
    AcceptanceOptions a;
    if (cfg.doc().contains("grid")) {
        const auto& g = cfg.doc().at("grid");
        a.dim = g.value("dim", a.dim);
        a.h = g.value("h", a.h);
        a.r_max = g.value("r_max", a.r_max);
    }
    a.rho = cfg.doc().value("rho", a.rho);
    const auto results = run_acceptance_suite(a);

    CsvTable table({"id", "criterion", "pass", "detail"});
    for (const auto& r : results) {
        table.add_row({std::to_string(r.id), r.name, r.pass ? "1" : "0", r.detail});
        rep.check(r.pass, "criterion " + std::to_string(r.id) + " (" + r.name + "): " +
                              r.detail);
    }
    table.write(opt.out_dir / "suite.csv");
    rep.csv_files.push_back("suite.csv");
}

} // namespace

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min<int>(threads, static_cast<int>(count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                    body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

RunReport run(const ExperimentConfig& config, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    rep.kind = config.kind();
    rep.config_hash = config.hash();
    std::filesystem::create_directories(options.out_dir);

    const std::string kind = config.kind();
    if (kind == "corpus")
        run_corpus(config, options, rep);
    else if (kind == "norm")
        run_norm(config, options, rep);
    else if (kind == "classcheck")
        run_classcheck(config, options, rep);
    else if (kind == "decompose")
        run_decompose(config, options, rep);
    else if (kind == "sandwich")
        run_sandwich(config, options, rep);
    else if (kind == "operator")
        run_operator(config, options, rep);
    else if (kind == "hardy")
        run_hardy(config, options, rep);
    else if (kind == "suite")
        run_suite(config, options, rep);
    else
        throw ConfigError("unknown experiment kind '" + kind + "'");

    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    rep.write_summary(options.out_dir / (kind + "_summary.json"));
    return rep;
}

} // namespace bwu::harness
