#include "bwu/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bwu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void CoupleSpec::validate() const {
    if (a0.E.text() != a1.E.text())
        throw std::invalid_argument("CoupleSpec: both spaces must share the local space E");
    if (a0.homogeneous != a1.homogeneous)
        throw std::invalid_argument("CoupleSpec: homogeneity flags differ");
    if (std::abs(a0.radii.r_min() - a1.radii.r_min()) > 1e-12 ||
        std::abs(a0.radii.rho() - a1.radii.rho()) > 1e-12 ||
        a0.radii.count() != a1.radii.count())
        throw std::invalid_argument("CoupleSpec: radius windows differ");
}

namespace {

struct KCandidates {
    double trivial_a0 = 0.0; // ||f||_{A0}, pairs with zero tail
    double trivial_a1 = 0.0; // ||f||_{A1}
    // per decomposition radius: both piece orientations
    std::vector<double> radius;
    std::vector<double> n_f0_a0, n_f1_a1; // (f0 -> A0, f1 -> A1)
    std::vector<double> n_f1_a0, n_f0_a1; // swapped orientation
    std::vector<Decomposition> splits;    // kept for the refine pass
};

KCandidates build_candidates(const GridFunction& f, const CoupleSpec& couple,
                             const KOptions& opts) {
    KCandidates cand;
    cand.trivial_a0 = bwu_norm(f, couple.a0, opts.norms);
    cand.trivial_a1 = bwu_norm(f, couple.a1, opts.norms);

    const bool oscillation = couple.a0.E.is_oscillation();
    std::vector<double> radii;
    for (double r : couple.a0.radii.nodes()) {
        const double snapped = std::min(snap_radius(r, f.h()), f.r_max());
        if (oscillation && 2.0 * snapped > f.r_max() * (1.0 + 1e-9)) continue;
        if (!radii.empty() && snapped <= radii.back()) continue;
        radii.push_back(snapped);
    }
    for (double r : radii) {
        Decomposition dec = decompose_for(f, r, couple.a0.E);
        cand.radius.push_back(r);
        cand.n_f0_a0.push_back(bwu_norm(dec.f0, couple.a0, opts.norms));
        cand.n_f1_a1.push_back(bwu_norm(dec.f1, couple.a1, opts.norms));
        cand.n_f1_a0.push_back(bwu_norm(dec.f1, couple.a0, opts.norms));
        cand.n_f0_a1.push_back(bwu_norm(dec.f0, couple.a1, opts.norms));
        if (opts.refine) cand.splits.push_back(std::move(dec));
    }
    return cand;
}

// Convex rebalance of the best split: f0 -> gamma*f0. Only ever lowers the
// candidate value (gamma = 1 reproduces it).
double refine_at(const GridFunction& f, const CoupleSpec& couple, const KOptions& opts,
                 const Decomposition& dec, double t, double current) {
    double best = current;
    for (double gamma : {0.0, 0.25, 0.5, 0.75}) {
        std::vector<double> tail(f.cell_count());
        for (std::size_t i = 0; i < tail.size(); ++i)
            tail[i] = f.samples()[i] - gamma * dec.f0.samples()[i];
        GridFunction f1g = GridFunction::create(f.dim(), f.h(), f.r_max(),
                                                f.label() + "|refine", std::move(tail));
        const double v = gamma * bwu_norm(dec.f0, couple.a0, opts.norms) +
                         t * bwu_norm(f1g, couple.a1, opts.norms);
        best = std::min(best, v);
    }
    return best;
}

} // namespace

KProfile k_functional_upper(const GridFunction& f, const CoupleSpec& couple,
                            std::span<const double> t_nodes, const KOptions& opts) {
    couple.validate();
    const KCandidates cand = build_candidates(f, couple, opts);

    KProfile profile;
    profile.t_nodes.assign(t_nodes.begin(), t_nodes.end());
    profile.k_upper.reserve(t_nodes.size());
    profile.argmin_r.reserve(t_nodes.size());

    for (double t : t_nodes) {
        if (!(t > 0.0)) throw std::invalid_argument("k_functional_upper: t must be positive");
        double best = cand.trivial_a0;
        double arg = -1.0;
        if (t * cand.trivial_a1 < best) {
            best = t * cand.trivial_a1;
            arg = -2.0;
        }
        std::size_t best_split = cand.radius.size();
        for (std::size_t j = 0; j < cand.radius.size(); ++j) {
            const double v0 = cand.n_f0_a0[j] + t * cand.n_f1_a1[j];
            const double v1 = cand.n_f1_a0[j] + t * cand.n_f0_a1[j];
            const double v = std::min(v0, v1);
            if (std::isfinite(v) && v < best) {
                best = v;
                arg = cand.radius[j];
                best_split = j;
            }
        }
        if (opts.refine && best_split < cand.splits.size())
            best = refine_at(f, couple, opts, cand.splits[best_split], t, best);
        profile.k_upper.push_back(best);
        profile.argmin_r.push_back(arg);
    }
    return profile;
}

InterpolationWindow map_t_nodes(const Weight& w0, const Weight& w1,
                                const RadiusGrid& radii, bool normalize_at_one) {
    InterpolationWindow window;
    window.log_step = radii.log_step();
    const double unit = normalize_at_one ? w0.eval(1.0) / w1.eval(1.0) : 1.0;
    for (double r : radii.nodes())
        window.t_nodes.push_back(w0.eval(r) / w1.eval(r) / unit);
    return window;
}

InterpolationWindow geometric_t_nodes(double t_min, double rho, int count) {
    const RadiusGrid grid = RadiusGrid::geometric(t_min, rho, count);
    return InterpolationWindow{grid.nodes(), grid.log_step()};
}

double interpolation_norm(const KProfile& profile, const ThetaFunction& theta,
                          double u, double log_step, bool restrict_ge_1) {
    std::vector<double> vals;
    vals.reserve(profile.t_nodes.size());
    for (std::size_t i = 0; i < profile.t_nodes.size(); ++i) {
        const double t = profile.t_nodes[i];
        if (restrict_ge_1 && t < 1.0 - 1e-12) continue;
        vals.push_back(theta.eval(1.0 / t) * profile.k_upper[i]);
    }
    if (vals.empty())
        throw std::domain_error("interpolation_norm: empty t window");
    return lu_norm(vals, log_step, u);
}

double interpolation_norm(const GridFunction& f, const CoupleSpec& couple,
                          const ThetaFunction& theta, double u,
                          const InterpolationWindow& window, bool restrict_ge_1,
                          const KOptions& opts) {
    const KProfile profile = k_functional_upper(f, couple, window.t_nodes, opts);
    return interpolation_norm(profile, theta, u, window.log_step, restrict_ge_1);
}

namespace {

struct RatioMonotone {
    bool pass = false;
    double eps = 0.0;
    double constant = 0.0;
};

// (wa/wb)(r) r^{-eps} almost increasing for some lattice eps.
RatioMonotone certify_ratio_almost_increasing(const Weight& wa, const Weight& wb,
                                              const RadiusGrid& probe, double bound) {
    const auto& nodes = probe.nodes();
    std::vector<double> ratio(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        ratio[i] = wa.eval(nodes[i]) / wb.eval(nodes[i]);

    RatioMonotone best;
    best.constant = kInf;
    for (double e : epsilon_lattice()) {
        double c = 1.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                const double vi = ratio[i] * std::pow(nodes[i], -e);
                const double vj = ratio[j] * std::pow(nodes[j], -e);
                c = std::max(c, vi / vj);
            }
        if (c < best.constant) {
            best.constant = c;
            best.eps = e;
        }
        if (c <= bound) break;
    }
    best.pass = best.constant <= bound;
    return best;
}

} // namespace

SandwichResult sandwich_check(const GridFunction& f, const CoupleSpec& couple,
                              const ThetaFunction& theta, double u,
                              const SandwichOptions& opts) {
    couple.validate();
    const RadiusGrid& probe = couple.a0.radii;
    SandwichResult result;

    auto certify = [&](const Weight& w, const std::string& name, double ui) {
        const ClassReport dec = check_almost_decreasing(w, probe, opts.monotone_bound);
        if (!dec.pass)
            throw HypothesisError(name + " is not almost decreasing on the window (C=" +
                                  fmt(dec.constant) + ")");
        result.certificates.push_back(name + ":almost_decreasing(C=" + fmt(dec.constant) + ")");
        const ClassReport dbl = check_doubling(w, probe);
        result.certificates.push_back(name + ":doubling(C=" + fmt(dbl.constant) + ")");
        const ClassReport winf = check_membership_Wu(w, kInf, probe);
        if (!winf.pass)
            throw HypothesisError(name + " fails the W^inf membership");
        result.certificates.push_back(name + ":W_inf(value=" + fmt(winf.constant) + ")");
        if (std::min(ui, u) < kInf) {
            const ClassReport star = check_W_star(w, probe, opts.w_star_bound);
            if (!star.pass)
                throw HypothesisError(name + " fails the W^* tail condition (C=" +
                                      fmt(star.constant) + ")");
            result.certificates.push_back(name + ":W_star(C=" + fmt(star.constant) + ")");
        }
    };
    certify(couple.a0.w, "w0", couple.a0.u);
    certify(couple.a1.w, "w1", couple.a1.u);

    const RatioMonotone fwd =
        certify_ratio_almost_increasing(couple.a0.w, couple.a1.w, probe, opts.monotone_bound);
    const RatioMonotone rev =
        certify_ratio_almost_increasing(couple.a1.w, couple.a0.w, probe, opts.monotone_bound);
    if (!fwd.pass && !rev.pass)
        throw HypothesisError(
            "neither (w0/w1) r^-eps nor (w1/w0) r^-eps is almost increasing on the window");
    result.swapped = !fwd.pass;
    const RatioMonotone& used = result.swapped ? rev : fwd;
    result.certificates.push_back(std::string("w*:") + (result.swapped ? "w1/w0" : "w0/w1") +
                                  ":shifted_almost_increasing(eps=" + fmt(used.eps) +
                                  ",C=" + fmt(used.constant) + ")");

    const Weight w = compose_weight(couple.a0.w, couple.a1.w, theta);
    const BwuSpec target{couple.a0.E, w, u, couple.a0.homogeneous, couple.a0.radii};
    const double side_norm = bwu_norm(f, target, opts.k.norms);

    const CoupleSpec working = result.swapped ? couple.swapped() : couple;
    const ThetaFunction working_theta = result.swapped ? theta.dual() : theta;
    const bool non_homog = !couple.a0.homogeneous;
    const InterpolationWindow window =
        map_t_nodes(working.a0.w, working.a1.w, probe, non_homog);
    const double interp_norm = interpolation_norm(f, working, working_theta, u, window,
                                                  non_homog, opts.k);

    auto ratio = [](double num, double den) {
        if (num == 0.0 && den == 0.0) return 1.0;
        if (den == 0.0) return kInf;
        return num / den;
    };
    result.lower_c = ratio(side_norm, interp_norm);
    result.upper_c = ratio(interp_norm, side_norm);
    return result;
}

} // namespace bwu
