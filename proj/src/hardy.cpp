#include "bwu/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "bwu/bwu_norms.hpp"
#include "bwu/interpolate.hpp"

namespace bwu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// int_r^inf w(t)^power dt (plain measure). Closed form for pure powers,
// otherwise log-node quadrature plus a slope-based tail model.
double plain_tail_integral(const Weight& w, double power, double r) {
    if (auto pw = w.as_power()) {
        const double ap = pw->second * power;
        if (ap <= 1.0) return kInf;
        return std::pow(pw->first, power) * std::pow(r, 1.0 - ap) / (ap - 1.0);
    }
    const double top = r * 0x1p40;
    const double span = std::log(top / r);
    const int panels = static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0)));
    const double d = span / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double m = r * std::exp((k + 0.5) * d);
        acc += std::pow(w.eval(m), power) * m * d;
        if (!std::isfinite(acc)) return kInf;
    }
    const double slope = w.log_slope(top) * power;
    if (slope <= 1.0 + 1e-9) return kInf;
    acc += std::pow(w.eval(top), power) * top / (slope - 1.0);
    return acc;
}

// int_0^r w(t)^power dt (plain measure).
double plain_head_integral(const Weight& w, double power, double r) {
    if (auto pw = w.as_power()) {
        const double ap = pw->second * power;
        if (ap >= 1.0) return kInf;
        return std::pow(pw->first, power) * std::pow(r, 1.0 - ap) / (1.0 - ap);
    }
    const double bottom = r / 0x1p40;
    const double span = std::log(r / bottom);
    const int panels = static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0)));
    const double d = span / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double m = bottom * std::exp((k + 0.5) * d);
        acc += std::pow(w.eval(m), power) * m * d;
        if (!std::isfinite(acc)) return kInf;
    }
    const double slope = w.log_slope(bottom) * power;
    if (slope >= 1.0 - 1e-9) return kInf;
    acc += std::pow(w.eval(bottom), power) * bottom / (1.0 - slope);
    return acc;
}

double sup_from(const Weight& w, double r) {
    // sup_{t >= r} w(t); infinite when w ultimately grows
    const double top = r * 0x1p40;
    if (w.log_slope(top) < -1e-9) return kInf;
    const double span = std::log(top / r);
    const int steps = static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0)));
    double best = 0.0;
    for (int k = 0; k <= steps; ++k)
        best = std::max(best, w.eval(r * std::exp(span * k / steps)));
    return best;
}

double sup_reciprocal_below(const Weight& w, double r) {
    // sup_{t in (0, r)} 1/w(t); infinite when w vanishes toward 0
    const double bottom = r / 0x1p40;
    if (w.log_slope(bottom) < -1e-9) return kInf;
    const double span = std::log(r / bottom);
    const int steps = static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0)));
    double lo = kInf;
    for (int k = 0; k <= steps; ++k)
        lo = std::min(lo, w.eval(bottom * std::exp(span * k / steps)));
    return 1.0 / lo;
}

} // namespace

double conjugate_exponent(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("conjugate_exponent: p must be >= 1");
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

namespace {

double sup_below(const Weight& w, double r) {
    // sup_{t in (0, r)} w(t); infinite when w blows up toward 0
    const double bottom = r / 0x1p40;
    if (w.log_slope(bottom) > 1e-9) return kInf;
    const double span = std::log(r / bottom);
    const int steps = static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0)));
    double best = 0.0;
    for (int k = 0; k <= steps; ++k)
        best = std::max(best, w.eval(bottom * std::exp(span * k / steps)));
    return best;
}

double inf_from(const Weight& w, double r) {
    // inf_{t >= r} w(t); zero when w decays at infinity
    const double top = r * 0x1p40;
    if (w.log_slope(top) > 1e-9) return 0.0;
    const double span = std::log(top / r);
    const int steps = static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0)));
    double lo = kInf;
    for (int k = 0; k <= steps; ++k)
        lo = std::min(lo, w.eval(r * std::exp(span * k / steps)));
    return lo;
}

} // namespace

double muckenhoupt_condition(const HardyPair& pair, const RadiusGrid& window) {
    const double p = pair.p;
    if (!(p >= 1.0)) throw std::invalid_argument("muckenhoupt_condition: p must be >= 1");
    const double pc = conjugate_exponent(p);
    const bool up = pair.direction == HardyPair::Direction::FStarUp;

    // L^p norm of U over the region away from F's integration side, and the
    // L^{p'} norm of 1/V over the other side.
    auto u_factor = [&](double r) {
        if (std::isinf(p)) return up ? sup_from(pair.U, r) : sup_below(pair.U, r);
        const double integral = up ? plain_tail_integral(pair.U, p, r)
                                   : plain_head_integral(pair.U, p, r);
        return std::isinf(integral) ? kInf : std::pow(integral, 1.0 / p);
    };
    auto v_factor = [&](double r) {
        if (std::isinf(pc)) {
            const double lo = up ? 1.0 / sup_reciprocal_below(pair.V, r)
                                 : inf_from(pair.V, r);
            return lo == 0.0 ? kInf : 1.0 / lo;
        }
        const double integral = up ? plain_head_integral(pair.V, -pc, r)
                                   : plain_tail_integral(pair.V, -pc, r);
        return std::isinf(integral) ? kInf : std::pow(integral, 1.0 / pc);
    };

    double best = 0.0;
    for (double r : window.nodes()) {
        const double a = u_factor(r), b = v_factor(r);
        const double product = (std::isinf(a) || std::isinf(b)) ? kInf : a * b;
        best = std::max(best, product);
        if (std::isinf(best)) return kInf;
    }
    return best;
}

std::vector<double> running_integral(const TableFunction& f, bool from_left) {
    const auto& nodes = f.nodes();
    const auto& fv = f.values();
    std::vector<double> acc(nodes.size(), 0.0);
    if (from_left) {
        for (std::size_t i = 1; i < nodes.size(); ++i)
            acc[i] = acc[i - 1] + 0.5 * (fv[i] + fv[i - 1]) * (nodes[i] - nodes[i - 1]);
    } else {
        for (std::size_t i = nodes.size() - 1; i-- > 0;)
            acc[i] = acc[i + 1] + 0.5 * (fv[i] + fv[i + 1]) * (nodes[i + 1] - nodes[i]);
    }
    return acc;
}

double hardy_inequality_ratio(const HardyPair& pair, const TableFunction& test_f) {
    const auto& nodes = test_f.nodes();
    const auto& fv = test_f.values();
    if (nodes.size() < 2)
        throw std::invalid_argument("hardy_inequality_ratio: test function needs >= 2 nodes");
    for (double v : fv)
        if (v < 0.0)
            throw std::invalid_argument("hardy_inequality_ratio: test function must be >= 0");

    const bool up = pair.direction == HardyPair::Direction::FStarUp;
    const std::vector<double> big_f = running_integral(test_f, up);

    auto window_norm = [&](auto&& values) {
        if (std::isinf(pair.p)) {
            double m = 0.0;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                m = std::max(m, values(i));
            return m;
        }
        double acc = 0.0;
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const double g0 = std::pow(values(i - 1), pair.p);
            const double g1 = std::pow(values(i), pair.p);
            acc += 0.5 * (g0 + g1) * (nodes[i] - nodes[i - 1]);
        }
        return std::pow(acc, 1.0 / pair.p);
    };

    const double num =
        window_norm([&](std::size_t i) { return pair.U.eval(nodes[i]) * big_f[i]; });
    const double den =
        window_norm([&](std::size_t i) { return pair.V.eval(nodes[i]) * fv[i]; });
    if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
    return num / den;
}

namespace {

struct HalfQuantities {
    std::vector<double> inner;     // cumulative or tail integral of F_i
    std::vector<double> envelope;  // U_i at each node
};

} // namespace

LemmaWStarReport lemma_w_star_check(const GridFunction& f, const SpaceSpec& E,
                                    const Weight& w0, const Weight& w1,
                                    const ThetaFunction& theta, double u0, double u1,
                                    double u, const RadiusGrid& window,
                                    const LocalNormOptions& opts) {
    if (std::max(u0, u1) > u)
        throw HypothesisError("lemma cases need max(u0, u1) <= u");

    LemmaWStarReport report;
    const bool finite0 = !std::isinf(u0);
    const bool finite1 = !std::isinf(u1);
    report.lemma_case = (finite0 && finite1) ? 1 : (!finite0 ? 2 : 3);

    // hypothesis certificates
    if (report.lemma_case == 1) {
        const ClassReport star0 = check_W_star(w0, window);
        const ClassReport star1 = check_W_star(w1, window);
        if (!star0.pass) throw HypothesisError("w0 fails W^* on the window");
        if (!star1.pass) throw HypothesisError("w1 fails W^* on the window");
        report.certificates.push_back("w0:W_star(C=" + fmt(star0.constant) + ")");
        report.certificates.push_back("w1:W_star(C=" + fmt(star1.constant) + ")");
    }
    {
        // w_* = w0/w1 almost increasing (with an epsilon shift in case 1)
        const auto& nodes = window.nodes();
        double c_plain = 1.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                const double vi = w0.eval(nodes[i]) / w1.eval(nodes[i]);
                const double vj = w0.eval(nodes[j]) / w1.eval(nodes[j]);
                c_plain = std::max(c_plain, vi / vj);
            }
        if (c_plain > kAlmostMonotoneBound)
            throw HypothesisError("w0/w1 is not almost increasing on the window (C=" +
                                  fmt(c_plain) + ")");
        report.certificates.push_back("w*:almost_increasing(C=" + fmt(c_plain) + ")");
    }

    // grid-snapped window nodes; weights and norms are paired at the same radius
    std::vector<double> nodes;
    for (double r : window.nodes()) {
        const double s = std::min(snap_radius(r, f.h()), f.r_max());
        if (nodes.empty() || s > nodes.back()) nodes.push_back(s);
    }
    const std::vector<double> locals = local_norm_profile(f, nodes, E, opts);

    auto w_star = [&](double r) { return w0.eval(r) / w1.eval(r); };

    // F and U per half, on the snapped nodes
    const std::size_t m = nodes.size();
    std::vector<double> f0(m), f1(m), env0(m), env1(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = nodes[i];
        const double theta_at = theta.eval(1.0 / w_star(r));
        if (finite0) {
            f0[i] = std::pow(w0.eval(r) * locals[i], u0) / r;
            env0[i] = std::pow(theta_at, u0) *
                      (std::isinf(u) ? 1.0 : std::pow(r, -u0 / u));
        } else {
            f0[i] = w0.eval(r) * locals[i];
            env0[i] = theta_at;
        }
        if (finite1) {
            f1[i] = std::pow(w1.eval(r) * locals[i], u1) / r;
            env1[i] = std::pow(w_star(r) * theta_at, u1) *
                      (std::isinf(u) ? 1.0 : std::pow(r, -u1 / u));
        } else {
            f1[i] = w1.eval(r) * locals[i];
            env1[i] = w_star(r) * theta_at;
        }
    }

    // half 0: inner = int_0^r F0 dt (or running sup); outer L^{u/u0}
    auto trapezoid_running = [&](const std::vector<double>& g, bool from_left) {
        std::vector<double> acc(m, 0.0);
        if (from_left) {
            for (std::size_t i = 1; i < m; ++i)
                acc[i] = acc[i - 1] + 0.5 * (g[i] + g[i - 1]) * (nodes[i] - nodes[i - 1]);
        } else {
            for (std::size_t i = m - 1; i-- > 0;)
                acc[i] = acc[i + 1] + 0.5 * (g[i] + g[i + 1]) * (nodes[i + 1] - nodes[i]);
        }
        return acc;
    };
    auto running_sup = [&](const std::vector<double>& g, bool from_left) {
        std::vector<double> acc(m, 0.0);
        if (from_left) {
            double cur = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc[i] = cur = std::max(cur, g[i]);
        } else {
            double cur = 0.0;
            for (std::size_t i = m; i-- > 0;) acc[i] = cur = std::max(cur, g[i]);
        }
        return acc;
    };
    auto outer_norm = [&](const std::vector<double>& vals, double exponent) {
        // L^{u/exponent} over the window in plain measure, then ^(1/exponent)
        if (std::isinf(u)) {
            double sup = 0.0;
            for (double v : vals) sup = std::max(sup, v);
            return std::isinf(exponent) ? sup : std::pow(sup, 1.0 / exponent);
        }
        const double q = u / exponent;
        double acc = 0.0;
        for (std::size_t i = 1; i < m; ++i)
            acc += 0.5 * (std::pow(vals[i], q) + std::pow(vals[i - 1], q)) *
                   (nodes[i] - nodes[i - 1]);
        return std::pow(acc, 1.0 / u); // (acc^{1/q})^{1/exponent}
    };

    const std::vector<double> inner0 =
        finite0 ? trapezoid_running(f0, true) : running_sup(f0, true);
    const std::vector<double> inner1 =
        finite1 ? trapezoid_running(f1, false) : running_sup(f1, false);

    std::vector<double> prod0(m), prod1(m);
    for (std::size_t i = 0; i < m; ++i) {
        prod0[i] = env0[i] * inner0[i];
        prod1[i] = env1[i] * inner1[i];
    }
    report.lhs0 = outer_norm(prod0, finite0 ? u0 : kInf);
    report.lhs1 = outer_norm(prod1, finite1 ? u1 : kInf);

    const Weight w = compose_weight(w0, w1, theta);
    report.bwu = bwu_norm(f, BwuSpec{E, w, u, true, window}, opts);

    auto ratio = [](double n, double d) {
        if (n == 0.0 && d == 0.0) return 1.0;
        if (d == 0.0) return kInf;
        return n / d;
    };
    report.ratio0 = ratio(report.lhs0, report.bwu);
    report.ratio1 = ratio(report.lhs1, report.bwu);
    report.pass = std::isfinite(report.ratio0) && std::isfinite(report.ratio1);
    return report;
}

} // namespace bwu
