#include "bwu/weights.hpp"

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

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

double ell_log_factor(double r, double beta1, double beta2) {
    require(r > 0.0, "ell_log_factor: r must be positive");
    static const double e = std::exp(1.0);
    if (r < 1.0 / e) return std::pow(std::log(1.0 / r), -beta1);
    if (r > e) return std::pow(std::log(r), beta2);
    return 1.0;
}

ThetaFunction ThetaFunction::power(double theta) {
    require(theta > 0.0, "ThetaFunction::power: theta must be positive");
    ThetaFunction t;
    t.impl_ = Power{theta};
    return t;
}

ThetaFunction ThetaFunction::max_powers(double alpha, double beta) {
    require(alpha > 0.0 && beta > 0.0, "ThetaFunction::max_powers: exponents must be positive");
    ThetaFunction t;
    t.impl_ = MaxPowers{alpha, beta};
    return t;
}

ThetaFunction ThetaFunction::power_log(double theta, double beta1, double beta2) {
    require(theta > 0.0, "ThetaFunction::power_log: theta must be positive");
    ThetaFunction t;
    t.impl_ = PowerLog{theta, beta1, beta2};
    return t;
}

double ThetaFunction::eval(double r) const {
    require(r > 0.0, "ThetaFunction::eval: r must be positive");
    if (const auto* p = std::get_if<Power>(&impl_)) return std::pow(r, p->theta);
    if (const auto* m = std::get_if<MaxPowers>(&impl_))
        return std::max(std::pow(r, m->alpha), std::pow(r, m->beta));
    const auto& pl = std::get<PowerLog>(impl_);
    return std::pow(r, pl.theta) * ell_log_factor(r, pl.beta1, pl.beta2);
}

ThetaFunction ThetaFunction::dual() const {
    // t*Theta(1/t): power exponents reflect through 1, the log factor swaps
    // and negates its branches.
    if (const auto* p = std::get_if<Power>(&impl_)) return power(1.0 - p->theta);
    if (const auto* m = std::get_if<MaxPowers>(&impl_))
        return max_powers(1.0 - m->alpha, 1.0 - m->beta);
    const auto& pl = std::get<PowerLog>(impl_);
    return power_log(1.0 - pl.theta, -pl.beta2, -pl.beta1);
}

std::string ThetaFunction::text() const {
    if (const auto* p = std::get_if<Power>(&impl_))
        return "power{theta=" + fmt(p->theta) + "}";
    if (const auto* m = std::get_if<MaxPowers>(&impl_))
        return "max_powers{alpha=" + fmt(m->alpha) + ",beta=" + fmt(m->beta) + "}";
    const auto& pl = std::get<PowerLog>(impl_);
    return "power_log{theta=" + fmt(pl.theta) + ",beta1=" + fmt(pl.beta1) +
           ",beta2=" + fmt(pl.beta2) + "}";
}

Weight Weight::power(double sigma) {
    require(sigma >= 0.0, "Weight::power: sigma must be nonnegative");
    Weight w;
    w.impl_ = Power{sigma};
    return w;
}

Weight Weight::power_log(double sigma, double beta1, double beta2) {
    require(sigma >= 0.0, "Weight::power_log: sigma must be nonnegative");
    Weight w;
    w.impl_ = PowerLog{sigma, beta1, beta2};
    return w;
}

Weight Weight::max_powers(double e1, double e2) {
    Weight w;
    w.impl_ = MaxPowers{e1, e2};
    return w;
}

Weight Weight::composite(Weight w0, Weight w1, ThetaFunction theta) {
    Weight w;
    w.impl_ = Composite{std::make_shared<Weight>(std::move(w0)),
                        std::make_shared<Weight>(std::move(w1)), std::move(theta)};
    return w;
}

Weight Weight::table(std::vector<double> radii, std::vector<double> values) {
    require(radii.size() >= 2 && radii.size() == values.size(),
            "Weight::table: need at least two (r, w) pairs");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        require(radii[i] > 0.0 && values[i] > 0.0, "Weight::table: entries must be positive");
        if (i) require(radii[i] > radii[i - 1], "Weight::table: radii must increase");
    }
    Weight w;
    w.impl_ = Table{std::move(radii), std::move(values)};
    return w;
}

Weight Weight::scaled(double factor) const {
    require(factor > 0.0, "Weight::scaled: factor must be positive");
    Weight w = *this;
    w.scale_ *= factor;
    return w;
}

double Weight::eval(double r) const {
    require(r > 0.0, "Weight::eval: r must be positive");
    double v;
    if (const auto* p = std::get_if<Power>(&impl_)) {
        v = std::pow(r, -p->sigma);
    } else if (const auto* pl = std::get_if<PowerLog>(&impl_)) {
        v = std::pow(r, -pl->sigma) * ell_log_factor(r, pl->beta1, pl->beta2);
    } else if (const auto* m = std::get_if<MaxPowers>(&impl_)) {
        v = std::max(std::pow(r, -m->e1), std::pow(r, -m->e2));
    } else if (const auto* c = std::get_if<Composite>(&impl_)) {
        const double a = c->w0->eval(r);
        const double b = c->w1->eval(r);
        v = a * c->theta.eval(b / a);
    } else {
        const auto& t = std::get<Table>(impl_);
        const double lr = std::log(r);
        // log-log linear, end slopes extended beyond the table
        std::size_t j = 1;
        while (j + 1 < t.r.size() && r > t.r[j]) ++j;
        const double l0 = std::log(t.r[j - 1]), l1 = std::log(t.r[j]);
        const double v0 = std::log(t.w[j - 1]), v1 = std::log(t.w[j]);
        v = std::exp(v0 + (v1 - v0) * (lr - l0) / (l1 - l0));
    }
    return scale_ * v;
}

std::string Weight::text() const {
    std::string body;
    if (const auto* p = std::get_if<Power>(&impl_)) {
        body = "power{sigma=" + fmt(p->sigma) + "}";
    } else if (const auto* pl = std::get_if<PowerLog>(&impl_)) {
        body = "power_log{sigma=" + fmt(pl->sigma) + ",beta1=" + fmt(pl->beta1) +
               ",beta2=" + fmt(pl->beta2) + "}";
    } else if (const auto* m = std::get_if<MaxPowers>(&impl_)) {
        body = "max_powers{e1=" + fmt(m->e1) + ",e2=" + fmt(m->e2) + "}";
    } else if (const auto* c = std::get_if<Composite>(&impl_)) {
        body = "composite{w0=" + c->w0->text() + ",w1=" + c->w1->text() +
               ",theta=" + c->theta.text() + "}";
    } else {
        const auto& t = std::get<Table>(impl_);
        body = "table{r=[";
        for (std::size_t i = 0; i < t.r.size(); ++i)
            body += (i ? "," : "") + fmt(t.r[i]);
        body += "],w=[";
        for (std::size_t i = 0; i < t.w.size(); ++i)
            body += (i ? "," : "") + fmt(t.w[i]);
        body += "]}";
    }
    if (scale_ != 1.0) return "scaled{factor=" + fmt(scale_) + ",w=" + body + "}";
    return body;
}

std::optional<double> Weight::tail_decay() const {
    if (const auto* p = std::get_if<Power>(&impl_)) return p->sigma;
    if (const auto* pl = std::get_if<PowerLog>(&impl_)) return pl->sigma;
    if (const auto* m = std::get_if<MaxPowers>(&impl_)) return std::min(m->e1, m->e2);
    if (const auto* c = std::get_if<Composite>(&impl_)) {
        const auto s0 = c->w0->tail_decay();
        const auto s1 = c->w1->tail_decay();
        if (!s0 || !s1) return std::nullopt;
        const std::string t = c->theta.text();
        // branch exponents (1-e)*s0 + e*s1 for each Theta exponent e
        if (t.rfind("power{", 0) == 0 || t.rfind("power_log{", 0) == 0) {
            ThetaFunction th = c->theta;
            // recover theta exponent from the slope of Theta at large argument
            const double a = std::log(th.eval(1e8) / th.eval(1e6)) / std::log(100.0);
            return (1.0 - a) * *s0 + a * *s1;
        }
        // max_powers: slower-decaying branch dominates at infinity
        const double lo = std::log(c->theta.eval(1e-8) / c->theta.eval(1e-6)) /
                          std::log(1e-2);
        const double hi = std::log(c->theta.eval(1e8) / c->theta.eval(1e6)) /
                          std::log(1e2);
        const double d1 = (1.0 - lo) * *s0 + lo * *s1;
        const double d2 = (1.0 - hi) * *s0 + hi * *s1;
        return std::min(d1, d2);
    }
    return std::nullopt;
}

double Weight::log_slope(double r) const {
    if (const auto* p = std::get_if<Power>(&impl_)) return p->sigma;
    const double k = std::pow(2.0, 0.25);
    return std::log(eval(r / k) / eval(r * k)) / (2.0 * std::log(k));
}

std::optional<std::pair<double, double>> Weight::as_power() const {
    if (const auto* p = std::get_if<Power>(&impl_))
        return std::make_pair(scale_, p->sigma);
    if (const auto* pl = std::get_if<PowerLog>(&impl_))
        if (pl->beta1 == 0.0 && pl->beta2 == 0.0)
            return std::make_pair(scale_, pl->sigma);
    if (const auto* m = std::get_if<MaxPowers>(&impl_))
        if (m->e1 == m->e2) return std::make_pair(scale_, m->e1);
    return std::nullopt;
}

namespace {

// int_a^inf (c t^-s)^u dt/t
double power_tail(double c, double s, double u, double a) {
    const double su = s * u;
    if (su <= 0.0) return kInf;
    return std::pow(c, u) * std::pow(a, -su) / su;
}

} // namespace

std::optional<double> Weight::closed_tail_integral(double a, double u) const {
    require(a > 0.0 && u > 0.0, "closed_tail_integral: a and u must be positive");
    if (const auto* p = std::get_if<Power>(&impl_))
        return power_tail(scale_, p->sigma, u, a);
    if (const auto* pl = std::get_if<PowerLog>(&impl_)) {
        if (pl->beta1 == 0.0 && pl->beta2 == 0.0)
            return power_tail(scale_, pl->sigma, u, a);
        return std::nullopt;
    }
    if (const auto* m = std::get_if<MaxPowers>(&impl_)) {
        const double lo = std::min(m->e1, m->e2);  // governs t >= 1
        const double hi = std::max(m->e1, m->e2);  // governs t < 1
        if (a >= 1.0) return power_tail(scale_, lo, u, a);
        double head;
        const double hu = hi * u;
        const double cu = std::pow(scale_, u);
        if (hu == 0.0)
            head = cu * std::log(1.0 / a);
        else
            head = cu * (std::pow(a, -hu) - 1.0) / hu;
        const double tail = power_tail(scale_, lo, u, 1.0);
        return head + tail;
    }
    if (const auto* c = std::get_if<Composite>(&impl_)) {
        // reducible case: pure powers under a power Theta
        const auto* p0 = std::get_if<Power>(&c->w0->impl_);
        const auto* p1 = std::get_if<Power>(&c->w1->impl_);
        if (p0 && p1 && c->w0->scale_ == 1.0 && c->w1->scale_ == 1.0) {
            const std::string t = c->theta.text();
            if (t.rfind("power{", 0) == 0) {
                const double th = std::log(c->theta.eval(2.0)) / std::log(2.0);
                const double sigma = (1.0 - th) * p0->sigma + th * p1->sigma;
                return power_tail(scale_, sigma, u, a);
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

double improper_log_integral(const Weight& w, double u, double a) {
    if (auto cf = w.closed_tail_integral(a, u)) return *cf;
    // log-midpoint panels over ~14 decades, then a power-tail extrapolation
    // from the local slope at the far end.
    const double top = a * 0x1p48;
    const double span = std::log(top / a);
    const int panels = static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0)));
    const double d = span / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double m = a * std::exp((k + 0.5) * d);
        sum += std::pow(w.eval(m), u) * d;
        if (!std::isfinite(sum)) return kInf;
    }
    const double slope = w.log_slope(top);
    if (slope * u <= 1e-9) return kInf;
    sum += std::pow(w.eval(top), u) / (u * slope);
    return sum;
}

std::vector<double> epsilon_lattice() {
    std::vector<double> eps;
    for (int k = 1; k <= 19; ++k) eps.push_back(0.05 * k);
    return eps;
}

ClassReport check_doubling(const Weight& w, const RadiusGrid& probe) {
    require(probe.count() >= 2, "check_doubling: probe needs at least two nodes");
    const auto& nodes = probe.nodes();
    ClassReport rep;
    rep.constant = 1.0;
    rep.witness_r = rep.witness_s = nodes.front();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double ratio = nodes[i] / nodes[j];
            if (ratio < 0.5 - 1e-12 || ratio > 2.0 + 1e-12) continue;
            const double c = w.eval(nodes[i]) / w.eval(nodes[j]);
            if (c > rep.constant) {
                rep.constant = c;
                rep.witness_r = nodes[i];
                rep.witness_s = nodes[j];
            }
        }
    rep.pass = std::isfinite(rep.constant);
    return rep;
}

namespace {

ClassReport monotone_report(const Weight& w, const RadiusGrid& probe,
                            double bound, bool decreasing) {
    require(probe.count() >= 2, "monotonicity check: probe needs at least two nodes");
    const auto& nodes = probe.nodes();
    ClassReport rep;
    rep.constant = 1.0;
    rep.witness_r = rep.witness_s = nodes.front();
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = w.eval(nodes[i]);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            // r = nodes[i] <= s = nodes[j]
            const double c = decreasing ? vals[j] / vals[i] : vals[i] / vals[j];
            if (c > rep.constant) {
                rep.constant = c;
                rep.witness_r = nodes[i];
                rep.witness_s = nodes[j];
            }
        }
    rep.pass = rep.constant <= bound;
    return rep;
}

} // namespace

ClassReport check_almost_decreasing(const Weight& w, const RadiusGrid& probe,
                                    double bound) {
    return monotone_report(w, probe, bound, /*decreasing=*/true);
}

ClassReport check_almost_increasing(const Weight& w, const RadiusGrid& probe,
                                    double bound) {
    return monotone_report(w, probe, bound, /*decreasing=*/false);
}

ClassReport check_W_star(const Weight& w, const RadiusGrid& probe, double bound) {
    require(probe.count() >= 1, "check_W_star: degenerate probe");
    ClassReport rep;
    rep.constant = 0.0;
    for (double r : probe.nodes()) {
        const double integral = improper_log_integral(w, 1.0, r);
        if (!std::isfinite(integral)) {
            rep.pass = false;
            rep.constant = kInf;
            rep.witness_r = rep.witness_s = r;
            rep.note = "tail integral diverges";
            return rep;
        }
        const double c = integral / w.eval(r);
        if (c > rep.constant) {
            rep.constant = c;
            rep.witness_r = rep.witness_s = r;
        }
    }
    rep.pass = rep.constant <= bound;
    rep.note = w.closed_tail_integral(probe.nodes().front(), 1.0)
                   ? "closed-form tail"
                   : "quadrature + power-tail extrapolation";
    return rep;
}

ClassReport check_membership_Wu(const Weight& w, double u, const RadiusGrid& probe) {
    require(u > 0.0, "check_membership_Wu: u must be positive");
    ClassReport rep;
    if (std::isinf(u)) {
        const double top = std::max(4.0, probe.nodes().back());
        const double span = std::log(top);
        const int steps = std::max(2, static_cast<int>(std::ceil(span / (std::log(2.0) / 16.0))));
        double sup = 0.0, arg = 1.0;
        for (int k = 0; k <= steps; ++k) {
            const double r = std::exp(span * k / steps);
            const double v = w.eval(r);
            if (v > sup) {
                sup = v;
                arg = r;
            }
        }
        // an increasing far tail makes the sup over [1, inf) infinite
        if (w.log_slope(top * 16.0) < -1e-9) {
            rep.pass = false;
            rep.constant = kInf;
            rep.note = "weight grows at infinity";
            return rep;
        }
        rep.constant = sup;
        rep.witness_r = rep.witness_s = arg;
        rep.pass = std::isfinite(sup);
        return rep;
    }
    const double integral = improper_log_integral(w, u, 1.0);
    if (!std::isfinite(integral)) {
        rep.pass = false;
        rep.constant = kInf;
        rep.note = "integral diverges";
        return rep;
    }
    rep.constant = std::pow(integral, 1.0 / u);
    rep.witness_r = 1.0;
    rep.witness_s = probe.nodes().back();
    rep.pass = true;
    return rep;
}

ClassReport check_theta_class(const ThetaFunction& theta, const RadiusGrid& probe,
                              double bound) {
    const auto& nodes = probe.nodes();
    const auto eps = epsilon_lattice();
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = theta.eval(nodes[i]);

    ClassReport best;
    best.constant = kInf;
    for (std::size_t a = 0; a < eps.size(); ++a)
        for (std::size_t b = a; b < eps.size(); ++b) {
            double c = 1.0;
            double wr = nodes.front(), ws = nodes.front();
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (std::size_t j = 0; j < nodes.size(); ++j) {
                    if (i == j) continue;
                    const double t = nodes[j] / nodes[i];
                    const double cap = std::max(std::pow(t, eps[a]), std::pow(t, eps[b]));
                    const double ratio = vals[j] / vals[i] / cap;
                    if (ratio > c) {
                        c = ratio;
                        wr = nodes[i];
                        ws = nodes[j];
                    }
                }
            if (c < best.constant) {
                best.constant = c;
                best.witness_r = wr;
                best.witness_s = ws;
                best.note = "eps=" + fmt(eps[a]) + ",eps'=" + fmt(eps[b]);
            }
        }
    best.pass = best.constant <= bound;
    return best;
}

ClassReport check_power_shifted_almost_increasing(const Weight& w,
                                                  const RadiusGrid& probe,
                                                  double bound) {
    ClassReport best;
    best.constant = kInf;
    const auto& nodes = probe.nodes();
    std::vector<double> wv(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) wv[i] = w.eval(nodes[i]);
    for (double e : epsilon_lattice()) {
        // v(r) = w(r) r^{-e} must be almost increasing
        double c = 1.0, wr = nodes.front(), ws = nodes.front();
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                const double vi = wv[i] * std::pow(nodes[i], -e);
                const double vj = wv[j] * std::pow(nodes[j], -e);
                const double ratio = vi / vj;
                if (ratio > c) {
                    c = ratio;
                    wr = nodes[i];
                    ws = nodes[j];
                }
            }
        if (c < best.constant) {
            best.constant = c;
            best.witness_r = wr;
            best.witness_s = ws;
            best.note = "eps=" + fmt(e);
        }
        if (c <= bound) break;
    }
    best.pass = best.constant <= bound;
    return best;
}

Weight compose_weight(const Weight& w0, const Weight& w1, const ThetaFunction& theta) {
    return Weight::composite(w0, w1, theta);
}

} // namespace bwu
