#include "bwu/bwu_norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
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

std::string BwuSpec::text() const {
    std::string s = homogeneous ? "hB{" : "B{";
    s += "E=" + E.text() + ",w=" + w.text() + ",u=";
    s += std::isinf(u) ? "inf" : fmt(u);
    s += ",window=[" + fmt(radii.r_min()) + "," + fmt(radii.rho()) + "," +
         std::to_string(radii.count()) + "]}";
    return s;
}

double lu_norm(std::span<const double> values, double log_step, double u) {
    if (values.empty()) return 0.0;
    if (std::isinf(u)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }
    double acc = 0.0;
    for (double v : values) acc += std::pow(v, u) * log_step;
    return std::pow(acc, 1.0 / u);
}

double bwu_norm(const GridFunction& f, const BwuSpec& spec,
                const LocalNormOptions& opts) {
    if (!(spec.u > 0.0)) throw std::invalid_argument("bwu_norm: u must be positive");
    std::vector<double> snapped;
    snapped.reserve(static_cast<std::size_t>(spec.radii.count()));
    for (double r : spec.radii.nodes()) {
        if (!spec.homogeneous && r < 1.0 - 1e-12) continue;
        snapped.push_back(std::min(snap_radius(r, f.h()), f.r_max()));
    }
    if (snapped.empty())
        throw std::domain_error("bwu_norm: window is empty after the homogeneity filter");
    const std::vector<double> locals = local_norm_profile(f, snapped, spec.E, opts);
    std::vector<double> weighted(snapped.size());
    for (std::size_t i = 0; i < snapped.size(); ++i)
        weighted[i] = spec.w.eval(snapped[i]) * locals[i];
    return lu_norm(weighted, spec.radii.log_step(), spec.u);
}

double embedding_ratio(const GridFunction& f, const SpaceSpec& E, const Weight& w,
                       double u0, double u1, const RadiusGrid& radii,
                       bool homogeneous, const LocalNormOptions& opts) {
    if (!(u0 < u1)) throw std::invalid_argument("embedding_ratio: needs u0 < u1");
    const BwuSpec s0{E, w, u0, homogeneous, radii};
    const BwuSpec s1{E, w, u1, homogeneous, radii};
    const double n0 = bwu_norm(f, s0, opts);
    const double n1 = bwu_norm(f, s1, opts);
    if (n0 == 0.0 && n1 == 0.0) return 0.0;
    if (n0 == 0.0) return kInf;
    return n1 / n0;
}

namespace {

// Double log-smoothing of phi; strictly monotone and comparable to phi.
// Direction follows the sign of the power behavior at the window scale.
class MonotoneSurrogate {
public:
    MonotoneSurrogate(const Weight& phi, double lo, double hi) {
        const double slope = phi.log_slope(std::sqrt(lo * hi));
        decreasing_ = slope > 0.0;
        lo_ = lo / 4096.0;
        hi_ = hi * 4096.0;
        const int per_octave = 16;
        const double span = std::log(hi_ / lo_);
        const int steps =
            std::max(8, static_cast<int>(std::ceil(span * per_octave / std::log(2.0))));
        d_ = span / steps;
        grid_.resize(static_cast<std::size_t>(steps) + 1);
        for (int k = 0; k <= steps; ++k) grid_[static_cast<std::size_t>(k)] = lo_ * std::exp(k * d_);

        const std::vector<double> phi1 = smooth([&](double r) { return phi.eval(r); }, phi);
        values_ = smooth([&](double r) { return interp(phi1, r); }, phi);
    }

    double eval(double r) const { return interp(values_, r); }
    bool decreasing() const { return decreasing_; }

private:
    std::vector<double> smooth(auto&& g, const Weight& phi) const {
        std::vector<double> out(grid_.size(), 0.0);
        if (!decreasing_) {
            // head model: g ~ r^a below the grid with a from the local slope
            const double a = std::max(1e-6, -phi.log_slope(lo_));
            double acc = g(grid_.front()) / a;
            out.front() = acc;
            for (std::size_t k = 1; k < grid_.size(); ++k) {
                const double mid = std::sqrt(grid_[k - 1] * grid_[k]);
                acc += g(mid) * d_;
                out[k] = acc;
            }
        } else {
            const double a = std::max(1e-6, phi.log_slope(hi_));
            double acc = g(grid_.back()) / a;
            out.back() = acc;
            for (std::size_t k = grid_.size() - 1; k-- > 0;) {
                const double mid = std::sqrt(grid_[k] * grid_[k + 1]);
                acc += g(mid) * d_;
                out[k] = acc;
            }
        }
        return out;
    }

    double interp(const std::vector<double>& vals, double r) const {
        const double pos = std::log(r / lo_) / d_;
        const double clamped = std::clamp(pos, 0.0, static_cast<double>(vals.size() - 1));
        const std::size_t k =
            std::min(vals.size() - 2, static_cast<std::size_t>(clamped));
        const double t = clamped - static_cast<double>(k);
        return vals[k] * (1.0 - t) + vals[k + 1] * t;
    }

    bool decreasing_ = false;
    double lo_ = 0.0, hi_ = 0.0, d_ = 0.0;
    std::vector<double> grid_, values_;
};

bool strictly_monotone(const Weight& phi, const RadiusGrid& radii) {
    const auto& nodes = radii.nodes();
    bool inc = true, dec = true;
    double prev = phi.eval(nodes.front());
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double v = phi.eval(nodes[i]);
        inc = inc && v > prev;
        dec = dec && v < prev;
        prev = v;
    }
    return inc || dec;
}

} // namespace

std::pair<double, double> change_of_variable_check(const TableFunction& G,
                                                   const Weight& phi, double u,
                                                   const RadiusGrid& radii) {
    const auto& nodes = radii.nodes();
    std::vector<double> base, mapped;
    base.reserve(nodes.size());
    mapped.reserve(nodes.size());

    const bool direct = strictly_monotone(phi, radii);
    std::optional<MonotoneSurrogate> surrogate;
    if (!direct) surrogate.emplace(phi, nodes.front(), nodes.back());

    for (double r : nodes) {
        base.push_back(G.eval(r));
        const double arg = direct ? phi.eval(r) : surrogate->eval(r);
        mapped.push_back(G.eval(arg));
    }
    const double norm_base = lu_norm(base, radii.log_step(), u);
    const double norm_mapped = lu_norm(mapped, radii.log_step(), u);
    if (norm_base == 0.0 && norm_mapped == 0.0) return {1.0, 1.0};
    if (norm_base == 0.0 || norm_mapped == 0.0) return {0.0, kInf};
    return {norm_mapped / norm_base, norm_base / norm_mapped};
}

} // namespace bwu
