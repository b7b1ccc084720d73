#include "bwu/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bwu {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

KernelSpec KernelSpec::hilbert() { return KernelSpec{Kind::Hilbert1d, 1.0, {1.0}}; }

KernelSpec KernelSpec::riesz_like(std::vector<double> sector_values, double kappa) {
    require(!sector_values.empty(), "KernelSpec: needs at least one sector value");
    require(kappa > 0.0 && kappa <= 1.0, "KernelSpec: kappa must lie in (0,1]");
    return KernelSpec{Kind::RieszLike, kappa, std::move(sector_values)};
}

double KernelSpec::size_constant() const {
    double m = 0.0;
    for (double v : sectors) m = std::max(m, std::abs(v));
    return std::max(m, 1e-300);
}

double KernelSpec::eval(std::span<const double> x, std::span<const double> y,
                        int dim) const {
    if (dim == 1) {
        const double d = x[0] - y[0];
        if (kind == Kind::Hilbert1d) return 1.0 / d;
        return sectors[0] / d; // odd symbol on {-1, +1}
    }
    const double dx = x[0] - y[0], dy = x[1] - y[1];
    const double rr = dx * dx + dy * dy;
    if (kind == Kind::Hilbert1d)
        throw std::invalid_argument("KernelSpec: hilbert_1d is one dimensional");
    double angle = std::atan2(dy, dx); // (-pi, pi]
    double sign = 1.0;
    if (angle < 0.0) {
        angle += std::numbers::pi;
        sign = -1.0;
    }
    const std::size_t m = sectors.size();
    std::size_t idx = static_cast<std::size_t>(angle / std::numbers::pi *
                                               static_cast<double>(m));
    idx = std::min(idx, m - 1);
    return sign * sectors[idx] / rr;
}

namespace {

// Paint-by-decreasing-value: every aligned interval is a candidate; the
// best one covering each cell wins. O(N^2 log N) overall.
std::vector<double> maximal_1d(const GridFunction& f, double alpha) {
    const int n = f.cells_per_axis();
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i)
        prefix[static_cast<std::size_t>(i) + 1] =
            prefix[static_cast<std::size_t>(i)] + std::abs(f.at(i));

    std::vector<double> len_factor(static_cast<std::size_t>(n) + 1, 0.0);
    for (int len = 1; len <= n; ++len)
        len_factor[static_cast<std::size_t>(len)] =
            std::pow(static_cast<double>(len) * f.h(), alpha - 1.0);

    struct Interval {
        double value;
        int a, b;
    };
    std::vector<Interval> intervals;
    intervals.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b <= n; ++b)
            intervals.push_back(
                {(prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a)]) *
                     f.h() * len_factor[static_cast<std::size_t>(b - a)],
                 a, b});
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& l, const Interval& r) { return l.value > r.value; });

    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    std::vector<int> next(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) next[static_cast<std::size_t>(i)] = i;
    auto find = [&](int i) {
        while (next[static_cast<std::size_t>(i)] != i) {
            next[static_cast<std::size_t>(i)] =
                next[static_cast<std::size_t>(next[static_cast<std::size_t>(i)])];
            i = next[static_cast<std::size_t>(i)];
        }
        return i;
    };
    int remaining = n;
    for (const Interval& iv : intervals) {
        if (remaining == 0) break;
        for (int i = find(iv.a); i < iv.b; i = find(i)) {
            out[static_cast<std::size_t>(i)] = iv.value;
            next[static_cast<std::size_t>(i)] = i + 1;
            --remaining;
        }
    }
    return out;
}

// Dyadic sidelengths, free aligned positions, clamped to the domain.
std::vector<double> maximal_2d(const GridFunction& f, double alpha) {
    const int n = f.cells_per_axis();
    CubeSums sums(f, 1.0);
    std::vector<double> out(f.cell_count(), 0.0);

    std::vector<int> lens;
    for (int len = 1; len <= n; len *= 2) lens.push_back(len);

    for (int cy = 0; cy < n; ++cy)
        for (int cx = 0; cx < n; ++cx) {
            double best = 0.0;
            for (int len : lens) {
                const double vol = static_cast<double>(len) * f.h() *
                                   static_cast<double>(len) * f.h();
                const double factor = std::pow(vol, alpha / 2.0 - 1.0);
                const int ax_lo = std::max(0, cx - len + 1);
                const int ax_hi = std::min(cx, n - len);
                for (int ax = ax_lo; ax <= ax_hi; ++ax) {
                    const int ay_lo = std::max(0, cy - len + 1);
                    const int ay_hi = std::min(cy, n - len);
                    for (int ay = ay_lo; ay <= ay_hi; ++ay) {
                        const double integral =
                            sums.sum_abs_p(ax, ax + len, ay, ay + len) * f.h() * f.h();
                        best = std::max(best, integral * factor);
                    }
                }
            }
            out[static_cast<std::size_t>(cy) * n + cx] = best;
        }
    return out;
}

} // namespace

GridFunction maximal(const GridFunction& f, double alpha) {
    require(alpha >= 0.0 && alpha < static_cast<double>(f.dim()),
            "maximal: alpha must lie in [0, dim)");
    std::vector<double> out =
        f.dim() == 1 ? maximal_1d(f, alpha) : maximal_2d(f, alpha);
    return GridFunction::create(f.dim(), f.h(), f.r_max(),
                                "M[" + fmt(alpha) + "](" + f.label() + ")",
                                std::move(out));
}

namespace {

// int_{Q_{h/2}} |y|^{alpha-dim} dy: in-cell correction for the potential.
double diagonal_cell_integral(int dim, double h, double alpha) {
    if (dim == 1) return 2.0 * std::pow(h / 2.0, alpha) / alpha;
    // 8/alpha (h/2)^alpha * int_0^{pi/4} sec(t)^alpha dt, Simpson on the angle
    const int steps = 256;
    const double b = std::numbers::pi / 4.0;
    double acc = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double t0 = b * k / steps, t1 = b * (k + 1) / steps;
        const double tm = 0.5 * (t0 + t1);
        auto g = [&](double t) { return std::pow(std::cos(t), -alpha); };
        acc += (g(t0) + 4.0 * g(tm) + g(t1)) * (t1 - t0) / 6.0;
    }
    return 8.0 / alpha * std::pow(h / 2.0, alpha) * acc;
}

} // namespace

GridFunction fractional_integral(const GridFunction& f, double alpha) {
    require(alpha > 0.0 && alpha < static_cast<double>(f.dim()),
            "fractional_integral: alpha must lie in (0, dim)");
    const int n = f.cells_per_axis();
    const double h = f.h();
    std::vector<double> out(f.cell_count(), 0.0);
    const double diag = diagonal_cell_integral(f.dim(), h, alpha);

    if (f.dim() == 1) {
        std::vector<double> kern(static_cast<std::size_t>(n), 0.0);
        for (int d = 1; d < n; ++d)
            kern[static_cast<std::size_t>(d)] =
                std::pow(static_cast<double>(d) * h, alpha - 1.0) * h;
        for (int i = 0; i < n; ++i) {
            double acc = f.at(i) * diag;
            for (int j = 0; j < n; ++j)
                if (j != i) acc += f.at(j) * kern[static_cast<std::size_t>(std::abs(i - j))];
            out[static_cast<std::size_t>(i)] = acc;
        }
    } else {
        std::vector<double> kern(static_cast<std::size_t>(n) * n, 0.0);
        for (int dy = 0; dy < n; ++dy)
            for (int dx = 0; dx < n; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const double d = h * std::sqrt(static_cast<double>(dx) * dx +
                                               static_cast<double>(dy) * dy);
                kern[static_cast<std::size_t>(dy) * n + dx] =
                    std::pow(d, alpha - 2.0) * h * h;
            }
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double acc = f.at(ix, iy) * diag;
                for (int jy = 0; jy < n; ++jy)
                    for (int jx = 0; jx < n; ++jx) {
                        if (jx == ix && jy == iy) continue;
                        acc += f.at(jx, jy) *
                               kern[static_cast<std::size_t>(std::abs(iy - jy)) * n +
                                    std::abs(ix - jx)];
                    }
                out[static_cast<std::size_t>(iy) * n + ix] = acc;
            }
    }
    return GridFunction::create(f.dim(), f.h(), f.r_max(),
                                "I[" + fmt(alpha) + "](" + f.label() + ")",
                                std::move(out));
}

GridFunction modified_fractional_integral(const GridFunction& f, double alpha) {
    GridFunction base = fractional_integral(f, alpha);
    // the subtracted term integrates f against a fixed kernel, so it only
    // shifts the output by a constant
    const int n = f.cells_per_axis();
    const double h = f.h();
    double shift = 0.0;
    if (f.dim() == 1) {
        for (int j = 0; j < n; ++j) {
            const double y = f.center(j);
            if (std::abs(y) < 1.0) continue;
            shift += f.at(j) * std::pow(std::abs(y), alpha - 1.0) * h;
        }
    } else {
        for (int jy = 0; jy < n; ++jy)
            for (int jx = 0; jx < n; ++jx) {
                const double y0 = f.center(jx), y1 = f.center(jy);
                if (std::max(std::abs(y0), std::abs(y1)) < 1.0) continue;
                shift += f.at(jx, jy) *
                         std::pow(std::hypot(y0, y1), alpha - 2.0) * h * h;
            }
    }
    std::vector<double> out = base.samples();
    for (double& v : out) v -= shift;
    return GridFunction::create(f.dim(), f.h(), f.r_max(),
                                "Imod[" + fmt(alpha) + "](" + f.label() + ")",
                                std::move(out));
}

namespace {

GridFunction singular_core(const GridFunction& f, const KernelSpec& kernel, double eta,
                           bool modified, const std::string& name) {
    require(eta >= f.h() / 2.0 - 1e-12, "singular integral: eta must be >= h/2");
    const int n = f.cells_per_axis();
    const double h = f.h();
    std::vector<double> out(f.cell_count(), 0.0);

    if (f.dim() == 1) {
        for (int i = 0; i < n; ++i) {
            const double x = f.center(i);
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                const double y = f.center(j);
                if (std::abs(x - y) < eta) continue;
                double k = kernel.eval(std::array{x}, std::array{y}, 1);
                if (modified && std::abs(y) >= 1.0)
                    k -= kernel.eval(std::array{0.0}, std::array{y}, 1);
                acc += k * f.at(j) * h;
            }
            out[static_cast<std::size_t>(i)] = acc;
        }
    } else {
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double x0 = f.center(ix), x1 = f.center(iy);
                double acc = 0.0;
                for (int jy = 0; jy < n; ++jy)
                    for (int jx = 0; jx < n; ++jx) {
                        const double y0 = f.center(jx), y1 = f.center(jy);
                        if (std::hypot(x0 - y0, x1 - y1) < eta) continue;
                        double k = kernel.eval(std::array{x0, x1}, std::array{y0, y1}, 2);
                        if (modified && std::max(std::abs(y0), std::abs(y1)) >= 1.0)
                            k -= kernel.eval(std::array{0.0, 0.0},
                                             std::array{y0, y1}, 2);
                        acc += k * f.at(jx, jy) * h * h;
                    }
                out[static_cast<std::size_t>(iy) * n + ix] = acc;
            }
    }
    return GridFunction::create(f.dim(), f.h(), f.r_max(), name + "(" + f.label() + ")",
                                std::move(out));
}

} // namespace

GridFunction truncated_singular(const GridFunction& f, const KernelSpec& kernel,
                                double eta) {
    return singular_core(f, kernel, eta, false, "T");
}

GridFunction modified_singular(const GridFunction& f, const KernelSpec& kernel,
                               double eta) {
    return singular_core(f, kernel, eta, true, "Tmod");
}

GridFunction phase_twisted_maximal(const GridFunction& f, double p) {
    require(p >= 1.0, "phase_twisted_maximal: p must be >= 1");
    double acc = 0.0;
    for (double v : f.samples()) acc += std::pow(std::abs(v), p);
    const double norm = std::pow(acc * f.cell_volume(), 1.0 / p);
    const double phase = std::cos(norm);
    GridFunction m = maximal(f, 0.0);
    std::vector<double> out = m.samples();
    for (double& v : out) v *= phase;
    return GridFunction::create(f.dim(), f.h(), f.r_max(),
                                "phaseM(" + f.label() + ")", std::move(out));
}

std::string OperatorSpec::text() const {
    std::string s = tag;
    if (tag == "maximal" || tag == "fractional" || tag == "modified_fractional")
        s += "{alpha=" + fmt(alpha) + "}";
    else if (tag == "truncated_singular" || tag == "modified_singular")
        s += "{eta=" + fmt(eta) + "}";
    else if (tag == "phase_twisted_maximal")
        s += "{p=" + fmt(phase_p) + "}";
    return s;
}

GridFunction apply_operator(const OperatorSpec& op, const GridFunction& f) {
    if (op.tag == "maximal") return maximal(f, op.alpha);
    if (op.tag == "fractional") return fractional_integral(f, op.alpha);
    if (op.tag == "modified_fractional") return modified_fractional_integral(f, op.alpha);
    const double eta = op.eta > 0.0 ? op.eta : f.h() / 2.0;
    if (op.tag == "truncated_singular") return truncated_singular(f, op.kernel, eta);
    if (op.tag == "modified_singular") return modified_singular(f, op.kernel, eta);
    if (op.tag == "phase_twisted_maximal") return phase_twisted_maximal(f, op.phase_p);
    if (op.tag == "zero") {
        std::vector<double> zeros(f.cell_count(), 0.0);
        return GridFunction::create(f.dim(), f.h(), f.r_max(), "0(" + f.label() + ")",
                                    std::move(zeros));
    }
    throw std::invalid_argument("apply_operator: unknown tag '" + op.tag + "'");
}

namespace {

GridFunction combine(const GridFunction& f, const GridFunction& g, double cf, double cg,
                     const std::string& label) {
    std::vector<double> out(f.cell_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = cf * f.samples()[i] + cg * g.samples()[i];
    return GridFunction::create(f.dim(), f.h(), f.r_max(), label, std::move(out));
}

} // namespace

CertificateResult sublinearity_certificate(const OperatorSpec& op, const GridFunction& f,
                                           const GridFunction& g, double tol) {
    const GridFunction tf = apply_operator(op, f);
    const GridFunction tg = apply_operator(op, g);
    const GridFunction tfg = apply_operator(op, combine(f, g, 1.0, 1.0, "f+g"));
    CertificateResult res;
    res.holds = true;
    for (std::size_t i = 0; i < tf.cell_count(); ++i) {
        const double excess = std::abs(tfg.samples()[i]) -
                              (std::abs(tf.samples()[i]) + std::abs(tg.samples()[i]));
        if (excess > res.worst_excess) {
            res.worst_excess = excess;
            res.witness_cell = i;
        }
    }
    res.holds = res.worst_excess <= tol;
    return res;
}

CertificateResult difference_certificate(const OperatorSpec& op, const GridFunction& f,
                                         const GridFunction& g, double c, double tol) {
    const GridFunction tf = apply_operator(op, f);
    const GridFunction tg = apply_operator(op, g);
    const GridFunction tdiff = apply_operator(op, combine(f, g, 1.0, -1.0, "f-g"));
    CertificateResult res;
    for (std::size_t i = 0; i < tf.cell_count(); ++i) {
        const double excess = std::abs(tf.samples()[i] - tg.samples()[i]) -
                              c * std::abs(tdiff.samples()[i]);
        if (excess > res.worst_excess) {
            res.worst_excess = excess;
            res.witness_cell = i;
        }
    }
    res.holds = res.worst_excess <= tol;
    return res;
}

namespace {

[[noreturn]] void refuse(const std::string& inequality) {
    throw HypothesisError("operator hypothesis violated: " + inequality);
}

void need(bool ok, const std::string& inequality) {
    if (!ok) refuse(inequality);
}

} // namespace

void check_operator_hypotheses(const OperatorSpec& op, int dim, const SpaceSpec& source,
                               const SpaceSpec& target, const TupleParams& params) {
    const double n = static_cast<double>(dim);
    if (op.tag == "zero" || op.tag == "phase_twisted_maximal") return;

    need(params.sigma > params.tau && params.tau > 0.0, "sigma > tau > 0");

    if (op.tag == "modified_singular") {
        need(source.is_oscillation() && target.is_oscillation(),
             "modified singular integrals act on oscillation spaces");
        need(-n / source.p + params.sigma < params.kappa, "-n/p + sigma < kappa");
        need(source.lambda >= -n / source.p - 1e-12 &&
                 source.lambda < params.kappa - params.sigma,
             "lambda in [-n/p, kappa - sigma)");
        return;
    }
    if (op.tag == "modified_fractional") {
        need(source.is_oscillation() && target.is_oscillation(),
             "modified fractional integrals act on oscillation spaces");
        need(std::abs(target.lambda - (source.lambda + op.alpha)) < 1e-9,
             "mu = lambda + alpha");
        need(params.sigma + source.lambda + op.alpha < 1.0, "sigma + lambda + alpha < 1");
        const double p = source.p, q = target.p;
        const bool cond1 = p == 1.0 && q >= 1.0 && q < n / (n - op.alpha);
        const bool cond2 = p > 1.0 && p < n / op.alpha && q >= 1.0 &&
                           q <= p * n / (n - p * op.alpha);
        const bool cond3 = p >= n / op.alpha && q >= 1.0;
        need(cond1 || cond2 || cond3, "(p, q) outside cases (i)-(iii)");
        return;
    }

    // lattice-space theorems share the exponent bookkeeping
    need(source.is_lattice() && target.is_lattice(),
         "maximal/size-condition theorems act on (weak) Morrey scales");
    need(std::abs(target.lambda - (source.lambda + op.alpha)) < 1e-9,
         "mu = lambda + alpha");
    need(source.lambda >= -n / source.p - 1e-12 && source.lambda < 0.0,
         "lambda in [-n/p, 0)");
    need(target.lambda >= -n / target.p - 1e-12 && target.lambda < 0.0,
         "mu in [-n/q, 0)");
    need(target.p <= (source.lambda / target.lambda) * source.p + 1e-12,
         "q <= (lambda/mu) p");
    const double budget = params.sigma + source.lambda + op.alpha;
    if (op.tag == "maximal")
        need(budget <= 1e-12, "sigma + lambda + alpha <= 0");
    else
        need(budget < -1e-12, "sigma + lambda + alpha < 0");
}

OperatorReport boundedness_table(const OperatorSpec& op,
                                 std::span<const GridFunction> corpus,
                                 const BwuSpec& source, const BwuSpec& target,
                                 const TupleParams& params,
                                 const LocalNormOptions& opts) {
    check_operator_hypotheses(op, corpus.empty() ? 1 : corpus.front().dim(), source.E,
                              target.E, params);
    OperatorReport report;
    report.hypothesis_ids.push_back("op=" + op.text());
    report.hypothesis_ids.push_back("sigma=" + fmt(params.sigma) + ",tau=" + fmt(params.tau));
    for (const GridFunction& f : corpus) {
        OperatorRow row;
        row.label = f.label();
        row.boundary_flagged = f.boundary_mass_fraction() > 0.10;
        const GridFunction tf = apply_operator(op, f);
        row.source_norm = bwu_norm(f, source, opts);
        row.target_norm = bwu_norm(tf, target, opts);
        if (row.source_norm == 0.0)
            row.ratio = row.target_norm == 0.0
                            ? 0.0
                            : std::numeric_limits<double>::infinity();
        else
            row.ratio = row.target_norm / row.source_norm;
        report.sup_ratio = std::max(report.sup_ratio, row.ratio);
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace bwu
