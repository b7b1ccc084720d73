#include "bwu/decompose.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bwu {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double sup_norm(std::span<const double> x) {
    double m = 0.0;
    for (double c : x) m = std::max(m, std::abs(c));
    return m;
}

} // namespace

double CutoffProfile::eval(std::span<const double> x) const {
    return std::min(1.0, std::max(0.0, 2.0 - sup_norm(x)));
}

double CutoffProfile::eval_scaled(std::span<const double> x, double r) const {
    return std::min(1.0, std::max(0.0, 2.0 - sup_norm(x) / r));
}

Decomposition lattice_decompose(const GridFunction& f, double r) {
    require(radius_aligned(r, f.h()), "lattice_decompose: r must be grid aligned");
    require(r <= f.r_max() * (1.0 + 1e-9), "lattice_decompose: r exceeds the master cube");
    const int m = static_cast<int>(std::llround(r / f.h()));
    const int n = f.cells_per_axis();
    const int lo = n / 2 - m, hi = n / 2 + m;

    std::vector<double> inside(f.cell_count(), 0.0), outside(f.cell_count(), 0.0);
    auto in_cube = [&](int ix, int iy) {
        if (f.dim() == 1) return ix >= lo && ix < hi;
        return ix >= lo && ix < hi && iy >= lo && iy < hi;
    };
    for (int iy = 0; iy < (f.dim() == 1 ? 1 : n); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t idx = f.dim() == 1
                                        ? static_cast<std::size_t>(ix)
                                        : static_cast<std::size_t>(iy) * n + ix;
            const double v = f.samples()[idx];
            if (in_cube(ix, iy))
                inside[idx] = v;
            else
                outside[idx] = v;
        }

    Decomposition dec{
        GridFunction::create(f.dim(), f.h(), f.r_max(), f.label() + "|chi", std::move(inside)),
        GridFunction::create(f.dim(), f.h(), f.r_max(), f.label() + "|tail", std::move(outside)),
        static_cast<double>(m) * f.h(), 1.0, 1.0, 1.0, "lattice"};
    return dec;
}

Decomposition campanato_decompose(const GridFunction& f, double r) {
    require(radius_aligned(r, f.h()), "campanato_decompose: r must be grid aligned");
    require(2.0 * r <= f.r_max() * (1.0 + 1e-9),
            "campanato_decompose: 2r exceeds the master cube");
    const double rr = snap_radius(r, f.h());
    const std::array<double, 2> origin{0.0, 0.0};
    const double mean =
        cube_mean(f, std::span<const double>(origin.data(), static_cast<std::size_t>(f.dim())),
                  2.0 * rr);

    const CutoffProfile tent;
    const int n = f.cells_per_axis();
    std::vector<double> near(f.cell_count(), 0.0), far(f.cell_count(), 0.0);
    for (int iy = 0; iy < (f.dim() == 1 ? 1 : n); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t idx = f.dim() == 1
                                        ? static_cast<std::size_t>(ix)
                                        : static_cast<std::size_t>(iy) * n + ix;
            std::array<double, 2> x{f.center(ix), f.dim() == 1 ? 0.0 : f.center(iy)};
            const double cutoff = tent.eval_scaled(
                std::span<const double>(x.data(), static_cast<std::size_t>(f.dim())), rr);
            const double v = f.samples()[idx];
            double g0 = (v - mean) * cutoff;
            double g1 = v - g0;
            // re-derive until the pair sums back to the sample bit-exactly
            for (int pass = 0; pass < 4 && g0 + g1 != v; ++pass) {
                g0 = v - g1;
                g1 = v - g0;
            }
            near[idx] = g0;
            far[idx] = g1;
        }

    Decomposition dec{
        GridFunction::create(f.dim(), f.h(), f.r_max(), f.label() + "|osc", std::move(near)),
        GridFunction::create(f.dim(), f.h(), f.r_max(), f.label() + "|rest", std::move(far)),
        rr, 3.0, 3.0, 1.0, "campanato"};
    return dec;
}

Decomposition decompose_for(const GridFunction& f, double r, const SpaceSpec& E) {
    return E.is_oscillation() ? campanato_decompose(f, r) : lattice_decompose(f, r);
}

DecompositionCheck verify_decomposition(const GridFunction& f, const Decomposition& dec,
                                        const SpaceSpec& E, const RadiusGrid& radii,
                                        const LocalNormOptions& opts) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto ratio_of = [](double lhs, double bound) {
        if (lhs == 0.0 && bound == 0.0) return 1.0;
        if (bound == 0.0) return inf;
        return lhs / bound;
    };

    DecompositionCheck check;
    std::vector<double> ts;
    for (double t : radii.nodes()) {
        const double snapped = std::min(snap_radius(t, f.h()), f.r_max());
        if (ts.empty() || snapped > ts.back()) ts.push_back(snapped);
    }

    for (double t : ts) {
        // f0 side
        {
            DecompRow row;
            row.t = t;
            row.side = 0;
            if (t < dec.r) {
                row.lhs = local_norm(dec.f0, t, E, opts);
                row.bound = local_norm(f, t, E, opts);
                row.ratio = ratio_of(row.lhs, row.bound);
            } else {
                const double ar = snap_radius(dec.a * dec.r, f.h());
                if (ar > f.r_max() * (1.0 + 1e-9)) {
                    row.skipped = true;
                } else {
                    row.lhs = local_norm(dec.f0, t, E, opts);
                    row.bound = local_norm(f, ar, E, opts);
                    row.ratio = ratio_of(row.lhs, row.bound);
                }
            }
            if (!row.skipped) check.c0 = std::max(check.c0, row.ratio);
            check.rows.push_back(row);
        }
        // f1 side
        {
            DecompRow row;
            row.t = t;
            row.side = 1;
            if (t < dec.c * dec.r) {
                row.lhs = local_norm(dec.f1, t, E, opts);
                row.bound = 0.0;
                row.ratio = row.lhs == 0.0 ? 0.0 : inf;
                check.f1_small_t_max = std::max(check.f1_small_t_max, row.lhs);
            } else {
                const double bt = snap_radius(dec.b * t, f.h());
                if (bt > f.r_max() * (1.0 + 1e-9)) {
                    row.skipped = true;
                } else {
                    row.lhs = local_norm(dec.f1, t, E, opts);
                    row.bound = local_norm(f, bt, E, opts);
                    row.ratio = ratio_of(row.lhs, row.bound);
                    check.c1 = std::max(check.c1, row.ratio);
                }
            }
            check.rows.push_back(row);
        }
    }
    return check;
}

} // namespace bwu
