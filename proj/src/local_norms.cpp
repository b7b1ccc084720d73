#include "bwu/local_norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
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

SpaceSpec SpaceSpec::lp(double p) { return SpaceSpec{SpaceKind::Lp, p, 0.0, 1.0, false}; }
SpaceSpec SpaceSpec::weak_lp(double p) {
    return SpaceSpec{SpaceKind::WeakLp, p, 0.0, 1.0, false};
}
SpaceSpec SpaceSpec::morrey(double p, double lambda) {
    return SpaceSpec{SpaceKind::Morrey, p, lambda, 1.0, false};
}
SpaceSpec SpaceSpec::weak_morrey(double p, double lambda) {
    return SpaceSpec{SpaceKind::WeakMorrey, p, lambda, 1.0, false};
}
SpaceSpec SpaceSpec::campanato(double p, double lambda) {
    return SpaceSpec{SpaceKind::Campanato, p, lambda, 1.0, true};
}
SpaceSpec SpaceSpec::bmo() { return SpaceSpec{SpaceKind::Bmo, 1.0, 0.0, 1.0, true}; }
SpaceSpec SpaceSpec::lipschitz(double alpha) {
    return SpaceSpec{SpaceKind::Lipschitz, 1.0, 0.0, alpha, true};
}

void SpaceSpec::validate(int dim) const {
    const double n = static_cast<double>(dim);
    switch (kind) {
    case SpaceKind::Lp:
    case SpaceKind::WeakLp:
        require(p >= 1.0, "SpaceSpec: p must be >= 1");
        break;
    case SpaceKind::Morrey:
    case SpaceKind::WeakMorrey:
        require(p >= 1.0, "SpaceSpec: p must be >= 1");
        require(lambda >= -n / p - 1e-12 && lambda < 0.0,
                "SpaceSpec: Morrey lambda must lie in [-n/p, 0)");
        break;
    case SpaceKind::Campanato:
        require(p >= 1.0, "SpaceSpec: p must be >= 1");
        require(lambda >= -n / p - 1e-12 && lambda <= 1.0,
                "SpaceSpec: Campanato lambda must lie in [-n/p, 1]");
        require(modulo_constants, "SpaceSpec: Campanato is a space modulo constants");
        break;
    case SpaceKind::Bmo:
        require(p == 1.0 && lambda == 0.0 && modulo_constants,
                "SpaceSpec: BMO fixes p=1, lambda=0, modulo constants");
        break;
    case SpaceKind::Lipschitz:
        require(alpha > 0.0 && alpha <= 1.0, "SpaceSpec: Lipschitz alpha must lie in (0,1]");
        require(modulo_constants, "SpaceSpec: Lipschitz is a space modulo constants");
        break;
    }
}

bool SpaceSpec::is_lattice() const {
    return kind == SpaceKind::Lp || kind == SpaceKind::WeakLp ||
           kind == SpaceKind::Morrey || kind == SpaceKind::WeakMorrey;
}

std::string SpaceSpec::text() const {
    switch (kind) {
    case SpaceKind::Lp: return "Lp{p=" + fmt(p) + "}";
    case SpaceKind::WeakLp: return "WeakLp{p=" + fmt(p) + "}";
    case SpaceKind::Morrey:
        return "Morrey{p=" + fmt(p) + ",lambda=" + fmt(lambda) + "}";
    case SpaceKind::WeakMorrey:
        return "WeakMorrey{p=" + fmt(p) + ",lambda=" + fmt(lambda) + "}";
    case SpaceKind::Campanato:
        return "Campanato{p=" + fmt(p) + ",lambda=" + fmt(lambda) + "}";
    case SpaceKind::Bmo: return "BMO";
    case SpaceKind::Lipschitz: return "Lip{alpha=" + fmt(alpha) + "}";
    }
    return "?";
}

SpaceSpec parse_space_spec(const std::string& text) {
    const auto brace = text.find('{');
    const std::string name = text.substr(0, brace);
    std::map<std::string, double> fields;
    if (brace != std::string::npos) {
        std::string body = text.substr(brace + 1);
        if (body.empty() || body.back() != '}')
            throw std::invalid_argument("parse_space_spec: missing '}' in " + text);
        body.pop_back();
        std::size_t pos = 0;
        while (pos < body.size()) {
            std::size_t next = body.find(',', pos);
            if (next == std::string::npos) next = body.size();
            const std::string item = body.substr(pos, next - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("parse_space_spec: expected key=value in " + text);
            fields[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            pos = next + 1;
        }
    }
    auto field = [&](const char* key, double dflt, bool required = false) {
        auto it = fields.find(key);
        if (it != fields.end()) return it->second;
        if (required)
            throw std::invalid_argument(std::string("parse_space_spec: missing ") + key +
                                        " in " + text);
        return dflt;
    };
    if (name == "Lp") return SpaceSpec::lp(field("p", 1.0, true));
    if (name == "WeakLp") return SpaceSpec::weak_lp(field("p", 1.0, true));
    if (name == "Morrey")
        return SpaceSpec::morrey(field("p", 1.0, true), field("lambda", 0.0, true));
    if (name == "WeakMorrey")
        return SpaceSpec::weak_morrey(field("p", 1.0, true), field("lambda", 0.0, true));
    if (name == "Campanato")
        return SpaceSpec::campanato(field("p", 1.0, true), field("lambda", 0.0, true));
    if (name == "BMO") return SpaceSpec::bmo();
    if (name == "Lip") return SpaceSpec::lipschitz(field("alpha", 1.0, true));
    throw std::invalid_argument("parse_space_spec: unknown space '" + name + "'");
}

CubeSums::CubeSums(const GridFunction& f, double p) : p_(p) {
    // accumulate in extended precision so stored prefixes are correctly
    // rounded; prefix differences for small cubes stay trustworthy
    n_ = f.cells_per_axis();
    dim_ = f.dim();
    if (dim_ == 1) {
        abs_p_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
        f_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
        f2_.assign(static_cast<std::size_t>(n_) + 1, 0.0);
        long double acc_p = 0.0L, acc_f = 0.0L, acc_f2 = 0.0L;
        for (int i = 0; i < n_; ++i) {
            const double v = f.at(i);
            acc_p += std::pow(std::abs(v), p);
            acc_f += v;
            acc_f2 += static_cast<long double>(v) * v;
            abs_p_[static_cast<std::size_t>(i) + 1] = static_cast<double>(acc_p);
            f_[static_cast<std::size_t>(i) + 1] = static_cast<double>(acc_f);
            f2_[static_cast<std::size_t>(i) + 1] = static_cast<double>(acc_f2);
        }
    } else {
        const std::size_t w = static_cast<std::size_t>(n_) + 1;
        std::vector<long double> tp(w * w, 0.0L), tf(w * w, 0.0L), tf2(w * w, 0.0L);
        for (int iy = 0; iy < n_; ++iy)
            for (int ix = 0; ix < n_; ++ix) {
                const double v = f.at(ix, iy);
                const std::size_t here = (static_cast<std::size_t>(iy) + 1) * w +
                                         static_cast<std::size_t>(ix) + 1;
                const std::size_t up = static_cast<std::size_t>(iy) * w +
                                       static_cast<std::size_t>(ix) + 1;
                const std::size_t left = (static_cast<std::size_t>(iy) + 1) * w +
                                         static_cast<std::size_t>(ix);
                const std::size_t diag = static_cast<std::size_t>(iy) * w +
                                         static_cast<std::size_t>(ix);
                tp[here] = std::pow(std::abs(v), p) + tp[up] + tp[left] - tp[diag];
                tf[here] = v + tf[up] + tf[left] - tf[diag];
                tf2[here] = static_cast<long double>(v) * v + tf2[up] + tf2[left] - tf2[diag];
            }
        abs_p_.assign(w * w, 0.0);
        f_.assign(w * w, 0.0);
        f2_.assign(w * w, 0.0);
        for (std::size_t i = 0; i < w * w; ++i) {
            abs_p_[i] = static_cast<double>(tp[i]);
            f_[i] = static_cast<double>(tf[i]);
            f2_[i] = static_cast<double>(tf2[i]);
        }
    }
}

double CubeSums::pick(const std::vector<double>& t, int ax, int bx, int ay, int by) const {
    if (dim_ == 1)
        return t[static_cast<std::size_t>(bx)] - t[static_cast<std::size_t>(ax)];
    const std::size_t w = static_cast<std::size_t>(n_) + 1;
    return t[static_cast<std::size_t>(by) * w + static_cast<std::size_t>(bx)] -
           t[static_cast<std::size_t>(ay) * w + static_cast<std::size_t>(bx)] -
           t[static_cast<std::size_t>(by) * w + static_cast<std::size_t>(ax)] +
           t[static_cast<std::size_t>(ay) * w + static_cast<std::size_t>(ax)];
}

double CubeSums::sum_abs_p(int ax, int bx, int ay, int by) const {
    return pick(abs_p_, ax, bx, ay, by);
}
double CubeSums::sum_f(int ax, int bx, int ay, int by) const {
    return pick(f_, ax, bx, ay, by);
}
double CubeSums::sum_f2(int ax, int bx, int ay, int by) const {
    return pick(f2_, ax, bx, ay, by);
}

namespace {

// Sub-cube lattice inside Q_r: corner-centered cubes, dyadic cell half-sides
// plus the full cube itself.
template <typename Fn>
void for_each_subcube(int dim, int lo, int hi, int stride2d, Fn&& fn) {
    const int m = (hi - lo) / 2;
    std::vector<int> scales;
    for (int k = 1; k < m; k *= 2) scales.push_back(k);
    scales.push_back(m);
    for (int k : scales) {
        if (dim == 1) {
            for (int c = lo + k; c + k <= hi; ++c) fn(k, c, 0);
        } else {
            const int step = std::max(1, stride2d);
            for (int cy = lo + k; cy + k <= hi; cy += step)
                for (int cx = lo + k; cx + k <= hi; cx += step) fn(k, cx, cy);
        }
    }
}

double weak_value(std::vector<double>& mags, double p, double unit_measure) {
    // sup_t t * m(t)^{1/p} over the discrete distribution function is
    // attained at sample magnitudes.
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t k = 0; k < mags.size(); ++k) {
        const double cand =
            mags[k] * std::pow(static_cast<double>(k + 1) * unit_measure, 1.0 / p);
        best = std::max(best, cand);
    }
    return best;
}

struct CubeRange {
    int lo, hi, m; // Q_r occupies cells [lo, hi) per axis, m = half-side cells
};

CubeRange master_range(const GridFunction& f, double r) {
    require(radius_aligned(r, f.h()), "local_norm: r must be a positive multiple of h");
    require(r <= f.r_max() * (1.0 + 1e-9), "local_norm: r exceeds the master cube");
    const int m = static_cast<int>(std::llround(r / f.h()));
    const int n = f.cells_per_axis();
    return CubeRange{n / 2 - m, n / 2 + m, m};
}

void collect_cells(const GridFunction& f, int ax, int bx, int ay, int by,
                   std::vector<double>& out) {
    out.clear();
    if (f.dim() == 1) {
        for (int i = ax; i < bx; ++i) out.push_back(std::abs(f.at(i)));
    } else {
        for (int iy = ay; iy < by; ++iy)
            for (int ix = ax; ix < bx; ++ix) out.push_back(std::abs(f.at(ix, iy)));
    }
}

double campanato_cube_value(const GridFunction& f, const CubeSums& sums, double p,
                            int ax, int bx, int ay, int by) {
    const double cnt = f.dim() == 1
                           ? static_cast<double>(bx - ax)
                           : static_cast<double>(bx - ax) * (by - ay);
    const double mean = sums.sum_f(ax, bx, ay, by) / cnt;
    if (p == 2.0) {
        const double second = sums.sum_f2(ax, bx, ay, by) / cnt;
        double diff = second - mean * mean;
        // The moment identity cancels catastrophically on near-constant data.
        // The resolvable floor is set by the prefix-difference error, which
        // scales with the full-table magnitude, not the cube's own moments.
        const int n = f.cells_per_axis();
        const double table_scale =
            sums.sum_f2(0, n, 0, f.dim() == 1 ? 1 : n) / cnt;
        const double eps = std::numeric_limits<double>::epsilon();
        if (diff <= 64.0 * eps * std::max({second, mean * mean, table_scale}))
            diff = 0.0;
        return std::sqrt(diff);
    }
    // general p walks the cube anyway, so take the mean from a local pass
    // rather than the prefix difference (whose floor scales with the table)
    long double local_mean = 0.0L;
    if (f.dim() == 1) {
        for (int i = ax; i < bx; ++i) local_mean += f.at(i);
    } else {
        for (int iy = ay; iy < by; ++iy)
            for (int ix = ax; ix < bx; ++ix) local_mean += f.at(ix, iy);
    }
    const double center = static_cast<double>(local_mean / cnt);
    double acc = 0.0;
    if (f.dim() == 1) {
        for (int i = ax; i < bx; ++i) acc += std::pow(std::abs(f.at(i) - center), p);
    } else {
        for (int iy = ay; iy < by; ++iy)
            for (int ix = ax; ix < bx; ++ix)
                acc += std::pow(std::abs(f.at(ix, iy) - center), p);
    }
    return std::pow(acc / cnt, 1.0 / p);
}

double lipschitz_norm(const GridFunction& f, const CubeRange& q, double alpha,
                      const LocalNormOptions& opts) {
    double best = 0.0;
    if (f.dim() == 1) {
        const int len = q.hi - q.lo;
        for (int i = 0; i < len; ++i)
            for (int j = i + 1; j < len; ++j) {
                const double d = static_cast<double>(j - i) * f.h();
                const double v =
                    std::abs(f.at(q.lo + i) - f.at(q.lo + j)) / std::pow(d, alpha);
                best = std::max(best, v);
            }
        return best;
    }
    const int len = q.hi - q.lo;
    const std::size_t cells = static_cast<std::size_t>(len) * len;
    const int stride =
        cells <= opts.lipschitz_all_pairs_cap ? 1 : std::max(1, opts.lipschitz_stride_2d);
    std::vector<std::pair<double, std::array<double, 2>>> pts;
    for (int iy = 0; iy < len; iy += stride)
        for (int ix = 0; ix < len; ix += stride)
            pts.push_back({f.at(q.lo + ix, q.lo + iy),
                           {f.center(q.lo + ix), f.center(q.lo + iy)}});
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[i].second[0] - pts[j].second[0];
            const double dy = pts[i].second[1] - pts[j].second[1];
            const double d = std::sqrt(dx * dx + dy * dy);
            best = std::max(best, std::abs(pts[i].first - pts[j].first) /
                                      std::pow(d, alpha));
        }
    return best;
}

} // namespace

namespace {

double local_norm_with(const GridFunction& f, double r, const SpaceSpec& E,
                       const LocalNormOptions& opts, const CubeSums* sums) {
    const CubeRange q = master_range(f, r);
    const double hn = f.cell_volume();
    const int dim = f.dim();
    const int ay = dim == 1 ? 0 : q.lo;
    const int by = dim == 1 ? 1 : q.hi;

    switch (E.kind) {
    case SpaceKind::Lp:
        return std::pow(sums->sum_abs_p(q.lo, q.hi, ay, by) * hn, 1.0 / E.p);
    case SpaceKind::WeakLp: {
        std::vector<double> mags;
        collect_cells(f, q.lo, q.hi, ay, by, mags);
        require(!mags.empty(), "local_norm: empty cube");
        return weak_value(mags, E.p, hn);
    }
    case SpaceKind::Morrey: {
        double best = 0.0;
        for_each_subcube(dim, q.lo, q.hi, opts.center_stride_2d,
                         [&](int k, int cx, int cy) {
                             const double s = static_cast<double>(k) * f.h();
                             const double vol = dim == 1 ? 2.0 * s : 4.0 * s * s;
                             const double integral =
                                 dim == 1 ? sums->sum_abs_p(cx - k, cx + k) * hn
                                          : sums->sum_abs_p(cx - k, cx + k, cy - k,
                                                            cy + k) * hn;
                             const double v = std::pow(s, -E.lambda) *
                                              std::pow(integral / vol, 1.0 / E.p);
                             best = std::max(best, v);
                         });
        return best;
    }
    case SpaceKind::WeakMorrey: {
        double best = 0.0;
        std::vector<double> mags;
        for_each_subcube(dim, q.lo, q.hi, opts.center_stride_2d,
                         [&](int k, int cx, int cy) {
                             const double s = static_cast<double>(k) * f.h();
                             const double vol = dim == 1 ? 2.0 * s : 4.0 * s * s;
                             if (dim == 1)
                                 collect_cells(f, cx - k, cx + k, 0, 1, mags);
                             else
                                 collect_cells(f, cx - k, cx + k, cy - k, cy + k, mags);
                             const double weak = weak_value(mags, E.p, hn);
                             const double v = std::pow(s, -E.lambda) * weak *
                                              std::pow(vol, -1.0 / E.p);
                             best = std::max(best, v);
                         });
        return best;
    }
    case SpaceKind::Campanato:
    case SpaceKind::Bmo: {
        double best = 0.0;
        for_each_subcube(dim, q.lo, q.hi, opts.center_stride_2d,
                         [&](int k, int cx, int cy) {
                             const double s = static_cast<double>(k) * f.h();
                             const double v =
                                 std::pow(s, -E.lambda) *
                                 (dim == 1 ? campanato_cube_value(f, *sums, E.p, cx - k,
                                                                  cx + k, 0, 1)
                                           : campanato_cube_value(f, *sums, E.p, cx - k,
                                                                  cx + k, cy - k, cy + k));
                             best = std::max(best, v);
                         });
        return best;
    }
    case SpaceKind::Lipschitz:
        return lipschitz_norm(f, q, E.alpha, opts);
    }
    throw std::logic_error("local_norm: unhandled space kind");
}

bool needs_cube_sums(SpaceKind kind) {
    return kind == SpaceKind::Lp || kind == SpaceKind::Morrey ||
           kind == SpaceKind::Campanato || kind == SpaceKind::Bmo;
}

} // namespace

double local_norm(const GridFunction& f, double r, const SpaceSpec& E,
                  const LocalNormOptions& opts) {
    E.validate(f.dim());
    if (needs_cube_sums(E.kind)) {
        CubeSums sums(f, E.p);
        return local_norm_with(f, r, E, opts, &sums);
    }
    return local_norm_with(f, r, E, opts, nullptr);
}

std::vector<double> local_norm_profile(const GridFunction& f,
                                       std::span<const double> radii,
                                       const SpaceSpec& E,
                                       const LocalNormOptions& opts) {
    E.validate(f.dim());
    std::vector<double> out;
    out.reserve(radii.size());
    if (needs_cube_sums(E.kind)) {
        CubeSums sums(f, E.p);
        for (double r : radii) out.push_back(local_norm_with(f, r, E, opts, &sums));
    } else {
        for (double r : radii) out.push_back(local_norm_with(f, r, E, opts, nullptr));
    }
    return out;
}

double restriction_constant(const GridFunction& f, const SpaceSpec& E,
                            const RadiusGrid& radii, const LocalNormOptions& opts) {
    std::vector<double> rs;
    for (double r : radii.nodes()) {
        const double snapped = std::min(snap_radius(r, f.h()), f.r_max());
        if (rs.empty() || snapped > rs.back()) rs.push_back(snapped);
    }
    std::vector<double> norms(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) norms[i] = local_norm(f, rs[i], E, opts);

    double worst = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
            // t = rs[i] < r = rs[j]
            double ratio;
            if (norms[i] == 0.0 && norms[j] == 0.0)
                ratio = 1.0;
            else if (norms[j] == 0.0)
                ratio = std::numeric_limits<double>::infinity();
            else
                ratio = norms[i] / norms[j];
            worst = std::max(worst, ratio);
        }
    return worst;
}

} // namespace bwu
