#include "bwu/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bwu {

namespace {

constexpr double kAlignTol = 1e-9;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double splitmix64_unit(std::uint64_t& state) {
    const std::uint64_t z = splitmix64_next(state);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

GridFunction GridFunction::create(int dim, double h, double r_max,
                                  std::string label,
                                  std::vector<double> samples) {
    require(dim == 1 || dim == 2, "GridFunction: dim must be 1 or 2");
    require(h > 0.0 && r_max > 0.0, "GridFunction: h and r_max must be positive");
    const double n_real = 2.0 * r_max / h;
    const long long n = std::llround(n_real);
    require(std::abs(n_real - static_cast<double>(n)) < kAlignTol * n_real,
            "GridFunction: 2*r_max/h must be an integer");
    require(n > 0 && n % 2 == 0, "GridFunction: 2*r_max/h must be a positive even integer");
    std::size_t expected = static_cast<std::size_t>(n);
    if (dim == 2) expected *= static_cast<std::size_t>(n);
    require(samples.size() == expected, "GridFunction: sample count mismatch");
    for (double v : samples)
        require(std::isfinite(v), "GridFunction: samples must be finite");

    GridFunction f;
    f.dim_ = dim;
    f.h_ = h;
    f.r_max_ = r_max;
    f.n_ = static_cast<int>(n);
    f.label_ = std::move(label);
    f.samples_ = std::move(samples);
    return f;
}

double GridFunction::cell_volume() const {
    return dim_ == 1 ? h_ : h_ * h_;
}

double GridFunction::value_near(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dim_, "value_near: point dimension mismatch");
    auto clamp_idx = [&](double c) {
        int i = static_cast<int>(std::floor((c + r_max_) / h_));
        return std::clamp(i, 0, n_ - 1);
    };
    if (dim_ == 1) return at(clamp_idx(x[0]));
    return at(clamp_idx(x[0]), clamp_idx(x[1]));
}

double GridFunction::boundary_mass_fraction(double inner_fraction) const {
    const double cut = inner_fraction * r_max_;
    double total = 0.0, outer = 0.0;
    if (dim_ == 1) {
        for (int i = 0; i < n_; ++i) {
            const double v = std::abs(at(i));
            total += v;
            if (std::abs(center(i)) > cut) outer += v;
        }
    } else {
        for (int iy = 0; iy < n_; ++iy)
            for (int ix = 0; ix < n_; ++ix) {
                const double v = std::abs(at(ix, iy));
                total += v;
                if (std::max(std::abs(center(ix)), std::abs(center(iy))) > cut)
                    outer += v;
            }
    }
    return total > 0.0 ? outer / total : 0.0;
}

GridFunction GridFunction::with_label(std::string label) const {
    GridFunction f = *this;
    f.label_ = std::move(label);
    return f;
}

RadiusGrid RadiusGrid::geometric(double r_min, double rho, int count) {
    require(r_min > 0.0, "RadiusGrid: r_min must be positive");
    require(rho > 1.0, "RadiusGrid: rho must exceed 1");
    require(count >= 1, "RadiusGrid: count must be positive");
    RadiusGrid g;
    g.r_min_ = r_min;
    g.rho_ = rho;
    g.nodes_.resize(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        g.nodes_[static_cast<std::size_t>(k)] = r_min * std::pow(rho, k);
    return g;
}

RadiusGrid RadiusGrid::spanning(double r_min, double r_max, double rho) {
    require(r_max >= r_min, "RadiusGrid: r_max must be >= r_min");
    require(rho > 1.0, "RadiusGrid: rho must exceed 1");
    const int count =
        1 + static_cast<int>(std::floor(std::log(r_max / r_min) / std::log(rho) + 1e-12));
    return geometric(r_min, rho, count);
}

double RadiusGrid::log_step() const { return std::log(rho_); }

double snap_radius(double r, double h) {
    require(r > 0.0 && h > 0.0, "snap_radius: r and h must be positive");
    const long long m = std::max<long long>(1, std::llround(r / h));
    return static_cast<double>(m) * h;
}

bool radius_aligned(double r, double h) {
    if (r <= 0.0) return false;
    const double m = r / h;
    return std::abs(m - std::round(m)) < kAlignTol * std::max(1.0, m) &&
           std::llround(m) >= 1;
}

namespace {

double sup_norm(std::span<const double> x) {
    double m = 0.0;
    for (double c : x) m = std::max(m, std::abs(c));
    return m;
}

double euclid_norm(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

// Analytic catalog entries; `p` is the raw parameter list.
struct CatalogFn {
    std::string name;
    std::vector<double> p;
    double r_max = 0.0;

    double operator()(std::span<const double> x) const {
        if (name == "constant") return p[0];
        if (name == "indicator_cube") return sup_norm(x) < p[0] ? 1.0 : 0.0;
        if (name == "power_abs") {
            const double support = p.size() > 1 ? p[1] : r_max;
            if (sup_norm(x) >= support) return 0.0;
            return std::pow(euclid_norm(x), p[0]);
        }
        if (name == "bump") {
            const double t = euclid_norm(x) / p[0];
            if (t >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - t * t));
        }
        if (name == "sine") {
            const double support = p.size() > 1 ? p[1] : r_max;
            if (sup_norm(x) >= support) return 0.0;
            double v = 1.0;
            for (double c : x) v *= std::sin(p[0] * c);
            return v;
        }
        if (name == "step") return x[0] >= p[0] ? 1.0 : 0.0;
        throw std::invalid_argument("unknown catalog function: " + name);
    }
};

void validate_params(const std::string& name, std::span<const double> p,
                     double r_max) {
    auto need = [&](bool ok, const char* what) {
        if (!ok)
            throw std::invalid_argument("make_grid_function(" + name + "): " + what);
    };
    if (name == "constant") {
        need(p.size() == 1, "expects params [value]");
    } else if (name == "indicator_cube") {
        need(p.size() == 1 && p[0] > 0.0, "expects params [half_side > 0]");
    } else if (name == "power_abs") {
        need(p.size() >= 1 && p.size() <= 2, "expects params [exponent, support?]");
        if (p.size() == 2) need(p[1] > 0.0 && p[1] <= r_max, "support out of range");
    } else if (name == "bump") {
        need(p.size() == 1 && p[0] > 0.0, "expects params [radius > 0]");
    } else if (name == "sine") {
        need(p.size() >= 1 && p.size() <= 2, "expects params [frequency, support?]");
        if (p.size() == 2) need(p[1] > 0.0 && p[1] <= r_max, "support out of range");
    } else if (name == "step") {
        need(p.size() == 1, "expects params [threshold]");
    } else if (name == "random_field") {
        need(p.size() <= 1, "expects params [support?]");
        if (p.size() == 1) need(p[0] > 0.0 && p[0] <= r_max, "support out of range");
    } else {
        throw std::invalid_argument("unknown catalog name: " + name);
    }
}

} // namespace

GridFunction make_grid_function(const std::string& catalog_name,
                                std::span<const double> params, int dim,
                                double h, double r_max, std::uint64_t seed) {
    validate_params(catalog_name, params, r_max);
    const double n_real = 2.0 * r_max / h;
    const long long n = std::llround(n_real);
    require(std::abs(n_real - static_cast<double>(n)) < kAlignTol * n_real &&
                n > 0 && n % 2 == 0,
            "make_grid_function: 2*r_max/h must be a positive even integer");

    std::size_t count = static_cast<std::size_t>(n);
    if (dim == 2) count *= static_cast<std::size_t>(n);
    std::vector<double> samples(count);

    if (catalog_name == "random_field") {
        const double support = params.empty() ? r_max : params[0];
        std::uint64_t state = seed;
        auto fill = [&](std::span<const double> x, std::size_t idx) {
            const double u = splitmix64_unit(state);
            samples[idx] = sup_norm(x) < support ? u : 0.0;
        };
        if (dim == 1) {
            for (long long i = 0; i < n; ++i) {
                const double x = -r_max + (static_cast<double>(i) + 0.5) * h;
                fill(std::array{x}, static_cast<std::size_t>(i));
            }
        } else {
            for (long long iy = 0; iy < n; ++iy)
                for (long long ix = 0; ix < n; ++ix) {
                    const double x = -r_max + (static_cast<double>(ix) + 0.5) * h;
                    const double y = -r_max + (static_cast<double>(iy) + 0.5) * h;
                    fill(std::array{x, y}, static_cast<std::size_t>(iy * n + ix));
                }
        }
    } else {
        CatalogFn fn{catalog_name, {params.begin(), params.end()}, r_max};
        if (dim == 1) {
            for (long long i = 0; i < n; ++i) {
                const double x = -r_max + (static_cast<double>(i) + 0.5) * h;
                samples[static_cast<std::size_t>(i)] = fn(std::array{x});
            }
        } else {
            for (long long iy = 0; iy < n; ++iy)
                for (long long ix = 0; ix < n; ++ix) {
                    const double x = -r_max + (static_cast<double>(ix) + 0.5) * h;
                    const double y = -r_max + (static_cast<double>(iy) + 0.5) * h;
                    samples[static_cast<std::size_t>(iy * n + ix)] =
                        fn(std::array{x, y});
                }
        }
    }
    return GridFunction::create(dim, h, r_max, catalog_name, std::move(samples));
}

GridFunction restrict_to_cube(const GridFunction& f, double r) {
    require(radius_aligned(r, f.h()), "restrict: r must be a positive multiple of h");
    require(r <= f.r_max() * (1.0 + kAlignTol), "restrict: r exceeds the master cube");
    const int m = static_cast<int>(std::llround(r / f.h()));
    const int n = f.cells_per_axis();
    const int lo = n / 2 - m;
    const int sub = 2 * m;

    std::vector<double> samples;
    if (f.dim() == 1) {
        samples.assign(f.samples().begin() + lo, f.samples().begin() + lo + sub);
    } else {
        samples.reserve(static_cast<std::size_t>(sub) * sub);
        for (int iy = 0; iy < sub; ++iy)
            for (int ix = 0; ix < sub; ++ix)
                samples.push_back(f.at(lo + ix, lo + iy));
    }
    return GridFunction::create(f.dim(), f.h(), static_cast<double>(m) * f.h(),
                                f.label() + "|Q(" + std::to_string(r) + ")",
                                std::move(samples));
}

double cube_mean(const GridFunction& f, std::span<const double> center, double s) {
    require(static_cast<int>(center.size()) == f.dim(), "cube_mean: center dimension mismatch");
    require(radius_aligned(s, f.h()), "cube_mean: half-side must be a multiple of h");
    const int n = f.cells_per_axis();
    std::array<int, 2> lo{0, 0}, hi{0, 0};
    for (int d = 0; d < f.dim(); ++d) {
        const double a = center[d] - s, b = center[d] + s;
        require(a >= -f.r_max() - kAlignTol && b <= f.r_max() + kAlignTol,
                "cube_mean: cube exits the master domain");
        const double la = (a + f.r_max()) / f.h();
        const double lb = (b + f.r_max()) / f.h();
        require(std::abs(la - std::round(la)) < 1e-6 &&
                    std::abs(lb - std::round(lb)) < 1e-6,
                "cube_mean: cube is not grid aligned");
        lo[static_cast<std::size_t>(d)] = std::clamp(static_cast<int>(std::llround(la)), 0, n);
        hi[static_cast<std::size_t>(d)] = std::clamp(static_cast<int>(std::llround(lb)), 0, n);
        require(hi[static_cast<std::size_t>(d)] > lo[static_cast<std::size_t>(d)],
                "cube_mean: empty cube");
    }
    double sum = 0.0;
    std::size_t cells = 0;
    if (f.dim() == 1) {
        for (int i = lo[0]; i < hi[0]; ++i, ++cells) sum += f.at(i);
    } else {
        for (int iy = lo[1]; iy < hi[1]; ++iy)
            for (int ix = lo[0]; ix < hi[0]; ++ix, ++cells) sum += f.at(ix, iy);
    }
    return sum / static_cast<double>(cells);
}

double distribution_measure(const GridFunction& f, double r, double t) {
    require(radius_aligned(r, f.h()), "distribution_measure: r must be grid aligned");
    require(r <= f.r_max() * (1.0 + kAlignTol), "distribution_measure: r exceeds domain");
    require(t >= 0.0, "distribution_measure: threshold must be nonnegative");
    const int m = static_cast<int>(std::llround(r / f.h()));
    const int n = f.cells_per_axis();
    const int lo = n / 2 - m, hi = n / 2 + m;
    std::size_t count = 0;
    if (f.dim() == 1) {
        for (int i = lo; i < hi; ++i)
            if (std::abs(f.at(i)) > t) ++count;
    } else {
        for (int iy = lo; iy < hi; ++iy)
            for (int ix = lo; ix < hi; ++ix)
                if (std::abs(f.at(ix, iy)) > t) ++count;
    }
    return static_cast<double>(count) * f.cell_volume();
}

} // namespace bwu
