#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "bwu/grid.hpp"
#include "bwu/local_norms.hpp"

using namespace bwu;

namespace {

GridFunction ramp(double h, double r_max) {
    const int n = static_cast<int>(std::llround(2.0 * r_max / h));
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = -r_max + (i + 0.5) * h;
    return GridFunction::create(1, h, r_max, "ramp", std::move(s));
}

GridFunction shifted(const GridFunction& f, double c) {
    std::vector<double> s = f.samples();
    for (double& v : s) v += c;
    return GridFunction::create(f.dim(), f.h(), f.r_max(), f.label() + "+c", std::move(s));
}

// brute-force weak norm through the distribution function of the grid module
double weak_norm_oracle(const GridFunction& f, double r, double p) {
    double best = 0.0;
    const auto sub = restrict_to_cube(f, r);
    for (double v : sub.samples()) {
        const double t = std::abs(v) * (1.0 - 1e-9);
        best = std::max(best, t * std::pow(distribution_measure(f, r, t), 1.0 / p));
    }
    return best;
}

} // namespace

TEST_CASE("Lp norms: closed forms") {
    const auto ones = make_grid_function("constant", std::array{1.0}, 1, 0.25, 2.0);
    CHECK(local_norm(ones, 1.0, SpaceSpec::lp(2.0)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(local_norm(ones, 2.0, SpaceSpec::lp(1.0)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("weak Lp: sorting result equals the threshold-sweep oracle") {
    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 1, 0.25, 2.0);
    CHECK(local_norm(chi, 2.0, SpaceSpec::weak_lp(1.0)) == doctest::Approx(2.0).epsilon(1e-12));

    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto f = make_grid_function("random_field", std::array{2.0}, 1, 0.125, 2.0, seed);
        for (double p : {1.0, 2.0})
            for (double r : {0.5, 1.0, 2.0}) {
                const double impl = local_norm(f, r, SpaceSpec::weak_lp(p));
                const double oracle = weak_norm_oracle(f, r, p);
                CHECK(impl == doctest::Approx(oracle).epsilon(1e-6));
            }
    }
}

TEST_CASE("weak <= strong at the discrete level") {
    for (std::uint64_t seed : {5ULL, 6ULL}) {
        const auto f = make_grid_function("random_field", std::array{2.0}, 1, 0.125, 2.0, seed);
        for (double p : {1.0, 2.0})
            for (double r : {0.5, 1.0, 2.0})
                CHECK(local_norm(f, r, SpaceSpec::weak_lp(p)) <=
                      local_norm(f, r, SpaceSpec::lp(p)) * (1.0 + 1e-12));
    }
}

TEST_CASE("Morrey: Lebesgue reduction is exact") {
    for (std::uint64_t seed : {11ULL, 12ULL}) {
        const auto f = make_grid_function("random_field", std::array{2.0}, 1, 1.0 / 32.0,
                                          2.0, seed);
        for (double p : {1.0, 2.0})
            for (double r : {0.5, 1.0, 2.0}) {
                const double reduction =
                    local_norm(f, r, SpaceSpec::morrey(p, -1.0 / p));
                const double direct =
                    std::pow(2.0, -1.0 / p) * local_norm(f, r, SpaceSpec::lp(p));
                CHECK(reduction == doctest::Approx(direct).epsilon(1e-12));
            }
    }
}

TEST_CASE("Campanato: constants vanish, shifts leave oscillation norms alone") {
    const auto ones = make_grid_function("constant", std::array{1.0}, 1, 0.25, 2.0);
    CHECK(local_norm(ones, 1.0, SpaceSpec::campanato(2.0, 0.0)) == 0.0);
    CHECK(local_norm(ones, 2.0, SpaceSpec::campanato(1.0, 0.5)) == 0.0);
    CHECK(local_norm(ones, 1.0, SpaceSpec::bmo()) == 0.0);

    const auto f = make_grid_function("bump", std::array{1.5}, 1, 1.0 / 32.0, 2.0);
    const auto g = shifted(f, 3.25);
    for (const auto& spec : {SpaceSpec::campanato(2.0, 0.0), SpaceSpec::bmo(),
                             SpaceSpec::lipschitz(0.5)}) {
        const double a = local_norm(f, 2.0, spec);
        const double b = local_norm(g, 2.0, spec);
        CHECK(b == doctest::Approx(a).epsilon(1e-12));
    }
}

TEST_CASE("Campanato of the ramp: uniform-variance oracle") {
    // sup over subintervals of sqrt(variance); for f(x)=x on length L the
    // variance is L^2/12, so the sup sits at the full interval: 1/sqrt(3)
    const auto f = ramp(1.0 / 64.0, 2.0);
    const double v = local_norm(f, 1.0, SpaceSpec::campanato(2.0, 0.0));
    CHECK(std::abs(v - 1.0 / std::sqrt(3.0)) <= 2.0 / 64.0);
}

TEST_CASE("Lipschitz: the ramp has slope one exactly") {
    const auto f = ramp(1.0 / 32.0, 2.0);
    CHECK(local_norm(f, 1.0, SpaceSpec::lipschitz(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Campanato-Lipschitz comparability band is h-stable") {
    // lambda = alpha in (0,1]: the ratio lies in a fixed band, stable in h
    const double alpha = 0.5;
    double ratio_h = 0.0, ratio_h2 = 0.0;
    for (double h : {1.0 / 32.0, 1.0 / 64.0}) {
        const auto f = make_grid_function("bump", std::array{1.5}, 1, h, 2.0);
        const double cam = local_norm(f, 2.0, SpaceSpec::campanato(2.0, alpha));
        const double lip = local_norm(f, 2.0, SpaceSpec::lipschitz(alpha));
        (h == 1.0 / 32.0 ? ratio_h : ratio_h2) = cam / lip;
    }
    CHECK(ratio_h > 0.0);
    CHECK(ratio_h2 > 0.0);
    CHECK(std::abs(ratio_h2 - ratio_h) / ratio_h <= 0.2);
}

TEST_CASE("Campanato-Morrey comparability on the mean-removed function") {
    const double lambda = -0.25;
    const auto f = make_grid_function("random_field", std::array{2.0}, 1, 1.0 / 32.0, 2.0, 21);
    const double mean = cube_mean(f, std::array{0.0}, 2.0);
    const auto centered = shifted(f, -mean);
    const double cam = local_norm(f, 2.0, SpaceSpec::campanato(2.0, lambda));
    const double mor = local_norm(centered, 2.0, SpaceSpec::morrey(2.0, lambda));
    CHECK(cam > 0.0);
    CHECK(mor / cam > 1.0 / 16.0);
    CHECK(mor / cam < 16.0);
}

TEST_CASE("restriction constants") {
    const auto radii = RadiusGrid::spanning(0.25, 2.0, std::sqrt(2.0));
    const auto f = make_grid_function("random_field", std::array{2.0}, 1, 1.0 / 32.0, 2.0, 31);
    CHECK(restriction_constant(f, SpaceSpec::lp(2.0), radii) <= 1.0 + 1e-12);
    CHECK(restriction_constant(f, SpaceSpec::morrey(2.0, -0.25), radii) <= 1.0 + 1e-12);
    CHECK(restriction_constant(f, SpaceSpec::campanato(2.0, 0.0), radii) <= 1.0 + 1e-9);
}

TEST_CASE("dilation scaling of Lp norms is exact on aligned grids") {
    // same samples on (h, R) and (2h, 2R): ||f_s||_{Lp(Q_r)} = 2^{-1/p} ||f||_{Lp(Q_2r)}
    const auto coarse = make_grid_function("bump", std::array{3.0}, 1, 1.0 / 16.0, 4.0);
    const auto fine = GridFunction::create(1, 1.0 / 32.0, 2.0, "dil", coarse.samples());
    for (double p : {1.0, 2.0})
        for (double r : {0.5, 1.0, 2.0}) {
            const double lhs = local_norm(fine, r, SpaceSpec::lp(p));
            const double rhs =
                std::pow(2.0, -1.0 / p) * local_norm(coarse, 2.0 * r, SpaceSpec::lp(p));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
        }
}

TEST_CASE("space spec validation and parsing") {
    CHECK_THROWS(SpaceSpec::morrey(2.0, 0.5).validate(1));  // lambda must be < 0
    CHECK_THROWS(SpaceSpec::morrey(2.0, -3.0).validate(1)); // below -n/p
    CHECK_THROWS(SpaceSpec::campanato(1.0, 1.5).validate(1));
    CHECK_THROWS(SpaceSpec::lipschitz(0.0).validate(1));
    CHECK_NOTHROW(SpaceSpec::morrey(2.0, -0.5).validate(1));

    for (const auto& text :
         {"Lp{p=2}", "WeakLp{p=1}", "Morrey{p=2,lambda=-0.25}",
          "WeakMorrey{p=1,lambda=-1}", "Campanato{p=2,lambda=0.5}", "BMO",
          "Lip{alpha=0.75}"})
        CHECK(parse_space_spec(text).text() == text);
    CHECK_THROWS(parse_space_spec("Orlicz{p=2}"));
    CHECK_THROWS(parse_space_spec("Morrey{p=2}"));
}

TEST_CASE("cube sums match direct summation over the master cube") {
    const auto f = make_grid_function("random_field", std::array{2.0}, 2, 0.25, 2.0, 77);
    CubeSums sums(f, 2.0);
    double direct_p = 0.0, direct_f = 0.0;
    for (double v : f.samples()) {
        direct_p += v * v;
        direct_f += v;
    }
    const int n = f.cells_per_axis();
    CHECK(sums.sum_abs_p(0, n, 0, n) == doctest::Approx(direct_p).epsilon(1e-12));
    CHECK(sums.sum_f(0, n, 0, n) == doctest::Approx(direct_f).epsilon(1e-12));
}

TEST_CASE("local norms work in dim 2") {
    const auto ones = make_grid_function("constant", std::array{1.0}, 2, 0.25, 2.0);
    // |Q_1| = 4 in the plane
    CHECK(local_norm(ones, 1.0, SpaceSpec::lp(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(local_norm(ones, 1.0, SpaceSpec::campanato(2.0, 0.0)) == 0.0);
    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 2, 0.25, 2.0);
    CHECK(local_norm(chi, 2.0, SpaceSpec::weak_lp(1.0)) == doctest::Approx(4.0).epsilon(1e-12));
    // Lebesgue reduction holds in the plane as well
    CHECK(local_norm(chi, 2.0, SpaceSpec::morrey(2.0, -1.0)) ==
          doctest::Approx(0.5 * local_norm(chi, 2.0, SpaceSpec::lp(2.0))).epsilon(1e-12));
}
