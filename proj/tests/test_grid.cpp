#include <doctest.h>

#include <array>
#include <cmath>

#include "bwu/grid.hpp"

using namespace bwu;

namespace {

GridFunction linear_ramp(double h, double r_max) {
    // f(x) = x sampled at cell centers
    const int n = static_cast<int>(std::llround(2.0 * r_max / h));
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = -r_max + (i + 0.5) * h;
    return GridFunction::create(1, h, r_max, "ramp", std::move(s));
}

} // namespace

TEST_CASE("catalog: constant and indicator") {
    const auto ones = make_grid_function("constant", std::array{1.0}, 1, 0.25, 2.0);
    CHECK(ones.cell_count() == 16);
    for (double v : ones.samples()) CHECK(v == 1.0);

    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 1, 0.25, 2.0);
    for (int i = 0; i < chi.cells_per_axis(); ++i)
        CHECK(chi.at(i) == (std::abs(chi.center(i)) < 1.0 ? 1.0 : 0.0));
}

TEST_CASE("catalog: power_abs evaluates the analytic formula") {
    const auto f = make_grid_function("power_abs", std::array{0.5}, 1, 0.25, 2.0);
    // center x = 1.125 is cell 12
    CHECK(f.center(12) == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(f.at(12) == doctest::Approx(std::pow(1.125, 0.5)).epsilon(1e-15));
}

TEST_CASE("catalog: errors") {
    CHECK_THROWS(make_grid_function("nope", std::array{1.0}, 1, 0.25, 2.0));
    // 2*r_max/h not an even integer
    CHECK_THROWS(make_grid_function("constant", std::array{1.0}, 1, 0.3, 1.0));
    CHECK_THROWS(make_grid_function("bump", std::array{-1.0}, 1, 0.25, 2.0));
    CHECK_THROWS(make_grid_function("indicator_cube", std::array<double, 0>{}, 1, 0.25, 2.0));
}

TEST_CASE("catalog: random_field is deterministic and in (0,1)") {
    const auto a = make_grid_function("random_field", std::array{1.0}, 1, 0.25, 2.0, 42);
    const auto b = make_grid_function("random_field", std::array{1.0}, 1, 0.25, 2.0, 42);
    const auto c = make_grid_function("random_field", std::array{1.0}, 1, 0.25, 2.0, 43);
    CHECK(a.samples() == b.samples());
    CHECK(a.samples() != c.samples());
    for (int i = 0; i < a.cells_per_axis(); ++i) {
        if (std::abs(a.center(i)) < 1.0) {
            CHECK(a.at(i) > 0.0);
            CHECK(a.at(i) < 1.0);
        } else {
            CHECK(a.at(i) == 0.0);
        }
    }
}

TEST_CASE("restrict: examples and transitivity") {
    const auto ones = make_grid_function("constant", std::array{1.0}, 1, 0.25, 2.0);
    const auto sub = restrict_to_cube(ones, 1.0);
    CHECK(sub.cell_count() == 8);
    for (double v : sub.samples()) CHECK(v == 1.0);

    const auto full = restrict_to_cube(ones, 2.0);
    CHECK(full.samples() == ones.samples());

    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 1, 0.25, 2.0);
    const auto core = restrict_to_cube(chi, 0.5);
    for (double v : core.samples()) CHECK(v == 1.0);

    // restrict(restrict(f, r), t) == restrict(f, t), exact samples
    const auto f = make_grid_function("random_field", std::array{2.0}, 1, 0.125, 2.0, 7);
    CHECK(restrict_to_cube(restrict_to_cube(f, 1.5), 0.5).samples() ==
          restrict_to_cube(f, 0.5).samples());

    CHECK_THROWS(restrict_to_cube(ones, 0.3));  // not grid aligned
    CHECK_THROWS(restrict_to_cube(ones, 4.0));  // exceeds master cube
}

TEST_CASE("cube_mean: examples") {
    const auto ones = make_grid_function("constant", std::array{3.5}, 1, 0.25, 2.0);
    CHECK(cube_mean(ones, std::array{0.0}, 1.0) == doctest::Approx(3.5).epsilon(1e-15));

    const auto ramp = linear_ramp(0.25, 2.0);
    CHECK(cube_mean(ramp, std::array{0.5}, 0.5) == doctest::Approx(0.5).epsilon(1e-15));

    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 1, 0.25, 2.0);
    // 8 of 16 cells inside: count oracle
    CHECK(cube_mean(chi, std::array{0.0}, 2.0) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS(cube_mean(ones, std::array{1.5}, 1.0)); // exits the domain
}

TEST_CASE("cube_mean: linearity and constant-shift invariance") {
    const auto f = make_grid_function("random_field", std::array{2.0}, 1, 0.125, 2.0, 3);
    const auto g = make_grid_function("random_field", std::array{2.0}, 1, 0.125, 2.0, 4);
    std::vector<double> combo(f.cell_count()), shifted(f.cell_count());
    for (std::size_t i = 0; i < combo.size(); ++i) {
        combo[i] = 2.0 * f.samples()[i] - 3.0 * g.samples()[i];
        shifted[i] = f.samples()[i] + 5.0;
    }
    const auto fc = GridFunction::create(1, 0.125, 2.0, "combo", combo);
    const auto fs = GridFunction::create(1, 0.125, 2.0, "shifted", shifted);
    for (double s : {0.25, 0.5, 1.0}) {
        const double lhs = cube_mean(fc, std::array{0.5}, s);
        const double rhs = 2.0 * cube_mean(f, std::array{0.5}, s) -
                           3.0 * cube_mean(g, std::array{0.5}, s);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(cube_mean(fs, std::array{0.5}, s) ==
              doctest::Approx(cube_mean(f, std::array{0.5}, s) + 5.0).epsilon(1e-12));
    }
}

TEST_CASE("distribution_measure: examples and monotonicity") {
    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 1, 0.25, 2.0);
    CHECK(distribution_measure(chi, 2.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(distribution_measure(chi, 2.0, 1.5) == 0.0);

    // {|x|^{-1/2} > 2} = {|x| < 1/4}, measure 1/2
    const auto f = make_grid_function("power_abs", std::array{-0.5}, 1, 0.25, 2.0);
    CHECK(distribution_measure(f, 1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-12));

    const auto r = make_grid_function("random_field", std::array{2.0}, 1, 0.125, 2.0, 9);
    double prev = distribution_measure(r, 2.0, 0.0);
    CHECK(prev == doctest::Approx(4.0)); // no zero samples inside
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 2.0}) {
        const double cur = distribution_measure(r, 2.0, t);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("dilation bookkeeping: one sample vector, two geometries") {
    // reinterpreting the same samples on (h, R) and (2h, 2R) shares every point
    const auto coarse = make_grid_function("bump", std::array{3.0}, 1, 0.125, 4.0);
    const auto fine = GridFunction::create(1, 0.0625, 2.0, "dilated", coarse.samples());
    CHECK(fine.cell_count() == coarse.cell_count());
    for (int i = 0; i < fine.cells_per_axis(); ++i)
        CHECK(2.0 * fine.center(i) == doctest::Approx(coarse.center(i)).epsilon(1e-15));
}

TEST_CASE("grid function invariants") {
    CHECK_THROWS(GridFunction::create(1, 0.25, 2.0, "bad", std::vector<double>(5, 1.0)));
    CHECK_THROWS(GridFunction::create(3, 0.25, 2.0, "bad", std::vector<double>(16, 1.0)));
    std::vector<double> nan_samples(16, 1.0);
    nan_samples[3] = std::nan("");
    CHECK_THROWS(GridFunction::create(1, 0.25, 2.0, "bad", std::move(nan_samples)));
}

TEST_CASE("radius grid and snapping") {
    const auto g = RadiusGrid::spanning(0.0625, 8.0, std::pow(2.0, 0.25));
    CHECK(g.nodes().front() == doctest::Approx(0.0625));
    CHECK(g.nodes().back() == doctest::Approx(8.0).epsilon(1e-12));
    for (std::size_t i = 1; i < g.nodes().size(); ++i)
        CHECK(g.nodes()[i] > g.nodes()[i - 1]);

    CHECK(snap_radius(1.0001, 1.0 / 64.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(snap_radius(0.001, 1.0 / 64.0) == doctest::Approx(1.0 / 64.0));
    CHECK(radius_aligned(0.25, 1.0 / 64.0));
    CHECK(!radius_aligned(0.3, 0.25));
}

TEST_CASE("boundary mass fraction flags edge-heavy functions") {
    const auto inner = make_grid_function("indicator_cube", std::array{1.0}, 1, 0.125, 8.0);
    CHECK(inner.boundary_mass_fraction() == 0.0);
    const auto everywhere = make_grid_function("constant", std::array{1.0}, 1, 0.125, 8.0);
    CHECK(everywhere.boundary_mass_fraction() > 0.05);
}

TEST_CASE("2d grids: row-major layout and restriction") {
    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 2, 0.25, 2.0);
    CHECK(chi.cell_count() == 256);
    CHECK(chi.at(8, 8) == 1.0);  // center (+0.125, +0.125)
    CHECK(chi.at(0, 8) == 0.0);  // x = -1.875
    const auto sub = restrict_to_cube(chi, 1.0);
    CHECK(sub.cell_count() == 64);
    for (double v : sub.samples()) CHECK(v == 1.0);
    CHECK(distribution_measure(chi, 2.0, 0.5) == doctest::Approx(4.0).epsilon(1e-12));
}
