#include <doctest.h>

#include <array>
#include <cmath>

#include "bwu/decompose.hpp"

using namespace bwu;

namespace {

const double kH = 1.0 / 64.0;

GridFunction ramp(double h, double r_max) {
    const int n = static_cast<int>(std::llround(2.0 * r_max / h));
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = -r_max + (i + 0.5) * h;
    return GridFunction::create(1, h, r_max, "ramp", std::move(s));
}

} // namespace

TEST_CASE("tent cutoff profile") {
    const CutoffProfile tent;
    CHECK(tent.eval(std::array{0.5}) == 1.0);
    CHECK(tent.eval(std::array{1.0}) == 1.0);
    CHECK(tent.eval(std::array{1.5}) == doctest::Approx(0.5));
    CHECK(tent.eval(std::array{2.0}) == 0.0);
    CHECK(tent.eval(std::array{3.0}) == 0.0);
    CHECK(tent.eval(std::array{0.3, 1.25}) == doctest::Approx(0.75));
    // Lipschitz constant stays below one on a dense sample
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double a = 0.01 * i, b = 0.01 * (i + 1);
        worst = std::max(worst, std::abs(tent.eval(std::array{a}) -
                                         tent.eval(std::array{b})) / 0.01);
    }
    CHECK(worst <= 1.0 + 1e-9);
}

TEST_CASE("lattice split: indicator structure") {
    const auto ones = make_grid_function("constant", std::array{1.0}, 1, 0.25, 2.0);
    const auto dec = lattice_decompose(ones, 1.0);
    CHECK(dec.a == 1.0);
    CHECK(dec.b == 1.0);
    CHECK(dec.c == 1.0);
    const auto chi = make_grid_function("indicator_cube", std::array{1.0}, 1, 0.25, 2.0);
    CHECK(dec.f0.samples() == chi.samples());
    for (std::size_t i = 0; i < ones.cell_count(); ++i)
        CHECK(dec.f1.samples()[i] == 1.0 - chi.samples()[i]);

    // support inside Q_r leaves no tail
    const auto inner = make_grid_function("indicator_cube", std::array{0.5}, 1, 0.25, 2.0);
    const auto inner_dec = lattice_decompose(inner, 1.0);
    for (double v : inner_dec.f1.samples()) CHECK(v == 0.0);
}

TEST_CASE("lattice split: analytic tail integral of |x|") {
    // for f = |x| and r = 1: ||f1||_{L1(Q_t)} = t^2 - 1 for t >= 1, else 0
    const auto f = make_grid_function("power_abs", std::array{1.0}, 1, kH, 8.0);
    const auto dec = lattice_decompose(f, 1.0);
    for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double norm = local_norm(dec.f1, t, SpaceSpec::lp(1.0));
        const double expected = t <= 1.0 ? 0.0 : t * t - 1.0;
        CHECK(norm == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("exact additivity for both splits") {
    const auto f = make_grid_function("random_field", std::array{6.0}, 1, kH, 8.0, 17);
    for (double r : {0.5, 1.0, 2.0}) {
        for (const auto& dec : {lattice_decompose(f, r), campanato_decompose(f, r)}) {
            for (std::size_t i = 0; i < f.cell_count(); ++i)
                CHECK(dec.f0.samples()[i] + dec.f1.samples()[i] == f.samples()[i]);
        }
    }
}

TEST_CASE("campanato split: structure") {
    const auto ones = make_grid_function("constant", std::array{2.5}, 1, 0.25, 2.0);
    const auto dec = campanato_decompose(ones, 0.5);
    CHECK(dec.a == 3.0);
    CHECK(dec.b == 3.0);
    CHECK(dec.c == 1.0);
    for (double v : dec.f0.samples()) CHECK(v == 0.0);
    for (double v : dec.f1.samples()) CHECK(v == 2.5);

    // odd ramp: the mean over the symmetric cube cancels exactly, so
    // f0 = x * tent_r(x)
    const auto f = ramp(0.25, 2.0);
    const auto rdec = campanato_decompose(f, 0.5);
    const CutoffProfile tent;
    for (int i = 0; i < f.cells_per_axis(); ++i) {
        const double x = f.center(i);
        CHECK(rdec.f0.at(i) ==
              doctest::Approx(x * tent.eval_scaled(std::array{x}, 0.5)).epsilon(1e-14));
    }

    CHECK_THROWS(campanato_decompose(ones, 1.5)); // 2r exceeds the master cube
}

TEST_CASE("campanato split: tail is oscillation-free below the radius") {
    const auto f = make_grid_function("power_abs", std::array{0.75}, 1, kH, 8.0);
    const auto dec = campanato_decompose(f, 1.0);
    for (double t : {0.25, 0.5, 0.75}) {
        CHECK(local_norm(dec.f1, t, SpaceSpec::campanato(2.0, 0.0)) == 0.0);
        CHECK(local_norm(dec.f1, t, SpaceSpec::campanato(1.0, 0.5)) <= 1e-13);
    }
}

TEST_CASE("verify_decomposition: lattice bounds hold at constant one") {
    const auto f = make_grid_function("random_field", std::array{6.0}, 1, kH, 8.0, 23);
    const RadiusGrid radii = RadiusGrid::spanning(0.25, 8.0, std::sqrt(2.0));
    for (const auto& e :
         {SpaceSpec::lp(1.0), SpaceSpec::weak_lp(2.0), SpaceSpec::morrey(2.0, -0.25)}) {
        const auto check = verify_decomposition(f, lattice_decompose(f, 1.0), e, radii);
        CHECK(check.c0 <= 1.0 + 1e-12);
        CHECK(check.c1 <= 1.0 + 1e-12);
        CHECK(check.f1_small_t_max == 0.0);
    }
}

TEST_CASE("verify_decomposition: campanato bounds and skipped rows") {
    const auto f = make_grid_function("bump", std::array{3.0}, 1, kH, 8.0);
    const RadiusGrid radii = RadiusGrid::spanning(0.25, 8.0, std::sqrt(2.0));
    const auto check = verify_decomposition(f, campanato_decompose(f, 1.0),
                                            SpaceSpec::campanato(2.0, 0.0), radii);
    CHECK(check.c0 <= 10.0);
    CHECK(check.c1 <= 10.0);
    CHECK(check.f1_small_t_max <= 1e-13);
    // rows whose bound cube 3t leaves the master domain are marked, not used
    bool found_skipped = false;
    for (const auto& row : check.rows) {
        if (row.skipped) {
            found_skipped = true;
            CHECK(row.side >= 0);
            CHECK(3.0 * row.t > 8.0 * (1.0 - 1e-9));
        }
    }
    CHECK(found_skipped);
}

TEST_CASE("decompose_for picks the split by space kind") {
    const auto f = make_grid_function("bump", std::array{1.0}, 1, 0.25, 2.0);
    CHECK(decompose_for(f, 0.5, SpaceSpec::lp(2.0)).method == "lattice");
    CHECK(decompose_for(f, 0.5, SpaceSpec::campanato(2.0, 0.0)).method == "campanato");
    CHECK(decompose_for(f, 0.5, SpaceSpec::lipschitz(1.0)).method == "campanato");
}
