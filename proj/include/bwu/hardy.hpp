#pragma once

#include <string>
#include <vector>

#include "bwu/grid.hpp"
#include "bwu/local_norms.hpp"
#include "bwu/table_function.hpp"
#include "bwu/weights.hpp"

namespace bwu {

/// Two-weight pair for the weighted Hardy inequality in plain Lebesgue
/// measure on (0, inf). Directions: the running integral F^*(r) = int_0^r f
/// or the tail integral F_*(r) = int_r^inf f.
struct HardyPair {
    Weight U = Weight::power(0.0);
    Weight V = Weight::power(0.0);
    double p = 2.0; // [1, inf]; conjugate uses 1' = inf, inf' = 1
    enum class Direction { FStarUp, FStarDown } direction = Direction::FStarUp;
};

/// Conjugate exponent with the endpoint conventions.
double conjugate_exponent(double p);

/// sup over window nodes of the direction's two-factor product; +inf when a
/// tail diverges. Power families integrate in closed form, others by
/// quadrature with a power-tail extrapolation.
double muckenhoupt_condition(const HardyPair& pair, const RadiusGrid& window);

/// ||U F||_p / ||V f||_p over the test function's node window, with F the
/// cumulative (or tail) trapezoid integral. +inf on a zero denominator with
/// nonzero numerator, 0 when both vanish.
double hardy_inequality_ratio(const HardyPair& pair, const TableFunction& test_f);

/// Trapezoid running integral of the table in plain measure: int_bottom^r f
/// when from_left, int_r^top f otherwise. The two always sum to the total.
std::vector<double> running_integral(const TableFunction& f, bool from_left);

/// The weighted-estimate quantities feeding the interpolation proof: the
/// halves' nested integrals against the composite weight's norm.
struct LemmaWStarReport {
    int lemma_case = 0; // 1: finite exponents, 2: sup half 0, 3: sup half 1
    double lhs0 = 0.0;  // NaN when the case does not define it
    double lhs1 = 0.0;
    double bwu = 0.0;
    double ratio0 = 0.0;
    double ratio1 = 0.0;
    bool pass = false;
    std::vector<std::string> certificates;
};

LemmaWStarReport lemma_w_star_check(const GridFunction& f, const SpaceSpec& E,
                                    const Weight& w0, const Weight& w1,
                                    const ThetaFunction& theta, double u0, double u1,
                                    double u, const RadiusGrid& window,
                                    const LocalNormOptions& opts = {});

} // namespace bwu
