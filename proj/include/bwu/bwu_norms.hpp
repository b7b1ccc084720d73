#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>

#include "bwu/grid.hpp"
#include "bwu/local_norms.hpp"
#include "bwu/table_function.hpp"
#include "bwu/weights.hpp"

namespace bwu {

/// Global-space description: an L^u(dr/r) norm of w(r) ||f||_{E(Q_r)} over a
/// geometric radius window. The non-homogeneous variant keeps nodes >= 1.
struct BwuSpec {
    SpaceSpec E;
    Weight w;
    double u = std::numeric_limits<double>::infinity();
    bool homogeneous = true;
    RadiusGrid radii = RadiusGrid::geometric(1.0, 2.0, 4);

    std::string text() const;
};

/// Discrete L^u norm of nonnegative values against uniform log-measure
/// weights (left-point rule): (sum v^u * log_step)^{1/u}, max for u = inf.
double lu_norm(std::span<const double> values, double log_step, double u);

/// ||f||_{B_w^u(E)} (or the homogeneous twin) by left-point log quadrature
/// over the spec's window. Radii are snapped to grid multiples of h before
/// both the cube extraction and the weight evaluation.
double bwu_norm(const GridFunction& f, const BwuSpec& spec,
                const LocalNormOptions& opts = {});

/// ||f||_{u1-spec} / ||f||_{u0-spec} for u0 < u1; 0 when both vanish.
double embedding_ratio(const GridFunction& f, const SpaceSpec& E, const Weight& w,
                       double u0, double u1, const RadiusGrid& radii,
                       bool homogeneous = true, const LocalNormOptions& opts = {});

/// Two-sided comparison of ||G o phi|| and ||G|| in L^u(dr/r) over the
/// window; phi is taken from the weight families. A non-monotone phi is
/// replaced by its double log-smoothing, which is strictly monotone.
std::pair<double, double> change_of_variable_check(const TableFunction& G,
                                                   const Weight& phi, double u,
                                                   const RadiusGrid& radii);

} // namespace bwu
