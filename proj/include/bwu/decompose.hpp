#pragma once

#include <span>
#include <string>
#include <vector>

#include "bwu/grid.hpp"
#include "bwu/local_norms.hpp"

namespace bwu {

/// Tent profile: 1 on |x| <= 1, 0 on |x| >= 2, linear in between
/// (sup-norm distance; Lipschitz constant 1).
struct CutoffProfile {
    double eval(std::span<const double> x) const;
    double eval_scaled(std::span<const double> x, double r) const;
    static constexpr double lipschitz_constant = 1.0;
};

/// Two-piece split f = f0 + f1 at radius r with its geometry constants
/// (a, b, c) and the method that produced it.
struct Decomposition {
    GridFunction f0;
    GridFunction f1;
    double r = 0.0;
    double a = 1.0, b = 1.0, c = 1.0;
    std::string method;
};

/// f0 = f * indicator(Q_r), f1 = remainder; constants (1,1,1).
Decomposition lattice_decompose(const GridFunction& f, double r);

/// f0 = (f - mean(f, Q_2r)) * tent_r, f1 = remainder; constants (3,3,1).
/// Requires 2r inside the master cube.
Decomposition campanato_decompose(const GridFunction& f, double r);

/// Picks the split the space kind calls for: the indicator split for
/// lattice spaces, the smooth-cutoff split for oscillation spaces.
Decomposition decompose_for(const GridFunction& f, double r, const SpaceSpec& E);

struct DecompRow {
    double t = 0.0;
    int side = 0;       // 0 -> f0, 1 -> f1
    double lhs = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool skipped = false; // bound cube exits the master domain
};

struct DecompositionCheck {
    double c0 = 0.0;            // worst f0 ratio against its case bound
    double c1 = 0.0;            // worst f1 ratio against its case bound
    double f1_small_t_max = 0.0; // max ||f1||_{E(Q_t)} over t < c*r (must vanish)
    std::vector<DecompRow> rows;
};

/// Sweeps t over the radius grid and certifies the two case bounds.
/// Ratio conventions: 0/0 counts as 1; positive/0 reports +inf.
DecompositionCheck verify_decomposition(const GridFunction& f, const Decomposition& dec,
                                        const SpaceSpec& E, const RadiusGrid& radii,
                                        const LocalNormOptions& opts = {});

} // namespace bwu
