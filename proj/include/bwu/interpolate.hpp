#pragma once

#include <span>
#include <string>
#include <vector>

#include "bwu/bwu_norms.hpp"
#include "bwu/decompose.hpp"
#include "bwu/grid.hpp"
#include "bwu/weights.hpp"

namespace bwu {

/// Couple (A0, A1) of global spaces sharing the local space and window.
struct CoupleSpec {
    BwuSpec a0;
    BwuSpec a1;
    void validate() const;
    CoupleSpec swapped() const { return CoupleSpec{a1, a0}; }
};

/// Certified upper profile of the K-functional on a t-node grid, with the
/// decomposition radius that attained each node's minimum (negative codes:
/// -1 for the (f, 0) split, -2 for (0, f)).
struct KProfile {
    std::vector<double> t_nodes;
    std::vector<double> k_upper;
    std::vector<double> argmin_r;
};

struct KOptions {
    bool refine = false; // optional convex-split descent; never increases K
    LocalNormOptions norms;
};

/// Family-minimum upper bound on K(t, f; A0, A1): both trivial splits plus
/// the two-piece split at every radius node, in both piece orientations.
KProfile k_functional_upper(const GridFunction& f, const CoupleSpec& couple,
                            std::span<const double> t_nodes, const KOptions& opts = {});

/// t-nodes for the interpolation quadrature with uniform log weight per node.
struct InterpolationWindow {
    std::vector<double> t_nodes;
    double log_step = 0.0;
};

/// Nodes t_k = w0(r_k)/w1(r_k) over the radius window, so the K side and the
/// composite-weight side are sampled at matched radii. When normalize_at_one
/// is set, nodes are divided by the value at the first radius node >= 1.
InterpolationWindow map_t_nodes(const Weight& w0, const Weight& w1,
                                const RadiusGrid& radii, bool normalize_at_one = false);
InterpolationWindow geometric_t_nodes(double t_min, double rho, int count);

/// Log-quadrature of Theta(1/t) K(t) in L^u; restrict_ge_1 keeps t >= 1.
double interpolation_norm(const KProfile& profile, const ThetaFunction& theta,
                          double u, double log_step, bool restrict_ge_1 = false);

/// Convenience overload computing the profile on the window's nodes.
double interpolation_norm(const GridFunction& f, const CoupleSpec& couple,
                          const ThetaFunction& theta, double u,
                          const InterpolationWindow& window,
                          bool restrict_ge_1 = false, const KOptions& opts = {});

/// A named hypothesis of the interpolation theorem failed certification.
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

struct SandwichResult {
    double lower_c = 0.0; // bwu_norm / interpolation_norm
    double upper_c = 0.0; // interpolation_norm / bwu_norm
    bool swapped = false; // couple orientation used for the K side
    std::vector<std::string> certificates;
};

struct SandwichOptions {
    KOptions k;
    double monotone_bound = kAlmostMonotoneBound;
    double w_star_bound = kWStarBound;
};

/// Certifies the theorem hypotheses on the window (refusing on failure),
/// builds w = w0 Theta(w1/w0), and reports the two-sided equivalence
/// constants between the composite-weight norm and the interpolation norm.
SandwichResult sandwich_check(const GridFunction& f, const CoupleSpec& couple,
                              const ThetaFunction& theta, double u,
                              const SandwichOptions& opts = {});

} // namespace bwu
