#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bwu/grid.hpp"

namespace bwu {

enum class SpaceKind { Lp, WeakLp, Morrey, WeakMorrey, Campanato, Lipschitz, Bmo };

/// Description of a local space E(Q_r): Lebesgue, weak Lebesgue,
/// (weak) Morrey, Campanato, BMO or Lipschitz, with exponents.
struct SpaceSpec {
    SpaceKind kind = SpaceKind::Lp;
    double p = 1.0;
    double lambda = 0.0;
    double alpha = 1.0;            // Lipschitz only
    bool modulo_constants = false; // forced on for Campanato/BMO/Lipschitz

    static SpaceSpec lp(double p);
    static SpaceSpec weak_lp(double p);
    static SpaceSpec morrey(double p, double lambda);
    static SpaceSpec weak_morrey(double p, double lambda);
    static SpaceSpec campanato(double p, double lambda);
    static SpaceSpec bmo();
    static SpaceSpec lipschitz(double alpha);

    /// Throws when the exponents violate the space's admissible range.
    void validate(int dim) const;
    bool is_lattice() const;   // Lp / WeakLp / Morrey / WeakMorrey
    bool is_oscillation() const { return modulo_constants; }
    std::string text() const;
};

/// Inverse of SpaceSpec::text, e.g. "Morrey{p=2,lambda=-0.25}".
SpaceSpec parse_space_spec(const std::string& text);

struct LocalNormOptions {
    int center_stride_2d = 1;               // inner-sup center stride, dim 2
    std::size_t lipschitz_all_pairs_cap = 4096;
    int lipschitz_stride_2d = 4;            // pair subset stride past the cap
};

/// Prefix-sum tables over a grid function: O(1) aligned-cube integrals of
/// |f|^p, f and f^2. The table over the full master cube reproduces the
/// direct sum to 1e-12 relative.
class CubeSums {
public:
    CubeSums(const GridFunction& f, double p);

    // Index-space cube [ax, bx) x [ay, by); cell counts, not lengths.
    double sum_abs_p(int ax, int bx, int ay = 0, int by = 1) const;
    double sum_f(int ax, int bx, int ay = 0, int by = 1) const;
    double sum_f2(int ax, int bx, int ay = 0, int by = 1) const;
    double p() const { return p_; }

private:
    int n_ = 0;
    int dim_ = 1;
    double p_ = 1.0;
    std::vector<double> abs_p_, f_, f2_;
    double pick(const std::vector<double>& t, int ax, int bx, int ay, int by) const;
};

/// The discretized local norm ||f||_{E(Q_r)}; r must be grid aligned.
double local_norm(const GridFunction& f, double r, const SpaceSpec& E,
                  const LocalNormOptions& opts = {});

/// Norms at several radii sharing one prefix-table build.
std::vector<double> local_norm_profile(const GridFunction& f,
                                       std::span<const double> radii,
                                       const SpaceSpec& E,
                                       const LocalNormOptions& opts = {});

/// Worst ratio ||f||_{E(Q_t)} / ||f||_{E(Q_r)} over node pairs t < r
/// (0/0 counts as 1).
double restriction_constant(const GridFunction& f, const SpaceSpec& E,
                            const RadiusGrid& radii,
                            const LocalNormOptions& opts = {});

} // namespace bwu
