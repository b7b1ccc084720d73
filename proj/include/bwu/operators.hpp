#pragma once

#include <span>
#include <string>
#include <vector>

#include "bwu/bwu_norms.hpp"
#include "bwu/grid.hpp"
#include "bwu/interpolate.hpp"
#include "bwu/local_norms.hpp"

namespace bwu {

/// Singular kernel description. Built-ins are odd, so the cancellation
/// over symmetric annuli holds analytically.
struct KernelSpec {
    enum class Kind { Hilbert1d, RieszLike };
    Kind kind = Kind::Hilbert1d;
    double kappa = 1.0; // off-diagonal regularity exponent, recorded
    /// RieszLike in dim 2: piecewise-constant symbol on [0, pi) sectors,
    /// extended oddly to the full circle. In dim 1 the symbol reduces to
    /// sign(x-y), i.e. the Hilbert kernel up to the first sector value.
    std::vector<double> sectors{1.0};

    static KernelSpec hilbert();
    static KernelSpec riesz_like(std::vector<double> sector_values, double kappa = 1.0);

    double size_constant() const; // C in |K(x,y)| <= C |x-y|^{-n}
    double eval(std::span<const double> x, std::span<const double> y, int dim) const;
};

/// Fractional maximal operator of order alpha in [0, dim). In dim 1 the cube
/// family is every aligned interval containing the cell; in dim 2 positions
/// are free but sidelengths are dyadic. Cubes are clamped to the master cube.
GridFunction maximal(const GridFunction& f, double alpha);

/// Riesz-type potential of order alpha in (0, dim): midpoint convolution off
/// the diagonal plus the closed-form in-cell correction.
GridFunction fractional_integral(const GridFunction& f, double alpha);

/// Kernel-subtracted variant, well defined modulo constants for growing f.
GridFunction modified_fractional_integral(const GridFunction& f, double alpha);

/// Truncated singular integral, cells at distance >= eta (eta >= h/2).
GridFunction truncated_singular(const GridFunction& f, const KernelSpec& kernel,
                                double eta);

/// Truncated singular integral with the centered kernel subtraction.
GridFunction modified_singular(const GridFunction& f, const KernelSpec& kernel,
                               double eta);

/// Negative fixture: a phase factor tied to ||f||_{L^p} times the maximal
/// function. L^p-bounded but fails the sublinear-difference certificate.
GridFunction phase_twisted_maximal(const GridFunction& f, double p);

/// Operator selector for the harness.
struct OperatorSpec {
    std::string tag; // maximal | fractional | modified_fractional |
                     // truncated_singular | modified_singular |
                     // phase_twisted_maximal | zero
    double alpha = 0.0;
    double eta = 0.0;     // 0 -> h/2 at apply time
    double phase_p = 2.0; // phase_twisted_maximal only
    KernelSpec kernel = KernelSpec::hilbert();
    std::string text() const;
};

GridFunction apply_operator(const OperatorSpec& op, const GridFunction& f);

/// Samplewise |T(f+g)| <= |Tf| + |Tg| + tol.
struct CertificateResult {
    bool holds = false;
    double worst_excess = 0.0;
    std::size_t witness_cell = 0;
};
CertificateResult sublinearity_certificate(const OperatorSpec& op, const GridFunction& f,
                                           const GridFunction& g, double tol = 1e-9);
/// Samplewise |Tf - Tg| <= C |T(f-g)| + tol.
CertificateResult difference_certificate(const OperatorSpec& op, const GridFunction& f,
                                         const GridFunction& g, double c,
                                         double tol = 1e-9);

/// Exponent tuple feeding a boundedness theorem's hypothesis check; the
/// weight of the source/target specs is expected to be r^-sigma Theta(r^tau).
struct TupleParams {
    double sigma = 0.0;
    double tau = 0.0;
    double kappa = 1.0;
};

/// Verifies the hypothesis set the operator tag selects. Throws
/// HypothesisError naming the violated inequality.
void check_operator_hypotheses(const OperatorSpec& op, int dim, const SpaceSpec& source,
                               const SpaceSpec& target, const TupleParams& params);

struct OperatorRow {
    std::string label;
    double source_norm = 0.0;
    double target_norm = 0.0;
    double ratio = 0.0;
    bool boundary_flagged = false; // >10% of |f| mass near the boundary
};

struct OperatorReport {
    std::vector<OperatorRow> rows;
    double sup_ratio = 0.0;
    std::vector<std::string> hypothesis_ids;
};

OperatorReport boundedness_table(const OperatorSpec& op,
                                 std::span<const GridFunction> corpus,
                                 const BwuSpec& source, const BwuSpec& target,
                                 const TupleParams& params,
                                 const LocalNormOptions& opts = {});

} // namespace bwu
