#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bwu/grid.hpp"

namespace bwu {

/// Functions in the pseudoconcave class: power r^theta, max(r^a, r^b),
/// or r^theta times the slowly-varying log factor ell_{b1,b2}.
class ThetaFunction {
public:
    static ThetaFunction power(double theta);
    static ThetaFunction max_powers(double alpha, double beta);
    static ThetaFunction power_log(double theta, double beta1, double beta2);

    double eval(double r) const;
    /// The mirror map t -> t*Theta(1/t); stays inside the built-in families.
    ThetaFunction dual() const;
    std::string text() const;

private:
    struct Power { double theta; };
    struct MaxPowers { double alpha, beta; };
    struct PowerLog { double theta, beta1, beta2; };
    std::variant<Power, MaxPowers, PowerLog> impl_;
};

/// The slowly varying factor: (log 1/r)^{-b1} below 1/e, 1 on [1/e, e],
/// (log r)^{b2} above e.
double ell_log_factor(double r, double beta1, double beta2);

/// Positive weight of the radius. Families: power r^{-sigma},
/// power_log r^{-sigma} * ell, max of two powers, pointwise composite
/// w0 * Theta(w1/w0), and log-log interpolated tables.
class Weight {
public:
    static Weight power(double sigma);
    static Weight power_log(double sigma, double beta1, double beta2);
    static Weight max_powers(double e1, double e2);
    static Weight composite(Weight w0, Weight w1, ThetaFunction theta);
    static Weight table(std::vector<double> radii, std::vector<double> values);
    /// Constant multiple (keeps the closed-form tail machinery intact).
    Weight scaled(double factor) const;

    double eval(double r) const;
    std::string text() const;

    /// Asymptotic power-decay exponent at infinity when the family declares
    /// one (sigma, min(e1,e2), or the composed exponent); nullopt for tables.
    std::optional<double> tail_decay() const;

    /// (scale, sigma) when this weight is exactly scale * r^{-sigma}.
    std::optional<std::pair<double, double>> as_power() const;

    /// Closed form of int_a^inf w(t)^u dt/t when the family admits one.
    /// Returns +inf for a declared divergent tail, nullopt when no closed
    /// form exists (callers fall back to quadrature + tail extrapolation).
    std::optional<double> closed_tail_integral(double a, double u) const;

    /// Local slope -d log w / d log r estimated at r (exact for powers).
    double log_slope(double r) const;

private:
    struct Power { double sigma; };
    struct PowerLog { double sigma, beta1, beta2; };
    struct MaxPowers { double e1, e2; };
    struct Composite {
        std::shared_ptr<const Weight> w0, w1;
        ThetaFunction theta;
    };
    struct Table { std::vector<double> r, w; };
    double scale_ = 1.0;
    std::variant<Power, PowerLog, MaxPowers, Composite, Table> impl_;
};

/// int_a^inf w(t)^u dt/t: closed form when available, otherwise log-midpoint
/// quadrature over a long window plus a power-tail extrapolation from the
/// local slope. Returns +inf when the tail model diverges.
double improper_log_integral(const Weight& w, double u, double a);

/// Probe-grid certification result: a verdict, the observed constant, and
/// the witness pair that attained it.
struct ClassReport {
    bool pass = false;
    double constant = 0.0;
    double witness_r = 0.0;
    double witness_s = 0.0;
    std::string note;
};

inline constexpr double kAlmostMonotoneBound = 4.0;
inline constexpr double kWStarBound = 100.0;
inline constexpr double kThetaClassBound = 1.25;

/// Epsilon lattice used by every exponent-existence search: 0.05..0.95.
std::vector<double> epsilon_lattice();

ClassReport check_doubling(const Weight& w, const RadiusGrid& probe);
ClassReport check_almost_decreasing(const Weight& w, const RadiusGrid& probe,
                                    double bound = kAlmostMonotoneBound);
ClassReport check_almost_increasing(const Weight& w, const RadiusGrid& probe,
                                    double bound = kAlmostMonotoneBound);
ClassReport check_W_star(const Weight& w, const RadiusGrid& probe,
                         double bound = kWStarBound);
ClassReport check_membership_Wu(const Weight& w, double u, const RadiusGrid& probe);
ClassReport check_theta_class(const ThetaFunction& theta, const RadiusGrid& probe,
                              double bound = kThetaClassBound);

/// Existence search over the epsilon lattice: does w(r) * r^{-epsilon}
/// pass the almost-increasing certification for some lattice epsilon?
ClassReport check_power_shifted_almost_increasing(
    const Weight& w, const RadiusGrid& probe, double bound = kAlmostMonotoneBound);

Weight compose_weight(const Weight& w0, const Weight& w1, const ThetaFunction& theta);

/// Mini-grammar parsers, e.g. "power{sigma=1.5}" or
/// "composite{w0=power{sigma=2},w1=power{sigma=1},theta=power{theta=0.5}}".
Weight parse_weight(const std::string& text);
ThetaFunction parse_theta(const std::string& text);

} // namespace bwu
