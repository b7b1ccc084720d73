#include <doctest.h>

#include <cmath>
#include <limits>

#include "bwu/weights.hpp"

using namespace bwu;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const RadiusGrid kProbe = RadiusGrid::spanning(0.0625, 16.0, std::pow(2.0, 0.25));
} // namespace

TEST_CASE("weight families evaluate their formulas") {
    CHECK(Weight::power(1.5).eval(2.0) == doctest::Approx(std::pow(2.0, -1.5)));
    CHECK(Weight::max_powers(1.0, 2.0).eval(0.5) ==
          doctest::Approx(std::pow(0.5, -2.0)));
    CHECK(Weight::max_powers(1.0, 2.0).eval(4.0) == doctest::Approx(std::pow(4.0, -1.0)));

    // the log factor: (log 1/r)^{-b1} | 1 | (log r)^{b2}
    CHECK(ell_log_factor(std::exp(-2.0), 0.5, 3.0) ==
          doctest::Approx(std::pow(2.0, -0.5)));
    CHECK(ell_log_factor(1.0, 0.5, 3.0) == 1.0);
    CHECK(ell_log_factor(std::exp(2.0), 0.5, 3.0) == doctest::Approx(std::pow(2.0, 3.0)));
    CHECK(Weight::power_log(1.0, 0.0, 1.0).eval(std::exp(2.0)) ==
          doctest::Approx(std::exp(-2.0) * 2.0));

    const auto table = Weight::table({1.0, 4.0}, {1.0, 0.25});
    CHECK(table.eval(2.0) == doctest::Approx(0.5).epsilon(1e-12)); // log-log midpoint
}

TEST_CASE("compose_weight: algebraic identities") {
    // r^{-2} (r^{2-1})^{1/2} = r^{-3/2}
    const auto composed =
        compose_weight(Weight::power(2.0), Weight::power(1.0), ThetaFunction::power(0.5));
    const auto direct = Weight::power(1.5);
    for (double r : kProbe.nodes())
        CHECK(composed.eval(r) == doctest::Approx(direct.eval(r)).epsilon(1e-12));

    // power Theta gives sigma = (1-theta) sigma0 + theta sigma1
    const auto c2 = compose_weight(Weight::power(2.0), Weight::power(0.5),
                                   ThetaFunction::power(0.25));
    const auto d2 = Weight::power(0.75 * 2.0 + 0.25 * 0.5);
    for (double r : kProbe.nodes())
        CHECK(c2.eval(r) == doctest::Approx(d2.eval(r)).epsilon(1e-12));

    // equal weights collapse to Theta(1) * w
    const auto w = Weight::power(1.0);
    const auto same = compose_weight(w, w, ThetaFunction::max_powers(0.25, 0.75));
    for (double r : {0.1, 1.0, 10.0})
        CHECK(same.eval(r) == doctest::Approx(w.eval(r)).epsilon(1e-12));
}

TEST_CASE("check_doubling: power constants") {
    const auto rep = check_doubling(Weight::power(1.0), kProbe);
    CHECK(rep.pass);
    CHECK(rep.constant == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.witness_r / rep.witness_s == doctest::Approx(0.5).epsilon(1e-9));

    CHECK(check_doubling(Weight::power(0.0), kProbe).constant == doctest::Approx(1.0));
    // doubling constant of r^-sigma is 2^sigma
    for (double sigma : {0.5, 1.5, 3.0})
        CHECK(check_doubling(Weight::power(sigma), kProbe).constant ==
              doctest::Approx(std::pow(2.0, sigma)).epsilon(1e-9));
}

TEST_CASE("check_almost_decreasing") {
    CHECK(check_almost_decreasing(Weight::power(1.0), kProbe).constant ==
          doctest::Approx(1.0));
    // the two-branch weight from composing max powers stays decreasing
    const auto w = Weight::max_powers(1.75, 1.25);
    const auto rep = check_almost_decreasing(w, kProbe);
    CHECK(rep.pass);
    CHECK(rep.constant == doctest::Approx(1.0));
    // an increasing map fails
    const auto rising = Weight::table({0.01, 100.0}, {0.01, 100.0});
    CHECK(!check_almost_decreasing(rising, kProbe).pass);
}

TEST_CASE("check_W_star: closed forms and divergence") {
    const auto rep = check_W_star(Weight::power(2.0), kProbe);
    CHECK(rep.pass);
    CHECK(rep.constant == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(check_W_star(Weight::power(1.0), kProbe).constant ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK(!check_W_star(Weight::power(0.0), kProbe).pass); // tail diverges

    const auto log_rep = check_W_star(Weight::power_log(1.0, 0.0, 0.0), kProbe);
    CHECK(log_rep.pass);
    CHECK(log_rep.constant == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(check_W_star(Weight::power_log(1.0, 0.0, 1.0), kProbe).pass);
}

TEST_CASE("check_membership_Wu") {
    const auto w1 = check_membership_Wu(Weight::power(1.0), 1.0, kProbe);
    CHECK(w1.pass);
    CHECK(w1.constant == doctest::Approx(1.0).epsilon(1e-12));

    const auto wsup = check_membership_Wu(Weight::power(1.0), kInf, kProbe);
    CHECK(wsup.pass);
    CHECK(wsup.constant == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(!check_membership_Wu(Weight::power(0.0), 2.0, kProbe).pass);
}

TEST_CASE("W^* implies W^u membership along the chain") {
    const std::vector<Weight> candidates{Weight::power(0.5), Weight::power(2.0),
                                         Weight::power_log(1.0, 0.0, -1.0)};
    for (const auto& w : candidates) {
        if (!check_W_star(w, kProbe).pass) continue;
        for (double u : {0.5, 1.0, 2.0, kInf})
            CHECK(check_membership_Wu(w, u, kProbe).pass);
    }
}

TEST_CASE("check_theta_class") {
    const auto ok = check_theta_class(ThetaFunction::power(0.5), kProbe);
    CHECK(ok.pass);
    CHECK(ok.constant == doctest::Approx(1.0).epsilon(1e-9));

    const auto mp = check_theta_class(ThetaFunction::max_powers(0.25, 0.75), kProbe);
    CHECK(mp.pass);
    CHECK(mp.constant == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(!check_theta_class(ThetaFunction::power(1.2), kProbe).pass);

    // power(theta) passes exactly for theta inside (0,1), on a >=3 decade probe
    const auto probe3 = RadiusGrid::spanning(0.05, 60.0, std::sqrt(2.0));
    for (double theta : {0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK(check_theta_class(ThetaFunction::power(theta), probe3).pass);
    for (double theta : {1.0, 1.2, 1.5})
        CHECK(!check_theta_class(ThetaFunction::power(theta), probe3).pass);
}

TEST_CASE("composite of doubling weights stays doubling") {
    const auto w = compose_weight(Weight::power(2.0), Weight::power_log(0.5, 0.0, 1.0),
                                  ThetaFunction::max_powers(0.25, 0.75));
    const auto rep = check_doubling(w, kProbe);
    CHECK(rep.pass);
    CHECK(std::isfinite(rep.constant));
}

TEST_CASE("theta dual stays in the class and reflects exponents") {
    const auto dual = ThetaFunction::power(0.3).dual();
    for (double r : {0.1, 1.0, 7.0})
        CHECK(dual.eval(r) == doctest::Approx(std::pow(r, 0.7)).epsilon(1e-12));
    // t * Theta(1/t) identity for the log family
    const auto theta = ThetaFunction::power_log(0.4, 0.2, -0.3);
    const auto mirrored = theta.dual();
    for (double t : {0.05, 0.4, 3.0, 40.0})
        CHECK(mirrored.eval(t) == doctest::Approx(t * theta.eval(1.0 / t)).epsilon(1e-12));
    CHECK(check_theta_class(mirrored, kProbe).pass);
}

TEST_CASE("tail decay declarations") {
    CHECK(*Weight::power(1.5).tail_decay() == doctest::Approx(1.5));
    CHECK(*Weight::max_powers(1.0, 2.0).tail_decay() == doctest::Approx(1.0));
    const auto c = compose_weight(Weight::power(2.0), Weight::power(0.5),
                                  ThetaFunction::power(0.25));
    CHECK(*c.tail_decay() == doctest::Approx(1.625).epsilon(1e-6));
    CHECK(!Weight::table({1.0, 2.0}, {1.0, 0.5}).tail_decay().has_value());
}

TEST_CASE("generic quadrature path matches the closed form") {
    // a composite with a power_log child has no closed form, but reduces to
    // r^-2 pointwise; the quadrature + tail extrapolation must agree
    const auto wrapped = compose_weight(Weight::power_log(2.0, 0.0, 0.0),
                                        Weight::power_log(2.0, 0.0, 0.0),
                                        ThetaFunction::power(0.5));
    for (double a : {0.5, 1.0, 4.0}) {
        const double generic = improper_log_integral(wrapped, 1.0, a);
        const double closed = std::pow(a, -2.0) / 2.0;
        CHECK(generic == doctest::Approx(closed).epsilon(1e-3));
    }
    CHECK(std::isinf(improper_log_integral(Weight::power(0.0), 1.0, 1.0)));
}

TEST_CASE("weight grammar round trips") {
    const std::vector<std::string> texts{
        "power{sigma=1.5}",
        "power_log{sigma=1,beta1=0,beta2=1}",
        "max_powers{e1=1.25,e2=1.75}",
        "composite{w0=power{sigma=2},w1=power{sigma=1},theta=power{theta=0.5}}",
        "composite{w0=power{sigma=2},w1=power{sigma=1},"
        "theta=max_powers{alpha=0.25,beta=0.75}}",
        "table{r=[1,2,4],w=[1,0.5,0.25]}",
        "scaled{factor=1.3,w=power{sigma=1}}",
    };
    for (const auto& text : texts) {
        const Weight w = parse_weight(text);
        CHECK(parse_weight(w.text()).text() == w.text());
        // parsed weight evaluates somewhere sensible
        CHECK(w.eval(1.7) > 0.0);
    }
    const auto theta = parse_theta("power_log{theta=0.5,beta1=0,beta2=1}");
    CHECK(parse_theta(theta.text()).text() == theta.text());

    CHECK_THROWS(parse_weight("power{}"));
    CHECK_THROWS(parse_weight("power{sigma=1} trailing"));
    CHECK_THROWS(parse_weight("mystery{x=1}"));
    CHECK_THROWS(parse_theta("power{theta=0.5"));
}

TEST_CASE("scaled weights multiply pointwise") {
    const auto w = Weight::power(1.0).scaled(1.3);
    for (double r : {0.25, 1.0, 4.0})
        CHECK(w.eval(r) == doctest::Approx(1.3 / r).epsilon(1e-15));
    // closed-form tails scale with factor^u
    CHECK(*w.closed_tail_integral(1.0, 2.0) ==
          doctest::Approx(1.3 * 1.3 / 2.0).epsilon(1e-12));
}
