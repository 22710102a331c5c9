#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dynmand/boettcher.hpp"
#include "dynmand/error.hpp"
#include "dynmand/parse.hpp"

#include <cmath>

using namespace dynmand;

static std::vector<cplx> quad(double lam_re, double lam_im = 0.0) {
    return {{lam_re, lam_im}, {0.0, 0.0}, {1.0, 0.0}};
}

TEST_CASE("phi is the identity for x^2") {
    std::vector<cplx> f = quad(0.0);
    BottcherEval b = bottcher_product(f, {10.0, 3.0});
    CHECK(std::abs(b.value - cplx(10.0, 3.0)) < 1e-12);
    CHECK(b.error_bound < 1e-9);
}

TEST_CASE("domain threshold is enforced") {
    std::vector<cplx> f = quad(-1.0);
    double T = bottcher_domain_threshold(f);
    CHECK(T >= std::sqrt(5.0) - 1e-12); /* sqrt(4K+1), K = 1 */
    CHECK_THROWS_AS(bottcher_product(f, {0.5, 0.0}), DynError);
}

TEST_CASE("log|phi| equals the Green value") {
    for (double lam : {-1.0, 0.5, 2.0}) {
        std::vector<cplx> f = quad(lam);
        ArchOptions opt;
        opt.tol = 1e-10;
        for (cplx z : {cplx(5.0, 0.0), cplx(-3.0, 4.0), cplx(0.0, 7.0)}) {
            BottcherEval b = bottcher_product(f, z, opt);
            GreenValue g = green_fiber(f, z, opt);
            REQUIRE(g.escaped);
            CHECK(std::abs(std::log(std::abs(b.value)) - g.value)
                  <= b.error_bound + g.error_bound + 1e-12);
        }
    }
}

TEST_CASE("phi(z)/z approaches 1 at large modulus") {
    std::vector<cplx> f = {{1.0, 0.0}, {-2.0, 0.5}, {0.0, 0.0}, {1.0, 0.0}};
    BottcherEval b = bottcher_product(f, {1e6, 0.0});
    CHECK(std::abs(b.value / cplx(1e6, 0.0) - 1.0) < 1e-5);
}

TEST_CASE("critical radius of a bounded critical orbit is 1") {
    CriticalData cd = critical_radius(quad(-2.0)); /* 0 -> -2 -> 2 -> 2 */
    REQUIRE(cd.critical_points.size() == 1);
    CHECK(std::abs(cd.critical_points[0]) < 1e-12);
    CHECK(cd.R_lambda == doctest::Approx(1.0));
    CHECK_FALSE(cd.any_inconclusive);
}

TEST_CASE("critical radius grows with an escaping critical orbit") {
    CriticalData cd = critical_radius(quad(4.0));
    CHECK(cd.R_lambda == doctest::Approx(std::exp(0.75017839144364417318)).epsilon(1e-8));
    CriticalData c10 = critical_radius(quad(10.0));
    CriticalData c100 = critical_radius(quad(100.0));
    CriticalData c1000 = critical_radius(quad(1000.0));
    CHECK(c10.R_lambda < c100.R_lambda);
    CHECK(c100.R_lambda < c1000.R_lambda);
}

TEST_CASE("probe threshold certifies the classical family") {
    ParamFamily F = parse_family("x^2+l");
    LamPoly c = parse_lampoly("l");
    ThresholdReport r = analyticity_threshold(F, c);
    CHECK(r.certified);
    CHECK(r.alpha == doctest::Approx(0.5)); /* m_1/(d - e_1) = 1/2 */
    CHECK(r.C0 > 0.0);
    CHECK(r.C0 < 1e3); /* the sweep should settle well under the default radii */
}

TEST_CASE("threshold requires lambda-dependence") {
    ParamFamily F = parse_family("x^2 + 1");
    CHECK_THROWS_AS(analyticity_threshold(F, parse_lampoly("l")), DynError);
}

TEST_CASE("asymptotic deviation stays one power below the lead") {
    ParamFamily F = parse_family("x^2+l");
    LamPoly c = parse_lampoly("l");
    std::vector<cplx> samples;
    for (int k = 0; k < 8; ++k) {
        double th = 2.0 * 3.14159265358979323846 * k / 8.0;
        samples.push_back(std::polar(1e3, th));
        samples.push_back(std::polar(2e3, th));
    }
    AsymptoticReport r = check_asymptotic(F, c, samples);
    CHECK(r.pass);
    CHECK(r.C_fit < 10.0);
}
