#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dynmand/error.hpp"
#include "dynmand/parse.hpp"
#include "dynmand/preperiodic.hpp"

#include <algorithm>
#include <cmath>

using namespace dynmand;

static ParamFamily classical() { return parse_family("x^2+l"); }

static bool has_root_near(const std::vector<PrepSolution>& sols, double re, double im,
                          double tol = 1e-9) {
    return std::any_of(sols.begin(), sols.end(), [&](const PrepSolution& s) {
        return std::abs(s.lambda - cplx(re, im)) < tol;
    });
}

TEST_CASE("prep_equation, classical relations") {
    ParamFamily F = classical();
    LamPoly c = parse_lampoly("l");
    CHECK(prep_equation(F, c, 1, 0) == parse_lampoly("l^2"));
    CHECK(prep_equation(F, c, 2, 0) == parse_lampoly("l^4 + 2*l^3 + l^2"));
    CHECK(prep_equation(F, c, 2, 1) == parse_lampoly("l^4 + 2*l^3"));
    CHECK_THROWS_AS(prep_equation(F, c, 1, 1), DynError);
    CHECK_THROWS_AS(prep_equation(F, c, 0, 0), DynError);
}

TEST_CASE("relation_roots reports the full multiset") {
    ParamFamily F = classical();
    CHECK(relation_roots(F, parse_lampoly("l"), 2, 0).size() == 4);
    CHECK(relation_roots(F, parse_lampoly("l"), 1, 0).size() == 2);
    /* deg c = 2 doubles every count */
    CHECK(relation_roots(F, parse_lampoly("3*l^2"), 1, 0).size() == 4);
}

TEST_CASE("prep_roots, classical family through max_n = 2") {
    ParamFamily F = classical();
    std::vector<PrepSolution> sols = prep_roots(F, parse_lampoly("l"), 2);

    CHECK(has_root_near(sols, 0.0, 0.0));
    CHECK(has_root_near(sols, -1.0, 0.0));
    CHECK(has_root_near(sols, -2.0, 0.0));
    CHECK(sols.size() == 3);

    for (const PrepSolution& s : sols) {
        CHECK(s.refined_ok);
        CHECK(s.rel_residual <= 1e-8);
        CHECK(s.error_radius < 1e-6);
        /* all classical preperiodic parameters here are rational reals */
        CHECK(std::abs(s.lambda.imag()) < 1e-9);
    }

    /* merged duplicates keep the lexicographically first relation */
    auto at = [&](double re) {
        return *std::find_if(sols.begin(), sols.end(), [&](const PrepSolution& s) {
            return std::abs(s.lambda - cplx(re, 0.0)) < 1e-9;
        });
    };
    CHECK(at(0.0).n == 1);
    CHECK(at(0.0).k == 0);
    CHECK(at(0.0).multiplicity_hint >= 2);
    CHECK(at(-1.0).n == 2);
    CHECK(at(-1.0).k == 0);
    CHECK(at(-2.0).n == 2);
    CHECK(at(-2.0).k == 1);
}

TEST_CASE("preperiodic parameters sit on the boundary") {
    ParamFamily F = classical();
    LamPoly c = parse_lampoly("l");
    std::vector<PrepSolution> sols = prep_roots(F, c, 3);
    ClusterReport rep = boundary_clustering(F, c, sols, {});
    CHECK(rep.per_root_G.size() == sols.size());
    CHECK(rep.max_G <= 1e-6);
}

TEST_CASE("boundary clustering flags a planted wrong solution") {
    ParamFamily F = classical();
    PrepSolution fake;
    fake.n = 1;
    fake.k = 0;
    fake.lambda = {1.0, 0.0};
    ClusterReport rep = boundary_clustering(F, parse_lampoly("l"), {fake}, {});
    /* escape-rate value frozen against a 200-bit extrapolation */
    CHECK(rep.max_G == doctest::Approx(0.40735452273948).epsilon(1e-6));
    CHECK(rep.max_G > 1e-6);
}

TEST_CASE("equidistribution potentials approach G(w) + log gamma") {
    ParamFamily F = classical();
    EquidistReport rep = equidist_potential(F, parse_lampoly("l"), 4, {3.0, 0.0});
    REQUIRE(rep.ns.size() == 3);
    CHECK(rep.ns.front() == 2);
    CHECK(rep.ns.back() == 4);
    CHECK(rep.log_capacity == doctest::Approx(0.0));
    CHECK(rep.green_at_w == doctest::Approx(1.2476254997719259609).epsilon(1e-8));
    CHECK(rep.prediction == doctest::Approx(rep.green_at_w));
    CHECK(rep.monotone_decreasing);
    CHECK(rep.abs_errors.back() < rep.abs_errors.front());
}

TEST_CASE("equidistribution requires an exterior point") {
    ParamFamily F = classical();
    CHECK_THROWS_AS(equidist_potential(F, parse_lampoly("l"), 3, {0.0, 0.0}), DynError);
}

TEST_CASE("adelic height of integral preperiodic parameter vanishes") {
    ParamFamily F = classical();
    AdelicHeightReport rep = adelic_height(F, parse_lampoly("l"), Rat(0));
    CHECK(rep.total == doctest::Approx(0.0));
    CHECK(rep.finite_contribs.empty());
    CHECK(rep.pass);
    CHECK_FALSE(rep.inconclusive);
}

TEST_CASE("adelic height of an escaping integral parameter") {
    ParamFamily F = classical();
    AdelicHeightReport rep = adelic_height(F, parse_lampoly("l"), Rat(2));
    CHECK(rep.finite_contribs.empty());
    /* archimedean part only; frozen against a 200-bit extrapolation */
    CHECK(rep.total == doctest::Approx(0.90956961012223560755).epsilon(1e-8));
    CHECK(rep.pass);
}

TEST_CASE("adelic height picks up the finite place of a denominator") {
    ParamFamily F = classical();
    AdelicHeightReport rep = adelic_height(F, parse_lampoly("l"), Rat(1, 2));
    bool has2 = false;
    for (const auto& [p, coeff] : rep.finite_contribs) {
        if (p == 2) {
            has2 = true;
            CHECK(coeff == Rat(1));
        }
    }
    CHECK(has2);
    CHECK(rep.pass);
    CHECK(std::abs(rep.total - rep.crosscheck) <= rep.crosscheck_error);
}

TEST_CASE("shared preperiodicity, identical marked points") {
    ParamFamily F = classical();
    LamPoly a = parse_lampoly("1+l");
    SharedPrepReport rep = shared_prep_experiment(F, a, a, 1, 1, 3);
    CHECK(rep.hyp_same_deg_lead);
    CHECK(rep.hyp_degree_bound);
    CHECK(rep.identity);
    REQUIRE(rep.levels.size() == 3);
    for (size_t i = 0; i < rep.levels.size(); ++i) {
        CHECK(rep.sets_equal[i]);
        CHECK(rep.intersection_counts[i] == rep.count_a[i]);
        CHECK(rep.count_a[i] == rep.count_b[i]);
    }
    CHECK(rep.verdict == "identity_true_growth");
}

TEST_CASE("shared preperiodicity, distinct points share lambda = -2") {
    ParamFamily F = classical();
    SharedPrepReport rep =
        shared_prep_experiment(F, parse_lampoly("1+l"), parse_lampoly("4+l"), 1, 1, 2);
    CHECK(rep.hyp_same_deg_lead);
    CHECK(rep.hyp_degree_bound);
    CHECK_FALSE(rep.identity);
    REQUIRE(rep.intersection_counts.size() == 2);
    CHECK(rep.intersection_counts[0] == 1);
    /* -3 joins at level 2: under x^2 - 3 both 1+(-3) = -2 and 4+(-3) = 1
     * sit on the 2-cycle {-2, 1} */
    CHECK(rep.intersection_counts[1] == 2);
    CHECK(has_root_near(rep.shared, -2.0, 0.0, 1e-6));
    CHECK(has_root_near(rep.shared, -3.0, 0.0, 1e-6));
    for (size_t i = 0; i < rep.sets_equal.size(); ++i) CHECK_FALSE(rep.sets_equal[i]);
}

TEST_CASE("shared preperiodicity, hypothesis failure is reported") {
    ParamFamily F = classical();
    SharedPrepReport rep =
        shared_prep_experiment(F, parse_lampoly("l"), parse_lampoly("l+l^2"), 1, 1, 2);
    CHECK_FALSE(rep.hyp_same_deg_lead);
    CHECK(rep.verdict == "hypothesis_failed");
}
