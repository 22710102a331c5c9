#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dynmand/error.hpp"
#include "dynmand/parse.hpp"
#include "dynmand/poly.hpp"

#include <random>

using namespace dynmand;

static RatPoly P(std::vector<long> c) {
    std::vector<Rat> v;
    for (long x : c) v.emplace_back(x);
    return RatPoly(std::move(v));
}

TEST_CASE("RatPoly basics") {
    RatPoly z;
    CHECK(z.is_zero());
    CHECK(z.degree() == RatPoly::kDegNegInf);

    RatPoly f = P({1, 0, 2});
    CHECK(f.degree() == 2);
    CHECK(f.coeff(0) == 1);
    CHECK(f.coeff(1) == 0);
    CHECK(f.coeff(2) == 2);
    CHECK(f.coeff(7) == 0);
    CHECK(f.lead() == 2);
    CHECK_FALSE(f.is_monic());

    CHECK(f.eval<Rat>(Rat(3)) == Rat(19));
    CHECK(f.eval<Rat>(Rat(1, 2)) == Rat(3, 2));

    RatPoly g = P({0, 1});
    CHECK((f + g).coeff(1) == 1);
    CHECK((f - f).is_zero());
    CHECK((f * g).degree() == 3);
    CHECK(f.scaled(Rat(1, 2)).lead() == 1);
    CHECK(f.derivative() == P({0, 4}));
    CHECK(RatPoly::monomial(3, Rat(5)) == P({0, 0, 0, 5}));
}

TEST_CASE("compose and divide_exact") {
    RatPoly f = P({1, 0, 1});   /* x^2 + 1 */
    RatPoly g = P({0, 2});      /* 2x      */
    CHECK(f.compose(g) == P({1, 0, 4}));
    CHECK(g.compose(f) == P({2, 0, 2}));

    RatPoly prod = f * g;
    auto [q1, ok1] = prod.divide_exact(f);
    CHECK(ok1);
    CHECK(q1 == g);
    auto [q2, ok2] = P({1, 1}).divide_exact(f);
    CHECK_FALSE(ok2);
}

/* Conjugation targets computed by hand from delta(x) = a x + b with
 * a = c_d^{-1/(d-1)}, b = -c_{d-1}/(d c_d). */
TEST_CASE("normalize_polynomial exact cases") {
    SUBCASE("monic quadratic") {
        Normalization n = normalize_polynomial(P({1, 3, 1}));
        REQUIRE(n.exact);
        CHECK(n.a_rat == 1);
        CHECK(n.b == Rat(-3, 2));
        CHECK(n.g == RatPoly(std::vector<Rat>{Rat(1, 4), Rat(0), Rat(1)}));
    }
    SUBCASE("non-monic quadratic") {
        Normalization n = normalize_polynomial(P({1, 4, 2}));
        REQUIRE(n.exact);
        CHECK(n.a_rat == Rat(1, 2));
        CHECK(n.b == -1);
        CHECK(n.g == P({0, 0, 1}));
    }
    SUBCASE("already normal") {
        Normalization n = normalize_polynomial(P({0, 0, 0, 1}));
        REQUIRE(n.exact);
        CHECK(n.a_rat == 1);
        CHECK(n.b == 0);
        CHECK(n.g == P({0, 0, 0, 1}));
    }
}

TEST_CASE("normalize_polynomial irrational scale") {
    /* a = 2^{-1/2} is irrational, so only the numeric channel is valid */
    Normalization n = normalize_polynomial(P({1, 0, 0, 2}));
    CHECK_FALSE(n.exact);
    CHECK(to_double(n.a) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(n.g_real.size() == 4);
    CHECK(to_double(n.g_real[3]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(to_double(n.g_real[2]) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ParamFamily decompose and reassemble") {
    /* f = x^3 + l x + (2 l^2 + 1) */
    std::vector<LamPoly> c = {P({1, 0, 2}), P({0, 1})};
    ParamFamily F = ParamFamily::decompose(c, 3);
    CHECK(F.degree() == 3);
    CHECK(F.P() == P({1, 0, 0, 1}));
    REQUIRE(F.r() == 2);
    CHECK(F.terms()[0].m == 1);
    CHECK(F.terms()[0].Q == P({0, 1}));
    CHECK(F.terms()[0].e == 1);
    CHECK(F.terms()[1].m == 2);
    CHECK(F.terms()[1].Q == P({2}));
    CHECK(F.terms()[1].e == 0);
    CHECK(F.m_r() == 2);
    CHECK(F.reassemble() == c);
}

TEST_CASE("family evaluation agrees with fiber specialization") {
    ParamFamily F = parse_family("x^3 + l*x + (2*l^2+1)");
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    for (int t = 0; t < 50; ++t) {
        Rat lam = Rat(num(rng), den(rng));
        Rat x = Rat(num(rng), den(rng));
        RatPoly fib = F.fiber(lam);
        CHECK(F.eval<Rat>(lam, x) == fib.eval<Rat>(x));
    }
}

TEST_CASE("symbolic iterates, classical family") {
    ParamFamily F = parse_family("x^2+l");
    LamPoly c = parse_lampoly("l");
    CHECK(iterate_param(F, c, 0) == c);
    CHECK(iterate_param(F, c, 1) == P({0, 1, 1}));           /* l^2 + l        */
    CHECK(iterate_param(F, c, 2) == P({0, 1, 1, 2, 1}));     /* (l^2+l)^2 + l  */
}

TEST_CASE("symbolic iterate matches pointwise orbit") {
    ParamFamily F = parse_family("x^3 + l*x + (2*l^2+1)");
    LamPoly c = parse_lampoly("l^2 + 1");
    LamPoly g3 = iterate_param(F, c, 3);
    std::mt19937 rng(12);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 5);
    for (int t = 0; t < 20; ++t) {
        Rat lam = Rat(num(rng), den(rng));
        Rat z = c.eval<Rat>(lam);
        RatPoly fib = F.fiber(lam);
        for (int i = 0; i < 3; ++i) z = fib.eval<Rat>(z);
        CHECK(g3.eval<Rat>(lam) == z);
    }
}

TEST_CASE("iterate_param honors the degree cap") {
    ParamFamily F = parse_family("x^2+l");
    CHECK_THROWS_AS(iterate_param(F, parse_lampoly("l"), 10, 100), DynError);
    try {
        iterate_param(F, parse_lampoly("l"), 10, 100);
    } catch (const DynError& e) {
        CHECK(e.kind() == DynError::Kind::Cap);
    }
}

TEST_CASE("degree law, fixed example") {
    ParamFamily F = parse_family("x^2+l");
    DegreeLawReport r = check_degree_law(F, parse_lampoly("3*l^2"), 2);
    CHECK(r.hypothesis_ok);
    CHECK(r.expected_deg == 8);
    CHECK(r.actual_deg == 8);
    CHECK(r.expected_lead == Rat(81));
    CHECK(r.actual_lead == Rat(81));
    CHECK(r.pass);
}

TEST_CASE("degree law, randomized families") {
    std::mt19937 rng(2026);
    std::uniform_int_distribution<int> pick_d(2, 3);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::uniform_int_distribution<int> cdeg(0, 2);
    std::uniform_int_distribution<int> extra(0, 1);
    std::uniform_int_distribution<int> pick_n(1, 3);

    for (int t = 0; t < 40; ++t) {
        int d = pick_d(rng);
        std::vector<LamPoly> cs;
        for (int i = 0; i <= d - 2; ++i) {
            std::vector<Rat> co(static_cast<size_t>(cdeg(rng)) + 1);
            for (auto& q : co) q = Rat(num(rng), den(rng));
            cs.emplace_back(std::move(co));
        }
        ParamFamily F = ParamFamily::decompose(cs, d);

        int m = std::max(F.m_r(), 1) + extra(rng);
        std::vector<Rat> cc(static_cast<size_t>(m) + 1);
        for (auto& q : cc) q = Rat(num(rng), den(rng));
        while (cc.back() == 0) cc.back() = Rat(num(rng), den(rng));
        LamPoly c{std::move(cc)};

        DegreeLawReport r = check_degree_law(F, c, pick_n(rng));
        CHECK(r.hypothesis_ok);
        CHECK(r.pass);
    }
}

TEST_CASE("degree law hypothesis failure is reported, not thrown") {
    ParamFamily F = parse_family("x^2 + l^2");      /* m_r = 2 */
    DegreeLawReport r = check_degree_law(F, parse_lampoly("l"), 2);
    CHECK_FALSE(r.hypothesis_ok);
}

/* f(a) - f(b) always carries the factor a - b, so the relation at (n, k)
 * is exactly divisible by the one at (n-1, k-1). */
TEST_CASE("relation divisibility ladder") {
    ParamFamily F = parse_family("x^2+l");
    LamPoly c = parse_lampoly("l");
    auto rel = [&](int n, int k) { return iterate_param(F, c, n) - iterate_param(F, c, k); };
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
        auto [q, ok] = rel(n, k).divide_exact(rel(n - 1, k - 1));
        CHECK(ok);
        CHECK(q.degree() == rel(n, k).degree() - rel(n - 1, k - 1).degree());
    }
}

TEST_CASE("parser, bivariate grammar") {
    BivarPoly b = parse_poly_xl("x^3 + (2*l^2+1) + l*x");
    CHECK(b.x_degree() == 3);
    CHECK(b.by_x_power[0] == P({1, 0, 2}));
    CHECK(b.by_x_power[1] == P({0, 1}));
    CHECK(b.by_x_power[2].is_zero());
    CHECK(b.by_x_power[3] == P({1}));

    CHECK(parse_lampoly("1/2 - l + l^2") == RatPoly(std::vector<Rat>{Rat(1, 2), Rat(-1), Rat(1)}));
    CHECK(parse_lampoly("(1+l)(1-l)") == P({1, 0, -1}));
    CHECK(parse_lampoly("-l") == P({0, -1}));
    CHECK(parse_rational("-7/2") == Rat(-7, 2));
    CHECK(parse_rational("5") == Rat(5));
}

TEST_CASE("parser, family validation") {
    ParamFamily F = parse_family("x^2+l");
    CHECK(F.degree() == 2);
    CHECK(F.coeff_polys()[0] == P({0, 1}));

    /* nonzero x^{d-1} coefficient breaks normal form */
    CHECK_THROWS_AS(parse_family("x^2 + x + 1"), DynError);
    /* non-constant leading coefficient */
    CHECK_THROWS_AS(parse_family("l*x^2 + 1"), DynError);
    /* degree too small */
    CHECK_THROWS_AS(parse_family("x + l"), DynError);
    /* x may not appear in a marked point */
    CHECK_THROWS_AS(parse_lampoly("x + 1"), DynError);
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_lampoly("l + #");
        FAIL("expected a parse error");
    } catch (const DynError& e) {
        CHECK(e.kind() == DynError::Kind::Parse);
        CHECK(e.has_position());
        CHECK(e.position() == 4);
    }
}

TEST_CASE("string form round-trips through the parser") {
    for (const char* s : {"l^2 + l", "1/2*l^3 - 2", "-l + 7/3"}) {
        LamPoly p = parse_lampoly(s);
        CHECK(parse_lampoly(p.str("l")) == p);
    }
}
