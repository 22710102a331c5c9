#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dynmand/heights.hpp"
#include "dynmand/parse.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace dynmand;

static RatPoly RP(std::vector<Rat> c) { return RatPoly(std::move(c)); }

/* escape at step 0: hhat_v = -v(x) log p for monic f */
TEST_CASE("nonarch height, immediate escape") {
    NonarchHeight h = local_height_nonarch(RP({Rat(0), Rat(0), Rat(1)}), Rat(1, 3), 3);
    CHECK_FALSE(h.bounded);
    CHECK(h.certificate == NonarchCertificate::Escape);
    CHECK(h.steps == 0);
    CHECK(h.coeff_log_p == Rat(1));
    CHECK(h.value() == doctest::Approx(std::log(3.0)));
}

TEST_CASE("nonarch height, invariant ball") {
    /* monic integral fiber, integral point: settled in zero steps */
    NonarchHeight h = local_height_nonarch(RP({Rat(1), Rat(0), Rat(1)}), Rat(7), 7);
    CHECK(h.bounded);
    CHECK(h.certificate == NonarchCertificate::InvariantBall);
    CHECK(h.coeff_log_p == Rat(0));
    CHECK(h.steps == 0);
}

TEST_CASE("nonarch height, escape after a bounded start") {
    /* f = x^2 + 1/2 at p = 2: r_2 = sqrt(2), so x = 1 starts inside but
     * f(1) = 3/2 has |3/2|_2 = 2 and the closed form applies at step 1 */
    NonarchHeight h = local_height_nonarch(RP({Rat(1, 2), Rat(0), Rat(1)}), Rat(1), 2);
    CHECK_FALSE(h.bounded);
    CHECK(h.steps == 1);
    CHECK(h.coeff_log_p == Rat(1, 2));
}

TEST_CASE("nonarch height, repeated state inside a non-invariant ball") {
    /* f = x^2 + 1/4 at p = 2: r_2 = 2 exceeds the invariant-ball radius,
     * and 1/2 is a fixed point with |1/2|_2 = 2 */
    NonarchHeight h = local_height_nonarch(RP({Rat(1, 4), Rat(0), Rat(1)}), Rat(1, 2), 2);
    CHECK(h.bounded);
    CHECK(h.certificate == NonarchCertificate::StateRepeat);
    CHECK(h.coeff_log_p == Rat(0));
}

TEST_CASE("nonarch height matches the closed form above the escape radius") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::uniform_int_distribution<int> dd(2, 3);
    const long primes[] = {2, 3, 5, 7, 11};
    std::uniform_int_distribution<int> pi(0, 4);

    int done = 0;
    while (done < 100) {
        int d = dd(rng);
        std::vector<Rat> co(static_cast<size_t>(d) + 1);
        for (auto& q : co) q = Rat(num(rng), den(rng));
        if (co.back() == 0) continue;
        RatPoly f(co);
        Rat x(num(rng), den(rng));
        if (x == 0) continue;
        long p = primes[pi(rng)];

        Rat rho = escape_radius_exponent(f, p);
        Rat vx(valuation(x, p).v);
        if (-vx <= rho) continue; /* keep points strictly outside r_v */
        ++done;

        NonarchHeight h = local_height_nonarch(f, x, p);
        CHECK_FALSE(h.bounded);
        CHECK(h.steps == 0);
        Rat vad(valuation(f.lead(), p).v);
        CHECK(h.coeff_log_p == -vx - vad / Rat(d - 1));
    }
}

TEST_CASE("nonarch value is independent of input representation") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::uniform_int_distribution<int> scale(1, 60);
    for (int t = 0; t < 60; ++t) {
        Rat a(num(rng), den(rng));
        Rat b(num(rng), den(rng));
        RatPoly f(std::vector<Rat>{a, b, Rat(0), Rat(1)});
        Rat x(num(rng), den(rng));
        long p = (t % 2) ? 3 : 2;

        NonarchHeight h1 = local_height_nonarch(f, x, p);

        /* rebuild f by summing monomials in reverse and x through an
         * unreduced fraction; exact arithmetic must not notice */
        RatPoly f2 = RatPoly::monomial(3) + RatPoly::monomial(1, b) + RatPoly::constant(a);
        Rat s(scale(rng));
        Rat x2 = Rat(rat_num(x) * rat_num(s), 1) / Rat(rat_den(x) * rat_num(s), 1);
        NonarchHeight h2 = local_height_nonarch(f2, x2, p);

        CHECK(h1.coeff_log_p == h2.coeff_log_p);
        CHECK(h1.bounded == h2.bounded);
        CHECK(h1.steps == h2.steps);
    }
}

/* value checked against a 200-bit escape-rate extrapolation */
TEST_CASE("archimedean height, escaping orbit") {
    std::vector<cplx> f = {{2.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    GreenValue g = local_height_arch(f, {2.0, 0.0});
    CHECK(g.escaped);
    CHECK_FALSE(g.inconclusive);
    CHECK(g.value == doctest::Approx(0.90956961012223560755).epsilon(1e-9));
    CHECK(g.error_bound < 1e-8);
}

TEST_CASE("archimedean height, certified cycle") {
    std::vector<cplx> f = {{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    GreenValue g = local_height_arch(f, {0.0, 0.0}); /* 0 -> -1 -> 0 */
    CHECK(g.value == 0.0);
    CHECK_FALSE(g.escaped);
    CHECK_FALSE(g.inconclusive);
}

TEST_CASE("archimedean height, inconclusive parabolic orbit") {
    std::vector<cplx> f = {{0.25, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    GreenValue g = local_height_arch(f, {0.25, 0.0});
    CHECK_FALSE(g.escaped);
    CHECK(g.inconclusive);
}

TEST_CASE("functional equation hhat(f(x)) = d hhat(x)") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> co(-2.0, 2.0);
    std::uniform_int_distribution<int> dd(2, 3);
    std::uniform_int_distribution<int> lead(1, 2);
    for (int t = 0; t < 200; ++t) {
        int d = dd(rng);
        std::vector<cplx> f(static_cast<size_t>(d) + 1);
        for (int i = 0; i < d; ++i) f[static_cast<size_t>(i)] = {co(rng), co(rng)};
        f[static_cast<size_t>(d)] = {static_cast<double>(lead(rng)), 0.0};
        cplx x{co(rng), co(rng)};
        FunctionalEqReport r = check_functional_equation(f, x);
        CHECK(r.pass);
    }
}

/* hhat under f = x^2 is exactly the Weil height log max(|num|, |den|) */
TEST_CASE("global height against the Weil height") {
    ParamFamily F = parse_family("x^2+l");
    std::mt19937 rng(44);
    std::uniform_int_distribution<long> num(-400, 400);
    std::uniform_int_distribution<long> den(1, 400);
    for (int t = 0; t < 100; ++t) {
        Rat x(num(rng), den(rng));
        GlobalHeight g = global_height(F, Rat(0), x);
        Int n = rat_num(x) < 0 ? Int(-rat_num(x)) : rat_num(x);
        double weil = log_int(std::max(n, rat_den(x)));
        CHECK_FALSE(g.inconclusive);
        CHECK(std::abs(g.value - weil) <= g.error_bound + 1e-9);
    }
}

TEST_CASE("global height splits into matching local parts") {
    ParamFamily F = parse_family("x^2+l");
    GlobalHeight g = global_height(F, Rat(4), Rat(1, 2));
    /* p = 2 contributes exactly log 2 */
    REQUIRE(g.finite.size() == 1);
    CHECK(g.finite[0].first == 2);
    CHECK(g.finite[0].second == Rat(1));
    double finite_part = std::log(2.0);
    CHECK(g.value == doctest::Approx(g.arch.value + finite_part));
}
