#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dynmand/error.hpp"
#include "dynmand/parse.hpp"
#include "dynmand/places.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace dynmand;

TEST_CASE("place construction") {
    CHECK(Place::arch().is_arch());
    CHECK(Place::prime(2).p == 2);
    CHECK(Place::prime(7919).p == 7919);
    CHECK_THROWS_AS(Place::prime(4), DynError);
    CHECK_THROWS_AS(Place::prime(1), DynError);
    CHECK(Place::prime(5) == Place::prime(5));
    CHECK_FALSE(Place::prime(5) == Place::arch());
}

TEST_CASE("valuations") {
    CHECK(valuation_int(Int(12), 2) == 2);
    CHECK(valuation_int(Int(12), 3) == 1);
    CHECK(valuation_int(Int(12), 5) == 0);
    CHECK(valuation(Rat(1, 8), 2).v == -3);
    CHECK(valuation(Rat(-50, 9), 3).v == -2);
    CHECK(valuation(Rat(-50, 9), 5).v == 2);
    CHECK(valuation(Rat(0), 7).is_infinite);
    CHECK(abs_value(Place::prime(2), Rat(1, 8)) == doctest::Approx(8.0));
    CHECK(abs_value(Place::prime(3), Rat(0)) == 0.0);
    CHECK(abs_value(Place::arch(), Rat(-3, 2)) == doctest::Approx(1.5));
}

TEST_CASE("product formula") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-5000, 5000);
    std::uniform_int_distribution<long> den(1, 5000);
    int done = 0;
    while (done < 500) {
        Rat a(num(rng), den(rng));
        if (a == 0) continue;
        ++done;
        double total = log_abs(Place::arch(), a);
        std::vector<long> ps = prime_factors(rat_num(a) * rat_den(a));
        for (long p : ps) total += log_abs(Place::prime(p), a);
        CHECK(std::abs(total) < 1e-9);
    }
}

TEST_CASE("escape radius exponents") {
    RatPoly f1(std::vector<Rat>{Rat(0), Rat(1, 5), Rat(0), Rat(1)});  /* x^3 + x/5 */
    CHECK(escape_radius_exponent(f1, 5) == Rat(1, 2));
    CHECK(escape_radius_exponent(f1, 3) == Rat(0));

    RatPoly f2(std::vector<Rat>{Rat(5), Rat(0), Rat(1)});             /* x^2 + 5 */
    CHECK(escape_radius_exponent(f2, 5) == Rat(0));

    RatPoly f3(std::vector<Rat>{Rat(1, 4), Rat(0), Rat(1)});          /* x^2 + 1/4 */
    CHECK(escape_radius_exponent(f3, 2) == Rat(1));

    /* non-monic: |2|^{-1/(d-1)} contributes at p = 2 */
    RatPoly f4(std::vector<Rat>{Rat(0), Rat(0), Rat(2)});             /* 2 x^2 */
    CHECK(escape_radius_exponent(f4, 2) == Rat(1));
    CHECK(escape_radius(f3, Place::prime(2)) == doctest::Approx(2.0));
}

TEST_CASE("archimedean escape radius") {
    RatPoly f(std::vector<Rat>{Rat(-2), Rat(0), Rat(1)});             /* x^2 - 2 */
    CHECK(escape_radius_arch(f) == doctest::Approx(std::sqrt(2.0)));
    std::vector<cplx> fc = {{-2.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    CHECK(escape_radius_arch(fc) == doctest::Approx(std::sqrt(2.0)));
    RatPoly g(std::vector<Rat>{Rat(0), Rat(0), Rat(4)});              /* 4 x^2 */
    CHECK(escape_radius_arch(g) == doctest::Approx(0.25));
}

TEST_CASE("good places, integral classical family") {
    ParamFamily F = parse_family("x^2+l");
    GoodPlacesResult r = good_places(F, parse_lampoly("l"));
    CHECK(r.rest_certified_good);
    CHECK(r.flagged().empty());
}

TEST_CASE("good places, flagged denominators and leads") {
    ParamFamily F = parse_family("x^2+l");
    GoodPlacesResult r = good_places(F, parse_lampoly("3/2*l^2"));
    std::vector<long> fl = r.flagged();
    CHECK(std::find(fl.begin(), fl.end(), 2L) != fl.end());
    CHECK(std::find(fl.begin(), fl.end(), 3L) != fl.end());
    CHECK(r.rest_certified_good);

    ParamFamily F2 = parse_family("x^2 + (1/5)*l");
    std::vector<long> fl2 = good_places(F2, parse_lampoly("l")).flagged();
    REQUIRE(fl2.size() == 1);
    CHECK(fl2[0] == 5);
}

TEST_CASE("prime factorization") {
    CHECK(prime_factors(Int(360)) == std::vector<long>{2, 3, 5});
    CHECK(prime_factors(Int(1)).empty());
    CHECK(prime_factors(Int(-7)) == std::vector<long>{7});
    CHECK(prime_factors(Int(16) * 7919) == std::vector<long>{2, 7919});
    /* large prime cofactor passes through the primality test */
    CHECK(prime_factors(Int("2305843009213693951")) ==
          std::vector<long>{2305843009213693951L});
}
