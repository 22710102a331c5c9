#pragma once

/*
 * Places of Q and per-place primitives.
 *
 * A place is the archimedean absolute value or a p-adic one, normalized so
 * that the product formula sum_v N_v log|a|_v = 0 holds; over Q every
 * multiplicity N_v is 1 (the field is kept in the model regardless).
 *
 * Finite-place arithmetic is carried on exact integer valuations. Floats
 * appear only on the archimedean side. |0|_v at a finite place is reported
 * through a distinguished infinite-valuation marker, never as a number.
 */

#include "dynmand/error.hpp"
#include "dynmand/poly.hpp"
#include "dynmand/rational.hpp"

#include <string>
#include <vector>

namespace dynmand {

struct Place {
    enum class Kind { Arch, Prime };

    Kind kind = Kind::Arch;
    long p = 0;  /* valid when kind == Prime */
    int N_v = 1;

    static Place arch() { return Place{}; }
    /* validates primality */
    static Place prime(long p);

    bool is_arch() const { return kind == Kind::Arch; }
    bool operator==(const Place& o) const { return kind == o.kind && (is_arch() || p == o.p); }
};

/* v_p(x) for x != 0; is_infinite marks v_p(0). */
struct Valuation {
    bool is_infinite = false;
    long v = 0;
};

long valuation_int(Int n, long p); /* n != 0 */
Valuation valuation(const Rat& x, long p);

/* |x|_v as a float. Arch: usual absolute value. Prime: p^{-v_p(x)}, 0 for
 * x = 0. Exact statements should use valuation() instead. */
double abs_value(const Place& v, const Rat& x);

/* log|x|_v; x must be nonzero */
double log_abs(const Place& v, const Rat& x);

/*
 * Escape radius r_v = max(|a_d|^{-1/(d-1)}, max_{i<d} |a_i/a_d|^{1/(d-i)}).
 * Beyond it |f(x)|_v = |a_d x^d|_v > |x|_v at finite places and the local
 * height has a closed form.
 *
 * At a finite place the radius is an exact power p^rho; the exponent rho is
 * returned as a rational so comparisons against |x|_v = p^{-v(x)} stay exact.
 */
double escape_radius_arch(const std::vector<cplx>& f);
double escape_radius_arch(const RatPoly& f);
Rat escape_radius_exponent(const RatPoly& f, long p);

/* r_v for any place as a float (convenience; exact callers use the
 * exponent form) */
double escape_radius(const RatPoly& f, const Place& v);

/*
 * Good places for a family and marked point: all coefficients of every
 * c_i and of c are v-integral and the leading coefficient q_m of c is a
 * v-unit. At a good place membership of rational lambda in the v-adic
 * parameter set reduces to |lambda|_v <= 1.
 */
struct GoodPlaceReport {
    Place place;
    bool is_good = true;
    std::vector<std::string> reasons;
};

struct GoodPlacesResult {
    std::vector<GoodPlaceReport> checked;   /* every prime that had to be inspected */
    bool rest_certified_good = false;       /* all primes outside `checked` are good */
    std::vector<long> flagged() const;      /* primes with is_good == false */
};

GoodPlacesResult good_places(const ParamFamily& F, const LamPoly& c);

/* distinct prime factors, ascending; guarded trial division plus a
 * primality test for the cofactor */
std::vector<long> prime_factors(Int n);

} // namespace dynmand
