#include "dynmand/places.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace dynmand {

namespace {

bool is_prime_long(long p) {
    if (p < 2) return false;
    for (long q : {2L, 3L, 5L, 7L, 11L, 13L}) {
        if (p == q) return true;
        if (p % q == 0) return false;
    }
    return boost::multiprecision::miller_rabin_test(Int(p), 32);
}

} // namespace

Place Place::prime(long p) {
    if (!is_prime_long(p))
        throw DynError(DynError::Kind::Hypothesis,
                       "place: " + std::to_string(p) + " is not prime");
    Place v;
    v.kind = Kind::Prime;
    v.p = p;
    return v;
}

long valuation_int(Int n, long p) {
    if (n == 0) throw std::invalid_argument("valuation_int: zero argument");
    if (n < 0) n = -n;
    long v = 0;
    Int q, r;
    for (;;) {
        boost::multiprecision::divide_qr(n, Int(p), q, r);
        if (r != 0) break;
        n = q;
        ++v;
    }
    return v;
}

Valuation valuation(const Rat& x, long p) {
    if (x == 0) return {true, 0};
    return {false, valuation_int(rat_num(x), p) - valuation_int(rat_den(x), p)};
}

double abs_value(const Place& v, const Rat& x) {
    if (v.is_arch()) {
        double d = to_double_safe(x);
        return std::fabs(d);
    }
    Valuation val = valuation(x, v.p);
    if (val.is_infinite) return 0.0;
    return std::pow(static_cast<double>(v.p), -static_cast<double>(val.v));
}

double log_abs(const Place& v, const Rat& x) {
    if (x == 0) throw std::invalid_argument("log_abs: zero argument");
    if (v.is_arch()) return log_rat(x < 0 ? Rat(-x) : x);
    Valuation val = valuation(x, v.p);
    return -static_cast<double>(val.v) * std::log(static_cast<double>(v.p));
}

/* ------------------------------------------------------------------ */
/* escape radii                                                        */
/* ------------------------------------------------------------------ */

double escape_radius_arch(const std::vector<cplx>& f) {
    const int d = static_cast<int>(f.size()) - 1;
    if (d < 2 || std::abs(f.back()) == 0.0)
        throw DynError(DynError::Kind::Hypothesis, "escape_radius: degree must be >= 2");
    double ad = std::abs(f.back());
    double r = std::pow(ad, -1.0 / (d - 1));
    for (int i = 0; i < d; ++i) {
        double ai = std::abs(f[static_cast<size_t>(i)]);
        if (ai == 0.0) continue;
        r = std::max(r, std::pow(ai / ad, 1.0 / (d - i)));
    }
    return r;
}

double escape_radius_arch(const RatPoly& f) {
    std::vector<double> cd = f.coeffs_double();
    std::vector<cplx> cc(cd.size());
    for (size_t i = 0; i < cd.size(); ++i) cc[i] = cd[i];
    return escape_radius_arch(cc);
}

Rat escape_radius_exponent(const RatPoly& f, long p) {
    const int d = f.degree();
    if (d < 2)
        throw DynError(DynError::Kind::Hypothesis, "escape_radius: degree must be >= 2");
    const long vad = valuation(f.lead(), p).v;
    /* |a_d|^{-1/(d-1)} = p^{v(a_d)/(d-1)} */
    Rat rho = Rat(vad) / Rat(d - 1);
    for (int i = 0; i < d; ++i) {
        if (f.coeff(i) == 0) continue;
        long vai = valuation(f.coeff(i), p).v;
        /* |a_i/a_d|^{1/(d-i)} = p^{(v(a_d)-v(a_i))/(d-i)} */
        rho = std::max(rho, Rat(vad - vai) / Rat(d - i));
    }
    return rho;
}

double escape_radius(const RatPoly& f, const Place& v) {
    if (v.is_arch()) return escape_radius_arch(f);
    Rat rho = escape_radius_exponent(f, v.p);
    return std::pow(static_cast<double>(v.p), to_double(rho));
}

/* ------------------------------------------------------------------ */
/* good places                                                         */
/* ------------------------------------------------------------------ */

std::vector<long> prime_factors(Int n) {
    std::vector<long> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (long q = 2; q * q <= 1000000000000L; ++q) {
        if (q > 2 && q % 2 == 0) continue;
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
        if (n == 1) return out;
        if (Int(q) * q > n) break;
    }
    if (n > 1) {
        if (!boost::multiprecision::miller_rabin_test(n, 32))
            throw DynError(DynError::Kind::Cap,
                           "prime_factors: composite cofactor beyond trial-division bound");
        if (n > Int(std::numeric_limits<long>::max()))
            throw DynError(DynError::Kind::Cap, "prime_factors: prime factor exceeds long");
        out.push_back(n.convert_to<long>());
    }
    std::sort(out.begin(), out.end());
    return out;
}

GoodPlacesResult good_places(const ParamFamily& F, const LamPoly& c) {
    if (c.is_zero())
        throw DynError(DynError::Kind::Hypothesis, "good_places: zero marked point");

    /* candidate primes: anything dividing a coefficient denominator, plus
     * everything dividing the numerator or denominator of q_m */
    std::set<long> candidates;
    auto add_factors = [&candidates](const Int& n) {
        for (long p : prime_factors(n)) candidates.insert(p);
    };
    for (const LamPoly& ci : F.coeff_polys())
        for (const Rat& a : ci.coeffs()) add_factors(rat_den(a));
    for (const Rat& a : c.coeffs()) add_factors(rat_den(a));
    add_factors(rat_num(c.lead()));
    add_factors(rat_den(c.lead()));

    GoodPlacesResult res;
    res.rest_certified_good = true;
    for (long p : candidates) {
        GoodPlaceReport rep;
        rep.place = Place::prime(p);
        for (size_t i = 0; i < F.coeff_polys().size(); ++i) {
            for (const Rat& a : F.coeff_polys()[i].coeffs()) {
                if (a != 0 && valuation(a, p).v < 0) {
                    rep.is_good = false;
                    rep.reasons.push_back("non-integral coefficient in c_" + std::to_string(i));
                    break;
                }
            }
        }
        bool c_integral = true;
        for (const Rat& a : c.coeffs()) {
            if (a != 0 && valuation(a, p).v < 0) {
                c_integral = false;
                break;
            }
        }
        if (!c_integral) {
            rep.is_good = false;
            rep.reasons.push_back("non-integral coefficient in marked point");
        }
        if (valuation(c.lead(), p).v != 0) {
            rep.is_good = false;
            rep.reasons.push_back("leading parameter coefficient not a unit");
        }
        res.checked.push_back(std::move(rep));
    }
    return res;
}

std::vector<long> GoodPlacesResult::flagged() const {
    std::vector<long> out;
    for (const auto& rep : checked)
        if (!rep.is_good) out.push_back(rep.place.p);
    return out;
}

} // namespace dynmand
