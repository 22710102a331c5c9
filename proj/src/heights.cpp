#include "dynmand/heights.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace dynmand {

namespace {

cplx horner(const std::vector<cplx>& f, cplx z) {
    cplx acc = f.back();
    for (size_t i = f.size() - 1; i-- > 0;) acc = acc * z + f[i];
    return acc;
}

} // namespace

GreenValue local_height_arch(const std::vector<cplx>& f, cplx x, const ArchOptions& opt) {
    const int d = static_cast<int>(f.size()) - 1;
    if (d < 2 || std::abs(f.back()) == 0.0)
        throw DynError(DynError::Kind::Hypothesis,
                       "local_height_arch: degree must be >= 2 with nonzero leading coefficient");
    const double ad = std::abs(f.back());
    double S = 0.0;
    for (int i = 0; i < d; ++i) S += std::abs(f[static_cast<size_t>(i)]) / ad;
    /* above B the modulus at least doubles each step and log|1 + lower/top|
     * is bounded by 2S/|z|, which makes the tail sum geometric */
    const double B = std::max(std::max(1.0, 4.0 * S),
                              std::max(std::pow(4.0 / ad, 1.0 / (d - 1)),
                                       2.0 * escape_radius_arch(f)));
    const double lead_term = std::log(ad) / (d - 1);

    GreenValue g;
    cplx z = x;
    long n = 0;

    if (!(std::abs(z) > B)) {
        /* Brent cycle detection: compare against a checkpoint refreshed at
         * power-of-two indices */
        cplx cp = z;
        long power = 1, lam = 1;
        bool cycled = false;
        while (n < opt.iter_cap) {
            z = horner(f, z);
            ++n;
            double az = std::abs(z);
            if (!std::isfinite(az) || az > B) break;
            if (std::abs(z - cp) <= 1e-12 * std::max(1.0, std::abs(cp))) {
                cycled = true;
                break;
            }
            if (lam == power) {
                cp = z;
                power <<= 1;
                lam = 0;
            }
            ++lam;
        }
        if (cycled) {
            g.value = 0.0;
            g.error_bound = opt.tol;
            g.iterations_used = n;
            return g;
        }
        if (!(std::abs(z) > B)) {
            g.value = 0.0;
            g.error_bound = opt.tol * opt.inconclusive_slack;
            g.iterations_used = n;
            g.inconclusive = true;
            return g;
        }
    }

    for (;;) {
        double az = std::min(std::abs(z), 1e300);
        double dn = std::pow(static_cast<double>(d), static_cast<double>(n));
        double est = (std::log(az) + lead_term) / dn;
        double tail = (2.0 * S / az) / (dn * (d - 1));
        if (tail <= 0.5 * opt.tol || az >= 1e140 || n >= opt.iter_cap + 64) {
            g.value = est;
            g.error_bound = tail + 1e-13;
            g.iterations_used = n;
            g.escaped = true;
            return g;
        }
        z = horner(f, z);
        ++n;
        if (!std::isfinite(std::abs(z))) {
            g.value = est;
            g.error_bound = tail + 1e-13;
            g.iterations_used = n - 1;
            g.escaped = true;
            return g;
        }
    }
}

/* ------------------------------------------------------------------ */
/* nonarchimedean                                                      */
/* ------------------------------------------------------------------ */

namespace {

Int pow_int_l(long b, long e) {
    Int r = 1, base = b;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

/* inverse of a modulo m for gcd(a, m) = 1 */
Int mod_inverse(Int a, const Int& m) {
    Int r0 = m, r1 = a % m;
    if (r1 < 0) r1 += m;
    Int s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    s0 %= m;
    if (s0 < 0) s0 += m;
    return s0;
}

/* value = p^val * (unit + O(p^digits)), unit a p-adic unit; zero is exact */
struct Padic {
    bool zero = true;
    long val = 0;
    Int unit = 0;
    long digits = 0;
};

struct PrecisionLoss {};

constexpr long kMinDigits = 32;   /* restart below this working precision */

/* Unit digits kept in the repeat state. Enough digits to make spurious
 * collisions unlikely, few enough that structured orbits (where the unit
 * walk mixes poorly) still revisit a state within a few hundred steps at
 * precision the digit-doubling ladder can reach. p^k >= 2^12, k >= 3. */
long state_digits(long p) {
    long k = 1;
    Int pk = p;
    while (pk < 4096) {
        pk *= p;
        ++k;
    }
    return std::max(k, 3L);
}

struct PadicEngine {
    long p;

    Int pk(long e) const { return pow_int_l(p, e); }

    Padic embed(const Rat& x, long K) const {
        Padic r;
        if (x == 0) return r;
        r.zero = false;
        Int num = rat_num(x), den = rat_den(x);
        long vn = valuation_int(num, p);
        long vd = valuation_int(den, p);
        r.val = vn - vd;
        if (vn > 0) num /= pow_int_l(p, vn);
        if (vd > 0) den /= pow_int_l(p, vd);
        Int m = pk(K);
        Int u = num % m;
        if (u < 0) u += m;
        r.unit = (u * mod_inverse(den % m, m)) % m;
        r.digits = K;
        return r;
    }

    Padic mul(const Padic& a, const Padic& b) const {
        if (a.zero || b.zero) return {};
        Padic r;
        r.zero = false;
        r.val = a.val + b.val;
        r.digits = std::min(a.digits, b.digits);
        r.unit = (a.unit * b.unit) % pk(r.digits);
        return r;
    }

    Padic add(const Padic& a, const Padic& b) const {
        if (a.zero) return b;
        if (b.zero) return a;
        const Padic& lo = (a.val <= b.val) ? a : b;
        const Padic& hi = (a.val <= b.val) ? b : a;
        long delta = hi.val - lo.val;
        if (delta > 0) {
            Padic r;
            r.zero = false;
            r.val = lo.val;
            r.digits = std::min(lo.digits, delta + hi.digits);
            Int m = pk(r.digits);
            r.unit = (lo.unit + (pk(delta) % m) * hi.unit) % m;
            return r;
        }
        long D = std::min(a.digits, b.digits);
        Int m = pk(D);
        Int s = (a.unit + b.unit) % m;
        /* a full cancellation cannot be told apart from an exact zero at
         * this precision */
        if (s == 0) throw PrecisionLoss{};
        long t = 0;
        while (s % p == 0) {
            s /= p;
            ++t;
        }
        Padic r;
        r.zero = false;
        r.val = a.val + t;
        r.digits = D - t;
        if (r.digits < kMinDigits) throw PrecisionLoss{};
        r.unit = s;
        return r;
    }
};

using StateKey = std::pair<long, Int>;
constexpr long kZeroVal = std::numeric_limits<long>::min();

StateKey state_of(const PadicEngine& E, const Padic& z) {
    if (z.zero) return {kZeroVal, Int(0)};
    return {z.val, z.unit % E.pk(state_digits(E.p))};
}

StateKey state_of_rat(long p, const Rat& z) {
    if (z == 0) return {kZeroVal, Int(0)};
    PadicEngine E{p};
    Padic e = E.embed(z, state_digits(p));
    return {e.val, e.unit};
}

long rat_bits(const Rat& q) {
    Int n = rat_num(q);
    if (n < 0) n = -n;
    long bn = (n == 0) ? 0 : static_cast<long>(boost::multiprecision::msb(n));
    long bd = static_cast<long>(boost::multiprecision::msb(rat_den(q)));
    return bn + bd;
}

} // namespace

NonarchHeight local_height_nonarch(const RatPoly& f, const Rat& x, long p,
                                   const NonarchOptions& opt) {
    Place::prime(p); /* validates primality */
    const int d = f.degree();
    if (d < 2 || f.lead() == 0)
        throw DynError(DynError::Kind::Hypothesis,
                       "local_height_nonarch: degree must be >= 2");
    const long vad = valuation(f.lead(), p).v;
    const Rat rho = escape_radius_exponent(f, p);
    const Rat lead_share = Rat(vad) / Rat(d - 1);
    /* when rho is attained by the |a_d|^{-1/(d-1)} term the closed ball of
     * radius r_v is forward invariant */
    const bool ball_invariant = (rho == lead_share);

    /* largest forward-invariant ball B(0, p^s): v(a_i) + i(-s) >= -s for
     * every term forces v(a_1) >= 0 and -v(a_0) <= s <= min_{i>=2} v(a_i)/(i-1) */
    bool has_inv_ball = false;
    Rat s_star;
    {
        Valuation v1 = valuation(f.coeff(1), p);
        if (v1.is_infinite || v1.v >= 0) {
            bool hi_set = false;
            Rat hi;
            for (int i = 2; i <= d; ++i) {
                Valuation vi = valuation(f.coeff(i), p);
                if (vi.is_infinite) continue;
                Rat cand = Rat(vi.v) / Rat(i - 1);
                if (!hi_set || cand < hi) {
                    hi = cand;
                    hi_set = true;
                }
            }
            Valuation v0 = valuation(f.coeff(0), p);
            if (hi_set && (v0.is_infinite || Rat(-v0.v) <= hi)) {
                has_inv_ball = true;
                s_star = hi;
            }
        }
    }
    auto in_invariant_ball = [&](bool z_is_zero, long vz) {
        if (!has_inv_ball) return false;
        if (z_is_zero) return true;
        return Rat(vz) >= -s_star;
    };

    NonarchHeight out;
    out.p = p;

    auto escape = [&](long val_z, long n) {
        out.coeff_log_p = (Rat(-val_z) - lead_share) / Rat(pow_int_l(d, n));
        out.bounded = false;
        out.steps = n;
        out.certificate = NonarchCertificate::Escape;
    };
    auto bounded = [&](long n, NonarchCertificate cert) {
        out.coeff_log_p = 0;
        out.bounded = true;
        out.steps = n;
        out.certificate = cert;
    };

    /* exact rational phase, until numerators grow past the bit budget */
    const long bit_budget = 1L << 16;
    std::set<StateKey> seen;
    Rat z = x;
    long n = 0;
    for (;;) {
        Valuation vz = valuation(z, p);
        if (!vz.is_infinite && Rat(-vz.v) > rho) {
            escape(vz.v, n);
            return out;
        }
        if (ball_invariant || in_invariant_ball(vz.is_infinite, vz.v)) {
            bounded(n, NonarchCertificate::InvariantBall);
            return out;
        }
        if (rat_bits(z) > bit_budget) break;
        if (!seen.insert(state_of_rat(p, z)).second) {
            bounded(n, NonarchCertificate::StateRepeat);
            return out;
        }
        if (n >= opt.state_cap)
            throw DynError(DynError::Kind::Cap,
                           "local_height_nonarch: orbit state cap exceeded");
        z = f.eval<Rat>(z);
        ++n;
    }

    /* truncated phase from the last exact checkpoint; a precision loss
     * restarts the replay with twice the digits */
    const Rat checkpoint = z;
    const long checkpoint_n = n;
    long K = std::max(opt.start_digits, 2 * kMinDigits);
    for (;;) {
        if (K > (1L << 15))
            throw DynError(DynError::Kind::Cap,
                           "local_height_nonarch: p-adic precision exhausted");
        try {
            PadicEngine E{p};
            std::vector<Padic> cf(static_cast<size_t>(d) + 1);
            for (int i = 0; i <= d; ++i) cf[static_cast<size_t>(i)] = E.embed(f.coeff(i), K);
            Padic zz = E.embed(checkpoint, K);
            long nn = checkpoint_n;
            std::set<StateKey> states = seen;
            for (;;) {
                if (!zz.zero && Rat(-zz.val) > rho) {
                    escape(zz.val, nn);
                    return out;
                }
                if (in_invariant_ball(zz.zero, zz.zero ? 0 : zz.val)) {
                    bounded(nn, NonarchCertificate::InvariantBall);
                    return out;
                }
                if (!states.insert(state_of(E, zz)).second) {
                    bounded(nn, NonarchCertificate::StateRepeat);
                    return out;
                }
                if (nn >= opt.state_cap)
                    throw DynError(DynError::Kind::Cap,
                                   "local_height_nonarch: orbit state cap exceeded");
                Padic acc = cf[static_cast<size_t>(d)];
                for (int i = d - 1; i >= 0; --i)
                    acc = E.add(E.mul(acc, zz), cf[static_cast<size_t>(i)]);
                zz = acc;
                ++nn;
            }
        } catch (const PrecisionLoss&) {
            K *= 2;
        }
    }
}

/* ------------------------------------------------------------------ */
/* global                                                              */
/* ------------------------------------------------------------------ */

GlobalHeight global_height(const ParamFamily& F, const Rat& lambda, const Rat& x,
                           const ArchOptions& opt) {
    RatPoly f = F.fiber(lambda);

    /* the fiber is monic, so only primes dividing a denominator of x or of
     * a coefficient can carry a nonzero local term */
    std::set<long> cands;
    for (long q : prime_factors(rat_den(x))) cands.insert(q);
    for (int i = 0; i <= f.degree(); ++i)
        for (long q : prime_factors(rat_den(f.coeff(i)))) cands.insert(q);

    std::vector<double> cd = f.coeffs_double();
    std::vector<cplx> cc(cd.size());
    for (size_t i = 0; i < cd.size(); ++i) cc[i] = cd[i];

    GlobalHeight G;
    G.arch = local_height_arch(cc, cplx(to_double_safe(x), 0.0), opt);
    G.inconclusive = G.arch.inconclusive;
    double finite_sum = 0.0;
    for (long q : cands) {
        NonarchHeight h = local_height_nonarch(f, x, q);
        if (h.coeff_log_p != 0) {
            G.finite.emplace_back(q, h.coeff_log_p);
            finite_sum += h.value();
        }
    }
    G.value = G.arch.value + finite_sum;
    G.error_bound = G.arch.error_bound + (G.finite.empty() ? 0.0 : 1e-13);
    return G;
}

FunctionalEqReport check_functional_equation(const std::vector<cplx>& f, cplx x,
                                             const ArchOptions& opt) {
    const int d = static_cast<int>(f.size()) - 1;
    FunctionalEqReport r;
    r.h_x = local_height_arch(f, x, opt);
    r.h_fx = local_height_arch(f, horner(f, x), opt);
    r.lhs = r.h_fx.value;
    r.rhs = d * r.h_x.value;
    r.combined_bound = r.h_fx.error_bound + d * r.h_x.error_bound + 1e-12;
    r.pass = std::fabs(r.lhs - r.rhs) <= r.combined_bound;
    return r;
}

} // namespace dynmand
