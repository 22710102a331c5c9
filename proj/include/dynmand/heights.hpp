#pragma once

/*
 * Local and global canonical heights of a point under one polynomial.
 *
 * Archimedean side: hhat(x) = lim log^+|f^n(x)| / d^n, computed by escape
 * iteration with an explicit geometric tail bound, or certified zero when
 * the orbit provably cycles. Outcomes that the iteration cap cannot decide
 * are returned with the inconclusive flag set, never as a silent zero.
 *
 * Nonarchimedean side: exact. Values are rational multiples of log p.
 */

#include "dynmand/places.hpp"
#include "dynmand/poly.hpp"
#include "dynmand/rational.hpp"

#include <vector>

namespace dynmand {

struct GreenValue {
    double value = 0.0;
    double error_bound = 0.0;
    long iterations_used = 0;
    bool escaped = false;
    bool inconclusive = false;
};

struct ArchOptions {
    double tol = 1e-9;
    long iter_cap = 10000;
    /* error_bound multiplier reported on inconclusive results */
    double inconclusive_slack = 10.0;
};

/*
 * f is the coefficient vector of a degree >= 2 polynomial, ascending powers.
 * Escape threshold B = max(1, 4 sum_{i<d}|a_i/a_d|, (4/|a_d|)^{1/(d-1)},
 * 2 r_arch). Once |z_N| > B the estimate is
 *     (log|z_N| + log|a_d|/(d-1)) / d^N
 * with tail error at most (2S/|z_N|) / (d^N (d-1)), S = sum_{i<d}|a_i/a_d|;
 * iteration continues until that bound falls under tol.
 */
GreenValue local_height_arch(const std::vector<cplx>& f, cplx x, const ArchOptions& opt = {});

/*
 * Exact local height at a finite place.
 *
 * Escape: if |f^n(x)|_v > r_v the closed form gives
 *     hhat_v(x) = (log|f^n(x)|_v + log|a_d|_v/(d-1)) / d^n,
 * an exact rational multiple of log p.
 *
 * Boundedness certificates, strongest first:
 *   InvariantBall  the orbit reached a certified forward-invariant ball, so
 *                  the height is 0 exactly. Two balls are checked: the escape
 *                  ball B(0, r_v) when r_v is attained by the
 *                  |a_d|^{-1/(d-1)} term, and the largest B(0, p^s) with
 *                  v(a_1) >= 0 and -v(a_0) <= s <= min_{i>=2} v(a_i)/(i-1),
 *                  which the ultrametric inequality keeps invariant.
 *   StateRepeat    the truncated p-adic state (valuation, unit digits mod
 *                  p^K) of the orbit repeats; for rational data with
 *                  controlled denominators the state space is finite, which
 *                  forces termination.
 */
enum class NonarchCertificate { Escape, InvariantBall, StateRepeat };

struct NonarchHeight {
    long p = 0;
    /* hhat_v(x) = coeff_log_p * log p, exact */
    Rat coeff_log_p;
    bool bounded = false;
    long steps = 0;
    NonarchCertificate certificate = NonarchCertificate::Escape;

    double value() const { return to_double(coeff_log_p) * std::log((double)p); }
};

struct NonarchOptions {
    long state_cap = 50000;     /* orbit states examined before giving up */
    long start_digits = 64;     /* initial p-adic working precision       */
};

NonarchHeight local_height_nonarch(const RatPoly& f, const Rat& x, long p,
                                   const NonarchOptions& opt = {});

/*
 * Global height of rational x under the fiber f_lambda: the exact sum of the
 * finitely many nonzero finite-place heights plus the archimedean one. Only
 * primes dividing a denominator of x or of a fiber coefficient can
 * contribute (the fiber is monic, so integral data stays integral).
 */
struct GlobalHeight {
    double value = 0.0;
    double error_bound = 0.0;
    bool inconclusive = false;
    GreenValue arch;
    std::vector<std::pair<long, Rat>> finite; /* (p, coefficient of log p) */
};

GlobalHeight global_height(const ParamFamily& F, const Rat& lambda, const Rat& x,
                           const ArchOptions& opt = {});

/* hhat(f(x)) versus d * hhat(x), two independent runs */
struct FunctionalEqReport {
    GreenValue h_fx;
    GreenValue h_x;
    double lhs = 0.0;       /* hhat(f(x))        */
    double rhs = 0.0;       /* d * hhat(x)       */
    double combined_bound = 0.0;
    bool pass = false;
};

FunctionalEqReport check_functional_equation(const std::vector<cplx>& f, cplx x,
                                             const ArchOptions& opt = {});

} // namespace dynmand
