#pragma once

/*
 * Exact univariate polynomial algebra over the rationals, plus the
 * one-parameter family type f_lambda(x) = x^d + sum_{i<=d-2} c_i(lambda) x^i
 * with its decomposition P(x) + sum_j Q_j(x) lambda^{m_j}.
 *
 * RatPoly stores coefficients ascending by power and keeps the invariant
 * that the highest stored coefficient is nonzero unless the polynomial is
 * zero. The degree of the zero polynomial is the sentinel kDegNegInf, never
 * -1, so accidental arithmetic on it fails loudly.
 */

#include "dynmand/error.hpp"
#include "dynmand/rational.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dynmand {

/* ------------------------------------------------------------------ */
/* scalar conversion used by templated Horner evaluation               */
/* ------------------------------------------------------------------ */

template <class T> T scalar_cast(const Rat& q);
template <> inline Rat scalar_cast<Rat>(const Rat& q) { return q; }
template <> inline double scalar_cast<double>(const Rat& q) { return to_double(q); }
template <> inline cplx scalar_cast<cplx>(const Rat& q) { return {to_double(q), 0.0}; }
template <> inline QComplex scalar_cast<QComplex>(const Rat& q) { return QComplex(q); }
template <> inline Real50 scalar_cast<Real50>(const Rat& q) { return Real50(q); }

/* ------------------------------------------------------------------ */
/* RatPoly                                                             */
/* ------------------------------------------------------------------ */

class RatPoly {
  public:
    static constexpr int kDegNegInf = std::numeric_limits<int>::min();

    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { prune(); }

    static RatPoly constant(Rat v) { return RatPoly(std::vector<Rat>{std::move(v)}); }
    /* coeff * x^k */
    static RatPoly monomial(int k, Rat coeff = Rat(1));

    bool is_zero() const { return c_.empty(); }
    /* kDegNegInf for the zero polynomial */
    int degree() const { return c_.empty() ? kDegNegInf : static_cast<int>(c_.size()) - 1; }
    /* zero outside the stored range */
    const Rat& coeff(int i) const;
    const std::vector<Rat>& coeffs() const { return c_; }
    /* throws on the zero polynomial */
    const Rat& lead() const;
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    bool operator==(const RatPoly& o) const { return c_ == o.c_; }
    bool operator!=(const RatPoly& o) const { return c_ != o.c_; }

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator*(const RatPoly& o) const;
    RatPoly scaled(const Rat& s) const;
    RatPoly derivative() const;

    /* this(inner(x)) expanded exactly */
    RatPoly compose(const RatPoly& inner) const;

    /* Exact division; returns {quotient, true} when divisor divides this
     * with zero remainder, {_, false} otherwise. Divisor must be nonzero. */
    std::pair<RatPoly, bool> divide_exact(const RatPoly& divisor) const;

    template <class T> T eval(const T& x) const {
        T acc = scalar_cast<T>(Rat(0));
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + scalar_cast<T>(*it);
        return acc;
    }

    /* coefficient vector converted to double, ascending powers */
    std::vector<double> coeffs_double() const;

    std::string str(const std::string& var = "x") const;

  private:
    void prune() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

/* Polynomials in the parameter variable share the representation; the alias
 * marks intent at API boundaries (coefficients c_i(lambda), marked points,
 * iterates g_{c,n}). */
using LamPoly = RatPoly;

/* ------------------------------------------------------------------ */
/* affine conjugation to normal form                                   */
/* ------------------------------------------------------------------ */

/*
 * g = delta^{-1} o f o delta with delta(x) = a x + b, a = c_d^{-1/(d-1)},
 * b = -c_{d-1} / (d c_d). g is monic with zero x^{d-1} coefficient.
 *
 * When a is rational the result is exact. Otherwise `exact` is false, `a`
 * and the coefficients of g are carried at 50 significant decimal digits,
 * and callers must treat g as an approximation.
 */
struct Normalization {
    bool exact = true;
    RatPoly g;                   /* valid when exact                      */
    Rat a_rat;                   /* valid when exact                      */
    Rat b;                       /* always rational                       */
    Real50 a;                    /* always set                            */
    std::vector<Real50> g_real;  /* valid when !exact, ascending powers   */
};

Normalization normalize_polynomial(const RatPoly& f);

/* ------------------------------------------------------------------ */
/* ParamFamily                                                         */
/* ------------------------------------------------------------------ */

/* One monomial block Q(x) * lambda^m of the family decomposition. */
struct FamilyTerm {
    int m = 0;  /* exponent of lambda, positive       */
    RatPoly Q;  /* coefficient polynomial, deg <= d-2 */
    int e = 0;  /* degree of Q                        */
};

class ParamFamily {
  public:
    /* decompose_family: c holds c_0 .. c_{d-2}; exponents m_j are collected
     * across all c_i and sorted increasing. Total on valid input. */
    static ParamFamily decompose(std::vector<LamPoly> c, int d);

    int degree() const { return d_; }
    const std::vector<LamPoly>& coeff_polys() const { return c_; }
    const RatPoly& P() const { return P_; }
    const std::vector<FamilyTerm>& terms() const { return terms_; }
    int r() const { return static_cast<int>(terms_.size()); }
    /* largest lambda exponent; 0 when r == 0 */
    int m_r() const { return terms_.empty() ? 0 : terms_.back().m; }

    /* rebuilds the coefficient list from P and the terms */
    std::vector<LamPoly> reassemble() const;

    /* f_lambda(x) by Horner in x; exact for exact scalar types */
    template <class T> T eval(const T& lambda, const T& x) const {
        T acc = scalar_cast<T>(Rat(1)); /* leading coefficient of x^d */
        for (int i = d_ - 1; i >= 0; --i) {
            T ci = (i <= d_ - 2) ? c_[static_cast<size_t>(i)].eval(lambda)
                                 : scalar_cast<T>(Rat(0));
            acc = acc * x + ci;
        }
        return acc;
    }

    /* exact specialization to a rational parameter */
    RatPoly fiber(const Rat& lambda) const;
    /* floating specialization, coefficient i of the result = c_i(lambda) */
    std::vector<cplx> fiber(cplx lambda) const;

  private:
    int d_ = 0;
    std::vector<LamPoly> c_;
    RatPoly P_;
    std::vector<FamilyTerm> terms_;
};

/* ------------------------------------------------------------------ */
/* symbolic parameter iterates                                         */
/* ------------------------------------------------------------------ */

/*
 * g_{c,n}(lambda) = f_lambda^n(c(lambda)), exact. Refuses with a Cap error
 * when the predicted degree max(deg c, m_r) * d^n exceeds degree_cap.
 */
LamPoly iterate_param(const ParamFamily& F, const LamPoly& c, int n,
                      long degree_cap = 1000000);

/*
 * Degree law check: under m = deg(c) >= m_r (and m >= 1 when r = 0),
 * deg g_{c,n} = m d^n and lead g_{c,n} = q_m^{d^n} with q_m = lead(c).
 * Hypothesis failure is reported in the result, not thrown.
 */
struct DegreeLawReport {
    bool hypothesis_ok = false;
    std::string hypothesis_note;
    long expected_deg = 0;
    long actual_deg = 0;
    Rat expected_lead;
    Rat actual_lead;
    bool pass = false;
};

DegreeLawReport check_degree_law(const ParamFamily& F, const LamPoly& c, int n,
                                 long degree_cap = 1000000);

} // namespace dynmand
