#include "dynmand/poly.hpp"

#include <algorithm>
#include <sstream>

namespace dynmand {

/* ------------------------------------------------------------------ */
/* RatPoly                                                             */
/* ------------------------------------------------------------------ */

RatPoly RatPoly::monomial(int k, Rat coeff) {
    if (k < 0) throw std::invalid_argument("monomial: negative exponent");
    if (coeff == 0) return RatPoly();
    std::vector<Rat> c(static_cast<size_t>(k) + 1, Rat(0));
    c.back() = std::move(coeff);
    return RatPoly(std::move(c));
}

const Rat& RatPoly::coeff(int i) const {
    static const Rat zero(0);
    if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
    return c_[static_cast<size_t>(i)];
}

const Rat& RatPoly::lead() const {
    if (c_.empty()) throw std::invalid_argument("lead: zero polynomial");
    return c_.back();
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
    std::vector<Rat> out(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
    return RatPoly(std::move(out));
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
    std::vector<Rat> out(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] -= o.c_[i];
    return RatPoly(std::move(out));
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
    if (c_.empty() || o.c_.empty()) return RatPoly();
    std::vector<Rat> out(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j] == 0) continue;
            out[i + j] += c_[i] * o.c_[j];
        }
    }
    return RatPoly(std::move(out));
}

RatPoly RatPoly::scaled(const Rat& s) const {
    if (s == 0) return RatPoly();
    std::vector<Rat> out(c_);
    for (auto& v : out) v *= s;
    return RatPoly(std::move(out));
}

RatPoly RatPoly::derivative() const {
    if (c_.size() <= 1) return RatPoly();
    std::vector<Rat> out(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * Rat(static_cast<long>(i));
    return RatPoly(std::move(out));
}

RatPoly RatPoly::compose(const RatPoly& inner) const {
    /* Horner in the inner polynomial */
    RatPoly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * inner + RatPoly::constant(*it);
    }
    return acc;
}

std::pair<RatPoly, bool> RatPoly::divide_exact(const RatPoly& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("divide_exact: zero divisor");
    if (is_zero()) return {RatPoly(), true};
    if (degree() < divisor.degree()) return {RatPoly(), false};
    std::vector<Rat> rem = c_;
    const int dd = divisor.degree();
    const Rat& dl = divisor.lead();
    std::vector<Rat> quot(c_.size() - static_cast<size_t>(dd), Rat(0));
    for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
        Rat q = rem[static_cast<size_t>(i)] / dl;
        if (q == 0) continue;
        quot[static_cast<size_t>(i - dd)] = q;
        for (int j = 0; j <= dd; ++j)
            rem[static_cast<size_t>(i - dd + j)] -= q * divisor.coeff(j);
    }
    for (const auto& v : rem)
        if (v != 0) return {RatPoly(), false};
    return {RatPoly(std::move(quot)), true};
}

std::vector<double> RatPoly::coeffs_double() const {
    std::vector<double> out(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) out[i] = to_double_safe(c_[i]);
    return out;
}

std::string RatPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rat& a = coeff(i);
        if (a == 0) continue;
        Rat mag = a < 0 ? Rat(-a) : a;
        if (first) {
            if (a < 0) os << "-";
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        bool unit = (mag == 1 && i > 0);
        if (!unit) os << rat_str(mag);
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

/* ------------------------------------------------------------------ */
/* normalization                                                       */
/* ------------------------------------------------------------------ */

namespace {

/* exact integer k-th root when it exists */
bool int_kth_root(const Int& n, unsigned k, Int& root) {
    if (n < 0) return false;
    if (n == 0 || n == 1 || k == 1) {
        root = n;
        return true;
    }
    Int lo = 1, hi = 1;
    while (boost::multiprecision::pow(hi, k) < n) hi <<= 1;
    while (lo < hi) {
        Int mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, k) < n)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (boost::multiprecision::pow(lo, k) == n) {
        root = lo;
        return true;
    }
    return false;
}

/* rational k-th root of q when it exists; sign-aware for odd k */
bool rat_kth_root(const Rat& q, unsigned k, Rat& root) {
    if (q == 0) {
        root = 0;
        return true;
    }
    bool neg = q < 0;
    if (neg && k % 2 == 0) return false;
    Rat mag = neg ? Rat(-q) : q;
    Int rn, rd;
    if (!int_kth_root(rat_num(mag), k, rn)) return false;
    if (!int_kth_root(rat_den(mag), k, rd)) return false;
    root = Rat(rn) / Rat(rd);
    if (neg) root = -root;
    return true;
}

} // namespace

Normalization normalize_polynomial(const RatPoly& f) {
    const int d = f.degree();
    if (d < 2)
        throw DynError(DynError::Kind::Hypothesis, "normalize_polynomial: degree must be >= 2");
    const Rat& cd = f.lead();
    const Rat b = -f.coeff(d - 1) / (Rat(d) * cd);

    Normalization out;
    out.b = b;

    /* a^(d-1) = 1/c_d */
    Rat target = Rat(1) / cd;
    Rat a_exact;
    if (rat_kth_root(target, static_cast<unsigned>(d - 1), a_exact)) {
        out.exact = true;
        out.a_rat = a_exact;
        out.a = Real50(a_exact);
        RatPoly delta(std::vector<Rat>{b, a_exact});
        RatPoly g = f.compose(delta);
        g = (g + RatPoly::constant(-b)).scaled(Rat(1) / a_exact);
        out.g = std::move(g);
        return out;
    }

    if (target < 0 && (d - 1) % 2 == 0)
        throw DynError(DynError::Kind::Domain,
                       "normalize_polynomial: no real conjugation, leading coefficient "
                       "negative with even root index");

    out.exact = false;
    bool neg = target < 0;
    Real50 mag = Real50(neg ? Rat(-target) : target);
    Real50 a = boost::multiprecision::pow(mag, Real50(1) / (d - 1));
    if (neg) a = -a;
    out.a = a;

    /* conjugate in Real50: g(x) = (f(a x + b) - b) / a */
    std::vector<Real50> g(static_cast<size_t>(d) + 1, Real50(0));
    /* Horner with polynomial coefficients over x */
    std::vector<Real50> acc{Real50(0)};
    Real50 ar = a;
    Real50 br(b);
    for (int i = d; i >= 0; --i) {
        /* acc = acc * (a x + b) + f_i */
        std::vector<Real50> next(acc.size() + 1, Real50(0));
        for (size_t j = 0; j < acc.size(); ++j) {
            next[j + 1] += acc[j] * ar;
            next[j] += acc[j] * br;
        }
        if (next.size() > static_cast<size_t>(d) + 1) next.resize(static_cast<size_t>(d) + 1);
        next[0] += Real50(f.coeff(i));
        acc = std::move(next);
    }
    acc.resize(static_cast<size_t>(d) + 1, Real50(0));
    acc[0] -= br;
    for (auto& v : acc) v /= ar;
    out.g_real = std::move(acc);
    return out;
}

/* ------------------------------------------------------------------ */
/* ParamFamily                                                         */
/* ------------------------------------------------------------------ */

ParamFamily ParamFamily::decompose(std::vector<LamPoly> c, int d) {
    if (d < 2) throw DynError(DynError::Kind::Hypothesis, "decompose: degree must be >= 2");
    if (static_cast<int>(c.size()) != d - 1)
        throw DynError(DynError::Kind::Hypothesis,
                       "decompose: expected d-1 coefficient polynomials");

    ParamFamily F;
    F.d_ = d;
    F.c_ = std::move(c);

    /* P collects the lambda^0 parts plus x^d */
    std::vector<Rat> p_coeffs(static_cast<size_t>(d) + 1, Rat(0));
    p_coeffs[static_cast<size_t>(d)] = 1;
    int max_m = 0;
    for (int i = 0; i <= d - 2; ++i) {
        const LamPoly& ci = F.c_[static_cast<size_t>(i)];
        p_coeffs[static_cast<size_t>(i)] = ci.coeff(0);
        max_m = std::max(max_m, std::max(0, ci.degree()));
    }
    F.P_ = RatPoly(std::move(p_coeffs));

    for (int m = 1; m <= max_m; ++m) {
        std::vector<Rat> q(static_cast<size_t>(d - 1), Rat(0));
        bool nonzero = false;
        for (int i = 0; i <= d - 2; ++i) {
            q[static_cast<size_t>(i)] = F.c_[static_cast<size_t>(i)].coeff(m);
            if (q[static_cast<size_t>(i)] != 0) nonzero = true;
        }
        if (!nonzero) continue;
        FamilyTerm t;
        t.m = m;
        t.Q = RatPoly(std::move(q));
        t.e = t.Q.degree();
        F.terms_.push_back(std::move(t));
    }
    return F;
}

std::vector<LamPoly> ParamFamily::reassemble() const {
    std::vector<LamPoly> out(static_cast<size_t>(d_ - 1));
    for (int i = 0; i <= d_ - 2; ++i)
        out[static_cast<size_t>(i)] = LamPoly::constant(P_.coeff(i));
    for (const auto& t : terms_) {
        for (int i = 0; i <= d_ - 2; ++i) {
            Rat q = t.Q.coeff(i);
            if (q == 0) continue;
            out[static_cast<size_t>(i)] =
                out[static_cast<size_t>(i)] + LamPoly::monomial(t.m, q);
        }
    }
    return out;
}

RatPoly ParamFamily::fiber(const Rat& lambda) const {
    std::vector<Rat> coeffs(static_cast<size_t>(d_) + 1, Rat(0));
    coeffs[static_cast<size_t>(d_)] = 1;
    for (int i = 0; i <= d_ - 2; ++i)
        coeffs[static_cast<size_t>(i)] = c_[static_cast<size_t>(i)].eval<Rat>(lambda);
    return RatPoly(std::move(coeffs));
}

std::vector<cplx> ParamFamily::fiber(cplx lambda) const {
    std::vector<cplx> coeffs(static_cast<size_t>(d_) + 1, cplx(0, 0));
    coeffs[static_cast<size_t>(d_)] = 1.0;
    for (int i = 0; i <= d_ - 2; ++i)
        coeffs[static_cast<size_t>(i)] = c_[static_cast<size_t>(i)].eval<cplx>(lambda);
    return coeffs;
}

/* ------------------------------------------------------------------ */
/* iterates and the degree law                                         */
/* ------------------------------------------------------------------ */

LamPoly iterate_param(const ParamFamily& F, const LamPoly& c, int n, long degree_cap) {
    if (n < 0) throw DynError(DynError::Kind::Hypothesis, "iterate_param: negative n");
    const int d = F.degree();
    const long base = std::max<long>(std::max(c.degree() < 0 ? 0 : c.degree(), F.m_r()), 1);
    double predicted = static_cast<double>(base) * std::pow(static_cast<double>(d), n);
    if (predicted > static_cast<double>(degree_cap))
        throw DynError(DynError::Kind::Cap,
                       "iterate_param: predicted degree " + std::to_string((long)predicted) +
                           " exceeds cap " + std::to_string(degree_cap));

    LamPoly g = c;
    for (int step = 0; step < n; ++step) {
        /* f_lambda(g) = g^d + sum_i c_i(lambda) g^i, assembled from powers */
        std::vector<LamPoly> pow(static_cast<size_t>(d) + 1);
        pow[0] = LamPoly::constant(Rat(1));
        for (int i = 1; i <= d; ++i) pow[static_cast<size_t>(i)] = pow[static_cast<size_t>(i - 1)] * g;
        LamPoly next = pow[static_cast<size_t>(d)];
        for (int i = 0; i <= d - 2; ++i) {
            const LamPoly& ci = F.coeff_polys()[static_cast<size_t>(i)];
            if (ci.is_zero()) continue;
            next = next + ci * pow[static_cast<size_t>(i)];
        }
        g = std::move(next);
    }
    return g;
}

DegreeLawReport check_degree_law(const ParamFamily& F, const LamPoly& c, int n,
                                 long degree_cap) {
    DegreeLawReport rep;
    const int m = c.degree();
    const int mr = F.m_r();
    if (c.is_zero() || m < mr || (F.r() == 0 && m < 1)) {
        rep.hypothesis_ok = false;
        rep.hypothesis_note = "hypothesis (ii) fails: deg(c) = " +
                              (c.is_zero() ? std::string("-inf") : std::to_string(m)) +
                              " must be >= " + std::to_string(std::max(mr, F.r() == 0 ? 1 : 0));
        return rep;
    }
    rep.hypothesis_ok = true;

    LamPoly g = iterate_param(F, c, n, degree_cap);
    Int dn = boost::multiprecision::pow(Int(F.degree()), static_cast<unsigned>(n));
    rep.expected_deg = static_cast<long>(m) * dn.convert_to<long>();
    rep.actual_deg = g.degree();
    Rat qm = c.lead();
    /* q_m^(d^n) */
    Rat lead(1);
    {
        Rat b = qm;
        Int e = dn;
        while (e > 0) {
            if ((e & 1) != 0) lead *= b;
            b *= b;
            e >>= 1;
        }
    }
    rep.expected_lead = lead;
    rep.actual_lead = g.lead();
    rep.pass = (rep.expected_deg == rep.actual_deg) && (rep.expected_lead == rep.actual_lead);
    return rep;
}

} // namespace dynmand
