#include "dynmand/parse.hpp"

#include <cctype>

namespace dynmand {

namespace {

/* token scanner over the raw text; positions are byte offsets */
struct Scanner {
    const std::string& s;
    size_t pos = 0;

    explicit Scanner(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw DynError(DynError::Kind::Parse, msg + " at offset " + std::to_string(pos), pos);
    }
    Int read_uint() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected digits");
        return Int(s.substr(start, pos - start));
    }
    int read_exponent() {
        skip_ws();
        size_t start = pos;
        Int e = read_uint();
        if (e > 512) {
            pos = start;
            fail("exponent too large");
        }
        return e.convert_to<int>();
    }
};

BivarPoly bp_zero() { return BivarPoly{}; }

BivarPoly bp_const(const Rat& q) {
    BivarPoly b;
    if (q != 0) b.by_x_power.push_back(LamPoly::constant(q));
    return b;
}

BivarPoly bp_add(const BivarPoly& a, const BivarPoly& b) {
    BivarPoly out;
    out.by_x_power.resize(std::max(a.by_x_power.size(), b.by_x_power.size()));
    for (size_t i = 0; i < out.by_x_power.size(); ++i) {
        LamPoly s;
        if (i < a.by_x_power.size()) s = s + a.by_x_power[i];
        if (i < b.by_x_power.size()) s = s + b.by_x_power[i];
        out.by_x_power[i] = std::move(s);
    }
    return out;
}

BivarPoly bp_neg(const BivarPoly& a) {
    BivarPoly out = a;
    for (auto& c : out.by_x_power) c = c.scaled(Rat(-1));
    return out;
}

BivarPoly bp_mul(const BivarPoly& a, const BivarPoly& b, Scanner& sc) {
    BivarPoly out;
    if (a.by_x_power.empty() || b.by_x_power.empty()) return out;
    size_t n = a.by_x_power.size() + b.by_x_power.size() - 1;
    if (n > 4096) sc.fail("x-degree blowup in product");
    out.by_x_power.resize(n);
    for (size_t i = 0; i < a.by_x_power.size(); ++i) {
        if (a.by_x_power[i].is_zero()) continue;
        for (size_t j = 0; j < b.by_x_power.size(); ++j) {
            if (b.by_x_power[j].is_zero()) continue;
            out.by_x_power[i + j] = out.by_x_power[i + j] + a.by_x_power[i] * b.by_x_power[j];
        }
    }
    return out;
}

BivarPoly parse_expr(Scanner& sc);

BivarPoly parse_factor(Scanner& sc) {
    sc.skip_ws();
    if (sc.pos >= sc.s.size()) sc.fail("unexpected end of input");
    char ch = sc.s[sc.pos];
    if (ch == '(') {
        ++sc.pos;
        BivarPoly inner = parse_expr(sc);
        if (!sc.accept(')')) sc.fail("expected ')'");
        return inner;
    }
    if (ch == 'l' || ch == 'x') {
        ++sc.pos;
        int e = 1;
        if (sc.accept('^')) e = sc.read_exponent();
        BivarPoly out;
        if (ch == 'l') {
            out.by_x_power.push_back(LamPoly::monomial(e));
        } else {
            out.by_x_power.assign(static_cast<size_t>(e) + 1, LamPoly());
            out.by_x_power.back() = LamPoly::constant(Rat(1));
        }
        return out;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
        Int num = sc.read_uint();
        if (sc.accept('/')) {
            size_t dpos = sc.pos;
            Int den = sc.read_uint();
            if (den == 0) {
                sc.pos = dpos;
                sc.fail("zero denominator");
            }
            return bp_const(Rat(num) / Rat(den));
        }
        return bp_const(Rat(num));
    }
    sc.fail(std::string("unexpected character '") + ch + "'");
}

bool starts_factor(Scanner& sc) {
    char c = sc.peek();
    return c == '(' || c == 'l' || c == 'x' || std::isdigit(static_cast<unsigned char>(c));
}

BivarPoly parse_term(Scanner& sc) {
    BivarPoly acc = parse_factor(sc);
    for (;;) {
        if (sc.accept('*')) {
            acc = bp_mul(acc, parse_factor(sc), sc);
        } else if (starts_factor(sc)) {
            /* juxtaposition */
            acc = bp_mul(acc, parse_factor(sc), sc);
        } else {
            break;
        }
    }
    return acc;
}

BivarPoly parse_expr(Scanner& sc) {
    BivarPoly acc = bp_zero();
    bool first = true;
    for (;;) {
        int sign = 1;
        bool saw_sign = false;
        for (;;) {
            if (sc.accept('+')) {
                saw_sign = true;
            } else if (sc.accept('-')) {
                sign = -sign;
                saw_sign = true;
            } else {
                break;
            }
        }
        if (!first && !saw_sign) break;
        BivarPoly t = parse_term(sc);
        acc = bp_add(acc, sign < 0 ? bp_neg(t) : t);
        first = false;
    }
    return acc;
}

} // namespace

BivarPoly parse_poly_xl(const std::string& text) {
    Scanner sc(text);
    if (sc.eof()) sc.fail("empty input");
    BivarPoly out = parse_expr(sc);
    if (!sc.eof()) sc.fail("trailing input");
    return out;
}

LamPoly parse_lampoly(const std::string& text) {
    BivarPoly b = parse_poly_xl(text);
    if (b.x_degree() > 0)
        throw DynError(DynError::Kind::Parse,
                       "expected a polynomial in l alone, found x", 0);
    return b.by_x_power.empty() ? LamPoly() : b.by_x_power[0];
}

Rat parse_rational(const std::string& text) {
    LamPoly p = parse_lampoly(text);
    if (p.degree() > 0)
        throw DynError(DynError::Kind::Parse, "expected a rational constant, found l", 0);
    return p.coeff(0);
}

ParamFamily parse_family(const std::string& text) {
    BivarPoly b = parse_poly_xl(text);
    int d = b.x_degree();
    if (d < 2)
        throw DynError(DynError::Kind::Hypothesis,
                       "family must have x-degree >= 2, got " +
                           (d == RatPoly::kDegNegInf ? std::string("-inf") : std::to_string(d)));
    const LamPoly& leadc = b.by_x_power[static_cast<size_t>(d)];
    if (leadc.degree() != 0 || leadc.coeff(0) != 1)
        throw DynError(DynError::Kind::Hypothesis,
                       "family must be monic in x with constant leading coefficient");
    if (static_cast<size_t>(d) >= 1 && d - 1 < static_cast<int>(b.by_x_power.size()) &&
        !b.by_x_power[static_cast<size_t>(d - 1)].is_zero())
        throw DynError(DynError::Kind::Hypothesis,
                       "family must have identically zero x^{d-1} coefficient (normal form)");
    std::vector<LamPoly> c(static_cast<size_t>(d - 1));
    for (int i = 0; i <= d - 2; ++i)
        if (i < static_cast<int>(b.by_x_power.size())) c[static_cast<size_t>(i)] = b.by_x_power[static_cast<size_t>(i)];
    return ParamFamily::decompose(std::move(c), d);
}

} // namespace dynmand
