#pragma once

/*
 * Text grammar for families and marked points, shared by the CLI and the
 * config file. Whitespace-insensitive, parsed exactly over Q.
 *
 *   expr   := ['+'|'-'] term (('+'|'-') term)*
 *   term   := factor (('*' factor) | factor)*        juxtaposition = product
 *   factor := rational | 'l' ['^' uint] | 'x' ['^' uint] | '(' expr ')'
 *   rational := uint ['/' uint]
 *
 * Example: "x^3 + (2*l^2+1) + l*x". Parse errors carry the byte offset of
 * the offending token.
 */

#include "dynmand/poly.hpp"

#include <string>
#include <vector>

namespace dynmand {

/* polynomial in x whose coefficients are polynomials in l;
 * index = power of x */
struct BivarPoly {
    std::vector<LamPoly> by_x_power;

    int x_degree() const {
        for (int i = static_cast<int>(by_x_power.size()) - 1; i >= 0; --i)
            if (!by_x_power[static_cast<size_t>(i)].is_zero()) return i;
        return RatPoly::kDegNegInf;
    }
};

BivarPoly parse_poly_xl(const std::string& text);

/* x must not occur; the whole expression is a polynomial in l alone */
LamPoly parse_lampoly(const std::string& text);

/* Requires the parsed polynomial to be in normal form: monic in x of degree
 * d >= 2 with constant leading coefficient and identically zero x^{d-1}
 * coefficient. Throws DynError(Parse or Hypothesis). */
ParamFamily parse_family(const std::string& text);

/* "p/q" or "p"; also accepts a leading sign */
Rat parse_rational(const std::string& text);

} // namespace dynmand
