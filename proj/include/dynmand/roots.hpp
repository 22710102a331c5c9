#pragma once

/*
 * Simultaneous polynomial root refinement (Aberth iteration) on complex
 * double coefficients, with initial points on a Fujiwara-bound circle.
 * Multiple roots converge to clusters whose radius is the double-precision
 * noise floor; certification against exact coefficients happens upstream.
 */

#include "dynmand/rational.hpp"

#include <vector>

namespace dynmand {

struct AberthResult {
    std::vector<cplx> roots;      /* one entry per root, multiplicity included */
    std::vector<bool> root_ok;    /* per-root convergence flag                 */
    bool converged = false;       /* all roots ok                              */
    int iterations = 0;
};

struct AberthOptions {
    int max_iters = 400;
    double tol = 1e-13;           /* relative correction size for convergence */
};

/* coeffs ascending by power, degree >= 1, leading coefficient nonzero */
AberthResult aberth_roots(const std::vector<cplx>& coeffs, const AberthOptions& opt = {});

} // namespace dynmand
