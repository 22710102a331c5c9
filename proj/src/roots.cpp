#include "dynmand/roots.hpp"

#include "dynmand/error.hpp"

#include <algorithm>
#include <cmath>

namespace dynmand {

namespace {

struct Eval {
    cplx p, dp;
    double noise; /* backward-stable bound on |p| evaluation error */
};

Eval eval_with_noise(const std::vector<cplx>& a, cplx z) {
    cplx p = a.back(), dp = 0.0;
    double az = std::abs(z);
    double majorant = std::abs(a.back());
    for (size_t i = a.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + a[i];
        majorant = majorant * az + std::abs(a[i]);
    }
    Eval e;
    e.p = p;
    e.dp = dp;
    e.noise = majorant * (2.0 * static_cast<double>(a.size()) + 1.0) * 1.1e-16;
    return e;
}

} // namespace

AberthResult aberth_roots(const std::vector<cplx>& coeffs, const AberthOptions& opt) {
    if (coeffs.size() < 2 || std::abs(coeffs.back()) == 0.0)
        throw DynError(DynError::Kind::Hypothesis,
                       "aberth_roots: degree must be >= 1 with nonzero leading coefficient");
    for (const cplx& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw DynError(DynError::Kind::Domain, "aberth_roots: non-finite coefficient");

    /* exact zero roots come off first; they are also the ill-conditioned ones */
    size_t zero_roots = 0;
    while (zero_roots + 1 < coeffs.size() && std::abs(coeffs[zero_roots]) == 0.0)
        ++zero_roots;
    std::vector<cplx> a(coeffs.begin() + static_cast<long>(zero_roots), coeffs.end());
    const size_t n = a.size() - 1;

    AberthResult res;
    res.roots.assign(zero_roots, cplx(0.0, 0.0));
    res.root_ok.assign(zero_roots, true);
    if (n == 0) {
        res.converged = true;
        return res;
    }
    if (n == 1) {
        res.roots.push_back(-a[0] / a[1]);
        res.root_ok.push_back(true);
        res.converged = true;
        return res;
    }

    double fuji = 0.0;
    for (size_t k = 1; k <= n; ++k) {
        double c = std::abs(a[n - k]) / std::abs(a[n]);
        if (c > 0.0) fuji = std::max(fuji, 2.0 * std::pow(c, 1.0 / static_cast<double>(k)));
    }

    std::vector<cplx> z(n);
    for (size_t j = 0; j < n; ++j) {
        double ang = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n) + 0.4;
        z[j] = 0.5 * fuji * cplx(std::cos(ang), std::sin(ang));
    }

    std::vector<bool> ok(n, false);
    int it = 0;
    for (; it < opt.max_iters; ++it) {
        bool all_ok = true;
        for (size_t i = 0; i < n; ++i) {
            if (ok[i]) continue;
            Eval e = eval_with_noise(a, z[i]);
            if (std::abs(e.p) <= e.noise) {
                ok[i] = true;
                continue;
            }
            all_ok = false;
            cplx N = e.p / e.dp;
            if (!std::isfinite(N.real()) || !std::isfinite(N.imag())) {
                z[i] += cplx(1e-6, 2e-6) * (1.0 + std::abs(z[i]));
                continue;
            }
            cplx repel = 0.0;
            bool collided = false;
            for (size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx dz = z[i] - z[j];
                if (std::abs(dz) == 0.0) {
                    collided = true;
                    break;
                }
                repel += 1.0 / dz;
            }
            if (collided) {
                z[i] += cplx(1e-6, 2e-6) * (1.0 + std::abs(z[i]));
                continue;
            }
            cplx denom = 1.0 - N * repel;
            cplx corr = (std::abs(denom) < 1e-300) ? N : N / denom;
            z[i] -= corr;
            if (std::abs(corr) <= opt.tol * std::max(1.0, std::abs(z[i]))) ok[i] = true;
        }
        if (all_ok) break;
    }

    res.iterations = it;
    res.converged = true;
    for (size_t i = 0; i < n; ++i) {
        res.roots.push_back(z[i]);
        res.root_ok.push_back(ok[i]);
        if (!ok[i]) res.converged = false;
    }
    return res;
}

} // namespace dynmand
