#pragma once

/*
 * Fiberwise analytic toolkit for a specialized polynomial f_lambda in
 * normal form: Green's function of the filled Julia set, the Boettcher
 * coordinate through its infinite product, the critical radius R_lambda,
 * and the asymptotic phi_lambda(c(lambda)) ~ q_m lambda^m.
 */

#include "dynmand/heights.hpp"
#include "dynmand/poly.hpp"

#include <vector>

namespace dynmand {

/* G(z) = lim log|f^n(z)| / d^n; identical to the archimedean local height */
GreenValue green_fiber(const std::vector<cplx>& f, cplx z, const ArchOptions& opt = {});

/*
 * Certified convergence threshold T for the Boettcher product of a monic
 * centered f: T = max(2^{1/(d-1)} max(r_arch, 1), sqrt(4K+1)) with
 * K = sum_{i<=d-2} |c_i|. For |y| >= T every factor f(y)/y^d lies within
 * 1/2 of 1 (principal roots are safe) and |f(y)| >= |y|^d / 2 > |y|.
 */
double bottcher_domain_threshold(const std::vector<cplx>& f);

struct BottcherEval {
    cplx value;                /* phi_lambda(z)                               */
    long factors_used = 0;
    double error_bound = 0.0;  /* bound on |log phi - computed log|, so also
                                  on |log|phi|| against the Green value       */
};

/*
 * phi(z) = z * prod_{n>=0} (f^{n+1}(z) / f^n(z)^d)^{1/d^{n+1}}, principal
 * branch per factor, tail summed explicitly until it is below tol. Throws
 * DynError(Domain) when |z| is under the certified threshold.
 */
BottcherEval bottcher_product(const std::vector<cplx>& f, cplx z, const ArchOptions& opt = {});

/* critical points of f and R = max over them of exp(G(crit)) */
struct CriticalData {
    std::vector<cplx> critical_points;
    std::vector<double> residuals;       /* |f'(root)| at each reported root */
    std::vector<GreenValue> crit_green;
    double R_lambda = 1.0;               /* >= 1 always                      */
    bool any_inconclusive = false;
};

CriticalData critical_radius(const std::vector<cplx>& f, const ArchOptions& opt = {});

/* log-spaced probe sweep that certifies |c(lambda)| > safety * R_lambda */
struct ProbeConfig {
    double r_min = 1.0;
    double r_max = 1e6;
    int points_per_decade = 2;
    int angles = 8;
    double safety = 2.0;
};

struct ThresholdReport {
    double C0 = 0.0;                  /* probed radius beyond which the bound holds */
    bool certified = false;
    double alpha = 0.0;               /* max_j m_j / (d - e_j)                      */
    std::vector<double> exponents;    /* the individual m_j / (d - e_j)             */
    std::vector<double> probe_radii;
    cplx failing_lambda;              /* meaningful when !certified                 */
};

/* The result is an estimate certified only on the probe grid, not a proven
 * constant; downstream reports carry it as such. Requires deg(c) >= m_r. */
ThresholdReport analyticity_threshold(const ParamFamily& F, const LamPoly& c,
                                      const ProbeConfig& probe = {},
                                      const ArchOptions& opt = {});

/* |phi_lambda(c(lambda)) - q_m lambda^m| <= C |lambda|^{m-1} with C stable
 * across dyadic scales of |lambda| */
struct AsymptoticSample {
    cplx lambda;
    cplx phi;
    cplx q_lambda_m;
    double deviation = 0.0;   /* |phi - q_m lambda^m|      */
    double ratio = 0.0;       /* deviation / |lambda|^{m-1} */
};

struct AsymptoticReport {
    std::vector<AsymptoticSample> samples;
    double C_small = 0.0;     /* max ratio on the lower dyadic scale  */
    double C_large = 0.0;     /* max ratio on the upper dyadic scale  */
    double C_fit = 0.0;
    bool pass = false;
};

AsymptoticReport check_asymptotic(const ParamFamily& F, const LamPoly& c,
                                  const std::vector<cplx>& lambda_samples,
                                  const ArchOptions& opt = {});

} // namespace dynmand
