#pragma once

/*
 * Preperiodic parameters of a marked point: exact relation polynomials
 * g_{c,n} - g_{c,k}, certified numeric roots, boundary clustering and
 * logarithmic-potential equidistribution diagnostics, adelic heights of
 * rational parameters, and the shared-preperiodicity experiment.
 */

#include "dynmand/heights.hpp"
#include "dynmand/mandelbrot.hpp"
#include "dynmand/poly.hpp"

#include <string>
#include <vector>

namespace dynmand {

/* g_{c,n} - g_{c,k}; requires 0 <= k < n (DynError(Hypothesis) otherwise).
 * Leading terms cannot cancel, so the degree is deg(c) * d^n. */
LamPoly prep_equation(const ParamFamily& F, const LamPoly& c, int n, int k,
                      long degree_cap = 1000000);

/*
 * One isolated preperiodic parameter. residual and error_radius come from
 * exact evaluation of the relation polynomial and its derivative at the
 * dyadic-rational approximation: error_radius = min(deg |p/p'|,
 * (|p|/|lead|)^{1/deg}), both valid bounds on the distance to the nearest
 * true root.
 */
struct PrepSolution {
    int n = 0, k = 0;            /* minimal recorded relation, n > k >= 0 */
    cplx lambda;
    double residual = 0.0;       /* |p(lambda)| exact, rounded             */
    double rel_residual = 0.0;   /* residual / sum_i |p_i||lambda|^i       */
    double error_radius = 0.0;
    int multiplicity_hint = 1;
    bool refined_ok = true;
};

struct PrepOptions {
    long degree_cap = 1000000;
    double cert_rel_residual = 1e-8; /* certification bound on rel_residual */
    double dedup_factor = 10.0;      /* merge radius multiplier             */
    int threads = 1;
};

/* All certified roots of every relation 0 <= k < n <= max_n, deduplicated
 * across relations; merges keep the lexicographically smallest (n, k). */
std::vector<PrepSolution> prep_roots(const ParamFamily& F, const LamPoly& c,
                                     int max_n, const PrepOptions& opt = {});

/* Full root multiset of the single relation (n, k), no dedup, no filtering;
 * multiplicity is represented by repetition. */
std::vector<cplx> relation_roots(const ParamFamily& F, const LamPoly& c, int n, int k,
                                 const PrepOptions& opt = {});

/*
 * G_c evaluated at every solution. Preperiodic parameters lie in M_c where
 * G_c vanishes, so max_G bounds the numeric contamination of the root set.
 * The histogram counts nearest-neighbor distances between consecutive-n
 * root sets on log10 bins.
 */
struct ClusterReport {
    double max_G = 0.0;
    std::vector<double> per_root_G;
    std::vector<double> bin_edges_log10;
    std::vector<long> histogram;
};

ClusterReport boundary_clustering(const ParamFamily& F, const LamPoly& c,
                                  const std::vector<PrepSolution>& sols,
                                  const ArchOptions& opt = {});

/*
 * Discrete logarithmic potentials of the relation-(n, n-1) root sets at an
 * exterior point w:  (1/|S_n|) sum log|w - lambda_i|  against the prediction
 * G_c(w) + log gamma, gamma = |q_m|^{-1/m} (Frostman: the equilibrium
 * potential at an exterior point is G minus the Robin constant).
 * Requires membership(w) = Outside.
 */
struct EquidistReport {
    std::vector<int> ns;
    std::vector<double> potential_per_n;
    std::vector<double> abs_errors;
    double green_at_w = 0.0;
    double log_capacity = 0.0;   /* log gamma */
    double prediction = 0.0;     /* green_at_w + log_capacity */
    bool monotone_decreasing = false;
};

EquidistReport equidist_potential(const ParamFamily& F, const LamPoly& c, int max_n,
                                  cplx w, const ArchOptions& opt = {},
                                  const PrepOptions& popt = {});

/*
 * Adelic height of rational lambda relative to M_c: finite-place terms are
 * exact and restricted to the flagged places plus the primes with
 * |lambda|_p > 1 (all other places vanish by the good-place certificate),
 * the archimedean term is G_c(lambda). The crosscheck recomputes the same
 * quantity as the canonical height of c(lambda) under the fiber divided by
 * deg(c), with its own independent place discovery.
 */
struct AdelicHeightReport {
    Rat lambda;
    std::vector<std::pair<long, Rat>> finite_contribs; /* (p, coeff of log p) */
    GreenValue arch_contrib;                           /* already divided by m */
    double total = 0.0;
    double crosscheck = 0.0;
    double crosscheck_error = 0.0;
    bool pass = false;
    bool inconclusive = false;
};

AdelicHeightReport adelic_height(const ParamFamily& F, const LamPoly& c,
                                 const Rat& lambda, const ArchOptions& opt = {});

/*
 * Shared-preperiodicity experiment for marked points a, b and iterate
 * offsets k, l. Hypotheses are verified and reported, never thrown:
 *   (i)  deg g_{a,k} = deg g_{b,l} and equal leading coefficients,
 *   (ii) deg(a) >= m_r and deg(b) >= m_r (>= 1 when r = 0).
 * The exact identity g_{a,k} == g_{b,l} is cross-tabulated against the
 * growth of |Prep(a) ∩ Prep(b)| as max_n increases: identity true predicts
 * strict growth, identity false predicts stabilization.
 */
struct SharedPrepReport {
    bool hyp_same_deg_lead = false;
    bool hyp_degree_bound = false;
    std::string hyp_detail;
    bool identity = false;
    std::vector<int> levels;                  /* max_n = 1 .. max_n          */
    std::vector<long> intersection_counts;    /* paired roots per level      */
    std::vector<long> count_a, count_b;       /* root-set sizes per level    */
    std::vector<bool> sets_equal;             /* per level                   */
    std::vector<PrepSolution> shared;         /* pairs at the deepest level  */
    std::string verdict;                      /* identity_true_growth,
                                                 identity_false_stable,
                                                 hypothesis_failed, mixed    */
};

SharedPrepReport shared_prep_experiment(const ParamFamily& F, const LamPoly& a,
                                        const LamPoly& b, int k, int l, int max_n,
                                        double pairing_tol = 1e-6,
                                        const ArchOptions& opt = {},
                                        const PrepOptions& popt = {});

} // namespace dynmand
