#include "dynmand/preperiodic.hpp"

#include "dynmand/places.hpp"
#include "dynmand/roots.hpp"
#include "dynmand/util.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dynmand {

LamPoly prep_equation(const ParamFamily& F, const LamPoly& c, int n, int k,
                      long degree_cap) {
    if (k < 0 || k >= n)
        throw DynError(DynError::Kind::Hypothesis,
                       "prep_equation: offsets must satisfy 0 <= k < n");
    return iterate_param(F, c, n, degree_cap) - iterate_param(F, c, k, degree_cap);
}

namespace {

std::vector<cplx> complex_coeffs(const RatPoly& p) {
    std::vector<double> cd = p.coeffs_double();
    std::vector<cplx> out(cd.size());
    for (size_t i = 0; i < cd.size(); ++i) out[i] = cd[i];
    return out;
}

/* exact certification data shared by every root of one relation */
struct RelationContext {
    LamPoly rel;
    LamPoly drel;
    double log_lead = 0.0;               /* log |lead(rel)|                  */
    std::vector<double> log_coeff;       /* log |rel_i|, -inf for zero terms */
};

RelationContext make_context(LamPoly rel) {
    RelationContext ctx;
    ctx.drel = rel.derivative();
    ctx.log_lead = log_rat(rel.lead() < 0 ? Rat(-rel.lead()) : rel.lead());
    ctx.log_coeff.resize(static_cast<size_t>(rel.degree()) + 1,
                         -std::numeric_limits<double>::infinity());
    for (int i = 0; i <= rel.degree(); ++i) {
        const Rat& a = rel.coeff(i);
        if (a != 0) ctx.log_coeff[static_cast<size_t>(i)] = log_rat(a < 0 ? Rat(-a) : a);
    }
    ctx.rel = std::move(rel);
    return ctx;
}

PrepSolution certify_root(const RelationContext& ctx, int n, int k, cplx root) {
    PrepSolution s;
    s.n = n;
    s.k = k;
    s.lambda = root;

    const QComplex lam = QComplex::from_cplx(root);
    const QComplex p = ctx.rel.eval<QComplex>(lam);
    const Rat n2p = p.norm2();
    if (n2p == 0) return s; /* exact root: zero residual and radius */

    const int deg = ctx.rel.degree();
    const double log_p = 0.5 * log_rat(n2p);
    s.residual = std::exp(log_p);

    /* sum_i |rel_i| |root|^i in log space */
    const double log_lam = (std::abs(root) == 0.0) ? -std::numeric_limits<double>::infinity()
                                                   : std::log(std::abs(root));
    double L = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= deg; ++i) {
        double t = ctx.log_coeff[static_cast<size_t>(i)] + i * log_lam;
        if (i == 0) t = ctx.log_coeff[0];
        L = std::max(L, t);
    }
    double scaled = 0.0;
    for (int i = 0; i <= deg; ++i) {
        double t = (i == 0) ? ctx.log_coeff[0] : ctx.log_coeff[static_cast<size_t>(i)] + i * log_lam;
        if (std::isfinite(t)) scaled += std::exp(t - L);
    }
    const double log_denom = L + std::log(scaled);
    s.rel_residual = std::exp(log_p - log_denom);

    /* distance to the nearest true root: Henrici's deg |p/p'| and the
     * product bound (|p|/|lead|)^{1/deg}, both valid, keep the smaller */
    double radius = std::exp((log_p - ctx.log_lead) / deg);
    const Rat n2dp = ctx.drel.eval<QComplex>(lam).norm2();
    if (n2dp != 0) {
        double henrici = deg * std::exp(0.5 * (log_rat(n2p) - log_rat(n2dp)));
        radius = std::min(radius, henrici);
    }
    s.error_radius = radius;
    s.refined_ok = s.rel_residual <= 1e-8; /* overwritten by the caller's option */
    return s;
}

std::vector<PrepSolution> certified_relation_roots(const RelationContext& ctx, int n, int k,
                                                   const PrepOptions& opt) {
    AberthResult ar = aberth_roots(complex_coeffs(ctx.rel));
    std::vector<PrepSolution> sols(ar.roots.size());
    parallel_for(ar.roots.size(), opt.threads, [&](std::size_t i) {
        sols[i] = certify_root(ctx, n, k, ar.roots[i]);
        sols[i].refined_ok = sols[i].rel_residual <= opt.cert_rel_residual;
    });
    /* multiplicity shows as a cluster at the certification noise floor */
    for (size_t i = 0; i < sols.size(); ++i) {
        double thresh = std::max(opt.dedup_factor * sols[i].error_radius, 1e-12);
        int hint = 0;
        cplx centroid = 0.0;
        for (size_t j = 0; j < sols.size(); ++j) {
            if (std::abs(sols[i].lambda - sols[j].lambda) <= thresh) {
                ++hint;
                centroid += sols[j].lambda;
            }
        }
        sols[i].multiplicity_hint = hint;
        sols[i].lambda = centroid / static_cast<double>(hint);
    }
    /* a cluster of m copies marks an m-fold root; modified Newton with the
     * multiplicity restores quadratic convergence there */
    parallel_for(sols.size(), opt.threads, [&](std::size_t i) {
        PrepSolution& s = sols[i];
        cplx z = s.lambda;
        const double mult = static_cast<double>(std::max(s.multiplicity_hint, 1));
        for (int it = 0; it < 60; ++it) {
            cplx p = ctx.rel.eval<cplx>(z);
            cplx dp = ctx.drel.eval<cplx>(z);
            if (p == 0.0 || dp == 0.0) break;
            cplx step = mult * p / dp;
            z -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
        }
        PrepSolution polished = certify_root(ctx, n, k, z);
        polished.refined_ok = polished.rel_residual <= opt.cert_rel_residual;
        polished.multiplicity_hint = s.multiplicity_hint;
        if (polished.residual <= s.residual) {
            double keep_radius = std::min(s.error_radius, polished.error_radius);
            s = polished;
            s.error_radius = keep_radius;
        }
    });
    return sols;
}

} // namespace

std::vector<PrepSolution> prep_roots(const ParamFamily& F, const LamPoly& c, int max_n,
                                     const PrepOptions& opt) {
    if (max_n < 1)
        throw DynError(DynError::Kind::Hypothesis, "prep_roots: max_n must be >= 1");

    std::vector<LamPoly> g(static_cast<size_t>(max_n) + 1);
    for (int n = 0; n <= max_n; ++n)
        g[static_cast<size_t>(n)] = iterate_param(F, c, n, opt.degree_cap);

    std::vector<PrepSolution> accepted;
    for (int n = 1; n <= max_n; ++n) {
        for (int k = 0; k < n; ++k) {
            LamPoly rel = g[static_cast<size_t>(n)] - g[static_cast<size_t>(k)];
            if (rel.is_zero() || rel.degree() < 1) continue;
            RelationContext ctx = make_context(std::move(rel));
            for (PrepSolution& s : certified_relation_roots(ctx, n, k, opt)) {
                if (!s.refined_ok) continue;
                bool merged = false;
                for (const PrepSolution& a : accepted) {
                    double lim = opt.dedup_factor * std::max(a.error_radius, s.error_radius);
                    if (std::abs(a.lambda - s.lambda) <= lim) {
                        merged = true;
                        break;
                    }
                }
                if (!merged) accepted.push_back(std::move(s));
            }
        }
    }
    return accepted;
}

std::vector<cplx> relation_roots(const ParamFamily& F, const LamPoly& c, int n, int k,
                                 const PrepOptions& opt) {
    LamPoly rel = prep_equation(F, c, n, k, opt.degree_cap);
    if (rel.is_zero() || rel.degree() < 1) return {};
    return aberth_roots(complex_coeffs(rel)).roots;
}

ClusterReport boundary_clustering(const ParamFamily& F, const LamPoly& c,
                                  const std::vector<PrepSolution>& sols,
                                  const ArchOptions& opt) {
    ClusterReport rep;
    int max_level = 0;
    for (const PrepSolution& s : sols) {
        rep.per_root_G.push_back(param_green(F, c, s.lambda, opt).value);
        rep.max_G = std::max(rep.max_G, rep.per_root_G.back());
        max_level = std::max(max_level, s.n);
    }

    for (int e = -16; e <= 1; ++e) rep.bin_edges_log10.push_back(static_cast<double>(e));
    rep.histogram.assign(rep.bin_edges_log10.size() - 1, 0);
    auto bin_of = [&](double dist) {
        double lg = (dist <= 0.0) ? -16.0 : std::log10(dist);
        long b = static_cast<long>(std::floor(lg)) + 16;
        return std::min(std::max(b, 0L), static_cast<long>(rep.histogram.size()) - 1);
    };

    for (int n = 1; n < max_level; ++n) {
        std::vector<cplx> prev, next;
        for (const PrepSolution& s : sols) {
            if (s.n == n) prev.push_back(s.lambda);
            if (s.n == n + 1) next.push_back(s.lambda);
        }
        if (prev.empty() || next.empty()) continue;
        for (cplx z : next) {
            double best = std::numeric_limits<double>::infinity();
            for (cplx w : prev) best = std::min(best, std::abs(z - w));
            ++rep.histogram[static_cast<size_t>(bin_of(best))];
        }
    }
    return rep;
}

EquidistReport equidist_potential(const ParamFamily& F, const LamPoly& c, int max_n,
                                  cplx w, const ArchOptions& opt, const PrepOptions& popt) {
    if (max_n < 2)
        throw DynError(DynError::Kind::Hypothesis, "equidist_potential: max_n must be >= 2");
    MembershipResult mem = membership(F, c, w, opt);
    if (mem.verdict != Membership::Outside)
        throw DynError(DynError::Kind::Hypothesis,
                       "equidist_potential: the logarithmic-potential prediction needs an "
                       "exterior evaluation point");

    EquidistReport rep;
    rep.green_at_w = mem.green.value;
    rep.log_capacity = std::log(closed_form_capacity(c));
    rep.prediction = rep.green_at_w + rep.log_capacity;

    for (int n = 2; n <= max_n; ++n) {
        std::vector<cplx> roots = relation_roots(F, c, n, n - 1, popt);
        if (roots.empty())
            throw DynError(DynError::Kind::Hypothesis,
                           "equidist_potential: relation has no roots");
        double sum = 0.0;
        for (cplx r : roots) sum += std::log(std::max(std::abs(w - r), 1e-300));
        rep.ns.push_back(n);
        rep.potential_per_n.push_back(sum / static_cast<double>(roots.size()));
        rep.abs_errors.push_back(std::fabs(rep.potential_per_n.back() - rep.prediction));
    }

    rep.monotone_decreasing = rep.abs_errors.size() >= 2;
    for (size_t i = 1; i < rep.abs_errors.size(); ++i)
        if (!(rep.abs_errors[i] < rep.abs_errors[i - 1])) rep.monotone_decreasing = false;
    return rep;
}

AdelicHeightReport adelic_height(const ParamFamily& F, const LamPoly& c,
                                 const Rat& lambda, const ArchOptions& opt) {
    const int m = c.is_zero() ? 0 : c.degree();
    if (m < std::max(1, F.m_r()))
        throw DynError(DynError::Kind::Hypothesis,
                       "adelic_height: marked point degree must be >= max(m_r, 1)");

    AdelicHeightReport rep;
    rep.lambda = lambda;

    std::set<long> places;
    for (long p : good_places(F, c).flagged()) places.insert(p);
    for (long p : prime_factors(rat_den(lambda))) places.insert(p);

    const RatPoly fib = F.fiber(lambda);
    const Rat x = c.eval<Rat>(lambda);
    double finite_sum = 0.0;
    for (long p : places) {
        NonarchHeight h = local_height_nonarch(fib, x, p);
        if (h.coeff_log_p != 0) {
            Rat coeff = h.coeff_log_p / m;
            finite_sum += to_double(coeff) * std::log(static_cast<double>(p));
            rep.finite_contribs.emplace_back(p, std::move(coeff));
        }
    }

    rep.arch_contrib = param_green(F, c, cplx(to_double_safe(lambda), 0.0), opt);
    rep.total = rep.arch_contrib.value + finite_sum;

    GlobalHeight cross = global_height(F, lambda, x, opt);
    rep.crosscheck = cross.value / m;
    rep.crosscheck_error =
        rep.arch_contrib.error_bound + cross.error_bound / m + 1e-10;
    rep.inconclusive = rep.arch_contrib.inconclusive || cross.inconclusive;
    rep.pass = std::fabs(rep.total - rep.crosscheck) <= rep.crosscheck_error;
    return rep;
}

SharedPrepReport shared_prep_experiment(const ParamFamily& F, const LamPoly& a,
                                        const LamPoly& b, int k, int l, int max_n,
                                        double pairing_tol, const ArchOptions& opt,
                                        const PrepOptions& popt) {
    (void)opt;
    if (max_n < 1 || k < 0 || l < 0)
        throw DynError(DynError::Kind::Hypothesis,
                       "shared_prep_experiment: need max_n >= 1 and k, l >= 0");

    SharedPrepReport rep;
    const LamPoly gak = iterate_param(F, a, k, popt.degree_cap);
    const LamPoly gbl = iterate_param(F, b, l, popt.degree_cap);
    rep.hyp_same_deg_lead = !gak.is_zero() && !gbl.is_zero() &&
                            gak.degree() == gbl.degree() && gak.lead() == gbl.lead();
    const int need = std::max(1, F.m_r());
    rep.hyp_degree_bound = !a.is_zero() && !b.is_zero() && a.degree() >= need &&
                           b.degree() >= need;
    if (!rep.hyp_same_deg_lead)
        rep.hyp_detail += "iterate degree/leading-coefficient mismatch; ";
    if (!rep.hyp_degree_bound)
        rep.hyp_detail += "marked point degree below max(m_r, 1); ";
    if (rep.hyp_detail.empty()) rep.hyp_detail = "both hypotheses hold";

    rep.identity = (gak == gbl);

    for (int n = 1; n <= max_n; ++n) {
        std::vector<PrepSolution> ra = prep_roots(F, a, n, popt);
        std::vector<PrepSolution> rb = prep_roots(F, b, n, popt);
        rep.levels.push_back(n);
        rep.count_a.push_back(static_cast<long>(ra.size()));
        rep.count_b.push_back(static_cast<long>(rb.size()));

        std::vector<bool> used(rb.size(), false);
        std::vector<PrepSolution> paired;
        for (const PrepSolution& sa : ra) {
            long best = -1;
            double best_d = pairing_tol;
            for (size_t j = 0; j < rb.size(); ++j) {
                if (used[j]) continue;
                double dd = std::abs(sa.lambda - rb[j].lambda);
                if (dd <= best_d) {
                    best_d = dd;
                    best = static_cast<long>(j);
                }
            }
            if (best >= 0) {
                used[static_cast<size_t>(best)] = true;
                paired.push_back(sa);
            }
        }
        rep.intersection_counts.push_back(static_cast<long>(paired.size()));
        rep.sets_equal.push_back(paired.size() == ra.size() && paired.size() == rb.size());
        if (n == max_n) rep.shared = std::move(paired);
    }

    if (!rep.hyp_same_deg_lead || !rep.hyp_degree_bound) {
        rep.verdict = "hypothesis_failed";
        return rep;
    }
    /* growth needs strict increases at the last three increments; the
     * stabilization side needs the count constant over the last three
     * levels, tolerating earlier growth while stragglers keep appearing */
    const size_t L = rep.intersection_counts.size();
    bool growth = L >= 2, stable = L >= 2;
    const size_t g_first = (L >= 4) ? L - 3 : 1;
    for (size_t i = g_first; i < L; ++i)
        growth = growth && rep.intersection_counts[i] > rep.intersection_counts[i - 1];
    const size_t s_first = (L >= 3) ? L - 2 : 1;
    for (size_t i = s_first; i < L; ++i)
        stable = stable && rep.intersection_counts[i] == rep.intersection_counts[i - 1];
    if (rep.identity && growth)
        rep.verdict = "identity_true_growth";
    else if (!rep.identity && stable)
        rep.verdict = "identity_false_stable";
    else
        rep.verdict = "mixed";
    return rep;
}

} // namespace dynmand
