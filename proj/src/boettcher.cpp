#include "dynmand/boettcher.hpp"

#include "dynmand/roots.hpp"

#include <algorithm>
#include <cmath>

namespace dynmand {

GreenValue green_fiber(const std::vector<cplx>& f, cplx z, const ArchOptions& opt) {
    return local_height_arch(f, z, opt);
}

namespace {

void require_normal_form(const std::vector<cplx>& f) {
    const size_t d = f.size() - 1;
    if (d < 2)
        throw DynError(DynError::Kind::Hypothesis, "bottcher: degree must be >= 2");
    if (std::abs(f[d] - cplx(1.0, 0.0)) > 1e-12 || std::abs(f[d - 1]) > 1e-12)
        throw DynError(DynError::Kind::Hypothesis,
                       "bottcher: fiber must be monic with zero second coefficient");
}

double lower_coeff_sum(const std::vector<cplx>& f) {
    double K = 0.0;
    for (size_t i = 0; i + 2 < f.size(); ++i) K += std::abs(f[i]);
    return K;
}

} // namespace

double bottcher_domain_threshold(const std::vector<cplx>& f) {
    require_normal_form(f);
    const int d = static_cast<int>(f.size()) - 1;
    const double K = lower_coeff_sum(f);
    double t1 = std::pow(2.0, 1.0 / (d - 1)) * std::max(escape_radius_arch(f), 1.0);
    double t2 = std::sqrt(4.0 * K + 1.0);
    return std::max(t1, t2);
}

BottcherEval bottcher_product(const std::vector<cplx>& f, cplx z, const ArchOptions& opt) {
    const double T = bottcher_domain_threshold(f);
    if (!(std::abs(z) >= T))
        throw DynError(DynError::Kind::Domain,
                       "bottcher_product: point below the certified product domain");
    const int d = static_cast<int>(f.size()) - 1;
    const double K = lower_coeff_sum(f);

    cplx Lacc = std::log(z);
    cplx y = z;
    long N = 0;
    double err;
    for (;;) {
        double ay = std::abs(y);
        /* |y_n| is nondecreasing on the product domain, so every unused
         * factor obeys |log u_n| <= 2K/|y_N|^2 */
        err = (2.0 * K / (ay * ay)) * std::pow(static_cast<double>(d), -static_cast<double>(N)) /
              (d - 1);
        if (err <= 0.5 * opt.tol || ay >= 1e30 || N >= 200) break;

        cplx iv = 1.0 / y;
        cplx acc = 0.0;
        if (d >= 2) {
            acc = f[0];
            for (int i = 1; i <= d - 2; ++i) acc = acc * iv + f[static_cast<size_t>(i)];
        }
        cplx u = 1.0 + iv * iv * acc; /* f(y)/y^d, within 1/4 of 1 here */
        Lacc += std::log(u) * std::pow(static_cast<double>(d), -static_cast<double>(N + 1));
        cplx y_next = std::pow(y, d) * u;
        ++N;
        if (!std::isfinite(std::abs(y_next))) break;
        y = y_next;
    }

    BottcherEval out;
    out.value = std::exp(Lacc);
    out.factors_used = N;
    out.error_bound = err + 1e-12;
    return out;
}

CriticalData critical_radius(const std::vector<cplx>& f, const ArchOptions& opt) {
    const int d = static_cast<int>(f.size()) - 1;
    if (d < 2)
        throw DynError(DynError::Kind::Hypothesis, "critical_radius: degree must be >= 2");
    std::vector<cplx> df(static_cast<size_t>(d));
    for (int i = 1; i <= d; ++i)
        df[static_cast<size_t>(i - 1)] = static_cast<double>(i) * f[static_cast<size_t>(i)];

    AberthResult ar = aberth_roots(df);
    CriticalData out;
    out.critical_points = ar.roots;
    for (const cplx& w : ar.roots) {
        cplx acc = df.back();
        for (size_t i = df.size() - 1; i-- > 0;) acc = acc * w + df[i];
        out.residuals.push_back(std::abs(acc));
        GreenValue g = green_fiber(f, w, opt);
        out.any_inconclusive = out.any_inconclusive || g.inconclusive;
        out.R_lambda = std::max(out.R_lambda, std::exp(g.value));
        out.crit_green.push_back(std::move(g));
    }
    return out;
}

ThresholdReport analyticity_threshold(const ParamFamily& F, const LamPoly& c,
                                      const ProbeConfig& probe, const ArchOptions& opt) {
    if (F.terms().empty())
        throw DynError(DynError::Kind::Hypothesis,
                       "analyticity_threshold: family does not depend on lambda");
    const int m = c.degree();
    if (m < std::max(F.m_r(), 1))
        throw DynError(DynError::Kind::Hypothesis,
                       "analyticity_threshold: marked point degree below the family threshold");
    const int d = F.degree();

    ThresholdReport rep;
    for (const FamilyTerm& t : F.terms())
        rep.exponents.push_back(static_cast<double>(t.m) / (d - t.e));
    rep.alpha = *std::max_element(rep.exponents.begin(), rep.exponents.end());

    const double step = std::pow(10.0, 1.0 / probe.points_per_decade);
    for (double R = probe.r_min; R <= probe.r_max * (1.0 + 1e-9); R *= step)
        rep.probe_radii.push_back(R);

    auto probe_passes = [&](cplx lambda, cplx* fail_out) {
        std::vector<cplx> fib = F.fiber(lambda);
        double cl = std::abs(c.eval<cplx>(lambda));
        CriticalData crit = critical_radius(fib, opt);
        double need = probe.safety * std::max(crit.R_lambda, bottcher_domain_threshold(fib));
        bool ok = !crit.any_inconclusive && cl >= need;
        if (!ok && fail_out) *fail_out = lambda;
        return ok;
    };

    /* scan radii downward; C0 is the smallest probed radius from which every
     * larger probe passes */
    bool found_any = false;
    for (size_t ri = rep.probe_radii.size(); ri-- > 0;) {
        double R = rep.probe_radii[ri];
        bool all_ok = true;
        cplx fail;
        for (int k = 0; k < probe.angles; ++k) {
            double ang = 2.0 * M_PI * (k + 0.3) / probe.angles;
            if (!probe_passes(R * cplx(std::cos(ang), std::sin(ang)), &fail)) {
                all_ok = false;
                break;
            }
        }
        if (!all_ok) {
            rep.failing_lambda = fail;
            break;
        }
        rep.C0 = R;
        found_any = true;
    }
    rep.certified = found_any;
    return rep;
}

AsymptoticReport check_asymptotic(const ParamFamily& F, const LamPoly& c,
                                  const std::vector<cplx>& lambda_samples,
                                  const ArchOptions& opt) {
    const int m = c.degree();
    const cplx qm = cplx(to_double(c.lead()), 0.0);

    AsymptoticReport rep;
    for (cplx lambda : lambda_samples) {
        AsymptoticSample s;
        s.lambda = lambda;
        std::vector<cplx> fib = F.fiber(lambda);
        s.phi = bottcher_product(fib, c.eval<cplx>(lambda), opt).value;
        s.q_lambda_m = qm * std::pow(lambda, m);
        s.deviation = std::abs(s.phi - s.q_lambda_m);
        s.ratio = s.deviation / std::pow(std::abs(lambda), m - 1);
        rep.samples.push_back(s);
    }

    std::vector<AsymptoticSample> sorted = rep.samples;
    std::sort(sorted.begin(), sorted.end(),
              [](const AsymptoticSample& a, const AsymptoticSample& b) {
                  return std::abs(a.lambda) < std::abs(b.lambda);
              });
    size_t half = sorted.size() / 2;
    for (size_t i = 0; i < sorted.size(); ++i) {
        double& side = (i < half) ? rep.C_small : rep.C_large;
        side = std::max(side, sorted[i].ratio);
        rep.C_fit = std::max(rep.C_fit, sorted[i].ratio);
    }
    rep.pass = rep.C_large <= 1.5 * rep.C_small + 1e-9;
    return rep;
}

} // namespace dynmand
