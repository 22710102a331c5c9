#include "dynmand/mandelbrot.hpp"

#include "dynmand/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace dynmand {

namespace {

int marked_degree_or_throw(const ParamFamily& F, const LamPoly& c, const char* who) {
    const int need = std::max(1, F.m_r());
    if (c.is_zero() || c.degree() < need)
        throw DynError(DynError::Kind::Hypothesis,
                       std::string(who) +
                           ": marked point degree must be >= max(m_r, 1) for the family");
    return c.degree();
}

} // namespace

GreenValue param_green(const ParamFamily& F, const LamPoly& c, cplx lambda,
                       const ArchOptions& opt) {
    const int m = marked_degree_or_throw(F, c, "param_green");
    GreenValue g = local_height_arch(F.fiber(lambda), c.eval<cplx>(lambda), opt);
    g.value /= m;
    g.error_bound /= m;
    return g;
}

MembershipResult membership(const ParamFamily& F, const LamPoly& c, cplx lambda,
                            const ArchOptions& opt, double outer_radius) {
    MembershipResult res;
    res.green = param_green(F, c, lambda, opt);
    if (res.green.escaped) {
        res.verdict = Membership::Outside;
    } else if (!res.green.inconclusive) {
        res.verdict = Membership::Inside;
    } else if (outer_radius > 0.0 && std::abs(lambda) > outer_radius) {
        res.verdict = Membership::Outside;
        res.via_outer_bound = true;
    } else {
        res.verdict = Membership::Inconclusive;
    }
    return res;
}

ParamGrid render_grid(const ParamFamily& F, const LamPoly& c,
                      double x_min, double x_max, double y_min, double y_max,
                      int nx, int ny, const ArchOptions& opt, int threads) {
    if (nx < 1 || ny < 1 || !(x_min < x_max) || !(y_min < y_max))
        throw DynError(DynError::Kind::Domain, "render_grid: empty grid or bounds");
    marked_degree_or_throw(F, c, "render_grid");

    ParamGrid grid;
    grid.x_min = x_min;
    grid.x_max = x_max;
    grid.y_min = y_min;
    grid.y_max = y_max;
    grid.nx = nx;
    grid.ny = ny;
    grid.cells.resize(static_cast<size_t>(nx) * static_cast<size_t>(ny));
    grid.flags.resize(grid.cells.size());

    parallel_for(grid.cells.size(), threads, [&](std::size_t idx) {
        int ix = static_cast<int>(idx) % nx;
        int iy = static_cast<int>(idx) / nx;
        GreenValue g = param_green(F, c, grid.cell_center(ix, iy), opt);
        grid.flags[idx] = g.escaped ? kCellOutside
                                    : (g.inconclusive ? kCellInconclusive : kCellInside);
        grid.cells[idx] = g;
    });
    return grid;
}

void write_pgm(const ParamGrid& grid, const std::string& path, double g_cap) {
    if (!(g_cap > 0.0))
        throw DynError(DynError::Kind::Domain, "write_pgm: g_cap must be positive");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DynError(DynError::Kind::Domain, "write_pgm: cannot open " + path);
    out << "P5\n" << grid.nx << " " << grid.ny << "\n255\n";
    for (int iy = grid.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            double G = std::max(0.0, grid.cells[static_cast<size_t>(iy) * grid.nx + ix].value);
            long pix = std::lround(255.0 * std::min(1.0, G / g_cap));
            out.put(static_cast<char>(std::min(255L, std::max(0L, pix))));
        }
    }
    if (!out)
        throw DynError(DynError::Kind::Domain, "write_pgm: write failed on " + path);
}

void write_csv(const ParamGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DynError(DynError::Kind::Domain, "write_csv: cannot open " + path);
    out << "x,y,G,error,flag\n";
    char buf[160];
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            size_t idx = static_cast<size_t>(iy) * grid.nx + ix;
            cplx z = grid.cell_center(ix, iy);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", z.real(), z.imag(),
                          grid.cells[idx].value, grid.cells[idx].error_bound, grid.flags[idx]);
            out << buf;
        }
    }
    if (!out)
        throw DynError(DynError::Kind::Domain, "write_csv: write failed on " + path);
}

double grid_max_green(const ParamGrid& grid) {
    double m = 0.0;
    for (size_t i = 0; i < grid.cells.size(); ++i)
        if (grid.flags[i] == kCellOutside) m = std::max(m, grid.cells[i].value);
    return m;
}

double closed_form_capacity(const LamPoly& c) {
    if (c.is_zero() || c.degree() < 1)
        throw DynError(DynError::Kind::Hypothesis,
                       "closed_form_capacity: marked point must depend on lambda");
    return std::pow(std::fabs(to_double(c.lead())), -1.0 / c.degree());
}

CapacityFit capacity_estimate(const ParamFamily& F, const LamPoly& c,
                              const std::vector<double>& radii, int samples_per_circle,
                              const ArchOptions& opt, double outer_threshold, int threads) {
    marked_degree_or_throw(F, c, "capacity_estimate");
    if (radii.empty() || samples_per_circle < 1)
        throw DynError(DynError::Kind::Domain, "capacity_estimate: empty sample plan");

    double thr = outer_threshold;
    if (!(thr > 0.0)) {
        ThresholdReport rep = analyticity_threshold(F, c, ProbeConfig{}, opt);
        if (!rep.certified)
            throw DynError(DynError::Kind::Domain,
                           "capacity_estimate: no certified outer threshold on the probe grid");
        thr = rep.C0;
    }

    CapacityFit fit;
    fit.sample_radii = radii;
    std::sort(fit.sample_radii.begin(), fit.sample_radii.end());
    if (fit.sample_radii.front() < thr)
        throw DynError(DynError::Kind::Domain,
                       "capacity_estimate: sample radius below the certified outer threshold");

    fit.V_per_radius.resize(fit.sample_radii.size());
    for (size_t ri = 0; ri < fit.sample_radii.size(); ++ri) {
        const double R = fit.sample_radii[ri];
        std::vector<double> vals(static_cast<size_t>(samples_per_circle));
        parallel_for(vals.size(), threads, [&](std::size_t k) {
            double ang = 2.0 * M_PI * static_cast<double>(k) / samples_per_circle;
            cplx lambda = R * cplx(std::cos(ang), std::sin(ang));
            vals[k] = param_green(F, c, lambda, opt).value - std::log(R);
        });
        double sum = 0.0;
        for (double v : vals) sum += v;
        fit.V_per_radius[ri] = sum / samples_per_circle;
    }

    fit.V_est = fit.V_per_radius.back();
    auto mm = std::minmax_element(fit.V_per_radius.begin(), fit.V_per_radius.end());
    fit.residual = *mm.second - *mm.first;
    fit.gamma_est = std::exp(-fit.V_est);
    fit.closed_form_gamma = closed_form_capacity(c);
    fit.pass = std::fabs(fit.gamma_est - fit.closed_form_gamma) <=
               std::max(10.0 * opt.tol, fit.residual);
    return fit;
}

} // namespace dynmand
