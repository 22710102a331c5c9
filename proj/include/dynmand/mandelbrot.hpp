#pragma once

/*
 * Parameter-space objects for a family with marked point c: the generalized
 * Mandelbrot set M_c, its Green's function G_c, capacity estimation against
 * the closed form |q_m|^{-1/m}, and deterministic grid rendering.
 */

#include "dynmand/boettcher.hpp"
#include "dynmand/heights.hpp"
#include "dynmand/poly.hpp"

#include <string>
#include <vector>

namespace dynmand {

/* G_c(lambda) = hhat_{f_lambda}(c(lambda)) / m, m = deg(c).
 * Requires m >= m_r and m >= 1 when r = 0; throws DynError(Hypothesis). */
GreenValue param_green(const ParamFamily& F, const LamPoly& c, cplx lambda,
                       const ArchOptions& opt = {});

enum class Membership { Inside, Outside, Inconclusive };

struct MembershipResult {
    Membership verdict = Membership::Inconclusive;
    GreenValue green;
    bool via_outer_bound = false; /* escape not witnessed; |lambda| is past the
                                     probe-certified outer radius             */
};

/* outer_radius <= 0 leaves the outer-bound shortcut off */
MembershipResult membership(const ParamFamily& F, const LamPoly& c, cplx lambda,
                            const ArchOptions& opt = {}, double outer_radius = 0.0);

/* cell flags in exports: 0 escaped, 1 inside (certified cycle), 2 inconclusive
 * (rendered as inside, flag preserved) */
enum : int { kCellOutside = 0, kCellInside = 1, kCellInconclusive = 2 };

struct ParamGrid {
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    int nx = 0, ny = 0;
    std::vector<GreenValue> cells; /* row-major, index = iy * nx + ix */
    std::vector<int> flags;

    cplx cell_center(int ix, int iy) const {
        double dx = (x_max - x_min) / nx, dy = (y_max - y_min) / ny;
        return {x_min + (ix + 0.5) * dx, y_min + (iy + 0.5) * dy};
    }
};

/* Cell-center evaluation of param_green. Output is a pure function of the
 * inputs; the thread count changes the schedule only, never a byte. */
ParamGrid render_grid(const ParamFamily& F, const LamPoly& c,
                      double x_min, double x_max, double y_min, double y_max,
                      int nx, int ny, const ArchOptions& opt = {}, int threads = 1);

/* 8-bit binary PGM; pixel = round(255 * min(1, G / g_cap)), top row = y_max */
void write_pgm(const ParamGrid& grid, const std::string& path, double g_cap);
/* header x,y,G,error,flag; one row per cell, y-major bottom-up */
void write_csv(const ParamGrid& grid, const std::string& path);
/* largest escaped cell value, 0 when none */
double grid_max_green(const ParamGrid& grid);

/*
 * Circle-mean capacity fit. V_R = mean over samples on |lambda| = R of
 * (G_c(lambda) - log R); V_est is taken at the largest radius, the spread
 * across radii is the residual, gamma_est = exp(-V_est) and the closed form
 * is |q_m|^{-1/m}.
 */
struct CapacityFit {
    double gamma_est = 0.0;
    double V_est = 0.0;
    double closed_form_gamma = 0.0;
    double residual = 0.0;
    std::vector<double> sample_radii;
    std::vector<double> V_per_radius;
    bool pass = false;
};

/* Radii must lie beyond the probe-certified outer threshold (computed here
 * when outer_threshold <= 0); otherwise DynError(Domain). */
CapacityFit capacity_estimate(const ParamFamily& F, const LamPoly& c,
                              const std::vector<double>& radii, int samples_per_circle,
                              const ArchOptions& opt = {}, double outer_threshold = 0.0,
                              int threads = 1);

/* closed form |q_m|^{-1/m} as a double */
double closed_form_capacity(const LamPoly& c);

} // namespace dynmand
