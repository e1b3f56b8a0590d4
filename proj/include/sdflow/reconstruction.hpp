#pragma once

#include <vector>

#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"

namespace sdflow {

/// Zero if the arguments disagree in sign, otherwise the one closest to zero.
inline double minmod3(double a, double b, double c)
{
    if (a > 0.0 && b > 0.0 && c > 0.0)
        return std::min(a, std::min(b, c));
    if (a < 0.0 && b < 0.0 && c < 0.0)
        return std::max(a, std::max(b, c));
    return 0.0;
}

/// theta-limited slope from three consecutive cell averages spaced h apart,
/// with inv_h = 1/h passed in so x and y sweeps round identically.
inline double limited_slope(double sm, double s0, double sp, double inv_h, double theta)
{
    return minmod3(theta * ((sp - s0) * inv_h),
                   (sp - sm) * (0.5 * inv_h),
                   theta * ((s0 - sm) * inv_h));
}

/// Piecewise-linear reconstruction slopes per cell.
struct SlopeField {
    SlopeField() = default;
    explicit SlopeField(const Grid2D& g)
        : grid(g),
          sx(static_cast<size_t>(g.cell_count()), 0.0),
          sy(static_cast<size_t>(g.cell_count()), 0.0)
    {
    }

    Grid2D grid;
    std::vector<double> sx, sy;

    double x(int j, int k) const { return sx[static_cast<size_t>(grid.cell_index(j, k))]; }
    double y(int j, int k) const { return sy[static_cast<size_t>(grid.cell_index(j, k))]; }
};

/// Minmod-theta slopes in both directions. Cells whose three-cell stencil
/// leaves the grid get zero slope unless that direction is periodic.
inline SlopeField compute_slopes(const CellField& s, double theta,
                                 bool periodic_x = false, bool periodic_y = false)
{
    if (!(theta >= 1.0 && theta <= 2.0))
        throw config_error("compute_slopes: theta must lie in [1, 2]");
    const Grid2D& g = s.grid();
    const int nx = g.nx(), ny = g.ny();
    const double inv_dx = 1.0 / g.dx(), inv_dy = 1.0 / g.dy();
    SlopeField sl(g);
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) {
            const size_t i = static_cast<size_t>(g.cell_index(j, k));
            if (j > 0 && j < nx - 1)
                sl.sx[i] = limited_slope(s(j - 1, k), s(j, k), s(j + 1, k), inv_dx, theta);
            else if (periodic_x)
                sl.sx[i] = limited_slope(s((j + nx - 1) % nx, k), s(j, k), s((j + 1) % nx, k),
                                         inv_dx, theta);
            if (k > 0 && k < ny - 1)
                sl.sy[i] = limited_slope(s(j, k - 1), s(j, k), s(j, k + 1), inv_dy, theta);
            else if (periodic_y)
                sl.sy[i] = limited_slope(s(j, (k + ny - 1) % ny), s(j, k), s(j, (k + 1) % ny),
                                         inv_dy, theta);
        }
    }
    return sl;
}

inline SlopeField zero_slopes(const Grid2D& g) { return SlopeField(g); }

/// Reconstruction of one cell evaluated at a corner; ox and oy are the
/// signed half-cell offsets from the cell center to that corner.
inline double corner_value(double sbar, double sx, double sy, double ox, double oy)
{
    return sbar + (ox * sx + oy * sy);
}

/// The four one-sided reconstructed values at each interior vertex.
/// Superscripts name the evaluating cell's position relative to the vertex:
/// mm is the lower-left cell's value there, pm lower-right, mp upper-left,
/// pp upper-right. Boundary-vertex entries are left at zero.
struct CornerValues {
    CornerValues() = default;
    explicit CornerValues(const Grid2D& g)
        : grid(g), mm(sz(g)), pm(sz(g)), mp(sz(g)), pp(sz(g))
    {
    }

    static size_t sz(const Grid2D& g)
    {
        return static_cast<size_t>((g.nx() + 1) * (g.ny() + 1));
    }

    Grid2D grid;
    std::vector<double> mm, pm, mp, pp;

    size_t idx(int jv, int kv) const { return static_cast<size_t>(kv * (grid.nx() + 1) + jv); }
};

inline CornerValues corner_values(const CellField& s, const SlopeField& sl)
{
    const Grid2D& g = s.grid();
    const double hx = 0.5 * g.dx(), hy = 0.5 * g.dy();
    CornerValues cv(g);
    for (int kv = 1; kv < g.ny(); ++kv) {
        for (int jv = 1; jv < g.nx(); ++jv) {
            const size_t i = cv.idx(jv, kv);
            cv.mm[i] = corner_value(s(jv - 1, kv - 1), sl.x(jv - 1, kv - 1), sl.y(jv - 1, kv - 1), hx, hy);
            cv.pm[i] = corner_value(s(jv, kv - 1), sl.x(jv, kv - 1), sl.y(jv, kv - 1), -hx, hy);
            cv.mp[i] = corner_value(s(jv - 1, kv), sl.x(jv - 1, kv), sl.y(jv - 1, kv), hx, -hy);
            cv.pp[i] = corner_value(s(jv, kv), sl.x(jv, kv), sl.y(jv, kv), -hx, -hy);
        }
    }
    return cv;
}

/// One-sided values at interior faces: x_minus/x_plus at x-face (j,k) are the
/// left and right cell reconstructions at the face midpoint, and likewise in y.
struct InterfaceValues {
    InterfaceValues() = default;
    explicit InterfaceValues(const Grid2D& g)
        : grid(g),
          x_minus(static_cast<size_t>((g.nx() + 1) * g.ny()), 0.0),
          x_plus(static_cast<size_t>((g.nx() + 1) * g.ny()), 0.0),
          y_minus(static_cast<size_t>(g.nx() * (g.ny() + 1)), 0.0),
          y_plus(static_cast<size_t>(g.nx() * (g.ny() + 1)), 0.0)
    {
    }

    Grid2D grid;
    std::vector<double> x_minus, x_plus, y_minus, y_plus;

    size_t xidx(int j, int k) const { return static_cast<size_t>(k * (grid.nx() + 1) + j); }
    size_t yidx(int j, int k) const { return static_cast<size_t>(k * grid.nx() + j); }
};

inline InterfaceValues interface_values(const CellField& s, const SlopeField& sl)
{
    const Grid2D& g = s.grid();
    const double hx = 0.5 * g.dx(), hy = 0.5 * g.dy();
    InterfaceValues iv(g);
    for (int k = 0; k < g.ny(); ++k) {
        for (int j = 1; j < g.nx(); ++j) {
            const size_t i = iv.xidx(j, k);
            iv.x_minus[i] = s(j - 1, k) + hx * sl.x(j - 1, k);
            iv.x_plus[i] = s(j, k) - hx * sl.x(j, k);
        }
    }
    for (int k = 1; k < g.ny(); ++k) {
        for (int j = 0; j < g.nx(); ++j) {
            const size_t i = iv.yidx(j, k);
            iv.y_minus[i] = s(j, k - 1) + hy * sl.y(j, k - 1);
            iv.y_plus[i] = s(j, k) - hy * sl.y(j, k);
        }
    }
    return iv;
}

} // namespace sdflow
