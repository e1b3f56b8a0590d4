#pragma once

#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "sdflow/grid.hpp"
#include "sdflow/scheme.hpp"
#include "sdflow/time_integrator.hpp"

namespace sdflow {

/// Identity flux for advection studies: the convection kernels only ever call
/// these four members, so any model-shaped type works.
struct LinearFluxModel {
    double fractional_flow(double s) const { return s; }
    double dfds(double) const { return 1.0; }
    double wave_speed_bound(double, double) const { return 1.0; }
    double max_dfds() const { return 1.0; }
};

struct ConvergenceRow {
    int n = 0;          // cells along the tested direction
    double diff = 0.0;  // L1 distance to the next finer level after 2:1 restriction
    double rate = 0.0;  // log2 of the previous row's diff over this one, 0 on the first
};

struct ConvergenceTable {
    SchemeKind scheme = SchemeKind::sd2_2d;
    std::vector<ConvergenceRow> rows;

    double observed_rate() const { return rows.empty() ? 0.0 : rows.back().rate; }
};

namespace detail {

// exact cell average of 0.5 + 0.25 sin(2 pi x) over [xl, xr]
inline double sin_cell_average(double xl, double xr)
{
    const double tp = 2.0 * std::numbers::pi;
    return 0.5 + 0.25 * (std::cos(tp * xl) - std::cos(tp * xr)) / (tp * (xr - xl));
}

inline CellField advect_x_periodic(int nx, int ny, double t_end, double theta, SchemeKind kind)
{
    const Grid2D g(nx, ny, 1.0 / nx, 1.0 / nx);
    CellField s(g);
    for (int k = 0; k < ny; ++k)
        for (int j = 0; j < nx; ++j)
            s(j, k) = sin_cell_average(j * g.dx(), (j + 1) * g.dx());

    FaceVelocityField fv(g);
    for (double& v : fv.xdata())
        v = 1.0;
    VertexVelocityField vv(g);
    for (double& v : vv.xdata())
        v = 1.0;

    const LinearFluxModel m;
    const ConvectionBC bc{0.0, true, false};
    const CflPolicy pol{0.45, 0.0, 1.0e30};
    auto rhs = [&](const CellField& cur, double) {
        return RhsEval{convection_rhs(cur, vv, fv, m, theta, kind, bc), 0.0, 0.0};
    };
    auto dtfn = [&](const CellField& cur) { return cfl_dt(cur, vv, m, pol); };
    advance(s, 0.0, t_end, rhs, dtfn, 1000000);
    return s;
}

inline CellField advect_diagonal_periodic(int n, double t_end, double theta, SchemeKind kind)
{
    const Grid2D g(n, n, 1.0 / n, 1.0 / n);
    const double tp = 2.0 * std::numbers::pi;
    CellField s(g);
    for (int k = 0; k < n; ++k) {
        const double iy = (std::cos(tp * k * g.dy()) - std::cos(tp * (k + 1) * g.dy())) / tp;
        for (int j = 0; j < n; ++j) {
            const double ix = (std::cos(tp * j * g.dx()) - std::cos(tp * (j + 1) * g.dx())) / tp;
            s(j, k) = 0.5 + 0.25 * ix * iy / (g.dx() * g.dy());
        }
    }

    FaceVelocityField fv(g);
    for (double& v : fv.xdata())
        v = 1.0;
    for (double& v : fv.ydata())
        v = 1.0;
    VertexVelocityField vv(g);
    for (double& v : vv.xdata())
        v = 1.0;
    for (double& v : vv.ydata())
        v = 1.0;

    const LinearFluxModel m;
    const ConvectionBC bc{0.0, true, true};
    const CflPolicy pol{0.45, 0.0, 1.0e30};
    auto rhs = [&](const CellField& cur, double) {
        return RhsEval{convection_rhs(cur, vv, fv, m, theta, kind, bc), 0.0, 0.0};
    };
    auto dtfn = [&](const CellField& cur) { return cfl_dt(cur, vv, m, pol); };
    advance(s, 0.0, t_end, rhs, dtfn, 1000000);
    return s;
}

// L1 distance between a coarse solution and the 2:1 x-restriction of a fine
// one, measured on the first row (the data is y-uniform by construction)
inline double l1_diff_x(const CellField& coarse, const CellField& fine)
{
    const int nc = coarse.grid().nx();
    double acc = 0.0;
    for (int j = 0; j < nc; ++j)
        acc += std::abs(0.5 * (fine(2 * j, 0) + fine(2 * j + 1, 0)) - coarse(j, 0)) *
               coarse.grid().dx();
    return acc;
}

inline double l1_diff_2d(const CellField& coarse, const CellField& fine)
{
    const int nc = coarse.grid().nx();
    double acc = 0.0;
    for (int k = 0; k < nc; ++k)
        for (int j = 0; j < nc; ++j)
            acc += std::abs(0.25 * ((fine(2 * j, 2 * k) + fine(2 * j + 1, 2 * k + 1)) +
                                    (fine(2 * j + 1, 2 * k) + fine(2 * j, 2 * k + 1))) -
                            coarse(j, k)) *
                   coarse.grid().cell_area();
    return acc;
}

} // namespace detail

/// Self-convergence for x-advection of a sine profile on a periodic strip,
/// run to half a domain crossing at each resolution in `levels`.
inline ConvergenceTable linear_advection_study_1d(SchemeKind kind, double theta = 1.8,
                                                  std::vector<int> levels = {64, 128, 256})
{
    const double t_end = 0.5;
    ConvergenceTable table;
    table.scheme = kind;
    std::vector<CellField> sols;
    sols.reserve(levels.size());
    for (int n : levels)
        sols.push_back(detail::advect_x_periodic(n, 2, t_end, theta, kind));
    for (size_t i = 0; i + 1 < sols.size(); ++i) {
        ConvergenceRow row;
        row.n = levels[i];
        row.diff = detail::l1_diff_x(sols[i], sols[i + 1]);
        table.rows.push_back(row);
    }
    for (size_t i = 1; i < table.rows.size(); ++i)
        table.rows[i].rate = std::log2(table.rows[i - 1].diff / table.rows[i].diff);
    return table;
}

/// Same study for diagonal advection of a sine bump on a periodic square.
inline ConvergenceTable linear_advection_study_2d(SchemeKind kind, double theta = 1.8,
                                                  std::vector<int> levels = {32, 64, 128})
{
    const double t_end = 0.25;
    ConvergenceTable table;
    table.scheme = kind;
    std::vector<CellField> sols;
    sols.reserve(levels.size());
    for (int n : levels)
        sols.push_back(detail::advect_diagonal_periodic(n, t_end, theta, kind));
    for (size_t i = 0; i + 1 < sols.size(); ++i) {
        ConvergenceRow row;
        row.n = levels[i];
        row.diff = detail::l1_diff_2d(sols[i], sols[i + 1]);
        table.rows.push_back(row);
    }
    for (size_t i = 1; i < table.rows.size(); ++i)
        table.rows[i].rate = std::log2(table.rows[i - 1].diff / table.rows[i].diff);
    return table;
}

inline void print_convergence(std::ostream& os, const ConvergenceTable& t, const char* label)
{
    const char* name = t.scheme == SchemeKind::sd2_2d   ? "sd2_2d"
                       : t.scheme == SchemeKind::sd1_2d ? "sd1_2d"
                                                        : "kt_dxd";
    os << label << " (" << name << ")\n";
    os << "  n      L1 diff to 2n     rate\n";
    for (const ConvergenceRow& r : t.rows) {
        os << "  " << r.n << "    " << r.diff;
        if (r.rate != 0.0)
            os << "    " << r.rate;
        os << '\n';
    }
}

} // namespace sdflow
