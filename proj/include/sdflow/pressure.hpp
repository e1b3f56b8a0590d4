#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"

namespace sdflow {

/// Prescribed normal velocities on the outer boundary faces, one value per
/// face. Zero everywhere models a sealed domain.
struct BoundaryFluxes {
    BoundaryFluxes() = default;
    explicit BoundaryFluxes(const Grid2D& g)
        : left(static_cast<size_t>(g.ny()), 0.0),
          right(static_cast<size_t>(g.ny()), 0.0),
          bottom(static_cast<size_t>(g.nx()), 0.0),
          top(static_cast<size_t>(g.nx()), 0.0)
    {
    }

    std::vector<double> left, right; // v_x at x-faces j=0 and j=nx
    std::vector<double> bottom, top; // v_y at y-faces k=0 and k=ny

    /// Net volumetric inflow (positive in) through all four edges.
    double net_inflow(const Grid2D& g) const
    {
        double q = 0.0;
        for (int k = 0; k < g.ny(); ++k)
            q += (left[static_cast<size_t>(k)] - right[static_cast<size_t>(k)]) * g.dy();
        for (int j = 0; j < g.nx(); ++j)
            q += (bottom[static_cast<size_t>(j)] - top[static_cast<size_t>(j)]) * g.dx();
        return q;
    }
};

/// Point source/sink in one cell. Positive rate injects fluid entering at
/// injected_saturation; negative rate produces whatever the cell holds.
struct Well {
    int j = 0, k = 0;
    double rate = 0.0;
    double injected_saturation = 0.85;
};

struct WellSet {
    std::vector<Well> wells;

    void validate(const Grid2D& g) const
    {
        double net = 0.0, scale = 0.0;
        for (const Well& w : wells) {
            if (w.j < 0 || w.j >= g.nx() || w.k < 0 || w.k >= g.ny())
                throw config_error("WellSet: well cell (" + std::to_string(w.j) + "," +
                                   std::to_string(w.k) + ") outside the grid");
            net += w.rate;
            scale += std::abs(w.rate);
        }
        if (std::abs(net) > 1e-12 * std::max(scale, 1.0))
            throw config_error("WellSet: rates must balance, net=" + std::to_string(net));
    }
};

/// Harmonic-mean mobility-permeability products on interior faces; boundary
/// faces carry zero since no pressure difference acts across them.
struct TransmissibilityField {
    TransmissibilityField() = default;
    explicit TransmissibilityField(const Grid2D& g)
        : grid(g),
          tx(static_cast<size_t>((g.nx() + 1) * g.ny()), 0.0),
          ty(static_cast<size_t>(g.nx() * (g.ny() + 1)), 0.0)
    {
    }

    Grid2D grid;
    std::vector<double> tx, ty;

    size_t xidx(int j, int k) const { return static_cast<size_t>(k * (grid.nx() + 1) + j); }
    size_t yidx(int j, int k) const { return static_cast<size_t>(k * grid.nx() + j); }
};

namespace detail {

inline double harmonic_mean(double a, double b)
{
    const double s = a + b;
    return s > 0.0 ? 2.0 * a * b / s : 0.0;
}

} // namespace detail

template <class Model>
TransmissibilityField transmissibilities(const CellField& s, const CellField& perm,
                                         const Model& m)
{
    const Grid2D& g = s.grid();
    if (!g.same_layout(perm.grid()))
        throw config_error("transmissibilities: fields on different grids");
    CellField lk(g);
    for (int k = 0; k < g.ny(); ++k)
        for (int j = 0; j < g.nx(); ++j)
            lk(j, k) = m.mobility(s(j, k)) * perm(j, k);
    TransmissibilityField T(g);
    for (int k = 0; k < g.ny(); ++k)
        for (int j = 1; j < g.nx(); ++j)
            T.tx[T.xidx(j, k)] = detail::harmonic_mean(lk(j - 1, k), lk(j, k));
    for (int k = 1; k < g.ny(); ++k)
        for (int j = 0; j < g.nx(); ++j)
            T.ty[T.yidx(j, k)] = detail::harmonic_mean(lk(j, k - 1), lk(j, k));
    return T;
}

struct PressureSolveReport {
    int iterations = 0;
    double rel_residual = 0.0;
};

namespace detail {

// Five-point operator y = A p for the flux-balance system sum_f T_f (p - p_nbr).
// The four neighbor terms are summed pairwise per direction so the rounding
// pattern is invariant under the x/y transpose.
inline void pressure_matvec(const TransmissibilityField& T, const std::vector<double>& p,
                            std::vector<double>& y)
{
    const Grid2D& g = T.grid;
    const int nx = g.nx(), ny = g.ny();
    const double gx = g.dy() / g.dx(), gy = g.dx() / g.dy();
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) {
            const size_t i = static_cast<size_t>(k * nx + j);
            const double aw = gx * T.tx[T.xidx(j, k)];
            const double ae = gx * T.tx[T.xidx(j + 1, k)];
            const double as = gy * T.ty[T.yidx(j, k)];
            const double an = gy * T.ty[T.yidx(j, k + 1)];
            const double pw = j > 0 ? p[i - 1] : 0.0;
            const double pe = j < nx - 1 ? p[i + 1] : 0.0;
            const double ps = k > 0 ? p[i - static_cast<size_t>(nx)] : 0.0;
            const double pn = k < ny - 1 ? p[i + static_cast<size_t>(nx)] : 0.0;
            const double diag = (aw + ae) + (as + an);
            y[i] = diag * p[i] - ((aw * pw + ae * pe) + (as * ps + an * pn));
        }
    }
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline void subtract_mean(std::vector<double>& v)
{
    double mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v)
        x -= mean;
}

} // namespace detail

/// Right-hand side of the pressure system: well rates plus the inflow
/// prescribed on boundary faces, per cell, in volume per time.
inline std::vector<double> pressure_rhs(const Grid2D& g, const WellSet& wells,
                                        const BoundaryFluxes& bc)
{
    std::vector<double> b(static_cast<size_t>(g.cell_count()), 0.0);
    wells.validate(g);
    for (const Well& w : wells.wells)
        b[static_cast<size_t>(g.cell_index(w.j, w.k))] += w.rate;
    for (int k = 0; k < g.ny(); ++k) {
        b[static_cast<size_t>(g.cell_index(0, k))] += bc.left[static_cast<size_t>(k)] * g.dy();
        b[static_cast<size_t>(g.cell_index(g.nx() - 1, k))] -=
            bc.right[static_cast<size_t>(k)] * g.dy();
    }
    for (int j = 0; j < g.nx(); ++j) {
        b[static_cast<size_t>(g.cell_index(j, 0))] += bc.bottom[static_cast<size_t>(j)] * g.dx();
        b[static_cast<size_t>(g.cell_index(j, g.ny() - 1))] -=
            bc.top[static_cast<size_t>(j)] * g.dx();
    }
    return b;
}

/// Jacobi-preconditioned CG for the pure-Neumann pressure system. The RHS is
/// projected onto the compatible (zero-sum) subspace and the returned pressure
/// has zero mean. An optional initial guess warm-starts the iteration.
inline CellField solve_pressure(const TransmissibilityField& T, const WellSet& wells,
                                const BoundaryFluxes& bc, double rtol = 1e-10,
                                int max_iters = 50000, const CellField* initial = nullptr,
                                PressureSolveReport* report = nullptr)
{
    const Grid2D& g = T.grid;
    const size_t n = static_cast<size_t>(g.cell_count());
    std::vector<double> b = pressure_rhs(g, wells, bc);

    double bsum = 0.0, bscale = 0.0;
    for (double v : b) {
        bsum += v;
        bscale += std::abs(v);
    }
    if (std::abs(bsum) > 1e-10 * std::max(bscale, 1e-300))
        throw config_error("solve_pressure: sources and boundary inflow do not balance");
    detail::subtract_mean(b);

    CellField p(g);
    if (initial != nullptr) {
        if (!g.same_layout(initial->grid()))
            throw config_error("solve_pressure: initial guess on a different grid");
        p.data() = initial->data();
        detail::subtract_mean(p.data());
    }

    const double bnorm = std::sqrt(detail::dot(b, b));
    if (bnorm == 0.0) {
        if (report != nullptr)
            *report = {0, 0.0};
        return CellField(g);
    }

    std::vector<double> diag(n);
    {
        const double gx = g.dy() / g.dx(), gy = g.dx() / g.dy();
        for (int k = 0; k < g.ny(); ++k) {
            for (int j = 0; j < g.nx(); ++j) {
                const double aw = gx * T.tx[T.xidx(j, k)];
                const double ae = gx * T.tx[T.xidx(j + 1, k)];
                const double as = gy * T.ty[T.yidx(j, k)];
                const double an = gy * T.ty[T.yidx(j, k + 1)];
                const double d = (aw + ae) + (as + an);
                if (!(d > 0.0))
                    throw numerical_error("solve_pressure: cell (" + std::to_string(j) + "," +
                                          std::to_string(k) + ") is hydraulically isolated");
                diag[static_cast<size_t>(k * g.nx() + j)] = d;
            }
        }
    }

    std::vector<double> r(n), z(n), q(n), d(n);
    detail::pressure_matvec(T, p.data(), q);
    for (size_t i = 0; i < n; ++i)
        r[i] = b[i] - q[i];
    for (size_t i = 0; i < n; ++i)
        z[i] = r[i] / diag[i];
    d = z;
    double rz = detail::dot(r, z);
    double rnorm = std::sqrt(detail::dot(r, r));
    int it = 0;
    while (rnorm > rtol * bnorm) {
        if (it >= max_iters)
            throw numerical_error("solve_pressure: no convergence after " +
                                  std::to_string(max_iters) + " iterations (rel residual " +
                                  std::to_string(rnorm / bnorm) + ")");
        detail::pressure_matvec(T, d, q);
        const double dq = detail::dot(d, q);
        if (!(dq > 0.0))
            throw numerical_error("solve_pressure: lost positive definiteness");
        const double alpha = rz / dq;
        for (size_t i = 0; i < n; ++i)
            p.data()[i] += alpha * d[i];
        for (size_t i = 0; i < n; ++i)
            r[i] -= alpha * q[i];
        for (size_t i = 0; i < n; ++i)
            z[i] = r[i] / diag[i];
        const double rz_new = detail::dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t i = 0; i < n; ++i)
            d[i] = z[i] + beta * d[i];
        rnorm = std::sqrt(detail::dot(r, r));
        ++it;
    }
    detail::subtract_mean(p.data());
    if (report != nullptr)
        *report = {it, rnorm / bnorm};
    return p;
}

/// Darcy velocities on faces: interior ones from the pressure differences,
/// boundary ones copied from the prescription.
inline FaceVelocityField face_velocities(const CellField& p, const TransmissibilityField& T,
                                         const BoundaryFluxes& bc)
{
    const Grid2D& g = p.grid();
    if (!g.same_layout(T.grid))
        throw config_error("face_velocities: fields on different grids");
    const double inv_dx = 1.0 / g.dx(), inv_dy = 1.0 / g.dy();
    FaceVelocityField v(g);
    for (int k = 0; k < g.ny(); ++k) {
        v.x(0, k) = bc.left[static_cast<size_t>(k)];
        v.x(g.nx(), k) = bc.right[static_cast<size_t>(k)];
        for (int j = 1; j < g.nx(); ++j)
            v.x(j, k) = -T.tx[T.xidx(j, k)] * ((p(j, k) - p(j - 1, k)) * inv_dx);
    }
    for (int j = 0; j < g.nx(); ++j) {
        v.y(j, 0) = bc.bottom[static_cast<size_t>(j)];
        v.y(j, g.ny()) = bc.top[static_cast<size_t>(j)];
    }
    for (int k = 1; k < g.ny(); ++k)
        for (int j = 0; j < g.nx(); ++j)
            v.y(j, k) = -T.ty[T.yidx(j, k)] * ((p(j, k) - p(j, k - 1)) * inv_dy);
    return v;
}

/// Vertex velocities as the renormalized average of the face velocities of
/// the cells sharing each vertex: every existing cell contributes the mean of
/// its two faces normal to the component. Interior vertices reproduce the
/// 1/8 six-face stencil; boundary vertices average over the cells present.
inline VertexVelocityField vertex_velocities(const FaceVelocityField& fv)
{
    const Grid2D& g = fv.grid();
    const int nx = g.nx(), ny = g.ny();
    VertexVelocityField vv(g);
    for (int kv = 0; kv <= ny; ++kv) {
        for (int jv = 0; jv <= nx; ++jv) {
            const bool has_l = jv > 0, has_r = jv < nx;
            const bool has_b = kv > 0, has_t = kv < ny;
            // diagonal-pair grouping keeps the sum transpose-invariant
            double cx_ll = 0.0, cx_lr = 0.0, cx_ul = 0.0, cx_ur = 0.0;
            double cy_ll = 0.0, cy_lr = 0.0, cy_ul = 0.0, cy_ur = 0.0;
            int count = 0;
            if (has_l && has_b) {
                cx_ll = fv.x(jv - 1, kv - 1) + fv.x(jv, kv - 1);
                cy_ll = fv.y(jv - 1, kv - 1) + fv.y(jv - 1, kv);
                ++count;
            }
            if (has_r && has_b) {
                cx_lr = fv.x(jv, kv - 1) + fv.x(jv + 1, kv - 1);
                cy_lr = fv.y(jv, kv - 1) + fv.y(jv, kv);
                ++count;
            }
            if (has_l && has_t) {
                cx_ul = fv.x(jv - 1, kv) + fv.x(jv, kv);
                cy_ul = fv.y(jv - 1, kv) + fv.y(jv - 1, kv + 1);
                ++count;
            }
            if (has_r && has_t) {
                cx_ur = fv.x(jv, kv) + fv.x(jv + 1, kv);
                cy_ur = fv.y(jv, kv) + fv.y(jv, kv + 1);
                ++count;
            }
            const double w = 1.0 / (2.0 * count);
            vv.x(jv, kv) = ((cx_ll + cx_ur) + (cx_lr + cx_ul)) * w;
            vv.y(jv, kv) = ((cy_ll + cy_ur) + (cy_lr + cy_ul)) * w;
        }
    }
    return vv;
}

/// Discrete divergence per cell from face velocities.
inline CellField divergence(const FaceVelocityField& fv)
{
    const Grid2D& g = fv.grid();
    const double inv_dx = 1.0 / g.dx(), inv_dy = 1.0 / g.dy();
    CellField out(g);
    for (int k = 0; k < g.ny(); ++k) {
        for (int j = 0; j < g.nx(); ++j) {
            const double tx = (fv.x(j + 1, k) - fv.x(j, k)) * inv_dx;
            const double ty = (fv.y(j, k + 1) - fv.y(j, k)) * inv_dy;
            out(j, k) = tx + ty;
        }
    }
    return out;
}

} // namespace sdflow
