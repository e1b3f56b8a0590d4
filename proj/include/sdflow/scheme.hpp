#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"
#include "sdflow/reconstruction.hpp"

namespace sdflow {

enum class SchemeKind {
    sd2_2d, // second-order central scheme with corner-coupled fluxes
    sd1_2d, // its first-order reduction (Rusanov)
    kt_dxd  // dimension-by-dimension baseline on face velocities
};

/// Convective boundary treatment. Closed and open boundaries are told apart
/// by the prescribed face velocity: zero means no flow, pointing inward means
/// injection at injected_saturation, pointing outward means free outflow of
/// the adjacent cell state.
struct ConvectionBC {
    double injected_saturation = 0.85;
    bool periodic_x = false;
    bool periodic_y = false;
};

/// Maximal local wave speeds per face. cx(j,k) bounds the x-face between
/// cells (j-1,k) and (j,k); dy mirrors it. Entries on non-periodic boundary
/// faces stay zero since those fluxes are prescribed.
struct LocalSpeeds {
    LocalSpeeds() = default;
    explicit LocalSpeeds(const Grid2D& g)
        : grid(g),
          cx(static_cast<size_t>((g.nx() + 1) * g.ny()), 0.0),
          dy(static_cast<size_t>(g.nx() * (g.ny() + 1)), 0.0)
    {
    }

    Grid2D grid;
    std::vector<double> cx, dy;

    size_t xidx(int j, int k) const { return static_cast<size_t>(k * (grid.nx() + 1) + j); }
    size_t yidx(int j, int k) const { return static_cast<size_t>(k * grid.nx() + j); }
};

/// Per-face speeds: each face first gets the wave-speed bound of its two cell
/// averages times the larger |v| at its bounding vertices, then neighboring
/// faces in the transverse direction are folded in by a running max so the
/// corner-coupled flux sees every wave that can reach it.
template <class Model>
LocalSpeeds local_speeds(const CellField& s, const VertexVelocityField& vv, const Model& m,
                         const ConvectionBC& bc = ConvectionBC())
{
    const Grid2D& g = s.grid();
    if (!g.same_layout(vv.grid()))
        throw config_error("local_speeds: fields on different grids");
    const int nx = g.nx(), ny = g.ny();
    LocalSpeeds sp(g);

    std::vector<double> ax(sp.cx.size(), 0.0), ay(sp.dy.size(), 0.0);
    for (int k = 0; k < ny; ++k) {
        for (int jf = bc.periodic_x ? 0 : 1; jf < nx; ++jf) {
            const int jl = jf == 0 ? nx - 1 : jf - 1;
            const double vmax = std::max(std::abs(vv.x(jf, k)), std::abs(vv.x(jf, k + 1)));
            ax[sp.xidx(jf, k)] = m.wave_speed_bound(s(jl, k), s(jf, k)) * vmax;
        }
        if (bc.periodic_x)
            ax[sp.xidx(nx, k)] = ax[sp.xidx(0, k)];
    }
    for (int kf = bc.periodic_y ? 0 : 1; kf < ny; ++kf) {
        const int kl = kf == 0 ? ny - 1 : kf - 1;
        for (int j = 0; j < nx; ++j) {
            const double vmax = std::max(std::abs(vv.y(j, kf)), std::abs(vv.y(j + 1, kf)));
            ay[sp.yidx(j, kf)] = m.wave_speed_bound(s(j, kl), s(j, kf)) * vmax;
        }
    }
    if (bc.periodic_y)
        for (int j = 0; j < nx; ++j)
            ay[sp.yidx(j, ny)] = ay[sp.yidx(j, 0)];

    for (int k = 0; k < ny; ++k) {
        for (int jf = 0; jf <= nx; ++jf) {
            double c = ax[sp.xidx(jf, k)];
            if (k > 0)
                c = std::max(c, ax[sp.xidx(jf, k - 1)]);
            else if (bc.periodic_y)
                c = std::max(c, ax[sp.xidx(jf, ny - 1)]);
            if (k < ny - 1)
                c = std::max(c, ax[sp.xidx(jf, k + 1)]);
            else if (bc.periodic_y)
                c = std::max(c, ax[sp.xidx(jf, 0)]);
            sp.cx[sp.xidx(jf, k)] = c;
        }
    }
    for (int kf = 0; kf <= ny; ++kf) {
        for (int j = 0; j < nx; ++j) {
            double d = ay[sp.yidx(j, kf)];
            if (j > 0)
                d = std::max(d, ay[sp.yidx(j - 1, kf)]);
            else if (bc.periodic_x)
                d = std::max(d, ay[sp.yidx(nx - 1, kf)]);
            if (j < nx - 1)
                d = std::max(d, ay[sp.yidx(j + 1, kf)]);
            else if (bc.periodic_x)
                d = std::max(d, ay[sp.yidx(0, kf)]);
            sp.dy[sp.yidx(j, kf)] = d;
        }
    }
    return sp;
}

/// Numerical fluxes on faces, laid out like a FaceVelocityField.
struct FluxField {
    FluxField() = default;
    explicit FluxField(const Grid2D& g)
        : grid(g),
          hx(static_cast<size_t>((g.nx() + 1) * g.ny()), 0.0),
          hy(static_cast<size_t>(g.nx() * (g.ny() + 1)), 0.0)
    {
    }

    Grid2D grid;
    std::vector<double> hx, hy;

    size_t xidx(int j, int k) const { return static_cast<size_t>(k * (grid.nx() + 1) + j); }
    size_t yidx(int j, int k) const { return static_cast<size_t>(k * grid.nx() + j); }
};

namespace detail {

// Central flux through one face from the two bounding vertices: at each
// vertex the two adjacent cell reconstructions are flux-averaged against the
// vertex velocity, then the local-speed dissipation acts on the one-sided
// face values.
inline double central_face_flux(double v_a, double f_plus_a, double f_minus_a,
                                double v_b, double f_plus_b, double f_minus_b,
                                double speed, double s_plus, double s_minus)
{
    return 0.25 * (v_a * (f_plus_a + f_minus_a) + v_b * (f_plus_b + f_minus_b)) -
           0.5 * speed * (s_plus - s_minus);
}

inline double boundary_face_flux(double v, bool low_side, double f_inj, double f_cell)
{
    if (v == 0.0)
        return 0.0;
    const bool inward = low_side ? v > 0.0 : v < 0.0;
    return v * (inward ? f_inj : f_cell);
}

} // namespace detail

template <class Model>
FluxField compute_fluxes(const CellField& s, const SlopeField& sl,
                         const VertexVelocityField& vv, const FaceVelocityField& fv,
                         const LocalSpeeds& sp, const Model& m, SchemeKind kind,
                         const ConvectionBC& bc = ConvectionBC())
{
    const Grid2D& g = s.grid();
    if (!g.same_layout(sl.grid) || !g.same_layout(vv.grid()) || !g.same_layout(fv.grid()) ||
        !g.same_layout(sp.grid))
        throw config_error("compute_fluxes: fields on different grids");

    if (kind == SchemeKind::sd1_2d)
        return compute_fluxes(s, zero_slopes(g), vv, fv, sp, m, SchemeKind::sd2_2d, bc);

    const int nx = g.nx(), ny = g.ny();
    const double hx = 0.5 * g.dx(), hy = 0.5 * g.dy();
    const double f_inj = m.fractional_flow(bc.injected_saturation);
    const size_t n = static_cast<size_t>(g.cell_count());
    FluxField H(g);

    // one-sided values of each cell at its own face midpoints
    std::vector<double> se(n), sw(n), sn(n), ss(n);
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) {
            const size_t i = static_cast<size_t>(g.cell_index(j, k));
            const double sb = s(j, k), gx = sl.sx[i], gy = sl.sy[i];
            se[i] = sb + hx * gx;
            sw[i] = sb - hx * gx;
            sn[i] = sb + hy * gy;
            ss[i] = sb - hy * gy;
        }
    }

    if (kind == SchemeKind::kt_dxd) {
        for (int k = 0; k < ny; ++k) {
            for (int jf = 0; jf <= nx; ++jf) {
                const double v = fv.x(jf, k);
                double h;
                if (!bc.periodic_x && (jf == 0 || jf == nx)) {
                    const int jc = jf == 0 ? 0 : nx - 1;
                    h = detail::boundary_face_flux(v, jf == 0, f_inj,
                                                   m.fractional_flow(s(jc, k)));
                } else if (bc.periodic_x && jf == nx) {
                    h = H.hx[H.xidx(0, k)];
                } else {
                    const int jl = jf == 0 ? nx - 1 : jf - 1;
                    const size_t il = static_cast<size_t>(g.cell_index(jl, k));
                    const size_t ir = static_cast<size_t>(g.cell_index(jf, k));
                    const double sm = se[il], sp_ = sw[ir];
                    const double a = std::abs(v) * m.wave_speed_bound(sm, sp_);
                    h = 0.5 * v * (m.fractional_flow(sp_) + m.fractional_flow(sm)) -
                        0.5 * a * (sp_ - sm);
                }
                H.hx[H.xidx(jf, k)] = h;
            }
        }
        for (int kf = 0; kf <= ny; ++kf) {
            for (int j = 0; j < nx; ++j) {
                const double v = fv.y(j, kf);
                double h;
                if (!bc.periodic_y && (kf == 0 || kf == ny)) {
                    const int kc = kf == 0 ? 0 : ny - 1;
                    h = detail::boundary_face_flux(v, kf == 0, f_inj,
                                                   m.fractional_flow(s(j, kc)));
                } else if (bc.periodic_y && kf == ny) {
                    h = H.hy[H.yidx(j, 0)];
                } else {
                    const int kl = kf == 0 ? ny - 1 : kf - 1;
                    const size_t il = static_cast<size_t>(g.cell_index(j, kl));
                    const size_t ir = static_cast<size_t>(g.cell_index(j, kf));
                    const double sm = sn[il], sp_ = ss[ir];
                    const double a = std::abs(v) * m.wave_speed_bound(sm, sp_);
                    h = 0.5 * v * (m.fractional_flow(sp_) + m.fractional_flow(sm)) -
                        0.5 * a * (sp_ - sm);
                }
                H.hy[H.yidx(j, kf)] = h;
            }
        }
        return H;
    }

    // corner reconstructions of each cell and their flux values
    std::vector<double> fll(n), flr(n), ful(n), fur(n);
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) {
            const size_t i = static_cast<size_t>(g.cell_index(j, k));
            const double sb = s(j, k), gx = sl.sx[i], gy = sl.sy[i];
            fll[i] = m.fractional_flow(corner_value(sb, gx, gy, -hx, -hy));
            flr[i] = m.fractional_flow(corner_value(sb, gx, gy, hx, -hy));
            ful[i] = m.fractional_flow(corner_value(sb, gx, gy, -hx, hy));
            fur[i] = m.fractional_flow(corner_value(sb, gx, gy, hx, hy));
        }
    }

    for (int k = 0; k < ny; ++k) {
        for (int jf = 0; jf <= nx; ++jf) {
            double h;
            if (!bc.periodic_x && (jf == 0 || jf == nx)) {
                const int jc = jf == 0 ? 0 : nx - 1;
                h = detail::boundary_face_flux(fv.x(jf, k), jf == 0, f_inj,
                                               m.fractional_flow(s(jc, k)));
            } else if (bc.periodic_x && jf == nx) {
                h = H.hx[H.xidx(0, k)];
            } else {
                const int jl = jf == 0 ? nx - 1 : jf - 1;
                const size_t il = static_cast<size_t>(g.cell_index(jl, k));
                const size_t ir = static_cast<size_t>(g.cell_index(jf, k));
                h = detail::central_face_flux(vv.x(jf, k + 1), ful[ir], fur[il],
                                              vv.x(jf, k), fll[ir], flr[il],
                                              sp.cx[sp.xidx(jf, k)], sw[ir], se[il]);
            }
            H.hx[H.xidx(jf, k)] = h;
        }
    }
    for (int kf = 0; kf <= ny; ++kf) {
        for (int j = 0; j < nx; ++j) {
            double h;
            if (!bc.periodic_y && (kf == 0 || kf == ny)) {
                const int kc = kf == 0 ? 0 : ny - 1;
                h = detail::boundary_face_flux(fv.y(j, kf), kf == 0, f_inj,
                                               m.fractional_flow(s(j, kc)));
            } else if (bc.periodic_y && kf == ny) {
                h = H.hy[H.yidx(j, 0)];
            } else {
                const int kl = kf == 0 ? ny - 1 : kf - 1;
                const size_t il = static_cast<size_t>(g.cell_index(j, kl));
                const size_t ir = static_cast<size_t>(g.cell_index(j, kf));
                h = detail::central_face_flux(vv.y(j + 1, kf), flr[ir], fur[il],
                                              vv.y(j, kf), fll[ir], ful[il],
                                              sp.dy[sp.yidx(j, kf)], ss[ir], sn[il]);
            }
            H.hy[H.yidx(j, kf)] = h;
        }
    }
    return H;
}

/// Volumetric divergence each cell's flux stencil assigns to a uniform
/// saturation state: the corner-coupled schemes average vertex velocities
/// across each interior face, the dimension-split one reads faces directly,
/// and prescribed boundary faces count as-is. Zero in the interior away from
/// wells; the saturation source terms balance against this field so that
/// uniform states stay exactly stationary.
inline CellField uniform_state_divergence(const VertexVelocityField& vv,
                                          const FaceVelocityField& fv, SchemeKind kind,
                                          const ConvectionBC& bc = ConvectionBC())
{
    const Grid2D& g = fv.grid();
    if (!g.same_layout(vv.grid()))
        throw config_error("uniform_state_divergence: fields on different grids");
    const int nx = g.nx(), ny = g.ny();
    CellField out(g);
    const bool faces = kind == SchemeKind::kt_dxd;
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) {
            const int je = bc.periodic_x && j == nx - 1 ? 0 : j + 1;
            const int kn = bc.periodic_y && k == ny - 1 ? 0 : k + 1;
            const double xw = (faces || (j == 0 && !bc.periodic_x))
                                  ? fv.x(j, k)
                                  : 0.5 * (vv.x(j, k) + vv.x(j, k + 1));
            const double xe = (faces || (j == nx - 1 && !bc.periodic_x))
                                  ? fv.x(j + 1, k)
                                  : 0.5 * (vv.x(je, k) + vv.x(je, k + 1));
            const double ys = (faces || (k == 0 && !bc.periodic_y))
                                  ? fv.y(j, k)
                                  : 0.5 * (vv.y(j, k) + vv.y(j + 1, k));
            const double yn = (faces || (k == ny - 1 && !bc.periodic_y))
                                  ? fv.y(j, k + 1)
                                  : 0.5 * (vv.y(j, kn) + vv.y(j + 1, kn));
            out(j, k) = (xe - xw) * g.dy() + (yn - ys) * g.dx();
        }
    }
    return out;
}

/// Conservative divergence of the fluxes: dS/dt per cell.
inline CellField divergence_rhs(const FluxField& H)
{
    const Grid2D& g = H.grid;
    const double inv_dx = 1.0 / g.dx(), inv_dy = 1.0 / g.dy();
    CellField out(g);
    for (int k = 0; k < g.ny(); ++k) {
        for (int j = 0; j < g.nx(); ++j) {
            const double tx = (H.hx[H.xidx(j + 1, k)] - H.hx[H.xidx(j, k)]) * inv_dx;
            const double ty = (H.hy[H.yidx(j, k + 1)] - H.hy[H.yidx(j, k)]) * inv_dy;
            out(j, k) = -(tx + ty);
        }
    }
    return out;
}

/// Slopes, speeds, fluxes and divergence in one call.
template <class Model>
CellField convection_rhs(const CellField& s, const VertexVelocityField& vv,
                         const FaceVelocityField& fv, const Model& m, double theta,
                         SchemeKind kind, const ConvectionBC& bc = ConvectionBC())
{
    const SlopeField sl = kind == SchemeKind::sd1_2d
                              ? zero_slopes(s.grid())
                              : compute_slopes(s, theta, bc.periodic_x, bc.periodic_y);
    const LocalSpeeds sp = local_speeds(s, vv, m, bc);
    return divergence_rhs(compute_fluxes(s, sl, vv, fv, sp, m, kind, bc));
}

} // namespace sdflow
