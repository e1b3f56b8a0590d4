#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "sdflow/config.hpp"
#include "sdflow/flow_model.hpp"
#include "sdflow/geostatistics.hpp"
#include "sdflow/grid.hpp"
#include "sdflow/pressure.hpp"
#include "sdflow/scheme.hpp"
#include "sdflow/snapshot.hpp"
#include "sdflow/time_integrator.hpp"

namespace sdflow {

/// Everything run_simulation needs, resolved from a config: grid, rock and
/// fluid data, initial state, boundary prescription and wells.
struct Scenario {
    Grid2D grid;
    CellField permeability;
    CellField initial_saturation;
    BoundaryFluxes boundary;
    WellSet wells;
    RockFluidModel model;
    ConvectionBC convection_bc;
    double total_rate = 0.0; // volumetric injection, volume per day
};

inline Scenario build_scenario(const SimulationConfig& c)
{
    validate_config(c);
    const Grid2D grid(c.nx, c.ny, c.length_x / c.nx, c.length_y / c.ny);
    if (c.scenario != ScenarioKind::slab) {
        if (c.nx != c.ny || c.length_x != c.length_y)
            throw config_error("five-spot scenarios need a square grid on a square domain, got " +
                               std::to_string(c.nx) + "x" + std::to_string(c.ny) + " on " +
                               std::to_string(c.length_x) + "x" + std::to_string(c.length_y));
    }

    Scenario sc{grid,
                CellField(grid),
                CellField(grid, c.initial_saturation),
                BoundaryFluxes(grid),
                WellSet{},
                RockFluidModel({c.s_rw, c.s_ro, c.mu_w, c.mu_o}),
                ConvectionBC{c.injected_saturation, false, false},
                0.0};

    // one pore volume per year = the whole (unit-porosity) domain volume
    const double q = c.injection_rate_pv_per_year * c.length_x * c.length_y / 365.0;
    sc.total_rate = q;
    switch (c.scenario) {
    case ScenarioKind::slab: {
        const double v_in = q / c.length_y;
        for (int k = 0; k < grid.ny(); ++k) {
            sc.boundary.left[static_cast<size_t>(k)] = v_in;
            sc.boundary.right[static_cast<size_t>(k)] = v_in;
        }
        break;
    }
    case ScenarioKind::five_spot_diagonal:
        sc.wells.wells = {{0, 0, q, c.injected_saturation},
                          {grid.nx() - 1, grid.ny() - 1, -q, c.injected_saturation}};
        break;
    case ScenarioKind::five_spot_parallel:
        sc.wells.wells = {{0, 0, 0.5 * q, c.injected_saturation},
                          {grid.nx() - 1, grid.ny() - 1, 0.5 * q, c.injected_saturation},
                          {grid.nx() - 1, 0, -0.5 * q, c.injected_saturation},
                          {0, grid.ny() - 1, -0.5 * q, c.injected_saturation}};
        break;
    }
    sc.wells.validate(grid);

    if (!c.perm_file.empty()) {
        Snapshot snap = read_snapshot_csv(c.perm_file);
        if (snap.field.grid().nx() != grid.nx() || snap.field.grid().ny() != grid.ny())
            throw config_error("perm_file '" + c.perm_file + "' is " +
                               std::to_string(snap.field.grid().nx()) + "x" +
                               std::to_string(snap.field.grid().ny()) + ", config wants " +
                               std::to_string(grid.nx()) + "x" + std::to_string(grid.ny()));
        sc.permeability = CellField(grid);
        sc.permeability.data() = snap.field.data();
        for (double v : sc.permeability.data())
            if (!(v > 0.0) || !std::isfinite(v))
                throw config_error("perm_file '" + c.perm_file +
                                   "' holds nonpositive or non-finite permeability");
    } else {
        sc.permeability = generate_permeability(
            {c.nx, c.ny, c.seed, c.perm_mean_md, c.perm_cv, c.perm_spectral_exponent}, grid);
    }
    return sc;
}

struct StepRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double s_min = 0.0, s_max = 0.0;
    double cum_water_in = 0.0, cum_water_out = 0.0;
    double produced_water_fraction = 0.0;
};

struct SimulationRecord {
    std::vector<StepRecord> history;
    std::vector<std::string> snapshot_files;
    long steps = 0;
    int pressure_solves = 0;
    double initial_mass = 0.0, final_mass = 0.0;
    double water_in = 0.0, water_out = 0.0; // time-integrated
    double max_divergence_residual = 0.0;   // scaled by the total face flux
    double max_pressure_residual = 0.0;     // relative, as reported by CG
    CellField final_saturation;
    CellField permeability;
};

namespace detail {

inline void scan_bounds(const CellField& s, double t, double& smin, double& smax)
{
    smin = 1e300;
    smax = -1e300;
    for (double v : s.data()) {
        smin = std::min(smin, v);
        smax = std::max(smax, v);
    }
    if (!std::isfinite(smin) || !std::isfinite(smax) || smin < -1e-6 || smax > 1.0 + 1e-6)
        throw numerical_error("saturation left [0,1] at t=" + std::to_string(t) + " (min " +
                              std::to_string(smin) + ", max " + std::to_string(smax) + ")");
}

inline std::string snapshot_basename(double t)
{
    return "saturation_t" + format_double(t);
}

} // namespace detail

/// Operator-split IMPES march: solve pressure, interpolate velocities, take
/// CFL-limited Heun steps until the cadence or an output time interrupts,
/// repeat. Snapshots land exactly on the requested times.
inline SimulationRecord run_simulation(const SimulationConfig& cfg, std::ostream* log = nullptr)
{
    for (const std::string& w : validate_config(cfg))
        if (log != nullptr)
            *log << "warning: " << w << '\n';
    Scenario sc = build_scenario(cfg);
    const Grid2D& g = sc.grid;
    const RockFluidModel& m = sc.model;
    const double area = g.cell_area();

    const CflPolicy pol{cfg.cfl_sigma, cfg.dt_min_days, cfg.dt_max_days};
    pol.validate();

    std::vector<double> schedule;
    for (double t : cfg.snapshot_days)
        if (t > 0.0 && t <= cfg.total_days)
            schedule.push_back(t);
    schedule.push_back(cfg.total_days);
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

    std::filesystem::create_directories(cfg.output_dir);
    const std::filesystem::path outdir(cfg.output_dir);
    write_snapshot_csv((outdir / "permeability.csv").string(), sc.permeability, 0.0);

    SimulationRecord rec;
    rec.permeability = sc.permeability;
    CellField s = sc.initial_saturation;
    rec.initial_mass = total_mass(s);
    rec.history.reserve(4096);

    // prescribed boundary faces enter the discrete divergence directly, so
    // the velocity field must balance the well sources alone
    std::vector<double> well_source(static_cast<size_t>(g.cell_count()), 0.0);
    for (const Well& w : sc.wells.wells)
        well_source[static_cast<size_t>(g.cell_index(w.j, w.k))] += w.rate;
    double source_scale = 0.0;
    for (const Well& w : sc.wells.wells)
        source_scale += std::abs(w.rate);
    for (int k = 0; k < g.ny(); ++k)
        source_scale += (std::abs(sc.boundary.left[static_cast<size_t>(k)]) +
                         std::abs(sc.boundary.right[static_cast<size_t>(k)])) *
                        g.dy();
    for (int j = 0; j < g.nx(); ++j)
        source_scale += (std::abs(sc.boundary.bottom[static_cast<size_t>(j)]) +
                         std::abs(sc.boundary.top[static_cast<size_t>(j)])) *
                        g.dx();
    CellField p;
    bool warm = false;
    double t = 0.0;
    double cum_in = 0.0, cum_out = 0.0;
    size_t next_snap = 0;

    while (t < cfg.total_days) {
        const TransmissibilityField T = transmissibilities(s, sc.permeability, m);
        PressureSolveReport rep;
        p = solve_pressure(T, sc.wells, sc.boundary, cfg.pressure_rtol, cfg.pressure_max_iters,
                           warm ? &p : nullptr, &rep);
        warm = true;
        ++rec.pressure_solves;
        rec.max_pressure_residual = std::max(rec.max_pressure_residual, rep.rel_residual);
        const FaceVelocityField fv = face_velocities(p, T, sc.boundary);
        const VertexVelocityField vv = vertex_velocities(fv);
        const CellField qeff =
            uniform_state_divergence(vv, fv, cfg.scheme, sc.convection_bc);

        if (source_scale > 0.0) {
            const CellField div = divergence(fv);
            double worst = 0.0;
            for (int k = 0; k < g.ny(); ++k)
                for (int j = 0; j < g.nx(); ++j)
                    worst = std::max(worst,
                                     std::abs(div(j, k) * area -
                                              well_source[static_cast<size_t>(
                                                  g.cell_index(j, k))]));
            rec.max_divergence_residual =
                std::max(rec.max_divergence_residual, worst / source_scale);
        }

        // total production capacity of this velocity field, for the water cut
        double total_out_rate = 0.0;
        for (const Well& w : sc.wells.wells)
            if (w.rate < 0.0)
                total_out_rate -= w.rate;
        for (int k = 0; k < g.ny(); ++k) {
            if (sc.boundary.right[static_cast<size_t>(k)] > 0.0)
                total_out_rate += sc.boundary.right[static_cast<size_t>(k)] * g.dy();
            if (sc.boundary.left[static_cast<size_t>(k)] < 0.0)
                total_out_rate -= sc.boundary.left[static_cast<size_t>(k)] * g.dy();
        }
        for (int j = 0; j < g.nx(); ++j) {
            if (sc.boundary.top[static_cast<size_t>(j)] > 0.0)
                total_out_rate += sc.boundary.top[static_cast<size_t>(j)] * g.dx();
            if (sc.boundary.bottom[static_cast<size_t>(j)] < 0.0)
                total_out_rate -= sc.boundary.bottom[static_cast<size_t>(j)] * g.dx();
        }

        auto rhs = [&](const CellField& cur, double) -> RhsEval {
            const SlopeField sl = cfg.scheme == SchemeKind::sd1_2d
                                      ? zero_slopes(g)
                                      : compute_slopes(cur, cfg.theta);
            const LocalSpeeds sp = local_speeds(cur, vv, m, sc.convection_bc);
            const FluxField H =
                compute_fluxes(cur, sl, vv, fv, sp, m, cfg.scheme, sc.convection_bc);
            RhsEval e{divergence_rhs(H), 0.0, 0.0};
            for (int k = 0; k < g.ny(); ++k) {
                const double fl = H.hx[H.xidx(0, k)] * g.dy();
                if (fl >= 0.0)
                    e.water_in += fl;
                else
                    e.water_out -= fl;
                const double fr = H.hx[H.xidx(g.nx(), k)] * g.dy();
                if (fr >= 0.0)
                    e.water_out += fr;
                else
                    e.water_in -= fr;
            }
            for (int j = 0; j < g.nx(); ++j) {
                const double fb = H.hy[H.yidx(j, 0)] * g.dx();
                if (fb >= 0.0)
                    e.water_in += fb;
                else
                    e.water_out -= fb;
                const double ft = H.hy[H.yidx(j, g.ny())] * g.dx();
                if (ft >= 0.0)
                    e.water_out += ft;
                else
                    e.water_in -= ft;
            }
            // per-cell balance against the stencil's own divergence; zero in
            // the interior, active at well cells and the boundary bands they
            // excite, where it pins uniform states exactly
            for (int k = 0; k < g.ny(); ++k) {
                for (int j = 0; j < g.nx(); ++j) {
                    const double q = qeff(j, k);
                    if (q == 0.0)
                        continue;
                    const double corr = q * m.fractional_flow(cur(j, k));
                    e.dsdt(j, k) += corr / area;
                    if (corr >= 0.0)
                        e.water_in += corr;
                    else
                        e.water_out -= corr;
                }
            }
            // injectors add water at inlet composition on top of the balance
            // term; producers are covered by it entirely
            for (const Well& w : sc.wells.wells) {
                if (w.rate > 0.0) {
                    const double win =
                        w.rate * (m.fractional_flow(w.injected_saturation) -
                                  m.fractional_flow(cur(w.j, w.k)));
                    e.dsdt(w.j, w.k) += win / area;
                    e.water_in += win;
                }
            }
            return e;
        };

        const double interval_end = std::min(t + cfg.pressure_dt_days, cfg.total_days);
        int steps_in_interval = 0;
        while (t < interval_end && steps_in_interval < cfg.pressure_steps_per_update) {
            double stop = interval_end;
            if (next_snap < schedule.size())
                stop = std::min(stop, schedule[next_snap]);
            const double dt_stable = cfl_dt(s, vv, m, pol);
            double dt = dt_stable;
            double t_next = t + dt;
            if (dt >= stop - t) {
                dt = stop - t;
                t_next = stop;
            }
            if (!(dt > 0.0) || t_next == t)
                throw numerical_error("run_simulation: step size vanished at t=" +
                                      std::to_string(t));
            StepEval step = rk2_step(s, t, dt, rhs);
            s = std::move(step.s);
            t = t_next;
            ++rec.steps;
            ++steps_in_interval;
            if (rec.steps > cfg.max_micro_steps)
                throw numerical_error("run_simulation: exceeded max_micro_steps=" +
                                      std::to_string(cfg.max_micro_steps) + " at t=" +
                                      std::to_string(t));
            cum_in += dt * step.water_in;
            cum_out += dt * step.water_out;

            StepRecord r;
            r.t = t;
            r.dt = dt;
            detail::scan_bounds(s, t, r.s_min, r.s_max);
            r.mass = total_mass(s);
            r.cum_water_in = cum_in;
            r.cum_water_out = cum_out;
            r.produced_water_fraction =
                total_out_rate > 0.0 ? step.water_out / total_out_rate : 0.0;
            rec.history.push_back(r);

            if (next_snap < schedule.size() && t == schedule[next_snap]) {
                const std::string base = detail::snapshot_basename(t);
                const std::string csv = (outdir / (base + ".csv")).string();
                write_snapshot_csv(csv, s, t);
                rec.snapshot_files.push_back(csv);
                if (cfg.write_vtk) {
                    const std::string vtk = (outdir / (base + ".vtk")).string();
                    write_snapshot_vtk(vtk, s, t);
                    rec.snapshot_files.push_back(vtk);
                }
                ++next_snap;
            }
        }
    }

    rec.final_saturation = s;
    rec.final_mass = total_mass(s);
    rec.water_in = cum_in;
    rec.water_out = cum_out;

    {
        std::ofstream hf((outdir / "history.csv").string(), std::ios::binary);
        if (!hf)
            throw config_error("run_simulation: cannot write history.csv in '" +
                               cfg.output_dir + "'");
        hf << "t,dt,mass,s_min,s_max,cum_water_in,cum_water_out,produced_water_fraction\n";
        for (const StepRecord& r : rec.history) {
            hf << detail::format_double(r.t) << ',' << detail::format_double(r.dt) << ','
               << detail::format_double(r.mass) << ',' << detail::format_double(r.s_min) << ','
               << detail::format_double(r.s_max) << ',' << detail::format_double(r.cum_water_in)
               << ',' << detail::format_double(r.cum_water_out) << ','
               << detail::format_double(r.produced_water_fraction) << '\n';
        }
    }
    if (log != nullptr)
        *log << "completed " << rec.steps << " steps, " << rec.pressure_solves
             << " pressure solves, final mass " << rec.final_mass << '\n';
    return rec;
}

} // namespace sdflow
