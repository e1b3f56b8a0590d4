#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"

namespace sdflow {

struct CflPolicy {
    double sigma = 0.45;   // fraction of the stability bound 1/2, exclusive
    double dt_min = 0.0;
    double dt_max = 1.0e30;

    void validate() const
    {
        if (!(sigma > 0.0 && sigma < 0.5))
            throw config_error("CflPolicy: sigma must lie in (0, 0.5), got " +
                               std::to_string(sigma));
        if (!(dt_min >= 0.0) || !(dt_max > 0.0) || dt_min > dt_max)
            throw config_error("CflPolicy: need 0 <= dt_min <= dt_max");
    }
};

/// Largest stable step for the convective update: sigma times the tighter of
/// the two directional bounds dx / max|v^x f'| and dy / max|v^y f'|, where the
/// velocity maxima run over all vertices and |f'| is the model's global bound.
/// Zero flow yields dt_max.
template <class Model>
double cfl_dt(const CellField& /*s*/, const VertexVelocityField& vv, const Model& m,
              const CflPolicy& pol)
{
    pol.validate();
    double vx = 0.0, vy = 0.0;
    for (double v : vv.xdata())
        vx = std::max(vx, std::abs(v));
    for (double v : vv.ydata())
        vy = std::max(vy, std::abs(v));
    const double fp = m.max_dfds();
    double dt = pol.dt_max;
    if (vx * fp > 0.0)
        dt = std::min(dt, pol.sigma * (vv.grid().dx() / (vx * fp)));
    if (vy * fp > 0.0)
        dt = std::min(dt, pol.sigma * (vv.grid().dy() / (vy * fp)));
    return std::clamp(dt, pol.dt_min, pol.dt_max);
}

/// Right-hand-side evaluation: the rate of change plus the instantaneous
/// water inflow/outflow rates it implies (boundary fluxes plus wells), kept
/// so mass bookkeeping matches the integrator stage for stage.
struct RhsEval {
    CellField dsdt;
    double water_in = 0.0;
    double water_out = 0.0;
};

struct StepEval {
    CellField s;
    double water_in = 0.0;  // Heun-averaged rates over the step
    double water_out = 0.0;
};

/// One Heun step: predictor s1 = s + dt L(s), corrector (s + s1 + dt L(s1))/2.
template <class Rhs>
StepEval rk2_step(const CellField& s, double t, double dt, Rhs&& rhs)
{
    const RhsEval e1 = rhs(s, t);
    CellField s1(s.grid());
    {
        const std::vector<double>& a = s.data();
        const std::vector<double>& d = e1.dsdt.data();
        std::vector<double>& o = s1.data();
        for (size_t i = 0; i < o.size(); ++i)
            o[i] = a[i] + dt * d[i];
    }
    const RhsEval e2 = rhs(s1, t + dt);
    StepEval out{CellField(s.grid()), 0.5 * (e1.water_in + e2.water_in),
                 0.5 * (e1.water_out + e2.water_out)};
    const std::vector<double>& a = s.data();
    const std::vector<double>& b = s1.data();
    const std::vector<double>& d = e2.dsdt.data();
    std::vector<double>& o = out.s.data();
    for (size_t i = 0; i < o.size(); ++i)
        o[i] = 0.5 * ((a[i] + b[i]) + dt * d[i]);
    return out;
}

struct AdvanceResult {
    long steps = 0;
    double water_in = 0.0;  // time-integrated
    double water_out = 0.0;
};

struct NullObserver {
    void operator()(double /*t*/, double /*dt*/, const CellField& /*s*/, double /*win*/,
                    double /*wout*/) const
    {
    }
};

/// March s from t0 to t1 with CFL-limited Heun steps, clipping the last step
/// onto t1 exactly. dtfn returns the stable step for the current state.
template <class Rhs, class DtFn, class Observer = NullObserver>
AdvanceResult advance(CellField& s, double t0, double t1, Rhs&& rhs, DtFn&& dtfn,
                      long max_steps, Observer&& obs = Observer())
{
    AdvanceResult res;
    double t = t0;
    while (t < t1) {
        double dt = dtfn(s);
        if (!(dt > 0.0))
            throw numerical_error("advance: nonpositive step size at t=" + std::to_string(t));
        double t_next = t + dt;
        if (dt >= t1 - t) {
            dt = t1 - t;
            t_next = t1;
        }
        auto step = rk2_step(s, t, dt, rhs);
        s = std::move(step.s);
        if (!all_finite(s.data()))
            throw numerical_error("advance: non-finite saturation at t=" + std::to_string(t_next));
        t = t_next;
        ++res.steps;
        res.water_in += dt * step.water_in;
        res.water_out += dt * step.water_out;
        obs(t, dt, s, step.water_in, step.water_out);
        if (res.steps > max_steps)
            throw numerical_error("advance: exceeded " + std::to_string(max_steps) +
                                  " steps before t=" + std::to_string(t1));
    }
    return res;
}

} // namespace sdflow
