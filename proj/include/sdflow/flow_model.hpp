#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sdflow/errors.hpp"

namespace sdflow {

struct RockFluidParams {
    double s_rw = 0.2;  // residual water saturation
    double s_ro = 0.15; // residual oil saturation
    double mu_w = 0.05; // water viscosity
    double mu_o = 10.0; // oil viscosity
};

/// Quadratic relative permeabilities with residual saturations plus the
/// derived total mobility and water fractional flow. Saturations outside
/// the mobile range are clamped inside the closures; callers keep their
/// fields unclamped.
class RockFluidModel {
public:
    using Params = RockFluidParams;

    explicit RockFluidModel(const Params& p = Params())
        : s_rw_(p.s_rw), s_ro_(p.s_ro), mu_w_(p.mu_w), mu_o_(p.mu_o)
    {
        if (!(s_rw_ >= 0.0) || !(s_ro_ >= 0.0) || !(s_rw_ < 1.0 - s_ro_))
            throw config_error("RockFluidModel: need 0 <= s_rw < 1 - s_ro, got s_rw=" +
                               std::to_string(s_rw_) + " s_ro=" + std::to_string(s_ro_));
        if (!(mu_w_ > 0.0) || !(mu_o_ > 0.0))
            throw config_error("RockFluidModel: viscosities must be positive");
        inv_mobile_w_ = 1.0 / (1.0 - s_rw_);
        inv_mobile_o_ = 1.0 / (1.0 - s_ro_);
        find_dfds_extrema();
    }

    double s_rw() const { return s_rw_; }
    double s_ro() const { return s_ro_; }
    double mu_w() const { return mu_w_; }
    double mu_o() const { return mu_o_; }

    double krw(double s) const
    {
        double u = std::clamp((s - s_rw_) * inv_mobile_w_, 0.0, 1.0);
        return u * u;
    }

    double kro(double s) const
    {
        double u = std::clamp(1.0 - s * inv_mobile_o_, 0.0, 1.0);
        return u * u;
    }

    double mobility(double s) const { return krw(s) / mu_w_ + kro(s) / mu_o_; }

    double fractional_flow(double s) const
    {
        double a = krw(s) / mu_w_;
        double lam = a + kro(s) / mu_o_;
        if (!(lam > 0.0))
            throw numerical_error("RockFluidModel: zero total mobility at s=" + std::to_string(s));
        return a / lam;
    }

    double dfds(double s) const
    {
        double uw = (s - s_rw_) * inv_mobile_w_;
        double a, da;
        if (uw <= 0.0) {
            a = da = 0.0;
        } else if (uw >= 1.0) {
            a = 1.0 / mu_w_;
            da = 0.0;
        } else {
            a = uw * uw / mu_w_;
            da = 2.0 * uw * inv_mobile_w_ / mu_w_;
        }
        double uo = 1.0 - s * inv_mobile_o_;
        double b, db;
        if (uo <= 0.0) {
            b = db = 0.0;
        } else if (uo >= 1.0) {
            b = 1.0 / mu_o_;
            db = 0.0;
        } else {
            b = uo * uo / mu_o_;
            db = -2.0 * uo * inv_mobile_o_ / mu_o_;
        }
        double lam = a + b;
        if (!(lam > 0.0))
            throw numerical_error("RockFluidModel: zero total mobility at s=" + std::to_string(s));
        return (da * b - a * db) / (lam * lam);
    }

    /// Upper bound for |f'| over the closed interval spanned by s_lo and s_hi,
    /// evaluated at the endpoints and at the precomputed interior extrema.
    double wave_speed_bound(double s_lo, double s_hi) const
    {
        double lo = std::min(s_lo, s_hi);
        double hi = std::max(s_lo, s_hi);
        lo = std::clamp(lo, 0.0, 1.0);
        hi = std::clamp(hi, 0.0, 1.0);
        double m = std::max(std::abs(dfds(lo)), std::abs(dfds(hi)));
        for (double c : dfds_extrema_)
            if (c > lo && c < hi)
                m = std::max(m, std::abs(dfds(c)));
        return m;
    }

    /// max |f'| over the whole mobile range [s_rw, 1 - s_ro].
    double max_dfds() const { return max_dfds_; }

private:
    void find_dfds_extrema()
    {
        const int n = 20000;
        const double lo = s_rw_, hi = 1.0 - s_ro_;
        const double h = (hi - lo) / n;
        std::vector<double> g(n + 1);
        for (int i = 0; i <= n; ++i)
            g[i] = dfds(lo + i * h);
        for (int i = 1; i < n; ++i) {
            bool is_max = g[i] >= g[i - 1] && g[i] >= g[i + 1];
            bool is_min = g[i] <= g[i - 1] && g[i] <= g[i + 1];
            if (is_max == is_min)
                continue;
            double a = lo + (i - 1) * h, b = lo + (i + 1) * h;
            for (int it = 0; it < 200; ++it) {
                double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                bool keep_left = is_max ? (dfds(m1) > dfds(m2)) : (dfds(m1) < dfds(m2));
                if (keep_left)
                    b = m2;
                else
                    a = m1;
            }
            dfds_extrema_.push_back(0.5 * (a + b));
        }
        max_dfds_ = std::max(std::abs(dfds(lo)), std::abs(dfds(hi)));
        for (double c : dfds_extrema_)
            max_dfds_ = std::max(max_dfds_, std::abs(dfds(c)));
    }

    double s_rw_, s_ro_, mu_w_, mu_o_;
    double inv_mobile_w_ = 0.0, inv_mobile_o_ = 0.0;
    std::vector<double> dfds_extrema_;
    double max_dfds_ = 0.0;
};

} // namespace sdflow
