#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fftw3.h>

#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"

namespace sdflow {

/// Log-normal permeability description: population mean, coefficient of
/// variation, and the power-law exponent of the underlying Gaussian spectrum.
struct FieldSpec {
    int nx = 0, ny = 0;
    std::uint64_t seed = 1;
    double mean = 100.0;
    double cv = 0.0;
    double spectral_exponent = 1.5;
};

/// Log-standard-deviation that gives a log-normal field the requested
/// coefficient of variation.
inline double lognormal_sigma(double cv)
{
    if (!(cv >= 0.0))
        throw config_error("lognormal_sigma: cv must be nonnegative");
    return std::sqrt(std::log1p(cv * cv));
}

namespace detail {

// Deterministic standard Gaussians: Box-Muller over explicit mt19937_64 bits,
// independent of any library distribution implementation.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace detail

/// Zero-mean, unit-variance Gaussian field whose spectral density follows
/// |k|^(-beta), synthesized by filtering white noise in Fourier space. The
/// field is standardized empirically, so the moments hold in-sample.
inline std::vector<double> gaussian_power_law_field(int nx, int ny, std::uint64_t seed,
                                                    double beta)
{
    if (nx < 2 || ny < 2)
        throw config_error("gaussian_power_law_field: grid too small");
    const size_t n = static_cast<size_t>(nx) * static_cast<size_t>(ny);
    detail::GaussianStream gauss(seed);

    fftw_complex* spec = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < nx; ++j) {
            const size_t i = static_cast<size_t>(k) * nx + j;
            const double g1 = gauss.next();
            const double g2 = gauss.next();
            if (j == 0 && k == 0) {
                spec[i][0] = spec[i][1] = 0.0;
                continue;
            }
            const double kx = 2.0 * std::numbers::pi * std::min(j, nx - j) / nx;
            const double ky = 2.0 * std::numbers::pi * std::min(k, ny - k) / ny;
            const double amp = std::pow(kx * kx + ky * ky, -0.25 * beta);
            spec[i][0] = amp * g1;
            spec[i][1] = amp * g2;
        }
    }
    // FFTW_ESTIMATE keeps the plan, and with it the arithmetic order,
    // reproducible across runs.
    fftw_plan plan = fftw_plan_dft_2d(ny, nx, spec, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<double> xi(n);
    for (size_t i = 0; i < n; ++i)
        xi[i] = out[i][0]; // real part keeps the Hermitian half of the noise
    fftw_free(spec);
    fftw_free(out);

    double mean = 0.0;
    for (double v : xi)
        mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : xi)
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (!(var > 0.0))
        throw numerical_error("gaussian_power_law_field: degenerate sample variance");
    const double inv_sd = 1.0 / std::sqrt(var);
    for (double& v : xi)
        v = (v - mean) * inv_sd;
    return xi;
}

/// Log-normal permeability field with in-sample mean equal to spec.mean and
/// coefficient of variation targeting spec.cv. cv = 0 yields the uniform
/// field. Bitwise reproducible for a fixed seed.
inline CellField generate_permeability(const FieldSpec& spec, const Grid2D& grid)
{
    if (spec.nx != grid.nx() || spec.ny != grid.ny())
        throw config_error("generate_permeability: spec dims disagree with the grid");
    if (!(spec.mean > 0.0))
        throw config_error("generate_permeability: mean must be positive");
    CellField perm(grid, spec.mean);
    if (spec.cv == 0.0)
        return perm;
    const double sigma = lognormal_sigma(spec.cv);
    const std::vector<double> xi =
        gaussian_power_law_field(spec.nx, spec.ny, spec.seed, spec.spectral_exponent);
    std::vector<double>& kv = perm.data();
    double mean = 0.0;
    for (size_t i = 0; i < kv.size(); ++i) {
        kv[i] = std::exp(sigma * xi[i]);
        mean += kv[i];
    }
    mean /= static_cast<double>(kv.size());
    const double scale = spec.mean / mean;
    for (double& v : kv)
        v *= scale;
    if (!all_finite(kv))
        throw numerical_error("generate_permeability: non-finite permeability");
    return perm;
}

} // namespace sdflow
