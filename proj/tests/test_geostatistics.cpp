#include "catch_amalgamated.hpp"

#include <cmath>

#include "sdflow/geostatistics.hpp"

using namespace sdflow;

namespace {

double sample_mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double sample_cv(const std::vector<double>& v)
{
    const double m = sample_mean(v);
    double var = 0.0;
    for (double x : v)
        var += (x - m) * (x - m);
    var /= static_cast<double>(v.size());
    return std::sqrt(var) / m;
}

} // namespace

TEST_CASE("log-normal sigma from the coefficient of variation", "[geostatistics]")
{
    CHECK(lognormal_sigma(0.0) == 0.0);
    CHECK(lognormal_sigma(1.0) == Catch::Approx(std::sqrt(std::log(2.0))).epsilon(1e-14));
    CHECK(lognormal_sigma(2.2) == Catch::Approx(std::sqrt(std::log(1.0 + 4.84))).epsilon(1e-12));
    CHECK_THROWS_AS(lognormal_sigma(-0.5), config_error);
}

TEST_CASE("zero variability produces the uniform field", "[geostatistics]")
{
    Grid2D g(8, 6, 1.0, 1.0);
    FieldSpec spec;
    spec.nx = 8;
    spec.ny = 6;
    spec.cv = 0.0;
    spec.mean = 123.5;
    CellField perm = generate_permeability(spec, g);
    for (double v : perm.data())
        CHECK(v == 123.5);
}

TEST_CASE("field generation validates its inputs", "[geostatistics]")
{
    Grid2D g(8, 6, 1.0, 1.0);
    FieldSpec spec;
    spec.nx = 4;
    spec.ny = 6;
    CHECK_THROWS_AS(generate_permeability(spec, g), config_error);
    spec.nx = 8;
    spec.mean = 0.0;
    CHECK_THROWS_AS(generate_permeability(spec, g), config_error);
    CHECK_THROWS_AS(gaussian_power_law_field(1, 8, 1, 1.5), config_error);
}

TEST_CASE("underlying Gaussian field is standardized in-sample", "[geostatistics]")
{
    const std::vector<double> xi = gaussian_power_law_field(32, 32, 42, 1.5);
    CHECK(std::abs(sample_mean(xi)) < 1e-12);
    double var = 0.0;
    for (double x : xi)
        var += x * x;
    var /= static_cast<double>(xi.size());
    CHECK(var == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("permeability hits the requested mean exactly and the cv approximately",
          "[geostatistics]")
{
    Grid2D g(64, 64, 1.0, 1.0);
    FieldSpec spec;
    spec.nx = 64;
    spec.ny = 64;
    spec.seed = 7;
    spec.mean = 100.0;
    spec.spectral_exponent = 1.5;

    for (double cv : {0.5, 1.0, 2.2}) {
        spec.cv = cv;
        CellField perm = generate_permeability(spec, g);
        CHECK(sample_mean(perm.data()) == Catch::Approx(100.0).epsilon(1e-12));
        // one realization of a correlated field scatters around the target
        CHECK(sample_cv(perm.data()) == Catch::Approx(cv).epsilon(0.5));
        for (double v : perm.data())
            CHECK(v > 0.0);
    }
}

TEST_CASE("generation is bitwise deterministic in the seed", "[geostatistics]")
{
    Grid2D g(24, 16, 1.0, 1.0);
    FieldSpec spec;
    spec.nx = 24;
    spec.ny = 16;
    spec.seed = 1234;
    spec.cv = 1.0;
    CellField a = generate_permeability(spec, g);
    CellField b = generate_permeability(spec, g);
    CHECK(a.data() == b.data());

    spec.seed = 1235;
    CellField c = generate_permeability(spec, g);
    CHECK(a.data() != c.data());
}

TEST_CASE("spectral exponent controls large-scale correlation", "[geostatistics]")
{
    // stronger low-wavenumber weighting concentrates variance at long range;
    // compare lag-1 autocorrelation of the Gaussian fields
    auto lag1 = [](const std::vector<double>& xi, int nx, int ny) {
        double num = 0.0, den = 0.0;
        for (int k = 0; k < ny; ++k)
            for (int j = 0; j + 1 < nx; ++j) {
                const size_t i = static_cast<size_t>(k) * nx + j;
                num += xi[i] * xi[i + 1];
                den += xi[i] * xi[i];
            }
        return num / den;
    };
    const std::vector<double> rough = gaussian_power_law_field(64, 64, 9, 0.5);
    const std::vector<double> smooth = gaussian_power_law_field(64, 64, 9, 3.0);
    CHECK(lag1(smooth, 64, 64) > lag1(rough, 64, 64));
    CHECK(lag1(smooth, 64, 64) > 0.5);
}
