#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sdflow/simulation.hpp"

using namespace sdflow;

namespace {

std::filesystem::path fresh_dir(const std::string& name)
{
    std::filesystem::path dir = std::filesystem::temp_directory_path() / ("sdflow_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config text parsing", "[driver]")
{
    SimulationConfig c = parse_config_text("# comment line\n"
                                           "nx = 32\n"
                                           "ny=16\n"
                                           "scheme = kt_dxd # trailing comment\n"
                                           "scenario = five_spot_diagonal\n"
                                           "snapshot_days = 10, 20,30\n"
                                           "write_vtk = true\n"
                                           "\n");
    CHECK(c.nx == 32);
    CHECK(c.ny == 16);
    CHECK(c.scheme == SchemeKind::kt_dxd);
    CHECK(c.scenario == ScenarioKind::five_spot_diagonal);
    CHECK(c.snapshot_days == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(c.write_vtk == true);
    // untouched keys keep their defaults
    CHECK(c.theta == 1.8);
    CHECK(c.total_days == 350.0);
}

TEST_CASE("config parsing rejects malformed input", "[driver]")
{
    CHECK_THROWS_AS(parse_config_text("no_such_key = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("nx = 8\nnx = 9\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("just some words\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("nx = eight\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("= 5\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("write_vtk = maybe\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("scheme = upwind\n"), config_error);
}

TEST_CASE("config range validation", "[driver]")
{
    SimulationConfig c;
    c.theta = 2.5;
    CHECK_THROWS_AS(validate_config(c), config_error);
    c.theta = 2.0;
    CHECK_FALSE(validate_config(c).empty()); // warns above 1.8
    c.theta = 1.8;
    c.cfl_sigma = 0.5;
    CHECK_THROWS_AS(validate_config(c), config_error);
    c.cfl_sigma = 0.45;
    c.snapshot_days = {400.0};
    CHECK_FALSE(validate_config(c).empty());
}

TEST_CASE("slab scenario prescribes uniform edge flow", "[driver]")
{
    SimulationConfig c;
    c.nx = 16;
    c.ny = 8;
    c.length_x = 16.0;
    c.length_y = 8.0;
    Scenario sc = build_scenario(c);

    const double q = c.injection_rate_pv_per_year * c.length_x * c.length_y / 365.0;
    const double v_in = q / c.length_y;
    CHECK(sc.total_rate == q);
    CHECK(sc.wells.wells.empty());
    for (int k = 0; k < 8; ++k) {
        CHECK(sc.boundary.left[static_cast<size_t>(k)] == v_in);
        CHECK(sc.boundary.right[static_cast<size_t>(k)] == v_in);
    }
    for (int j = 0; j < 16; ++j) {
        CHECK(sc.boundary.bottom[static_cast<size_t>(j)] == 0.0);
        CHECK(sc.boundary.top[static_cast<size_t>(j)] == 0.0);
    }
    for (double v : sc.permeability.data())
        CHECK(v == 100.0);
    for (double v : sc.initial_saturation.data())
        CHECK(v == 0.21);
}

TEST_CASE("five-spot scenarios place corner wells", "[driver]")
{
    SimulationConfig c;
    c.scenario = ScenarioKind::five_spot_diagonal;
    c.nx = c.ny = 8;
    c.length_x = c.length_y = 8.0;
    Scenario sc = build_scenario(c);
    const double q = c.injection_rate_pv_per_year * 64.0 / 365.0;
    REQUIRE(sc.wells.wells.size() == 2);
    CHECK(sc.wells.wells[0].j == 0);
    CHECK(sc.wells.wells[0].k == 0);
    CHECK(sc.wells.wells[0].rate == q);
    CHECK(sc.wells.wells[1].j == 7);
    CHECK(sc.wells.wells[1].k == 7);
    CHECK(sc.wells.wells[1].rate == -q);

    c.scenario = ScenarioKind::five_spot_parallel;
    Scenario sp = build_scenario(c);
    REQUIRE(sp.wells.wells.size() == 4);
    CHECK(sp.wells.wells[0].rate == 0.5 * q);
    CHECK(sp.wells.wells[1].j == 7);
    CHECK(sp.wells.wells[1].k == 7);
    CHECK(sp.wells.wells[1].rate == 0.5 * q);
    CHECK(sp.wells.wells[2].j == 7);
    CHECK(sp.wells.wells[2].k == 0);
    CHECK(sp.wells.wells[2].rate == -0.5 * q);
    CHECK(sp.wells.wells[3].j == 0);
    CHECK(sp.wells.wells[3].k == 7);
    CHECK(sp.wells.wells[3].rate == -0.5 * q);

    // both injector-producer layouts need a square domain
    c.ny = 4;
    CHECK_THROWS_AS(build_scenario(c), config_error);
}

TEST_CASE("snapshot csv writes the documented exact form", "[driver]")
{
    const std::filesystem::path dir = fresh_dir("csv_exact");
    Grid2D g(2, 2, 1.0, 1.0);
    CellField s(g);
    s(0, 0) = 0.0;
    s(1, 0) = 1.0;
    s(0, 1) = 2.0;
    s(1, 1) = 3.0;
    const std::string path = (dir / "snap.csv").string();
    write_snapshot_csv(path, s, 0.0);
    CHECK(slurp(path) == "2,2,1,1,0\n0,1\n2,3\n");
}

TEST_CASE("snapshot csv round-trips bitwise", "[driver]")
{
    const std::filesystem::path dir = fresh_dir("csv_roundtrip");
    Grid2D g(7, 5, 0.3, 1.7);
    CellField s(g);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : s.data())
        v = u(rng);

    const std::string p1 = (dir / "a.csv").string();
    write_snapshot_csv(p1, s, 123.456);
    Snapshot snap = read_snapshot_csv(p1);
    CHECK(snap.t == 123.456);
    CHECK(snap.field.grid().nx() == 7);
    CHECK(snap.field.grid().dy() == 1.7);
    CHECK(snap.field.data() == s.data());

    const std::string p2 = (dir / "b.csv").string();
    write_snapshot_csv(p2, snap.field, snap.t);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("permeability files feed scenarios unchanged", "[driver]")
{
    const std::filesystem::path dir = fresh_dir("perm_file");
    Grid2D g(12, 12, 1.0, 1.0);
    FieldSpec spec{12, 12, 5, 100.0, 1.0, 1.5};
    CellField perm = generate_permeability(spec, g);
    const std::string path = (dir / "perm.csv").string();
    write_snapshot_csv(path, perm, 0.0);

    SimulationConfig c;
    c.nx = c.ny = 12;
    c.length_x = c.length_y = 12.0;
    c.perm_file = path;
    Scenario sc = build_scenario(c);
    CHECK(sc.permeability.data() == perm.data());

    c.nx = c.ny = 8;
    c.length_x = c.length_y = 8.0;
    CHECK_THROWS_AS(build_scenario(c), config_error);

    CellField bad = perm;
    bad(3, 3) = 0.0;
    const std::string badpath = (dir / "bad.csv").string();
    write_snapshot_csv(badpath, bad, 0.0);
    c.nx = c.ny = 12;
    c.length_x = c.length_y = 12.0;
    c.perm_file = badpath;
    CHECK_THROWS_AS(build_scenario(c), config_error);
}

TEST_CASE("zero injection leaves the state untouched", "[driver]")
{
    const std::filesystem::path dir = fresh_dir("zero_rate");
    SimulationConfig c;
    c.nx = 8;
    c.ny = 4;
    c.length_x = 8.0;
    c.length_y = 4.0;
    c.injection_rate_pv_per_year = 0.0;
    c.total_days = 50.0;
    c.output_dir = dir.string();

    SimulationRecord rec = run_simulation(c);
    CHECK(rec.steps == 10);
    CHECK(rec.pressure_solves == 10);
    CHECK(rec.water_in == 0.0);
    CHECK(rec.water_out == 0.0);
    CHECK(rec.max_divergence_residual == 0.0);
    for (double v : rec.final_saturation.data())
        CHECK(v == 0.21);
    CHECK(rec.final_mass == rec.initial_mass);

    // outputs land in the requested directory
    CHECK(std::filesystem::exists(dir / "permeability.csv"));
    CHECK(std::filesystem::exists(dir / "history.csv"));
    CHECK(std::filesystem::exists(dir / "saturation_t50.csv"));
    const std::string hist = slurp(dir / "history.csv");
    CHECK(hist.rfind("t,dt,mass,s_min,s_max,cum_water_in,cum_water_out,"
                     "produced_water_fraction\n", 0) == 0);
}

TEST_CASE("snapshots land exactly on the requested times", "[driver]")
{
    const std::filesystem::path dir = fresh_dir("snap_times");
    SimulationConfig c;
    c.scenario = ScenarioKind::five_spot_diagonal;
    c.nx = c.ny = 8;
    c.length_x = c.length_y = 8.0;
    c.total_days = 2.0;
    c.snapshot_days = {0.5, 1.25};
    c.output_dir = dir.string();
    c.write_vtk = true;

    SimulationRecord rec = run_simulation(c);
    REQUIRE(rec.snapshot_files.size() == 6); // csv + vtk at 0.5, 1.25 and 2
    CHECK(std::filesystem::exists(dir / "saturation_t0.5.csv"));
    CHECK(std::filesystem::exists(dir / "saturation_t0.5.vtk"));
    CHECK(std::filesystem::exists(dir / "saturation_t1.25.csv"));
    CHECK(std::filesystem::exists(dir / "saturation_t2.csv"));
    CHECK(read_snapshot_csv((dir / "saturation_t0.5.csv").string()).t == 0.5);
    CHECK(read_snapshot_csv((dir / "saturation_t1.25.csv").string()).t == 1.25);

    // some micro step ended exactly at each snapshot time
    bool hit_half = false, hit_five_quarters = false;
    for (const StepRecord& r : rec.history) {
        hit_half = hit_half || r.t == 0.5;
        hit_five_quarters = hit_five_quarters || r.t == 1.25;
    }
    CHECK(hit_half);
    CHECK(hit_five_quarters);
}

TEST_CASE("mass change equals the integrated boundary and well exchange", "[driver]")
{
    const std::filesystem::path dir = fresh_dir("mass_ledger");
    SimulationConfig c;
    c.scenario = ScenarioKind::five_spot_diagonal;
    c.nx = c.ny = 8;
    c.length_x = c.length_y = 8.0;
    c.total_days = 3.0;
    c.output_dir = dir.string();

    SimulationRecord rec = run_simulation(c);
    const double gain = rec.final_mass - rec.initial_mass;
    const double exchanged = rec.water_in - rec.water_out;
    CHECK(std::abs(gain - exchanged) < 1e-10 * std::max(1.0, rec.water_in));
    CHECK(rec.max_divergence_residual < 1e-9);
    CHECK(rec.max_pressure_residual <= c.pressure_rtol);
}

TEST_CASE("one driver step equals the hand-assembled pipeline", "[driver]")
{
    const std::filesystem::path dir = fresh_dir("one_step");
    SimulationConfig c;
    c.scenario = ScenarioKind::five_spot_diagonal;
    c.nx = c.ny = 8;
    c.length_x = c.length_y = 8.0;
    c.total_days = 0.05;
    c.output_dir = dir.string();

    SimulationRecord rec = run_simulation(c);
    REQUIRE(rec.steps == 1);

    Scenario sc = build_scenario(c);
    const Grid2D& g = sc.grid;
    const RockFluidModel& m = sc.model;
    const double area = g.cell_area();
    CellField s = sc.initial_saturation;

    TransmissibilityField T = transmissibilities(s, sc.permeability, m);
    CellField p = solve_pressure(T, sc.wells, sc.boundary, c.pressure_rtol,
                                 c.pressure_max_iters);
    FaceVelocityField fv = face_velocities(p, T, sc.boundary);
    VertexVelocityField vv = vertex_velocities(fv);
    CellField qeff = uniform_state_divergence(vv, fv, c.scheme, sc.convection_bc);

    auto rhs = [&](const CellField& cur, double) -> RhsEval {
        const SlopeField sl = compute_slopes(cur, c.theta);
        const LocalSpeeds sp = local_speeds(cur, vv, m, sc.convection_bc);
        const FluxField H = compute_fluxes(cur, sl, vv, fv, sp, m, c.scheme, sc.convection_bc);
        RhsEval e{divergence_rhs(H), 0.0, 0.0};
        for (int k = 0; k < g.ny(); ++k)
            for (int j = 0; j < g.nx(); ++j) {
                const double q = qeff(j, k);
                if (q == 0.0)
                    continue;
                e.dsdt(j, k) += q * m.fractional_flow(cur(j, k)) / area;
            }
        for (const Well& w : sc.wells.wells)
            if (w.rate > 0.0)
                e.dsdt(w.j, w.k) += w.rate *
                                    (m.fractional_flow(w.injected_saturation) -
                                     m.fractional_flow(cur(w.j, w.k))) /
                                    area;
        return e;
    };

    const CflPolicy pol{c.cfl_sigma, c.dt_min_days, c.dt_max_days};
    const double dt_stable = cfl_dt(s, vv, m, pol);
    REQUIRE(dt_stable >= c.total_days);
    StepEval step = rk2_step(s, 0.0, c.total_days, rhs);
    CHECK(step.s.data() == rec.final_saturation.data());
}

TEST_CASE("repeated runs are bitwise identical", "[driver]")
{
    const std::filesystem::path d1 = fresh_dir("repeat_a");
    const std::filesystem::path d2 = fresh_dir("repeat_b");
    SimulationConfig c;
    c.nx = 16;
    c.ny = 8;
    c.length_x = 16.0;
    c.length_y = 8.0;
    c.perm_cv = 1.0;
    c.seed = 3;
    c.total_days = 5.0;

    c.output_dir = d1.string();
    SimulationRecord a = run_simulation(c);
    c.output_dir = d2.string();
    SimulationRecord b = run_simulation(c);

    CHECK(a.final_saturation.data() == b.final_saturation.data());
    CHECK(a.steps == b.steps);
    REQUIRE(a.history.size() == b.history.size());
    for (size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].t == b.history[i].t);
        CHECK(a.history[i].mass == b.history[i].mass);
    }
    CHECK(slurp(d1 / "history.csv") == slurp(d2 / "history.csv"));
    CHECK(slurp(d1 / (std::string("saturation_t5.csv"))) ==
          slurp(d2 / (std::string("saturation_t5.csv"))));
}
