#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sdflow/errors.hpp"
#include "sdflow/scheme.hpp"

namespace sdflow {

enum class ScenarioKind { slab, five_spot_diagonal, five_spot_parallel };

struct SimulationConfig {
    ScenarioKind scenario = ScenarioKind::slab;
    int nx = 256, ny = 64;
    double length_x = 256.0, length_y = 64.0; // meters
    SchemeKind scheme = SchemeKind::sd2_2d;
    double theta = 1.8;
    double cfl_sigma = 0.45;
    double dt_min_days = 0.0;
    double dt_max_days = 10.0;
    long max_micro_steps = 2000000;
    double pressure_dt_days = 5.0;      // re-solve pressure after this much time...
    int pressure_steps_per_update = 10; // ...or this many micro-steps, whichever first
    double total_days = 350.0;
    double injection_rate_pv_per_year = 0.2;
    double initial_saturation = 0.21;
    double injected_saturation = 0.85;
    double s_rw = 0.2, s_ro = 0.15;
    double mu_w = 0.05, mu_o = 10.0;
    double perm_mean_md = 100.0;
    double perm_cv = 0.0;
    double perm_spectral_exponent = 1.5;
    std::string perm_file; // read instead of generating when nonempty
    std::uint64_t seed = 1;
    std::vector<double> snapshot_days;
    std::string output_dir = "out";
    bool write_vtk = false;
    double pressure_rtol = 1e-10;
    int pressure_max_iters = 50000;
};

namespace detail {

inline std::string_view trim(std::string_view sv)
{
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t' || sv.front() == '\r'))
        sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r'))
        sv.remove_suffix(1);
    return sv;
}

template <class T>
T parse_number(std::string_view sv, const std::string& key)
{
    T v{};
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
        throw config_error("config key '" + key + "': bad value '" + std::string(sv) + "'");
    return v;
}

inline bool parse_bool(std::string_view sv, const std::string& key)
{
    if (sv == "true" || sv == "1")
        return true;
    if (sv == "false" || sv == "0")
        return false;
    throw config_error("config key '" + key + "': bad boolean '" + std::string(sv) + "'");
}

} // namespace detail

inline ScenarioKind scenario_from_string(std::string_view sv)
{
    if (sv == "slab")
        return ScenarioKind::slab;
    if (sv == "five_spot_diagonal")
        return ScenarioKind::five_spot_diagonal;
    if (sv == "five_spot_parallel")
        return ScenarioKind::five_spot_parallel;
    throw config_error("unknown scenario '" + std::string(sv) +
                       "' (want slab, five_spot_diagonal or five_spot_parallel)");
}

inline SchemeKind scheme_from_string(std::string_view sv)
{
    if (sv == "sd2_2d")
        return SchemeKind::sd2_2d;
    if (sv == "sd1_2d")
        return SchemeKind::sd1_2d;
    if (sv == "kt_dxd")
        return SchemeKind::kt_dxd;
    throw config_error("unknown scheme '" + std::string(sv) +
                       "' (want sd2_2d, sd1_2d or kt_dxd)");
}

inline const char* to_string(ScenarioKind s)
{
    switch (s) {
    case ScenarioKind::slab: return "slab";
    case ScenarioKind::five_spot_diagonal: return "five_spot_diagonal";
    default: return "five_spot_parallel";
    }
}

inline const char* to_string(SchemeKind s)
{
    switch (s) {
    case SchemeKind::sd2_2d: return "sd2_2d";
    case SchemeKind::sd1_2d: return "sd1_2d";
    default: return "kt_dxd";
    }
}

/// Apply one key=value setting. Keys are the SimulationConfig field names;
/// anything else is an error.
inline void apply_setting(SimulationConfig& c, std::string_view key, std::string_view value,
                          const std::string& where = "setting")
{
    const std::string k(key);
    using detail::parse_number;
    if (key == "scenario")
        c.scenario = scenario_from_string(value);
    else if (key == "nx")
        c.nx = parse_number<int>(value, k);
    else if (key == "ny")
        c.ny = parse_number<int>(value, k);
    else if (key == "length_x")
        c.length_x = parse_number<double>(value, k);
    else if (key == "length_y")
        c.length_y = parse_number<double>(value, k);
    else if (key == "scheme")
        c.scheme = scheme_from_string(value);
    else if (key == "theta")
        c.theta = parse_number<double>(value, k);
    else if (key == "cfl_sigma")
        c.cfl_sigma = parse_number<double>(value, k);
    else if (key == "dt_min_days")
        c.dt_min_days = parse_number<double>(value, k);
    else if (key == "dt_max_days")
        c.dt_max_days = parse_number<double>(value, k);
    else if (key == "max_micro_steps")
        c.max_micro_steps = parse_number<long>(value, k);
    else if (key == "pressure_dt_days")
        c.pressure_dt_days = parse_number<double>(value, k);
    else if (key == "pressure_steps_per_update")
        c.pressure_steps_per_update = parse_number<int>(value, k);
    else if (key == "total_days")
        c.total_days = parse_number<double>(value, k);
    else if (key == "injection_rate_pv_per_year")
        c.injection_rate_pv_per_year = parse_number<double>(value, k);
    else if (key == "initial_saturation")
        c.initial_saturation = parse_number<double>(value, k);
    else if (key == "injected_saturation")
        c.injected_saturation = parse_number<double>(value, k);
    else if (key == "s_rw")
        c.s_rw = parse_number<double>(value, k);
    else if (key == "s_ro")
        c.s_ro = parse_number<double>(value, k);
    else if (key == "mu_w")
        c.mu_w = parse_number<double>(value, k);
    else if (key == "mu_o")
        c.mu_o = parse_number<double>(value, k);
    else if (key == "perm_mean_md")
        c.perm_mean_md = parse_number<double>(value, k);
    else if (key == "perm_cv")
        c.perm_cv = parse_number<double>(value, k);
    else if (key == "perm_spectral_exponent")
        c.perm_spectral_exponent = parse_number<double>(value, k);
    else if (key == "perm_file")
        c.perm_file = std::string(value);
    else if (key == "seed")
        c.seed = parse_number<std::uint64_t>(value, k);
    else if (key == "snapshot_days") {
        c.snapshot_days.clear();
        if (!value.empty()) {
            size_t start = 0;
            while (true) {
                size_t pos = value.find(',', start);
                std::string_view item = detail::trim(
                    pos == std::string_view::npos ? value.substr(start)
                                                  : value.substr(start, pos - start));
                c.snapshot_days.push_back(parse_number<double>(item, k));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
        }
    } else if (key == "output_dir")
        c.output_dir = std::string(value);
    else if (key == "write_vtk")
        c.write_vtk = detail::parse_bool(value, k);
    else if (key == "pressure_rtol")
        c.pressure_rtol = parse_number<double>(value, k);
    else if (key == "pressure_max_iters")
        c.pressure_max_iters = parse_number<int>(value, k);
    else
        throw config_error(where + ": unknown config key '" + k + "'");
}

/// Parse flat key=value text. '#' starts a comment; keys may appear once.
inline SimulationConfig parse_config_text(std::string_view text,
                                          const std::string& where = "config")
{
    SimulationConfig c;
    std::set<std::string> seen;
    size_t lineno = 0, start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string_view line =
            end == std::string_view::npos ? text.substr(start) : text.substr(start, end - start);
        ++lineno;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const std::string at = where + ":" + std::to_string(lineno);
        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw config_error(at + ": expected key=value, got '" + std::string(line) + "'");
        std::string_view key = detail::trim(line.substr(0, eq));
        std::string_view value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(at + ": empty key");
        if (!seen.insert(std::string(key)).second)
            throw config_error(at + ": duplicate key '" + std::string(key) + "'");
        apply_setting(c, key, value, at);
    }
    return c;
}

inline SimulationConfig load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw config_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

/// Range checks; returns human-readable warnings for legal but unusual values.
inline std::vector<std::string> validate_config(const SimulationConfig& c)
{
    std::vector<std::string> warnings;
    if (c.nx < 2 || c.ny < 2)
        throw config_error("config: nx and ny must be at least 2");
    if (!(c.length_x > 0.0) || !(c.length_y > 0.0))
        throw config_error("config: domain extents must be positive");
    if (!(c.theta >= 1.0 && c.theta <= 2.0))
        throw config_error("config: theta must lie in [1, 2]");
    if (c.theta > 1.8)
        warnings.push_back("theta=" + std::to_string(c.theta) +
                           " is above the usual limit 1.8; expect a more compressive limiter");
    if (!(c.cfl_sigma > 0.0 && c.cfl_sigma < 0.5))
        throw config_error("config: cfl_sigma must lie in (0, 0.5)");
    if (!(c.total_days > 0.0))
        throw config_error("config: total_days must be positive");
    if (!(c.pressure_dt_days > 0.0) || c.pressure_steps_per_update < 1)
        throw config_error("config: pressure update cadence must be positive");
    if (!(c.injection_rate_pv_per_year >= 0.0))
        throw config_error("config: injection_rate_pv_per_year must be nonnegative");
    if (!(c.initial_saturation >= 0.0 && c.initial_saturation <= 1.0) ||
        !(c.injected_saturation >= 0.0 && c.injected_saturation <= 1.0))
        throw config_error("config: saturations must lie in [0, 1]");
    if (!(c.perm_cv >= 0.0))
        throw config_error("config: perm_cv must be nonnegative");
    if (!(c.perm_mean_md > 0.0))
        throw config_error("config: perm_mean_md must be positive");
    if (!(c.pressure_rtol > 0.0 && c.pressure_rtol < 1.0))
        throw config_error("config: pressure_rtol must lie in (0, 1)");
    if (c.pressure_max_iters < 1 || c.max_micro_steps < 1)
        throw config_error("config: iteration limits must be positive");
    for (double t : c.snapshot_days)
        if (!(t > 0.0 && t <= c.total_days))
            warnings.push_back("snapshot time " + std::to_string(t) +
                               " lies outside (0, total_days] and will be skipped");
    return warnings;
}

} // namespace sdflow
