#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sdflow/errors.hpp"
#include "sdflow/grid.hpp"

namespace sdflow {

namespace detail {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view sv, const std::string& context)
{
    double v = 0.0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
        throw config_error(context + ": bad number '" + std::string(sv) + "'");
    return v;
}

inline long parse_long(std::string_view sv, const std::string& context)
{
    long v = 0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
        throw config_error(context + ": bad integer '" + std::string(sv) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

/// Cell field snapshot as CSV: a header row "nx,ny,dx,dy,t" of values, then
/// ny data rows of nx values each, bottom row (k = 0) first. Numbers use the
/// shortest round-trip form, so a rewrite of a parsed file is byte-identical.
inline void write_snapshot_csv(const std::string& path, const CellField& s, double t)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw config_error("write_snapshot_csv: cannot open '" + path + "'");
    const Grid2D& g = s.grid();
    f << g.nx() << ',' << g.ny() << ',' << detail::format_double(g.dx()) << ','
      << detail::format_double(g.dy()) << ',' << detail::format_double(t) << '\n';
    for (int k = 0; k < g.ny(); ++k) {
        for (int j = 0; j < g.nx(); ++j) {
            if (j > 0)
                f << ',';
            f << detail::format_double(s(j, k));
        }
        f << '\n';
    }
    if (!f)
        throw config_error("write_snapshot_csv: write failed for '" + path + "'");
}

struct Snapshot {
    CellField field;
    double t = 0.0;
};

inline Snapshot read_snapshot_csv(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw config_error("read_snapshot_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line))
        throw config_error("read_snapshot_csv: '" + path + "' is empty");
    auto head = detail::split(line, ',');
    if (head.size() != 5)
        throw config_error("read_snapshot_csv: '" + path + "' header needs nx,ny,dx,dy,t");
    const long nx = detail::parse_long(head[0], path);
    const long ny = detail::parse_long(head[1], path);
    const double dx = detail::parse_double(head[2], path);
    const double dy = detail::parse_double(head[3], path);
    const double t = detail::parse_double(head[4], path);
    Grid2D grid(static_cast<int>(nx), static_cast<int>(ny), dx, dy);
    Snapshot snap{CellField(grid), t};
    for (int k = 0; k < grid.ny(); ++k) {
        if (!std::getline(f, line))
            throw config_error("read_snapshot_csv: '" + path + "' truncated at row " +
                               std::to_string(k));
        auto cells = detail::split(line, ',');
        if (cells.size() != static_cast<size_t>(nx))
            throw config_error("read_snapshot_csv: '" + path + "' row " + std::to_string(k) +
                               " has " + std::to_string(cells.size()) + " values, expected " +
                               std::to_string(nx));
        for (int j = 0; j < grid.nx(); ++j)
            snap.field(j, k) = detail::parse_double(cells[static_cast<size_t>(j)], path);
    }
    return snap;
}

/// Same data as legacy-VTK structured points with one cell-centered scalar.
inline void write_snapshot_vtk(const std::string& path, const CellField& s, double t,
                               const std::string& name = "saturation")
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw config_error("write_snapshot_vtk: cannot open '" + path + "'");
    const Grid2D& g = s.grid();
    f << "# vtk DataFile Version 3.0\n";
    f << name << " at t=" << detail::format_double(t) << '\n';
    f << "ASCII\n";
    f << "DATASET STRUCTURED_POINTS\n";
    f << "DIMENSIONS " << g.nx() + 1 << ' ' << g.ny() + 1 << " 1\n";
    f << "ORIGIN " << detail::format_double(g.x0()) << ' ' << detail::format_double(g.y0())
      << " 0\n";
    f << "SPACING " << detail::format_double(g.dx()) << ' ' << detail::format_double(g.dy())
      << " 1\n";
    f << "CELL_DATA " << g.cell_count() << '\n';
    f << "SCALARS " << name << " double 1\n";
    f << "LOOKUP_TABLE default\n";
    for (int k = 0; k < g.ny(); ++k)
        for (int j = 0; j < g.nx(); ++j)
            f << detail::format_double(s(j, k)) << '\n';
    if (!f)
        throw config_error("write_snapshot_vtk: write failed for '" + path + "'");
}

} // namespace sdflow
