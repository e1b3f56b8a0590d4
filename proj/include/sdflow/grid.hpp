#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sdflow/errors.hpp"

namespace sdflow {

/// Uniform structured grid on [x0, x0+nx*dx] x [y0, y0+ny*dy].
/// Cell (j,k) has center (x0+(j+1/2)dx, y0+(k+1/2)dy); indices are 0-based,
/// storage is row-major with j (the x index) fastest.
class Grid2D {
public:
    Grid2D() = default;

    Grid2D(int nx, int ny, double dx, double dy, double x0 = 0.0, double y0 = 0.0)
        : nx_(nx), ny_(ny), dx_(dx), dy_(dy), x0_(x0), y0_(y0)
    {
        if (nx < 2 || ny < 2)
            throw config_error("Grid2D: need at least 2 cells per direction, got " +
                               std::to_string(nx) + "x" + std::to_string(ny));
        if (!(dx > 0.0) || !(dy > 0.0))
            throw config_error("Grid2D: cell sizes must be positive");
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }

    int cell_count() const { return nx_ * ny_; }
    int cell_index(int j, int k) const { return k * nx_ + j; }

    double cell_area() const { return dx_ * dy_; }
    double xc(int j) const { return x0_ + (j + 0.5) * dx_; }
    double yc(int k) const { return y0_ + (k + 0.5) * dy_; }

    bool same_layout(const Grid2D& o) const
    {
        return nx_ == o.nx_ && ny_ == o.ny_ && dx_ == o.dx_ && dy_ == o.dy_ &&
               x0_ == o.x0_ && y0_ == o.y0_;
    }

private:
    int nx_ = 2, ny_ = 2;
    double dx_ = 1.0, dy_ = 1.0;
    double x0_ = 0.0, y0_ = 0.0;
};

/// One scalar per cell (saturation, permeability, pressure).
class CellField {
public:
    CellField() = default;

    explicit CellField(const Grid2D& grid, double fill = 0.0)
        : grid_(grid), v_(static_cast<size_t>(grid.cell_count()), fill)
    {
    }

    const Grid2D& grid() const { return grid_; }

    double& operator()(int j, int k) { return v_[static_cast<size_t>(grid_.cell_index(j, k))]; }
    double operator()(int j, int k) const { return v_[static_cast<size_t>(grid_.cell_index(j, k))]; }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

private:
    Grid2D grid_;
    std::vector<double> v_;
};

/// Normal velocity components on cell faces. x(j,k) lives on the x-face
/// between cells (j-1,k) and (j,k), so j runs over [0,nx]; y(j,k) mirrors
/// this in the other direction. Boundary faces hold the prescribed values
/// (exactly zero where the boundary is closed).
class FaceVelocityField {
public:
    FaceVelocityField() = default;

    explicit FaceVelocityField(const Grid2D& grid)
        : grid_(grid),
          xf_(static_cast<size_t>((grid.nx() + 1) * grid.ny()), 0.0),
          yf_(static_cast<size_t>(grid.nx() * (grid.ny() + 1)), 0.0)
    {
    }

    const Grid2D& grid() const { return grid_; }

    double& x(int j, int k) { return xf_[static_cast<size_t>(k * (grid_.nx() + 1) + j)]; }
    double x(int j, int k) const { return xf_[static_cast<size_t>(k * (grid_.nx() + 1) + j)]; }

    double& y(int j, int k) { return yf_[static_cast<size_t>(k * grid_.nx() + j)]; }
    double y(int j, int k) const { return yf_[static_cast<size_t>(k * grid_.nx() + j)]; }

    std::vector<double>& xdata() { return xf_; }
    const std::vector<double>& xdata() const { return xf_; }
    std::vector<double>& ydata() { return yf_; }
    const std::vector<double>& ydata() const { return yf_; }

private:
    Grid2D grid_;
    std::vector<double> xf_, yf_;
};

/// Both velocity components at cell vertices; (j,k) with j in [0,nx],
/// k in [0,ny] is the vertex at (x0+j*dx, y0+k*dy).
class VertexVelocityField {
public:
    VertexVelocityField() = default;

    explicit VertexVelocityField(const Grid2D& grid)
        : grid_(grid),
          vx_(static_cast<size_t>((grid.nx() + 1) * (grid.ny() + 1)), 0.0),
          vy_(static_cast<size_t>((grid.nx() + 1) * (grid.ny() + 1)), 0.0)
    {
    }

    const Grid2D& grid() const { return grid_; }

    double& x(int j, int k) { return vx_[idx(j, k)]; }
    double x(int j, int k) const { return vx_[idx(j, k)]; }
    double& y(int j, int k) { return vy_[idx(j, k)]; }
    double y(int j, int k) const { return vy_[idx(j, k)]; }

    std::vector<double>& xdata() { return vx_; }
    const std::vector<double>& xdata() const { return vx_; }
    std::vector<double>& ydata() { return vy_; }
    const std::vector<double>& ydata() const { return vy_; }

private:
    size_t idx(int j, int k) const { return static_cast<size_t>(k * (grid_.nx() + 1) + j); }

    Grid2D grid_;
    std::vector<double> vx_, vy_;
};

/// Midpoint-rule cell averages of a pointwise function.
inline CellField project_to_cell_averages(const Grid2D& grid,
                                          const std::function<double(double, double)>& f)
{
    CellField out(grid);
    for (int k = 0; k < grid.ny(); ++k)
        for (int j = 0; j < grid.nx(); ++j)
            out(j, k) = f(grid.xc(j), grid.yc(k));
    return out;
}

/// Sum of values times cell area, accumulated in storage order.
inline double total_mass(const CellField& s)
{
    double sum = 0.0;
    for (double v : s.data())
        sum += v;
    return sum * s.grid().cell_area();
}

inline bool all_finite(const std::vector<double>& v)
{
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

} // namespace sdflow
