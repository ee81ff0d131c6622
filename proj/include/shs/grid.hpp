#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shs {

enum class Boundary { Neumann, Periodic };

// Uniform cell-centered mesh, 1D or 2D, equal spacing on both axes.
struct Grid {
    int dim = 1;
    int nx = 0;
    int ny = 1;  // 1 in 1D
    double h = 0.0;
    Boundary boundary = Boundary::Neumann;

    static Grid make_1d(int nx, double h, Boundary bc = Boundary::Neumann) {
        Grid g;
        g.dim = 1;
        g.nx = nx;
        g.ny = 1;
        g.h = h;
        g.boundary = bc;
        g.validate();
        return g;
    }

    static Grid make_2d(int nx, int ny, double h, Boundary bc = Boundary::Neumann) {
        Grid g;
        g.dim = 2;
        g.nx = nx;
        g.ny = ny;
        g.h = h;
        g.boundary = bc;
        g.validate();
        return g;
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
        if (h <= 0.0) throw std::invalid_argument("grid: spacing h must be positive");
        if (nx < 3) throw std::invalid_argument("grid: need at least 3 cells per axis");
        if (dim == 2 && ny < 3) throw std::invalid_argument("grid: need at least 3 cells per axis");
        if (dim == 1 && ny != 1) throw std::invalid_argument("grid: ny must be 1 in 1D");
    }

    std::ptrdiff_t cells() const { return static_cast<std::ptrdiff_t>(nx) * ny; }
    std::size_t at(int ix, int iy = 0) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(ix);
    }
    // cell centers
    double x(int ix) const { return (ix + 0.5) * h; }
    double y(int iy) const { return (iy + 0.5) * h; }
    double cell_volume() const { return dim == 1 ? h : h * h; }
};

using Field = std::vector<double>;

inline Field make_field(const Grid& g, double value = 0.0) {
    return Field(static_cast<std::size_t>(g.cells()), value);
}

}  // namespace shs
