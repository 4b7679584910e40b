#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace elfv {

/// Thrown for invalid user-facing configuration (bad mesh sizes, bounds,
/// unknown scheme names).  The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when the numerics break down: NaN in the solution, or an upstream
/// cell that stays non-convex after all time-step halvings.  Exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an iterative solver fails to reach its tolerance.  Exit code 4.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Bc { Periodic, ZeroGhost };

/// Uniform structured mesh on [x_lo,x_hi]x[y_lo,y_hi] with nx*ny cells.
/// dx, dy are computed once in the constructor and cached; all downstream
/// geometry uses the cached values so identities like "node i of cell i+1 ==
/// node i of cell i" hold bitwise.
struct GridSpec {
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    int nx = 0, ny = 0;
    double dx = 0, dy = 0;
    Bc bc_x = Bc::Periodic, bc_y = Bc::Periodic;

    GridSpec() = default;
    GridSpec(double xlo, double xhi, double ylo, double yhi, int nx_, int ny_,
             Bc bcx, Bc bcy)
        : x_lo(xlo), x_hi(xhi), y_lo(ylo), y_hi(yhi), nx(nx_), ny(ny_),
          bc_x(bcx), bc_y(bcy) {
        if (nx < 5 || ny < 5)
            throw ConfigError("grid: nx and ny must be >= 5 (stencil width), got " +
                              std::to_string(nx) + "x" + std::to_string(ny));
        if (!(x_hi > x_lo) || !(y_hi > y_lo))
            throw ConfigError("grid: inverted or empty domain bounds");
        dx = (x_hi - x_lo) / nx;
        dy = (y_hi - y_lo) / ny;
    }

    int ncells() const { return nx * ny; }
    double lx() const { return x_hi - x_lo; }
    double ly() const { return y_hi - y_lo; }
    double cell_area() const { return dx * dy; }

    double node_x(int i) const { return x_lo + i * dx; }
    double node_y(int j) const { return y_lo + j * dy; }
    double center_x(int i) const { return x_lo + (i + 0.5) * dx; }
    double center_y(int j) const { return y_lo + (j + 0.5) * dy; }

    /// Wrap an (unbounded) cell index into [0,n) for periodic axes.
    /// Callers on ZeroGhost axes must range-check instead.
    static int wrap(int i, int n) {
        i %= n;
        return i < 0 ? i + n : i;
    }
    int wrap_x(int i) const { return wrap(i, nx); }
    int wrap_y(int j) const { return wrap(j, ny); }

    bool in_x(int i) const { return i >= 0 && i < nx; }
    bool in_y(int j) const { return j >= 0 && j < ny; }
};

inline GridSpec make_grid(double x_lo, double x_hi, double y_lo, double y_hi,
                          int nx, int ny, Bc bc_x, Bc bc_y) {
    return GridSpec(x_lo, x_hi, y_lo, y_hi, nx, ny, bc_x, bc_y);
}

/// Per-cell scalar values (cell averages), row-major with x fastest:
/// index (i,j) -> j*nx + i.
struct CellField {
    int nx = 0, ny = 0;
    std::vector<double> v;

    CellField() = default;
    CellField(int nx_, int ny_, double fill = 0.0)
        : nx(nx_), ny(ny_), v(static_cast<size_t>(nx_) * ny_, fill) {}
    explicit CellField(const GridSpec& g, double fill = 0.0)
        : CellField(g.nx, g.ny, fill) {}

    double& operator()(int i, int j) { return v[static_cast<size_t>(j) * nx + i]; }
    double operator()(int i, int j) const { return v[static_cast<size_t>(j) * nx + i]; }
    size_t size() const { return v.size(); }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }
};

/// Fixed-order compensated (Neumaier) summation.  Used for all conservation
/// diagnostics so the reported drift reflects the scheme, not the reduction.
class StableSum {
  public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0, c_ = 0;
};

} // namespace elfv
