#pragma once

#include "elfv/grid.hpp"

namespace elfv {

/// Quadratic polynomial in the scaled local basis of one host cell:
///
///   p(x,y) = a1 + a2*mu + a3*nu + a4*(mu^2 - 1/12) + a5*mu*nu + a6*(nu^2 - 1/12)
///
/// with mu = (x - xc)/dx, nu = (y - yc)/dy measured from the host cell center.
/// P4 and P6 are shifted so every non-constant basis function has zero mean
/// over the host cell; hence the host-cell average of p is exactly a1.
/// The basis is a plain polynomial in (x,y), so p can be evaluated anywhere,
/// not just inside the host cell.
struct LocalPoly {
    double a[6] = {0, 0, 0, 0, 0, 0};

    double eval(double mu, double nu) const {
        return a[0] + a[1] * mu + a[2] * nu + a[3] * (mu * mu - 1.0 / 12.0) +
               a[4] * mu * nu + a[5] * (nu * nu - 1.0 / 12.0);
    }

    /// Mean of p over a congruent cell whose center is offset by (sx,sy) cell
    /// widths from the host center.  Closed form:
    ///   <P2> = sx, <P3> = sy, <P4> = sx^2, <P5> = sx*sy, <P6> = sy^2.
    double shifted_cell_mean(double sx, double sy) const {
        return a[0] + a[1] * sx + a[2] * sy + a[3] * sx * sx + a[4] * sx * sy +
               a[5] * sy * sy;
    }
};

/// One LocalPoly per cell of a grid, same layout as CellField.
struct PiecewisePoly {
    int nx = 0, ny = 0;
    std::vector<LocalPoly> polys;

    PiecewisePoly() = default;
    explicit PiecewisePoly(const GridSpec& g)
        : nx(g.nx), ny(g.ny), polys(static_cast<size_t>(g.nx) * g.ny) {}

    LocalPoly& operator()(int i, int j) { return polys[static_cast<size_t>(j) * nx + i]; }
    const LocalPoly& operator()(int i, int j) const {
        return polys[static_cast<size_t>(j) * nx + i];
    }

    /// Evaluate the polynomial of cell (i,j) at a world point.  (ci,cj) give
    /// the *unwrapped* cell index whose center defines the local chart; for
    /// periodic lookups the coefficients may come from the wrapped cell while
    /// the chart stays unwrapped.
    double eval_world(const GridSpec& g, int i, int j, int ci, int cj, double x,
                      double y) const {
        const LocalPoly& p = (*this)(i, j);
        double mu = (x - g.center_x(ci)) / g.dx;
        double nu = (y - g.center_y(cj)) / g.dy;
        return p.eval(mu, nu);
    }
};

} // namespace elfv
