#include "elfv/remap.hpp"

#include <cmath>
#include <limits>

namespace elfv {

namespace {

/// Exact moments of the full cell rectangle (p,q) about a reference point,
/// given the offset of the cell center from the reference.  Cheaper and
/// better conditioned than running the Green quadrature on the rectangle.
inline void full_cell_moments(double cx_off, double cy_off, double dx,
                              double dy, double m[6]) {
    double area = dx * dy;
    m[0] = area;
    m[1] = area * cx_off;
    m[2] = area * cy_off;
    m[3] = area * (cx_off * cx_off + dx * dx / 12.0);
    m[4] = area * cx_off * cy_off;
    m[5] = area * (cy_off * cy_off + dy * dy / 12.0);
}

} // namespace

RemappedField remap_field(const GridSpec& g, const PiecewisePoly& src,
                          const UpstreamSlice& slice,
                          const PiecewisePoly* integrand,
                          CellField* integral_out) {
    RemappedField rf;
    rf.g = &g;
    rf.src = &src;
    rf.slice = &slice;
    rf.mass = CellField(g);
    rf.avg = CellField(g);
    rf.shift = CellField(g);
    rf.donor_p.resize(static_cast<size_t>(g.nx) * g.ny);
    rf.donor_q.resize(static_cast<size_t>(g.nx) * g.ny);

    const bool want_g = integrand != nullptr;
    if (want_g) *integral_out = CellField(g);
    const double cell_area = g.cell_area();
    const int nx = g.nx, ny = g.ny;

    if (slice.identity) {
        // The Eulerian slice: every quad is its own cell, the clipped mass is
        // the stored average times the cell area, and the average passes
        // through verbatim (so zero velocity reproduces the field exactly).
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                size_t c = static_cast<size_t>(j) * nx + i;
                double ub = src(i, j).a[0];
                rf.avg(i, j) = ub;
                rf.mass(i, j) = ub * cell_area;
                rf.shift(i, j) = 0.0;
                rf.donor_p[c] = i;
                rf.donor_q[c] = j;
                if (want_g)
                    (*integral_out)(i, j) = (*integrand)(i, j).a[0] * cell_area;
            }
        return rf;
    }

#pragma omp parallel
    {
        std::vector<int> cp, cq;
        cp.reserve(64);
        cq.reserve(64);
#pragma omp for schedule(static)
        for (int j = 0; j < ny; ++j) {
            Vec2 quad[4];
            for (int i = 0; i < nx; ++i) {
                slice.quad(i, j, quad);
                const double area = polygon_area(quad, 4);
                const double xr = g.center_x(i), yr = g.center_y(j);

                double total_m[6] = {0, 0, 0, 0, 0, 0};
                double mass = 0, gint = 0;
                bool self_seen = false;
                cp.clear();
                cq.clear();

                clip_quad_to_grid(
                    quad, g,
                    [&](int p, int q, const detail::ClipPoly& piece,
                        bool full) {
                        double m[6];
                        if (full)
                            full_cell_moments((p - i) * g.dx, (q - j) * g.dy,
                                              g.dx, g.dy, m);
                        else
                            polygon_moments(piece, xr, yr, m);
                        for (int k = 0; k < 6; ++k) total_m[k] += m[k];

                        // Outside pieces still shape the quad geometry above,
                        // but the zero extension contributes no mass and the
                        // missing cell cannot donate.
                        bool inside = (g.bc_x == Bc::Periodic || g.in_x(p)) &&
                                      (g.bc_y == Bc::Periodic || g.in_y(q));
                        if (!inside) return;

                        int wp = g.wrap_x(p), wq = g.wrap_y(q);
                        double dsx = static_cast<double>(i - p);
                        double dsy = static_cast<double>(j - q);
                        mass += poly_integral_from_moments(src(wp, wq), dsx,
                                                           dsy, g.dx, g.dy, m);
                        if (want_g)
                            gint += poly_integral_from_moments(
                                (*integrand)(wp, wq), dsx, dsy, g.dx, g.dy, m);
                        if (p == i && q == j) self_seen = true;
                        cp.push_back(p);
                        cq.push_back(q);
                    });

                // Donor: whole-quad integral of each overlapped cell's
                // polynomial, from the accumulated moments; closest to the
                // clipped mass wins, first (clip order is lexicographic in
                // (p,q)) on ties.  The home cell always competes, so a quad
                // with no interior overlap still gets a donor.
                double best_err = std::numeric_limits<double>::infinity();
                double best_val = 0;
                int bp = i, bq = j;
                for (size_t k = 0; k < cp.size(); ++k) {
                    int p = cp[k], q = cq[k];
                    double val = poly_integral_from_moments(
                        src(g.wrap_x(p), g.wrap_y(q)),
                        static_cast<double>(i - p), static_cast<double>(j - q),
                        g.dx, g.dy, total_m);
                    double err = std::abs(val - mass);
                    if (err < best_err) {
                        best_err = err;
                        best_val = val;
                        bp = p;
                        bq = q;
                    }
                }
                if (!self_seen) {
                    double val = poly_integral_from_moments(
                        src(i, j), 0.0, 0.0, g.dx, g.dy, total_m);
                    double err = std::abs(val - mass);
                    if (err < best_err) {
                        best_val = val;
                        bp = i;
                        bq = j;
                    }
                }

                size_t c = static_cast<size_t>(j) * nx + i;
                rf.mass(i, j) = mass;
                rf.avg(i, j) = mass / cell_area;
                rf.shift(i, j) = (mass - best_val) / area;
                rf.donor_p[c] = bp;
                rf.donor_q[c] = bq;
                if (want_g) (*integral_out)(i, j) = gint;
            }
        }
    }
    return rf;
}

double upstream_mass(const GridSpec& g, const PiecewisePoly& src,
                     const Vec2 quad[4]) {
    double xr = 0.25 * (quad[0].x + quad[1].x + quad[2].x + quad[3].x);
    double yr = 0.25 * (quad[0].y + quad[1].y + quad[2].y + quad[3].y);
    double mass = 0;
    clip_quad_to_grid(quad, g,
                      [&](int p, int q, const detail::ClipPoly& piece,
                          bool full) {
                          bool inside =
                              (g.bc_x == Bc::Periodic || g.in_x(p)) &&
                              (g.bc_y == Bc::Periodic || g.in_y(q));
                          if (!inside) return;
                          double m[6];
                          if (full)
                              full_cell_moments(g.center_x(p) - xr,
                                                g.center_y(q) - yr, g.dx, g.dy,
                                                m);
                          else
                              polygon_moments(piece, xr, yr, m);
                          mass += poly_integral_from_moments(
                              src(g.wrap_x(p), g.wrap_y(q)),
                              (xr - g.center_x(p)) / g.dx,
                              (yr - g.center_y(q)) / g.dy, g.dx, g.dy, m);
                      });
    return mass;
}

} // namespace elfv
