#pragma once

#include "elfv/grid.hpp"
#include "elfv/poly.hpp"

#include <algorithm>
#include <cmath>

namespace elfv {

struct Vec2 {
    double x = 0, y = 0;
};

/// Convexity tolerance for upstream quadrilaterals: consecutive-edge cross
/// products must exceed kGeomTol * dx * dy.
inline constexpr double kGeomTol = 1e-12;

/// Vertices closer than kVertexDedupeTol * max(dx,dy) are merged after
/// clipping, so Green's-theorem quadrature never sees zero-length edges.
inline constexpr double kVertexDedupeTol = 1e-14;

/// Clipped pieces with area below kPieceAreaTol * dx * dy are discarded:
/// geometrically they are slivers from vertices sitting on grid lines.
inline constexpr double kPieceAreaTol = 1e-14;

/// 3-point Gauss-Legendre rule on [0,1]; exact through degree 5, which covers
/// the cubic edge integrands produced by quadratic cell polynomials.
inline constexpr double kGauss3Node[3] = {
    0.11270166537925831, 0.5, 0.88729833462074169};
inline constexpr double kGauss3Weight[3] = {
    5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

double polygon_area(const Vec2* v, int n);

/// Quad corners in CCW node order (LB, RB, RT, LT).  True iff all four
/// consecutive-edge cross products exceed kGeomTol * area_scale.
bool check_convex(const Vec2 q[4], double area_scale);

/// Integral of a host-cell polynomial over an arbitrary CCW polygon, by
/// Green's theorem: the area integral becomes a loop integral of the
/// x-antiderivative against dy, evaluated with 3-point Gauss per edge.
/// Exact (to roundoff) for the quadratic integrand.  (xc,yc) is the host
/// cell center of the polynomial's chart; the polygon may lie anywhere.
double integrate_poly_over_polygon(const LocalPoly& p, double xc, double yc,
                                   double dx, double dy, const Vec2* v, int n);

/// Monomial moments of a CCW polygon about a reference point (xr,yr):
/// m = (∬1, ∬X, ∬Y, ∬X², ∬XY, ∬Y²) with X = x-xr, Y = y-yr.
/// Same Green's-theorem construction; centering keeps the second moments
/// well conditioned.  Used to evaluate many different cell polynomials over
/// one polygon with a single geometry pass.
void polygon_moments(const Vec2* v, int n, double xr, double yr, double m[6]);

/// Integral over the polygon whose centered moments are m of a polynomial
/// whose chart center sits at (xr + sx*dx, yr + sy*dy).
double poly_integral_from_moments(const LocalPoly& p, double sx, double sy,
                                  double dx, double dy, const double m[6]);

namespace detail {

/// Scratch polygon for the clipper.  Capacity 16 comfortably bounds any piece
/// of a convex quad cut by axis-aligned lines.
struct ClipPoly {
    int n = 0;
    double x[16];
    double y[16];
    void push(double px, double py) {
        x[n] = px;
        y[n] = py;
        ++n;
    }
};

/// Split a convex polygon by the line axis==c into the lo side (coord <= c)
/// and the hi side (coord >= c).  Vertices exactly on the line are emitted to
/// both sides; each crossing point is computed once and shared, so the two
/// sides conform bitwise along the cut.
template <int Axis> // 0: cut on x, 1: cut on y
inline void split(const ClipPoly& in, double c, ClipPoly& lo, ClipPoly& hi) {
    lo.n = hi.n = 0;
    for (int i = 0; i < in.n; ++i) {
        int j = i + 1 == in.n ? 0 : i + 1;
        double ai = (Axis == 0 ? in.x[i] : in.y[i]) - c;
        double aj = (Axis == 0 ? in.x[j] : in.y[j]) - c;
        if (ai <= 0) lo.push(in.x[i], in.y[i]);
        if (ai >= 0) hi.push(in.x[i], in.y[i]);
        if ((ai < 0 && aj > 0) || (ai > 0 && aj < 0)) {
            double t = ai / (ai - aj);
            double ox, oy;
            if (Axis == 0) {
                ox = c;
                oy = in.y[i] + t * (in.y[j] - in.y[i]);
            } else {
                ox = in.x[i] + t * (in.x[j] - in.x[i]);
                oy = c;
            }
            lo.push(ox, oy);
            hi.push(ox, oy);
        }
    }
}

/// Merge consecutive vertices closer than tol in both coordinates.
inline void dedupe(ClipPoly& p, double tol) {
    if (p.n < 2) return;
    ClipPoly out;
    out.n = 0;
    for (int i = 0; i < p.n; ++i) {
        int j = i + 1 == p.n ? 0 : i + 1;
        if (std::abs(p.x[i] - p.x[j]) <= tol && std::abs(p.y[i] - p.y[j]) <= tol)
            continue; // drop p[i], keep its twin
        out.push(p.x[i], p.y[i]);
    }
    p = out;
}

inline double area(const ClipPoly& p) {
    double s = 0;
    for (int i = 0; i < p.n; ++i) {
        int j = i + 1 == p.n ? 0 : i + 1;
        s += p.x[i] * p.y[j] - p.x[j] * p.y[i];
    }
    return 0.5 * s;
}

/// True iff the (deduped) piece is exactly the cell rectangle [X0,X1]x[Y0,Y1].
/// Exactness is bitwise: clip cuts place vertices exactly on grid lines, so
/// fully interior cells are recognized without tolerances.
inline bool is_exact_cell_rect(const ClipPoly& p, double X0, double X1,
                               double Y0, double Y1) {
    if (p.n != 4) return false;
    unsigned corner_mask = 0;
    for (int i = 0; i < 4; ++i) {
        bool lx = p.x[i] == X0, hx = p.x[i] == X1;
        bool ly = p.y[i] == Y0, hy = p.y[i] == Y1;
        if (!((lx || hx) && (ly || hy))) return false;
        corner_mask |= 1u << ((hx ? 1 : 0) | (hy ? 2 : 0));
    }
    return corner_mask == 0xF;
}

} // namespace detail

/// Moments of a clipper piece, same contract as the Vec2 overload.
void polygon_moments(const detail::ClipPoly& p, double xr, double yr,
                     double m[6]);

/// Clip a convex CCW quad against the grid lines it spans: first the vertical
/// lines of its bounding box, then the horizontal lines within each vertical
/// strip.  Cut points are shared between neighboring pieces, so the pieces
/// tile the quad exactly.  The sink is called once per surviving piece as
///
///   sink(p, q, poly, full_cell)
///
/// where (p,q) is the *unwrapped* cell index (may be outside [0,n) when the
/// quad leaves the domain; the caller wraps or drops), poly the piece, and
/// full_cell is true when the piece is exactly the cell rectangle.
/// Degenerate pieces (area < kPieceAreaTol*dx*dy) are dropped.
template <class Sink>
void clip_quad_to_grid(const Vec2 quad[4], const GridSpec& g, Sink&& sink) {
    detail::ClipPoly cur;
    cur.n = 0;
    for (int k = 0; k < 4; ++k) cur.push(quad[k].x, quad[k].y);

    double xmin = cur.x[0], xmax = cur.x[0], ymin_all = cur.y[0], ymax_all = cur.y[0];
    for (int k = 1; k < 4; ++k) {
        xmin = std::min(xmin, cur.x[k]);
        xmax = std::max(xmax, cur.x[k]);
        ymin_all = std::min(ymin_all, cur.y[k]);
        ymax_all = std::max(ymax_all, cur.y[k]);
    }
    int p0 = static_cast<int>(std::floor((xmin - g.x_lo) / g.dx));
    int p1 = static_cast<int>(std::floor((xmax - g.x_lo) / g.dx));
    if (p1 < p0) p1 = p0;

    const double vtol = kVertexDedupeTol * std::max(g.dx, g.dy);
    const double amin = kPieceAreaTol * g.dx * g.dy;

    detail::ClipPoly strip, rest, piece, tmp;
    for (int p = p0; p <= p1 && cur.n >= 3; ++p) {
        if (p < p1) {
            detail::split<0>(cur, g.x_lo + (p + 1) * g.dx, strip, rest);
            cur = rest;
        } else {
            strip = cur;
        }
        if (strip.n < 3) continue;

        double ymin = strip.y[0], ymax = strip.y[0];
        for (int k = 1; k < strip.n; ++k) {
            ymin = std::min(ymin, strip.y[k]);
            ymax = std::max(ymax, strip.y[k]);
        }
        int q0 = static_cast<int>(std::floor((ymin - g.y_lo) / g.dy));
        int q1 = static_cast<int>(std::floor((ymax - g.y_lo) / g.dy));
        if (q1 < q0) q1 = q0;

        for (int q = q0; q <= q1 && strip.n >= 3; ++q) {
            if (q < q1) {
                detail::split<1>(strip, g.y_lo + (q + 1) * g.dy, piece, tmp);
                strip = tmp;
            } else {
                piece = strip;
            }
            detail::dedupe(piece, vtol);
            if (piece.n < 3) continue;
            if (std::abs(detail::area(piece)) < amin) continue;
            bool full = detail::is_exact_cell_rect(piece, g.x_lo + p * g.dx,
                                                   g.x_lo + (p + 1) * g.dx,
                                                   g.y_lo + q * g.dy,
                                                   g.y_lo + (q + 1) * g.dy);
            sink(p, q, piece, full);
        }
    }
}

} // namespace elfv
