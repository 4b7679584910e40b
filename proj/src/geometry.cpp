#include "elfv/geometry.hpp"

namespace elfv {

double polygon_area(const Vec2* v, int n) {
    double s = 0;
    for (int i = 0; i < n; ++i) {
        int j = i + 1 == n ? 0 : i + 1;
        s += v[i].x * v[j].y - v[j].x * v[i].y;
    }
    return 0.5 * s;
}

bool check_convex(const Vec2 q[4], double area_scale) {
    const double tol = kGeomTol * area_scale;
    for (int i = 0; i < 4; ++i) {
        const Vec2& a = q[i];
        const Vec2& b = q[(i + 1) & 3];
        const Vec2& c = q[(i + 2) & 3];
        double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if (!(cross > tol)) return false;
    }
    return true;
}

namespace {

/// x-antiderivative of the chart polynomial, in chart coordinates:
/// dM/dx = p with mu=(x-xc)/dx, so M carries one factor of dx.
inline double poly_antideriv_x(const LocalPoly& p, double dx, double mu,
                               double nu) {
    return dx * (mu * (p.a[0] + p.a[2] * nu + p.a[5] * (nu * nu - 1.0 / 12.0)) +
                 mu * mu * (0.5 * p.a[1] + 0.5 * p.a[4] * nu) +
                 p.a[3] * (mu * mu * mu / 3.0 - mu / 12.0));
}

} // namespace

double integrate_poly_over_polygon(const LocalPoly& p, double xc, double yc,
                                   double dx, double dy, const Vec2* v,
                                   int n) {
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        int j = i + 1 == n ? 0 : i + 1;
        double dy_edge = v[j].y - v[i].y;
        if (dy_edge == 0) continue;
        double s = 0;
        for (int g = 0; g < 3; ++g) {
            double l = kGauss3Node[g];
            double x = v[i].x + l * (v[j].x - v[i].x);
            double y = v[i].y + l * (v[j].y - v[i].y);
            s += kGauss3Weight[g] *
                 poly_antideriv_x(p, dx, (x - xc) / dx, (y - yc) / dy);
        }
        acc += dy_edge * s;
    }
    return acc;
}

namespace {

template <class GetX, class GetY>
inline void moments_core(int n, GetX px, GetY py, double xr, double yr,
                         double m[6]) {
    for (int k = 0; k < 6; ++k) m[k] = 0;
    for (int i = 0; i < n; ++i) {
        int j = i + 1 == n ? 0 : i + 1;
        double dy_edge = py(j) - py(i);
        if (dy_edge == 0) continue;
        double s[6] = {0, 0, 0, 0, 0, 0};
        for (int g = 0; g < 3; ++g) {
            double l = kGauss3Node[g];
            double w = kGauss3Weight[g];
            double x = (px(i) + l * (px(j) - px(i))) - xr;
            double y = (py(i) + l * (py(j) - py(i))) - yr;
            s[0] += w * x;                 // d/dx = 1
            s[1] += w * 0.5 * x * x;       // d/dx = x
            s[2] += w * x * y;             // d/dx = y
            s[3] += w * x * x * x / 3.0;   // d/dx = x^2
            s[4] += w * 0.5 * x * x * y;   // d/dx = x*y
            s[5] += w * x * y * y;         // d/dx = y^2
        }
        for (int k = 0; k < 6; ++k) m[k] += dy_edge * s[k];
    }
}

} // namespace

void polygon_moments(const Vec2* v, int n, double xr, double yr, double m[6]) {
    moments_core(
        n, [v](int i) { return v[i].x; }, [v](int i) { return v[i].y; }, xr, yr,
        m);
}

void polygon_moments(const detail::ClipPoly& p, double xr, double yr,
                     double m[6]) {
    moments_core(
        p.n, [&p](int i) { return p.x[i]; }, [&p](int i) { return p.y[i]; },
        xr, yr, m);
}

double poly_integral_from_moments(const LocalPoly& p, double sx, double sy,
                                  double dx, double dy, const double m[6]) {
    // Chart coordinates at a point: mu = X/dx + sx, nu = Y/dy + sy, with X,Y
    // measured from the moments' reference point.
    double i_mu = m[1] / dx + sx * m[0];
    double i_nu = m[2] / dy + sy * m[0];
    double i_mumu = m[3] / (dx * dx) + 2.0 * sx * m[1] / dx + sx * sx * m[0];
    double i_munu = m[4] / (dx * dy) + sx * m[2] / dy + sy * m[1] / dx +
                    sx * sy * m[0];
    double i_nunu = m[5] / (dy * dy) + 2.0 * sy * m[2] / dy + sy * sy * m[0];
    return p.a[0] * m[0] + p.a[1] * i_mu + p.a[2] * i_nu +
           p.a[3] * (i_mumu - m[0] / 12.0) + p.a[4] * i_munu +
           p.a[5] * (i_nunu - m[0] / 12.0);
}

} // namespace elfv
