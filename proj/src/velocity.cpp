#include "elfv/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace elfv {

namespace {

/// Coefficient cell (wrapped) and chart cell (unwrapped) containing a point;
/// ZeroGhost axes clamp instead and report outside-ness.
struct CellLocate {
    int wi, wj;   // coefficient lookup
    int ci, cj;   // chart (unwrapped)
    bool outside; // ZeroGhost only
};

CellLocate locate(const GridSpec& g, double x, double y) {
    CellLocate r{};
    int ci = static_cast<int>(std::floor((x - g.x_lo) / g.dx));
    int cj = static_cast<int>(std::floor((y - g.y_lo) / g.dy));
    r.ci = ci;
    r.cj = cj;
    r.outside = false;
    if (g.bc_x == Bc::Periodic) {
        r.wi = g.wrap_x(ci);
    } else {
        r.wi = std::clamp(ci, 0, g.nx - 1);
        if (!g.in_x(ci)) r.outside = true;
    }
    if (g.bc_y == Bc::Periodic) {
        r.wj = g.wrap_y(cj);
    } else {
        r.wj = std::clamp(cj, 0, g.ny - 1);
        if (!g.in_y(cj)) r.outside = true;
    }
    return r;
}

double eval_recon_at(const GridSpec& g, const PiecewisePoly& rec, double x,
                     double y) {
    CellLocate c = locate(g, x, y);
    if (c.outside) return 0.0; // zero-ghost exterior
    return rec.eval_world(g, c.wi, c.wj, c.ci, c.cj, x, y);
}

} // namespace

void VelocityProvider::eval_at_node(const GridSpec& g, int i, int j, double t,
                                    double& a, double& b) const {
    double x = g.node_x(i), y = g.node_y(j);
    eval(&x, &y, 1, t, &a, &b);
}

void AnalyticVelocity::eval(const double* x, const double* y, int n, double t,
                            double* a, double* b) const {
    for (int k = 0; k < n; ++k) {
        a[k] = fa_(x[k], y[k], t);
        b[k] = fb_(x[k], y[k], t);
    }
}

void FluxDerivativeVelocity::eval(const double* x, const double* y, int n,
                                  double, double* a, double* b) const {
    for (int k = 0; k < n; ++k) {
        double u = recon_ ? eval_recon_at(*g_, *recon_, x[k], y[k]) : 0.0;
        a[k] = df1_(u);
        b[k] = df2_(u);
    }
}

void FluxDerivativeVelocity::eval_at_node(const GridSpec& g, int i, int j,
                                          double, double& a, double& b) const {
    // Lower-left owner cell, so every cell sharing the node sees one value.
    int ci = i - 1, cj = j - 1;
    int wi, wj;
    if (g.bc_x == Bc::Periodic)
        wi = g.wrap_x(ci);
    else
        wi = std::clamp(ci, 0, g.nx - 1), ci = wi;
    if (g.bc_y == Bc::Periodic)
        wj = g.wrap_y(cj);
    else
        wj = std::clamp(cj, 0, g.ny - 1), cj = wj;
    double u = 0.0;
    if (recon_)
        u = recon_->eval_world(g, wi, wj, ci, cj, g.node_x(i), g.node_y(j));
    a = df1_(u);
    b = df2_(u);
}

void ReconVelocity::eval(const double* x, const double* y, int n, double,
                         double* a, double* b) const {
    for (int k = 0; k < n; ++k) {
        CellLocate c = locate(*g_, x[k], y[k]);
        if (c.outside) {
            a[k] = b[k] = 0.0;
            continue;
        }
        a[k] = ar_->eval_world(*g_, c.wi, c.wj, c.ci, c.cj, x[k], y[k]);
        b[k] = br_->eval_world(*g_, c.wi, c.wj, c.ci, c.cj, x[k], y[k]);
    }
}

NodeVelocity nodal_velocity(const VelocityProvider& pv, double t_anchor,
                            const GridSpec& g) {
    NodeVelocity nv(g.nx, g.ny);
    nv.t_anchor = t_anchor;
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            pv.eval_at_node(g, i, j, t_anchor, nv.a[nv.idx(i, j)],
                            nv.b[nv.idx(i, j)]);
    return nv;
}

Vec2 modified_velocity_at(const NodeVelocity& nv, int i, int j, double lx,
                          double ly) {
    double a00 = nv.av(i, j), a10 = nv.av(i + 1, j);
    double a01 = nv.av(i, j + 1), a11 = nv.av(i + 1, j + 1);
    double b00 = nv.bv(i, j), b10 = nv.bv(i + 1, j);
    double b01 = nv.bv(i, j + 1), b11 = nv.bv(i + 1, j + 1);
    double wx0 = 1.0 - lx, wy0 = 1.0 - ly;
    return {wy0 * (wx0 * a00 + lx * a10) + ly * (wx0 * a01 + lx * a11),
            wy0 * (wx0 * b00 + lx * b10) + ly * (wx0 * b01 + lx * b11)};
}

UpstreamSlice trace_nodes(const GridSpec& g, const NodeVelocity& nv,
                          double t) {
    UpstreamSlice sl;
    sl.nx = g.nx;
    sl.ny = g.ny;
    sl.s = t - nv.t_anchor;
    size_t n = static_cast<size_t>(g.nx + 1) * (g.ny + 1);
    sl.x.resize(n);
    sl.y.resize(n);
    if (sl.s == 0.0) {
        // Anchor slice is the Eulerian mesh; copy coordinates verbatim so the
        // coincidence is exact, not merely within rounding.
        sl.identity = true;
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                sl.x[sl.idx(i, j)] = g.node_x(i);
                sl.y[sl.idx(i, j)] = g.node_y(j);
            }
        return sl;
    }
    const double s = sl.s;
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            size_t k = sl.idx(i, j);
            sl.x[k] = g.node_x(i) + s * nv.a[k];
            sl.y[k] = g.node_y(j) + s * nv.b[k];
        }
    // A vanishing velocity field reproduces the Eulerian nodes exactly even
    // for s != 0; flag that so downstream transfers take the verbatim path.
    // The scan bails at the first moved node, so it is O(1) in the usual case.
    sl.identity = true;
    for (int j = 0; j <= g.ny && sl.identity; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            size_t k = sl.idx(i, j);
            if (sl.x[k] != g.node_x(i) || sl.y[k] != g.node_y(j)) {
                sl.identity = false;
                break;
            }
        }
    return sl;
}

int first_nonconvex(const GridSpec& g, const UpstreamSlice& sl) {
    if (sl.identity) return -1;
    const double scale = g.dx * g.dy;
    int bad = -1;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            Vec2 q[4];
            sl.quad(i, j, q);
            if (!check_convex(q, scale)) {
#pragma omp critical
                if (bad < 0 || j * g.nx + i < bad) bad = j * g.nx + i;
            }
        }
    }
    return bad;
}

UpstreamSlice trace_to(const GridSpec& g, const NodeVelocity& nv, double t) {
    UpstreamSlice sl = trace_nodes(g, nv, t);
    int bad = first_nonconvex(g, sl);
    if (bad >= 0)
        throw NumericalError("non-convex upstream cell (" +
                             std::to_string(bad % g.nx) + "," +
                             std::to_string(bad / g.nx) +
                             ") at slice offset " + std::to_string(sl.s) +
                             "; the time step is too large for this velocity");
    return sl;
}

namespace {

/// max|a|/dx + max|b|/dy over nodes (and cell interiors when requested).
double speed_rate(const VelocityProvider& pv, const GridSpec& g, double t) {
    double max_a = 0, max_b = 0;
    {
        std::vector<double> xs(g.nx + 1), a(g.nx + 1), b(g.nx + 1);
        for (int i = 0; i <= g.nx; ++i) xs[i] = g.node_x(i);
        std::vector<double> ys(g.nx + 1);
        for (int j = 0; j <= g.ny; ++j) {
            std::fill(ys.begin(), ys.end(), g.node_y(j));
            pv.eval(xs.data(), ys.data(), g.nx + 1, t, a.data(), b.data());
            for (int i = 0; i <= g.nx; ++i) {
                max_a = std::max(max_a, std::abs(a[i]));
                max_b = std::max(max_b, std::abs(b[i]));
            }
        }
    }
    if (pv.dense_cfl_sampling()) {
        static constexpr double frac[3] = {0.25, 0.5, 0.75};
        std::vector<double> xs(3 * g.nx), ys(3 * g.nx), a(3 * g.nx),
            b(3 * g.nx);
        for (int j = 0; j < g.ny; ++j) {
            for (int fy = 0; fy < 3; ++fy) {
                double y = g.y_lo + (j + frac[fy]) * g.dy;
                int n = 0;
                for (int i = 0; i < g.nx; ++i)
                    for (int fx = 0; fx < 3; ++fx, ++n) {
                        xs[n] = g.x_lo + (i + frac[fx]) * g.dx;
                        ys[n] = y;
                    }
                pv.eval(xs.data(), ys.data(), n, t, a.data(), b.data());
                for (int k = 0; k < n; ++k) {
                    max_a = std::max(max_a, std::abs(a[k]));
                    max_b = std::max(max_b, std::abs(b[k]));
                }
            }
        }
    }
    return max_a / g.dx + max_b / g.dy;
}

} // namespace

DtResult compute_dt(const VelocityProvider& pv, const GridSpec& g, double cfl,
                    double t_now, double dt_cap,
                    const std::vector<double>& check_thetas,
                    const NodeVelocity* fixed_anchor) {
    if (cfl <= 0) throw ConfigError("cfl must be positive");
    double dt;
    if (fixed_anchor != nullptr) {
        double max_a = 0, max_b = 0;
        for (double v : fixed_anchor->a) max_a = std::max(max_a, std::abs(v));
        for (double v : fixed_anchor->b) max_b = std::max(max_b, std::abs(v));
        double rate = max_a / g.dx + max_b / g.dy;
        dt = rate == 0.0 ? cfl * std::min(g.dx, g.dy) : cfl / rate;
    } else if (pv.identically_zero()) {
        dt = cfl * std::min(g.dx, g.dy);
    } else {
        double rate0 = speed_rate(pv, g, t_now);
        if (rate0 == 0.0) {
            dt = cfl * std::min(g.dx, g.dy);
        } else {
            dt = cfl / rate0;
            // Time-varying fields can be nearly frozen right now yet fast by
            // the prospective anchor; re-check the rate there and shrink until
            // the step is consistent with both ends.
            for (int it = 0; it < 5; ++it) {
                double rate1 = speed_rate(pv, g, t_now + std::min(dt, dt_cap));
                double rate = std::max(rate0, rate1);
                double dt_new = cfl / rate;
                if (dt <= 1.25 * dt_new) break;
                dt = dt_new;
            }
        }
    }
    dt = std::min(dt, dt_cap);

    for (int halves = 0;; ++halves) {
        NodeVelocity nv;
        if (fixed_anchor != nullptr) {
            nv = *fixed_anchor;
            nv.t_anchor = t_now + dt;
        } else {
            nv = nodal_velocity(pv, t_now + dt, g);
        }
        bool ok = true;
        for (double theta : check_thetas) {
            UpstreamSlice sl = trace_nodes(g, nv, t_now + dt + (theta - 1.0) * dt);
            if (first_nonconvex(g, sl) >= 0) {
                ok = false;
                break;
            }
        }
        if (ok) return {dt, std::move(nv)};
        if (halves >= 10)
            throw NumericalError(
                "no convex upstream mesh after 10 time-step halvings at t = " +
                std::to_string(t_now));
        dt *= 0.5;
    }
}

} // namespace elfv
