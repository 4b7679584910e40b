#include "elfv/operators.hpp"

#include <vector>

namespace elfv {

namespace {

constexpr double kLap5[5] = {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0,
                             -1.0 / 12.0};

/// Remapped trace of the (possibly out-of-range) neighbor cell (ci,cj) at a
/// world point expressed in the home face's frame.  Periodic neighbors are
/// wrapped and the point translated into the wrapped quad's unwrapped chart;
/// missing ZeroGhost neighbors contribute the zero extension.
inline double rf_trace(const RemappedField& rf, const GridSpec& g, int ci,
                       int cj, double x, double y) {
    if (g.bc_x == Bc::ZeroGhost) {
        if (!g.in_x(ci)) return 0.0;
    } else if (!g.in_x(ci)) {
        int wi = g.wrap_x(ci);
        x += (wi - ci) * g.dx;
        ci = wi;
    }
    if (g.bc_y == Bc::ZeroGhost) {
        if (!g.in_y(cj)) return 0.0;
    } else if (!g.in_y(cj)) {
        int wj = g.wrap_y(cj);
        y += (wj - cj) * g.dy;
        cj = wj;
    }
    return rf.eval(ci, cj, x, y);
}

} // namespace

CellField laplacian_averages(const GridSpec& g, const CellField& u) {
    CellField out(g);
    const int nx = g.nx, ny = g.ny;
    const double ix2 = 1.0 / (g.dx * g.dx), iy2 = 1.0 / (g.dy * g.dy);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double sx = 0, sy = 0;
            for (int k = -2; k <= 2; ++k) {
                double c = kLap5[k + 2];
                int ii = i + k;
                if (g.bc_x == Bc::Periodic)
                    sx += c * u(g.wrap_x(ii), j);
                else if (g.in_x(ii))
                    sx += c * u(ii, j);
                int jj = j + k;
                if (g.bc_y == Bc::Periodic)
                    sy += c * u(i, g.wrap_y(jj));
                else if (g.in_y(jj))
                    sy += c * u(i, jj);
            }
            out(i, j) = sx * ix2 + sy * iy2;
        }
    return out;
}

CellField convection_flux(const GridSpec& g, const UpstreamSlice& slice,
                          const RemappedField& rf, const NodeVelocity& anchor,
                          const VelocityProvider& pv, double t_stage,
                          const EdgeQuadrature& eq) {
    const int nx = g.nx, ny = g.ny;
    const int np = eq.npts;
    const bool per_x = g.bc_x == Bc::Periodic;
    const bool per_y = g.bc_y == Bc::Periodic;
    const int nfx = per_x ? nx : nx + 1; // computed x-faces per row
    const int nfy = per_y ? ny : ny + 1; // computed y-face rows

    // phix(i,j): flux through the face between cells (i-1,j) and (i,j),
    // positive toward +x.  phiy(i,j): between (i,j-1) and (i,j), toward +y.
    std::vector<double> phix(static_cast<size_t>(nx + 1) * ny);
    std::vector<double> phiy(static_cast<size_t>(nx) * (ny + 1));

#pragma omp parallel
    {
        std::vector<double> xs, ys, as, bs;
        xs.resize(static_cast<size_t>(std::max(nx + 1, nx)) * np);
        ys.resize(xs.size());
        as.resize(xs.size());
        bs.resize(xs.size());

#pragma omp for schedule(static) nowait
        for (int j = 0; j < ny; ++j) {
            // Gauss points of every x-face in row j, one provider batch.
            for (int i = 0; i < nfx; ++i) {
                double ax = slice.nx_at(i, j), ay = slice.ny_at(i, j);
                double tx = slice.nx_at(i, j + 1) - ax;
                double ty = slice.ny_at(i, j + 1) - ay;
                for (int q = 0; q < np; ++q) {
                    double l = eq.nodes[q];
                    xs[static_cast<size_t>(i) * np + q] = ax + l * tx;
                    ys[static_cast<size_t>(i) * np + q] = ay + l * ty;
                }
            }
            pv.eval(xs.data(), ys.data(), nfx * np, t_stage, as.data(),
                    bs.data());
            for (int i = 0; i < nfx; ++i) {
                double ax = slice.nx_at(i, j), ay = slice.ny_at(i, j);
                double tx = slice.nx_at(i, j + 1) - ax;
                double ty = slice.ny_at(i, j + 1) - ay;
                double a0 = anchor.av(i, j), a1 = anchor.av(i, j + 1);
                double b0 = anchor.bv(i, j), b1 = anchor.bv(i, j + 1);
                double f = 0;
                for (int q = 0; q < np; ++q) {
                    size_t k = static_cast<size_t>(i) * np + q;
                    double l = eq.nodes[q];
                    double alpha = a0 + l * (a1 - a0);
                    double beta = b0 + l * (b1 - b0);
                    // Unnormalized +x normal (ty,-tx) carries the length.
                    double w = (as[k] - alpha) * ty - (bs[k] - beta) * tx;
                    double up = w > 0
                                    ? rf_trace(rf, g, i - 1, j, xs[k], ys[k])
                                    : rf_trace(rf, g, i, j, xs[k], ys[k]);
                    f += eq.weights[q] * w * up;
                }
                phix[static_cast<size_t>(j) * (nx + 1) + i] = f;
            }
            if (per_x)
                phix[static_cast<size_t>(j) * (nx + 1) + nx] =
                    phix[static_cast<size_t>(j) * (nx + 1)];
        }

#pragma omp for schedule(static)
        for (int j = 0; j < nfy; ++j) {
            for (int i = 0; i < nx; ++i) {
                double ax = slice.nx_at(i, j), ay = slice.ny_at(i, j);
                double tx = slice.nx_at(i + 1, j) - ax;
                double ty = slice.ny_at(i + 1, j) - ay;
                for (int q = 0; q < np; ++q) {
                    double l = eq.nodes[q];
                    xs[static_cast<size_t>(i) * np + q] = ax + l * tx;
                    ys[static_cast<size_t>(i) * np + q] = ay + l * ty;
                }
            }
            pv.eval(xs.data(), ys.data(), nx * np, t_stage, as.data(),
                    bs.data());
            for (int i = 0; i < nx; ++i) {
                double ax = slice.nx_at(i, j), ay = slice.ny_at(i, j);
                double tx = slice.nx_at(i + 1, j) - ax;
                double ty = slice.ny_at(i + 1, j) - ay;
                double a0 = anchor.av(i, j), a1 = anchor.av(i + 1, j);
                double b0 = anchor.bv(i, j), b1 = anchor.bv(i + 1, j);
                double f = 0;
                for (int q = 0; q < np; ++q) {
                    size_t k = static_cast<size_t>(i) * np + q;
                    double l = eq.nodes[q];
                    double alpha = a0 + l * (a1 - a0);
                    double beta = b0 + l * (b1 - b0);
                    // Unnormalized +y normal (-ty,tx).
                    double w = (bs[k] - beta) * tx - (as[k] - alpha) * ty;
                    double up = w > 0
                                    ? rf_trace(rf, g, i, j - 1, xs[k], ys[k])
                                    : rf_trace(rf, g, i, j, xs[k], ys[k]);
                    f += eq.weights[q] * w * up;
                }
                phiy[static_cast<size_t>(j) * nx + i] = f;
            }
        }
    }
    if (per_y)
        for (int i = 0; i < nx; ++i)
            phiy[static_cast<size_t>(ny) * nx + i] = phiy[i];

    CellField out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out(i, j) = phix[static_cast<size_t>(j) * (nx + 1) + i] -
                        phix[static_cast<size_t>(j) * (nx + 1) + i + 1] +
                        phiy[static_cast<size_t>(j) * nx + i] -
                        phiy[static_cast<size_t>(j + 1) * nx + i];
    return out;
}

} // namespace elfv
