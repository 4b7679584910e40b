#include "elfv/weno.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace elfv {

void gather_stencil(const GridSpec& g, const CellField& u, int i, int j,
                    double s[9]) {
    int n = 0;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di, ++n) {
            int ci = i + di, cj = j + dj;
            double val = 0;
            bool ok_x = true, ok_y = true;
            if (g.bc_x == Bc::Periodic)
                ci = g.wrap_x(ci);
            else
                ok_x = g.in_x(ci);
            if (g.bc_y == Bc::Periodic)
                cj = g.wrap_y(cj);
            else
                ok_y = g.in_y(cj);
            if (ok_x && ok_y) val = u(ci, cj);
            s[n] = val;
        }
    }
}

LocalPoly build_q0(const double s[9]) {
    // Indices: s[0..8] = u1..u9 (u5 = s[4] is the center).
    LocalPoly p;
    p.a[0] = s[4];
    p.a[1] = 0.5 * (s[5] - s[3]);
    p.a[2] = 0.5 * (s[7] - s[1]);
    p.a[3] = 0.5 * (s[5] + s[3]) - s[4];
    p.a[4] = 0.25 * (s[0] - s[2] - s[6] + s[8]);
    p.a[5] = 0.5 * (s[7] + s[1]) - s[4];
    return p;
}

void build_linears(const double s[9], LocalPoly q[8]) {
    const double u1 = s[0], u2 = s[1], u3 = s[2], u4 = s[3], u5 = s[4],
                 u6 = s[5], u7 = s[6], u8 = s[7], u9 = s[8];
    // Each candidate interpolates the center average plus the two listed
    // neighbor averages; a2 multiplies mu, a3 multiplies nu.
    const double c[8][2] = {
        {u2 - u1, u5 - u2}, // {1,2}
        {u3 - u2, u5 - u2}, // {2,3}
        {u6 - u5, u6 - u3}, // {3,6}
        {u6 - u5, u9 - u6}, // {6,9}
        {u9 - u8, u8 - u5}, // {8,9}
        {u8 - u7, u8 - u5}, // {7,8}
        {u5 - u4, u7 - u4}, // {4,7}
        {u5 - u4, u4 - u1}, // {1,4}
    };
    for (int k = 0; k < 8; ++k) {
        q[k] = LocalPoly{};
        q[k].a[0] = u5;
        q[k].a[1] = c[k][0];
        q[k].a[2] = c[k][1];
    }
}

void smoothness_indicators(const LocalPoly& q0, const LocalPoly q[8],
                           double beta[9]) {
    beta[0] = q0.a[1] * q0.a[1] + q0.a[2] * q0.a[2] +
              (13.0 / 3.0) * (q0.a[3] * q0.a[3] + q0.a[5] * q0.a[5]) +
              (7.0 / 6.0) * q0.a[4] * q0.a[4];
    for (int k = 0; k < 8; ++k)
        beta[k + 1] = q[k].a[1] * q[k].a[1] + q[k].a[2] * q[k].a[2];
}

void nonlinear_weights(const double beta[9], const WenoParams& wp,
                       double omega[9]) {
    double tau = 0;
    for (int k = 1; k < 9; ++k) tau += std::abs(beta[0] - beta[k]);
    tau /= 8.0;
    double t54 = std::pow(tau, 1.25);
    double sum = 0;
    for (int k = 0; k < 9; ++k) {
        omega[k] = wp.gamma[k] * (1.0 + t54 / (beta[k] + wp.eps_w));
        sum += omega[k];
    }
    for (int k = 0; k < 9; ++k) omega[k] /= sum;
}

LocalPoly blend(const LocalPoly& q0, const LocalPoly q[8],
                const double omega[9], const WenoParams& wp) {
    LocalPoly out;
    const double w0g = omega[0] / wp.gamma[0];
    for (int l = 0; l < 6; ++l) {
        double lin = 0, gam_lin = 0;
        for (int k = 0; k < 8; ++k) {
            lin += omega[k + 1] * q[k].a[l];
            gam_lin += wp.gamma[k + 1] * q[k].a[l];
        }
        out.a[l] = w0g * (q0.a[l] - gam_lin) + lin;
    }
    return out;
}

PiecewisePoly reconstruct_field(const GridSpec& g, const CellField& u,
                                const WenoParams& wp) {
    PiecewisePoly out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        double s[9], beta[9], omega[9];
        LocalPoly q[8];
        for (int i = 0; i < g.nx; ++i) {
            gather_stencil(g, u, i, j, s);
            LocalPoly q0 = build_q0(s);
            build_linears(s, q);
            smoothness_indicators(q0, q, beta);
            nonlinear_weights(beta, wp, omega);
            out(i, j) = blend(q0, q, omega, wp);
        }
    }
    return out;
}

PiecewisePoly reconstruct_q0_field(const GridSpec& g, const CellField& u) {
    PiecewisePoly out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j) {
        double s[9];
        for (int i = 0; i < g.nx; ++i) {
            gather_stencil(g, u, i, j, s);
            out(i, j) = build_q0(s);
        }
    }
    return out;
}

} // namespace elfv
