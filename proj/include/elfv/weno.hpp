#pragma once

#include "elfv/grid.hpp"
#include "elfv/poly.hpp"

namespace elfv {

/// Linear weights and regularization for the blended reconstruction.
/// gamma[0] belongs to the quadratic candidate, gamma[1..8] to the one-sided
/// linear candidates; they must be positive and sum to 1.
struct WenoParams {
    double gamma[9] = {0.6, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
    double eps_w = 1e-10;
};

/// 3x3 stencil cell averages, numbered row by row from the bottom-left:
///   7 8 9
///   4 5 6      (5 is the center cell)
///   1 2 3
/// stored as s[0..8] = u1..u9.
///
/// Quadratic candidate: matches the averages of cells {2,4,5,6,8} exactly and
/// minimizes the summed squared mismatch over the corner cells {1,3,7,9}.
/// On a uniform mesh the constrained least-squares system collapses to the
/// closed forms below.
LocalPoly build_q0(const double s[9]);

/// Eight linear candidates; q[k-1] matches the center average and the two
/// stencil averages {1,2},{2,3},{3,6},{6,9},{8,9},{7,8},{4,7},{1,4} for
/// k = 1..8 (walking the ring counterclockwise from the bottom-left pair).
void build_linears(const double s[9], LocalPoly q[8]);

/// beta[0] for the quadratic candidate, beta[1..8] for the linears:
///   beta0 = a2^2 + a3^2 + 13/3 a4^2 + 7/6 a5^2 + 13/3 a6^2
///   betak = a2^2 + a3^2
/// (the integral of all squared first and second scaled derivatives over the
/// host cell).
void smoothness_indicators(const LocalPoly& q0, const LocalPoly q[8],
                           double beta[9]);

/// tau = mean |beta0 - betak|; omega_k ∝ gamma_k (1 + tau^{5/4}/(beta_k+eps));
/// normalized to sum exactly to 1.
void nonlinear_weights(const double beta[9], const WenoParams& wp,
                       double omega[9]);

/// Final polynomial: omega0*(q0/gamma0 - sum_k (gamma_k/gamma0) q_k)
/// + sum_k omega_k q_k.  Host-cell mean is the center average for any
/// weights summing to 1.
LocalPoly blend(const LocalPoly& q0, const LocalPoly q[8],
                const double omega[9], const WenoParams& wp);

/// Per-cell blended reconstruction of a cell-average field.  Boundary
/// stencils wrap (periodic) or read zeros (ZeroGhost) per the grid's bcs.
PiecewisePoly reconstruct_field(const GridSpec& g, const CellField& u,
                                const WenoParams& wp);

/// Per-cell unlimited quadratic reconstruction (the q0 candidate only); used
/// for smooth derived fields where no shock capturing is wanted.
PiecewisePoly reconstruct_q0_field(const GridSpec& g, const CellField& u);

/// Fill s[0..8] with the 3x3 stencil around (i,j) honoring the grid's bcs.
void gather_stencil(const GridSpec& g, const CellField& u, int i, int j,
                    double s[9]);

} // namespace elfv
