#pragma once

#include "elfv/grid.hpp"
#include "elfv/remap.hpp"
#include "elfv/velocity.hpp"

namespace elfv {

/// Quadrature rule for line integrals along traced cell edges.  The default
/// 3-point Gauss rule integrates degree 5 exactly, enough for a quadratic
/// trace against a linear normal velocity.
struct EdgeQuadrature {
    int npts = 3;
    const double* nodes = kGauss3Node;
    const double* weights = kGauss3Weight;
};

/// Cell averages of the Laplacian to fourth order: the 1D five-point stencil
/// (-1/12, 4/3, -5/2, 4/3, -1/12)/h^2 applied along each axis.  Periodic axes
/// wrap; ZeroGhost axes read zero outside the domain.
CellField laplacian_averages(const GridSpec& g, const CellField& u);

/// Net convective increment per cell on one slice of the traced mesh: the sum
/// over the cell's four faces of the signed line integral of W * u_up, where
/// W = (a - alpha, b - beta) . n with the physical velocity (a,b) sampled at
/// t_stage, the modified velocity (alpha,beta) interpolated along the face
/// from the anchor nodes of the face's Lagrangian label, and u_up the
/// remapped trace from the upwind side of the face (sign of W per quadrature
/// point).  Each interior face is integrated once and added with opposite
/// signs to its two cells, so the increments telescope: on a fully periodic
/// domain the field sums to zero exactly.  On ZeroGhost axes the exterior
/// trace is zero, so boundary faces only let mass out, never in.
CellField convection_flux(const GridSpec& g, const UpstreamSlice& slice,
                          const RemappedField& rf, const NodeVelocity& anchor,
                          const VelocityProvider& pv, double t_stage,
                          const EdgeQuadrature& eq = {});

} // namespace elfv
