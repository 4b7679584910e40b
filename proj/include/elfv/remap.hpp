#pragma once

#include "elfv/geometry.hpp"
#include "elfv/grid.hpp"
#include "elfv/poly.hpp"
#include "elfv/velocity.hpp"

namespace elfv {

/// Conservative transfer of a piecewise polynomial onto the traced quads of
/// one upstream slice.  Each quad gets the polynomial of its donor cell plus
/// a constant shift chosen so the quad integral reproduces the clipped mass
/// exactly; evaluation anywhere in the quad is donor + shift.
struct RemappedField {
    const GridSpec* g = nullptr;
    const PiecewisePoly* src = nullptr;
    const UpstreamSlice* slice = nullptr;
    CellField mass;  // integral of src over each quad (the clipped "mass")
    CellField avg;   // mass / cell area; identity slices copy the source
                     // averages verbatim so a zero-velocity step is exact
    CellField shift; // mass-fixing constant c
    std::vector<int> donor_p, donor_q; // unwrapped donor cell indices

    /// Value of the remapped polynomial of quad (i,j) at a world point in the
    /// quad's (unwrapped) frame.
    double eval(int i, int j, double x, double y) const {
        int p = donor_p[static_cast<size_t>(j) * g->nx + i];
        int q = donor_q[static_cast<size_t>(j) * g->nx + i];
        return src->eval_world(*g, g->wrap_x(p), g->wrap_y(q), p, q, x, y) +
               shift(i, j);
    }
};

/// Remap `src` onto `slice`.  When `integrand` is non-null, the same clipping
/// pass also accumulates the plain integral of `integrand` over each quad
/// (each piece integrated with its own cell's polynomial) into
/// `integral_out`; this is how the diffusion term rides along without a
/// second geometry sweep.
///
/// Donor selection: among the cells the quad overlaps, the one whose
/// polynomial integrated over the whole quad comes closest to the quad mass;
/// ties go to the lexicographically smallest (p,q).  On ZeroGhost axes,
/// pieces outside the domain contribute zero mass and are not donor
/// candidates; a quad entirely outside keeps its own cell as donor with zero
/// shift.
RemappedField remap_field(const GridSpec& g, const PiecewisePoly& src,
                          const UpstreamSlice& slice,
                          const PiecewisePoly* integrand = nullptr,
                          CellField* integral_out = nullptr);

/// Integral of the piecewise polynomial over one convex quad (CCW corners):
/// clip against the grid, integrate each piece with its owning cell's
/// polynomial by Green's theorem, and sum.
double upstream_mass(const GridSpec& g, const PiecewisePoly& src,
                     const Vec2 quad[4]);

} // namespace elfv
