#pragma once

#include "elfv/grid.hpp"
#include "elfv/velocity.hpp"

#include <memory>

namespace elfv {

/// Fourier-space solver bundle for one fully periodic grid: cached FFT plans
/// plus the modal machinery shared by the implicit diffusion solve and the
/// velocity-coupling Poisson solves.  Not internally synchronized; use one
/// workspace per thread of control.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(const GridSpec& g);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    /// Symbol of the discrete cell-average Laplacian D (fourth-order 5-point
    /// stencil per axis) at mode indices (ki,kj).  Nonpositive for all modes,
    /// so I - coeff*D is invertible for coeff >= 0.
    double dsymbol(int ki, int kj) const;

    /// Solve (I - coeff*D) x = rhs exactly mode by mode.  coeff >= 0.
    /// The zero mode passes through unchanged, preserving the mean.
    CellField helmholtz_solve(const CellField& rhs, double coeff);

    struct PerpVelocity {
        CellField a, b;    // cell averages of the velocity components
        CellField w;       // potential w = (-Δ)^{-1}(source - mean), centers
        NodeVelocity nodes; // point samples at grid nodes (half-cell shift)
    };

    /// Divergence-free velocity derived from a scalar source field:
    ///   w = (-Δ)^{-1}(source - mean),  velocity = (-w_y, +w_x),
    /// with continuous spectral differentiation.  This covers both coupled
    /// models in use: a potential whose perpendicular gradient advects the
    /// source (w is the electrostatic potential, or minus the
    /// streamfunction).  The returned nodes are tagged with t_anchor = 0;
    /// the caller re-tags as needed.
    PerpVelocity solve_perp_velocity(const CellField& source);

    const GridSpec& grid() const { return g_; }

  private:
    struct Impl;
    GridSpec g_;
    std::unique_ptr<Impl> impl_;
};

} // namespace elfv
