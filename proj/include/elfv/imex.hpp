#pragma once

#include "elfv/grid.hpp"
#include "elfv/spectral.hpp"

#include <string>

namespace elfv {

enum class Scheme { Rk3, Imex111, Imex122, Imex233 };

/// Parse "rk3" / "imex111" / "imex122" / "imex233"; throws ConfigError on
/// anything else.
Scheme scheme_from_name(const std::string& name);
const char* scheme_name(Scheme s);

/// Paired Butcher tableaux sharing abscissae: A,b,c for the implicit
/// (diagonally implicit, first stage explicit) part, Ah,bh,ch for the
/// explicit part.  Pure explicit schemes set `implicit` false and leave A,b
/// zero.  Construction asserts row sums match the abscissae and weights sum
/// to one.
struct ButcherPair {
    int stages = 0;
    bool implicit = false;
    double A[3][3] = {};
    double b[3] = {};
    double c[3] = {};
    double Ah[3][3] = {};
    double bh[3] = {};
    double ch[3] = {};
};

ButcherPair tableau(Scheme s);

struct CgOptions {
    double tol = 1e-12; // relative inf-norm of the true residual
    int max_iter = 2000;
};

/// Solve (I - coeff*D) x = rhs with D = laplacian_averages, coeff >= 0.
/// Fully periodic grids with a workspace solve exactly in Fourier space;
/// otherwise plain conjugate gradient (the operator is SPD: the stencil
/// symbol is nonpositive, and zero extension restricts the quadratic form).
/// CG exits only after the true residual satisfies
/// |rhs - (I - coeff*D)x|_inf <= tol * |rhs|_inf, else throws SolverError.
CellField implicit_helmholtz(const GridSpec& g, const CellField& rhs,
                             double coeff, SpectralWorkspace* ws,
                             const CgOptions& opt = {});

} // namespace elfv
