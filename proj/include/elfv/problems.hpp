#pragma once

#include "elfv/stepper.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace elfv {

/// How a problem's advecting field is defined.  The two Poisson-backed cases
/// differ only in the sign convention tying the scalar to its potential.
enum class FieldCoupling {
    AnalyticField,  // closed-form velocity
    FluxDerivative, // (f1'(u), f2'(u))
    GuidingCenter,  // v = perp gradient of (-lap)^{-1} u
    Streamfunction  // v = perp gradient of (-lap)^{-1} (-u)
};

/// A benchmark problem: domain, physics coefficients, velocity source,
/// initial condition, and (when known) the exact solution.
struct ProblemDef {
    std::string name;
    std::string label;
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    Bc bc_x = Bc::Periodic, bc_y = Bc::Periodic;
    FieldCoupling coupling = FieldCoupling::AnalyticField;
    double eps = 0; // diffusion coefficient
    Scheme default_scheme = Scheme::Rk3;
    std::shared_ptr<VelocityProvider> velocity; // analytic couplings only
    std::function<double(double, double)> ic;
    /// exact(x,y,t); empty when no closed form exists.  When exact_period > 0
    /// the formula is only valid at integer multiples of that period.
    std::function<double(double, double, double)> exact;
    double exact_period = 0;
    std::vector<std::string> diag_names; // extras appended to each record
    std::function<void(Integrator&, const GridSpec&, const CellField&,
                       std::vector<double>&)>
        diag_extras;
};

/// Look up a problem by registry name; throws ConfigError for unknown names.
/// An optional variant is folded in as "<name>-<variant>".
ProblemDef make_problem(const std::string& name,
                        const std::string& variant = "");
std::vector<std::string> problem_names();

GridSpec problem_grid(const ProblemDef& p, int nx, int ny);

/// Cell averages of a pointwise function by 4x4 tensor Gauss per cell.
CellField cell_average_field(const GridSpec& g,
                             const std::function<double(double, double)>& f);

CellField initial_state(const ProblemDef& p, const GridSpec& g);

/// Build the time integrator matching the problem's coupling and physics.
Integrator make_integrator(const ProblemDef& p, const GridSpec& g,
                           IntegratorOptions opt);

/// Total mass = sum of cell averages times cell area, compensated summation.
double total_mass(const GridSpec& g, const CellField& u);

struct ErrorNorms {
    double l1 = 0, l2 = 0, linf = 0;
};

/// Norms of u minus the cell averages (4x4 Gauss) of a pointwise field:
/// L1 = sum dxdy|e|, L2 = sqrt(sum dxdy e^2), Linf = max|e|.
ErrorNorms error_norms(const GridSpec& g, const CellField& u,
                       const std::function<double(double, double)>& exact);

/// Norms of the difference of two same-size average fields.
ErrorNorms field_error(const GridSpec& g, const CellField& u,
                       const CellField& ref);

/// Average a fine solution onto a coarser grid whose resolution divides the
/// fine one exactly (means of means); used for self-refinement references.
CellField coarsen_to(const GridSpec& g_fine, const CellField& u_fine,
                     const GridSpec& g_coarse);

struct DiagRow {
    double t = 0;
    double mass = 0;
    std::vector<double> extras;
};

/// One diagnostics record: total mass plus the problem's extra scalars.
DiagRow diagnostics_row(const ProblemDef& p, Integrator& integ,
                        const GridSpec& g, double t, const CellField& u);

} // namespace elfv
