#pragma once

#include "elfv/imex.hpp"
#include "elfv/operators.hpp"
#include "elfv/remap.hpp"
#include "elfv/spectral.hpp"
#include "elfv/velocity.hpp"
#include "elfv/weno.hpp"

#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace elfv {

/// How the advecting velocity couples to the solution.
enum class Coupling {
    Analytic,       // fixed field from a provider
    FluxDerivative, // (f1'(u), f2'(u)) from the current stage reconstruction
    Solved          // perpendicular-gradient field from a Poisson solve on u
};

struct IntegratorOptions {
    Scheme scheme = Scheme::Rk3;
    WenoParams weno{};
    CgOptions cg{};
    EdgeQuadrature edge_quad{};
    /// Solved coupling: sign of the Poisson source.  +1 advects by the
    /// perpendicular gradient of the potential of +u (guiding-center field),
    /// -1 by that of -u (vorticity/streamfunction convention).
    double solve_sign = 1.0;
};

/// Single-step advancer for the semi-Lagrangian flux-form update: per step it
/// anchors the modified velocity at the step's end time, traces the cell
/// mesh to every slice the tableau touches, remaps the stage reconstructions
/// onto those slices, and assembles the Runge-Kutta combination of remapped
/// mass, convective face fluxes, and (for IMEX tableaux) explicit and
/// implicit diffusion terms.  Slices, remaps, and fluxes are computed once
/// per step and shared between stages.
class Integrator {
  public:
    /// `pv` must outlive the integrator; it is required for Analytic coupling
    /// and must be a FluxDerivativeVelocity for FluxDerivative coupling.
    /// Solved coupling ignores it and requires a fully periodic grid.
    Integrator(const GridSpec& g, Coupling coupling, double eps,
               VelocityProvider* pv, const IntegratorOptions& opt);

    /// Advance the cell averages from time t by one step of at most dt_cap,
    /// honoring the CFL number.  Returns the dt actually taken.
    double step(CellField& u, double t, double cfl, double dt_cap);

    /// Poisson velocity of an arbitrary state (Solved coupling only).
    SpectralWorkspace::PerpVelocity solve_velocity(const CellField& u);

    const GridSpec& grid() const { return *g_; }
    const ButcherPair& butcher() const { return tab_; }
    double eps() const { return eps_; }
    Coupling coupling() const { return coupling_; }

  private:
    struct StageBundle {
        CellField u;
        double time = 0;
        PiecewisePoly recon;
        bool has_lap = false;
        CellField lap_avg;
        PiecewisePoly lap_rec;
        SpectralWorkspace::PerpVelocity solved; // Solved coupling only
        PiecewisePoly va_rec, vb_rec;
    };
    struct SliceEntry {
        double theta;
        UpstreamSlice sl;
    };
    struct RemapEntry {
        int m;
        double theta;
        bool has_g;
        RemappedField rf;
        CellField gint;
    };
    struct FluxEntry {
        int m;
        double theta;
        CellField f;
    };

    double theta_of(int m, int l) const;
    void bind_stage(int l);
    void bind_stage_velocity(int m);
    const VelocityProvider& active_pv() const;
    void ensure_lap(int m);
    const UpstreamSlice& get_slice(double theta);
    int ensure_remap(int m, double theta, bool want_g);
    const CellField& get_flux(int m, double theta);
    void accumulate_terms(CellField& acc, int l);

    const GridSpec* g_;
    Coupling coupling_;
    double eps_;
    VelocityProvider* pv_;
    FluxDerivativeVelocity* fd_ = nullptr;
    ButcherPair tab_;
    IntegratorOptions opt_;
    std::unique_ptr<SpectralWorkspace> ws_;
    std::unique_ptr<ReconVelocity> rv_;
    std::vector<double> check_thetas_;

    StageBundle stages_[3];
    NodeVelocity anchor_;
    double t0_ = 0, dt_ = 0;
    std::deque<SliceEntry> slices_; // deque: remaps hold pointers into it
    std::vector<RemapEntry> remaps_;
    std::vector<FluxEntry> fluxes_;
};

/// Observer data for one completed step.
struct StepContext {
    int step;   // 1-based index
    double t;   // time after the step
    double dt;
    const CellField& u;
};

struct RunOptions {
    double t_end = 0;
    double cfl = 1.0;
    double dt_max = std::numeric_limits<double>::infinity();
    std::vector<double> snapshot_times; // steps land on these exactly
    std::function<void(const StepContext&)> on_step;
    std::function<void(double, const CellField&)> on_snapshot;
};

struct RunResult {
    CellField u;
    double t = 0;
    int steps = 0;
};

/// March u0 to t_end, clamping dt to land on snapshot times and the horizon.
/// Throws NumericalError (with the step index) if the solution stops being
/// finite.
RunResult run(Integrator& integ, CellField u0, const RunOptions& opt);

} // namespace elfv
