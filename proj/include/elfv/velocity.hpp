#pragma once

#include "elfv/geometry.hpp"
#include "elfv/grid.hpp"
#include "elfv/poly.hpp"

#include <functional>
#include <vector>

namespace elfv {

/// Velocity samples at the (nx+1)*(ny+1) grid nodes, tagged with the anchor
/// time they were taken at.  The per-cell bilinear interpolant of these
/// samples is the modified velocity: frozen at the anchor, so characteristics
/// are straight lines and traced cells stay quadrilaterals.
struct NodeVelocity {
    int nx = 0, ny = 0;
    double t_anchor = 0;
    std::vector<double> a, b;

    NodeVelocity() = default;
    NodeVelocity(int nx_, int ny_)
        : nx(nx_), ny(ny_),
          a(static_cast<size_t>(nx_ + 1) * (ny_ + 1), 0.0),
          b(static_cast<size_t>(nx_ + 1) * (ny_ + 1), 0.0) {}

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * (nx + 1) + i; }
    double av(int i, int j) const { return a[idx(i, j)]; }
    double bv(int i, int j) const { return b[idx(i, j)]; }
};

/// Traced node positions at one time slice of the characteristic family.
/// Nodes are shared between adjacent quads, so the slice is a conforming
/// quadrilateral mesh.  `s` is the time offset from the anchor; s == 0 gives
/// the Eulerian mesh with coordinates copied verbatim (identity flag set).
struct UpstreamSlice {
    int nx = 0, ny = 0;
    double s = 0;
    bool identity = false;
    std::vector<double> x, y;

    size_t idx(int i, int j) const { return static_cast<size_t>(j) * (nx + 1) + i; }
    double nx_at(int i, int j) const { return x[idx(i, j)]; }
    double ny_at(int i, int j) const { return y[idx(i, j)]; }

    /// Corner positions of traced cell (i,j), CCW from the lower-left.
    void quad(int i, int j, Vec2 out[4]) const {
        out[0] = {nx_at(i, j), ny_at(i, j)};
        out[1] = {nx_at(i + 1, j), ny_at(i + 1, j)};
        out[2] = {nx_at(i + 1, j + 1), ny_at(i + 1, j + 1)};
        out[3] = {nx_at(i, j + 1), ny_at(i, j + 1)};
    }
};

/// Source of the physical velocity (a,b).  Analytic problems evaluate a
/// formula; solution-coupled problems (flux derivatives, field solves)
/// evaluate whatever state was bound for the current stage and ignore `t`.
class VelocityProvider {
  public:
    virtual ~VelocityProvider() = default;

    /// Batch-sample (a,b) at n points at time t.
    virtual void eval(const double* x, const double* y, int n, double t,
                      double* a, double* b) const = 0;

    /// Velocity at grid node (i,j).  Solution-dependent providers override
    /// this to evaluate the reconstruction of the cell to the node's lower
    /// left, so shared nodes get a single value.
    virtual void eval_at_node(const GridSpec& g, int i, int j, double t,
                              double& a, double& b) const;

    virtual bool identically_zero() const { return false; }

    /// True when the CFL scan should sample cell interiors too (analytic
    /// fields peak between nodes; reconstruction-backed fields do not add
    /// information there).
    virtual bool dense_cfl_sampling() const { return false; }

    Vec2 at(double x, double y, double t) const {
        double a, b;
        eval(&x, &y, 1, t, &a, &b);
        return {a, b};
    }
};

/// Velocity from closures a(x,y,t), b(x,y,t).
class AnalyticVelocity : public VelocityProvider {
  public:
    using Fn = std::function<double(double, double, double)>;
    AnalyticVelocity(Fn a, Fn b) : fa_(std::move(a)), fb_(std::move(b)) {}
    void eval(const double* x, const double* y, int n, double t, double* a,
              double* b) const override;
    bool dense_cfl_sampling() const override { return true; }

  private:
    Fn fa_, fb_;
};

/// Velocity (f1'(u), f2'(u)) with u taken from a bound solution
/// reconstruction; used when the flux depends on the solution itself.
class FluxDerivativeVelocity : public VelocityProvider {
  public:
    using Dfn = std::function<double(double)>;
    FluxDerivativeVelocity(const GridSpec& g, Dfn df1, Dfn df2)
        : g_(&g), df1_(std::move(df1)), df2_(std::move(df2)) {}
    void bind(const PiecewisePoly* recon) { recon_ = recon; }
    void eval(const double* x, const double* y, int n, double t, double* a,
              double* b) const override;
    void eval_at_node(const GridSpec& g, int i, int j, double t, double& a,
                      double& b) const override;

  private:
    const GridSpec* g_;
    Dfn df1_, df2_;
    const PiecewisePoly* recon_ = nullptr;
};

/// Velocity read from two bound component reconstructions (the output of a
/// field solve); `t` is ignored.
class ReconVelocity : public VelocityProvider {
  public:
    explicit ReconVelocity(const GridSpec& g) : g_(&g) {}
    void set(const PiecewisePoly* a_rec, const PiecewisePoly* b_rec) {
        ar_ = a_rec;
        br_ = b_rec;
    }
    void eval(const double* x, const double* y, int n, double t, double* a,
              double* b) const override;

  private:
    const GridSpec* g_;
    const PiecewisePoly* ar_ = nullptr;
    const PiecewisePoly* br_ = nullptr;
};

/// Sample the provider at every grid node at the anchor time.
NodeVelocity nodal_velocity(const VelocityProvider& pv, double t_anchor,
                            const GridSpec& g);

/// Bilinear value of the nodal field within cell (i,j) at local coordinates
/// (lx,ly) in [0,1]^2.  This is the modified velocity of any traced point
/// carrying that Lagrangian label, at every time slice.
Vec2 modified_velocity_at(const NodeVelocity& nv, int i, int j, double lx,
                          double ly);

/// Node positions at time t: (x,y) = node + (t - t_anchor)*(a,b).  No
/// convexity check; see trace_to.
UpstreamSlice trace_nodes(const GridSpec& g, const NodeVelocity& nv, double t);

/// Index of the first non-convex traced cell, or -1 if all quads pass
/// check_convex.  Encoded as j*nx + i.
int first_nonconvex(const GridSpec& g, const UpstreamSlice& sl);

/// trace_nodes plus the convexity guarantee: throws NumericalError naming the
/// first offending cell, which signals that dt is too large for this field.
UpstreamSlice trace_to(const GridSpec& g, const NodeVelocity& nv, double t);

struct DtResult {
    double dt = 0;
    NodeVelocity nodes; // anchor samples at t + dt, ready for the step
};

/// CFL time step dt = cfl / (max|a|/dx + max|b|/dy), with maxima over grid
/// nodes (plus a 3x3 per-cell subsample for analytic fields), re-checked at
/// the prospective anchor time for time-varying fields, then capped so that
/// tracing to every offset in check_thetas (in units of dt relative to the
/// anchor: slice time = t + dt + (theta-1)*dt) yields all-convex quads —
/// halving dt at most 10 times before giving up with NumericalError.
/// Identically zero velocity falls back to dt = cfl*min(dx,dy).  The result
/// is clamped to dt_cap (pass the remaining time to the horizon).
///
/// Solution-coupled problems freeze their velocity over the step; they pass
/// the prepared samples as `fixed_anchor` and the scan uses those nodes
/// directly (no provider sampling, no anchor-time re-check), re-tagging the
/// anchor time as dt shrinks.
DtResult compute_dt(const VelocityProvider& pv, const GridSpec& g, double cfl,
                    double t_now, double dt_cap,
                    const std::vector<double>& check_thetas,
                    const NodeVelocity* fixed_anchor = nullptr);

} // namespace elfv
