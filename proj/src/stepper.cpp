#include "elfv/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace elfv {

Integrator::Integrator(const GridSpec& g, Coupling coupling, double eps,
                       VelocityProvider* pv, const IntegratorOptions& opt)
    : g_(&g), coupling_(coupling), eps_(eps), pv_(pv),
      tab_(tableau(opt.scheme)), opt_(opt) {
    if (eps_ < 0) throw ConfigError("diffusion coefficient must be >= 0");
    if (eps_ > 0 && !tab_.implicit)
        throw ConfigError("scheme '" + std::string(scheme_name(opt.scheme)) +
                          "' has no implicit part; diffusion requires an "
                          "IMEX tableau");
    switch (coupling_) {
    case Coupling::Analytic:
        if (!pv_) throw ConfigError("Analytic coupling needs a velocity provider");
        break;
    case Coupling::FluxDerivative:
        fd_ = dynamic_cast<FluxDerivativeVelocity*>(pv_);
        if (!fd_)
            throw ConfigError(
                "FluxDerivative coupling needs a FluxDerivativeVelocity");
        break;
    case Coupling::Solved:
        ws_ = std::make_unique<SpectralWorkspace>(g); // demands periodicity
        rv_ = std::make_unique<ReconVelocity>(g);
        break;
    }
    const bool periodic = g.bc_x == Bc::Periodic && g.bc_y == Bc::Periodic;
    if (tab_.implicit && eps_ > 0 && periodic && !ws_)
        ws_ = std::make_unique<SpectralWorkspace>(g);

    // Every slice offset this tableau will trace, for the convexity check
    // inside compute_dt.  theta = 1 is the anchor and trivially fine but
    // harmless to list.
    for (int l = 1; l <= tab_.stages; ++l)
        for (int m = 0; m <= std::min(l - 1, tab_.stages - 1); ++m)
            check_thetas_.push_back(theta_of(m, l));
    std::sort(check_thetas_.begin(), check_thetas_.end());
    check_thetas_.erase(
        std::unique(check_thetas_.begin(), check_thetas_.end()),
        check_thetas_.end());
}

double Integrator::theta_of(int m, int l) const {
    double cl = l == tab_.stages ? 1.0 : tab_.ch[l];
    return tab_.ch[m] + 1.0 - cl;
}

void Integrator::bind_stage(int l) {
    StageBundle& s = stages_[l];
    if (coupling_ == Coupling::Solved) {
        if (opt_.solve_sign == 1.0) {
            s.solved = ws_->solve_perp_velocity(s.u);
        } else {
            CellField src = s.u;
            for (double& v : src.v) v *= opt_.solve_sign;
            s.solved = ws_->solve_perp_velocity(src);
        }
        s.va_rec = reconstruct_q0_field(*g_, s.solved.a);
        s.vb_rec = reconstruct_q0_field(*g_, s.solved.b);
    }
}

void Integrator::bind_stage_velocity(int m) {
    if (coupling_ == Coupling::FluxDerivative)
        fd_->bind(&stages_[m].recon);
    else if (coupling_ == Coupling::Solved)
        rv_->set(&stages_[m].va_rec, &stages_[m].vb_rec);
}

const VelocityProvider& Integrator::active_pv() const {
    return coupling_ == Coupling::Solved ? *rv_ : *pv_;
}

void Integrator::ensure_lap(int m) {
    StageBundle& s = stages_[m];
    if (s.has_lap) return;
    s.lap_avg = laplacian_averages(*g_, s.u);
    s.lap_rec = reconstruct_q0_field(*g_, s.lap_avg);
    s.has_lap = true;
}

const UpstreamSlice& Integrator::get_slice(double theta) {
    for (auto& e : slices_)
        if (e.theta == theta) return e.sl;
    double ts = t0_ + dt_ + (theta - 1.0) * dt_;
    slices_.push_back({theta, trace_to(*g_, anchor_, ts)});
    return slices_.back().sl;
}

int Integrator::ensure_remap(int m, double theta, bool want_g) {
    for (size_t k = 0; k < remaps_.size(); ++k) {
        RemapEntry& e = remaps_[k];
        if (e.m != m || e.theta != theta) continue;
        if (want_g && !e.has_g) {
            ensure_lap(m);
            e.rf = remap_field(*g_, stages_[m].recon, get_slice(theta),
                               &stages_[m].lap_rec, &e.gint);
            e.has_g = true;
        }
        return static_cast<int>(k);
    }
    const UpstreamSlice& sl = get_slice(theta);
    RemapEntry e;
    e.m = m;
    e.theta = theta;
    e.has_g = want_g;
    if (want_g) {
        ensure_lap(m);
        e.rf = remap_field(*g_, stages_[m].recon, sl, &stages_[m].lap_rec,
                           &e.gint);
    } else {
        e.rf = remap_field(*g_, stages_[m].recon, sl);
    }
    remaps_.push_back(std::move(e));
    return static_cast<int>(remaps_.size()) - 1;
}

const CellField& Integrator::get_flux(int m, double theta) {
    for (FluxEntry& e : fluxes_)
        if (e.m == m && e.theta == theta) return e.f;
    int ri = ensure_remap(m, theta, false);
    const UpstreamSlice& sl = get_slice(theta);
    bind_stage_velocity(m);
    FluxEntry e;
    e.m = m;
    e.theta = theta;
    e.f = convection_flux(*g_, sl, remaps_[ri].rf, anchor_, active_pv(),
                          stages_[m].time, opt_.edge_quad);
    fluxes_.push_back(std::move(e));
    return fluxes_.back().f;
}

void Integrator::accumulate_terms(CellField& acc, int l) {
    const double k = dt_ / g_->cell_area();
    const bool final_l = l == tab_.stages;
    for (int m = 0; m < (final_l ? tab_.stages : l); ++m) {
        double ah = final_l ? tab_.bh[m] : tab_.Ah[l][m];
        double ai = tab_.implicit ? (final_l ? tab_.b[m] : tab_.A[l][m]) : 0.0;
        bool want_f = ah != 0.0;
        bool want_g = ai != 0.0 && eps_ != 0.0;
        if (!want_f && !want_g) continue;
        double theta = theta_of(m, l);
        int ri = ensure_remap(m, theta, want_g);
        if (want_f) {
            const CellField& f = get_flux(m, theta);
            double c = k * ah;
            for (size_t n = 0; n < acc.v.size(); ++n) acc.v[n] += c * f.v[n];
        }
        if (want_g) {
            const CellField& gi = remaps_[ri].gint;
            double c = k * ai * eps_;
            for (size_t n = 0; n < acc.v.size(); ++n) acc.v[n] += c * gi.v[n];
        }
    }
}

double Integrator::step(CellField& u, double t, double cfl, double dt_cap) {
    if (!(dt_cap > 0)) throw ConfigError("step: dt_cap must be positive");
    t0_ = t;
    slices_.clear();
    remaps_.clear();
    fluxes_.clear();
    for (StageBundle& s : stages_) s.has_lap = false;

    StageBundle& s0 = stages_[0];
    s0.u = u;
    s0.time = t;
    s0.recon = reconstruct_field(*g_, s0.u, opt_.weno);
    bind_stage(0);
    bind_stage_velocity(0);

    // The coupled velocity is frozen over the step (anchored to the state at
    // t), so its node samples are prepared once and reused for every slice.
    NodeVelocity fixed;
    const NodeVelocity* fixed_p = nullptr;
    if (coupling_ == Coupling::Solved) {
        fixed = s0.solved.nodes;
        fixed_p = &fixed;
    } else if (coupling_ == Coupling::FluxDerivative) {
        fixed = nodal_velocity(*fd_, t, *g_);
        fixed_p = &fixed;
    }

    DtResult dr =
        compute_dt(active_pv(), *g_, cfl, t, dt_cap, check_thetas_, fixed_p);
    dt_ = dr.dt;
    anchor_ = std::move(dr.nodes);

    for (int l = 1; l < tab_.stages; ++l) {
        CellField acc = remaps_[ensure_remap(0, theta_of(0, l), false)].rf.avg;
        accumulate_terms(acc, l);
        StageBundle& s = stages_[l];
        double ad = tab_.implicit ? tab_.A[l][l] : 0.0;
        if (ad != 0.0 && eps_ != 0.0)
            s.u = implicit_helmholtz(*g_, acc, ad * dt_ * eps_, ws_.get(),
                                     opt_.cg);
        else
            s.u = std::move(acc);
        s.time = t0_ + tab_.ch[l] * dt_;
        s.recon = reconstruct_field(*g_, s.u, opt_.weno);
        bind_stage(l);
    }

    CellField acc =
        remaps_[ensure_remap(0, theta_of(0, tab_.stages), false)].rf.avg;
    accumulate_terms(acc, tab_.stages);
    u = std::move(acc);
    return dt_;
}

SpectralWorkspace::PerpVelocity Integrator::solve_velocity(const CellField& u) {
    if (coupling_ != Coupling::Solved || !ws_)
        throw ConfigError("solve_velocity requires Solved coupling");
    return ws_->solve_perp_velocity(u);
}

RunResult run(Integrator& integ, CellField u0, const RunOptions& opt) {
    if (!(opt.t_end >= 0)) throw ConfigError("t_end must be >= 0");
    RunResult rr;
    rr.u = std::move(u0);
    rr.t = 0;
    rr.steps = 0;

    std::vector<double> snaps = opt.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    size_t next_snap = 0;
    auto near = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
    };
    while (next_snap < snaps.size() && (snaps[next_snap] <= 0.0))
        ++next_snap; // t = 0 snapshots are the caller's initial state

    const double t_tol = 1e-12 * std::max(1.0, opt.t_end);
    while (rr.t < opt.t_end - t_tol) {
        double cap = std::min(opt.t_end - rr.t, opt.dt_max);
        if (next_snap < snaps.size())
            cap = std::min(cap, snaps[next_snap] - rr.t);
        double dt = integ.step(rr.u, rr.t, opt.cfl, cap);
        rr.t += dt;
        ++rr.steps;
        if (next_snap < snaps.size() && near(rr.t, snaps[next_snap]))
            rr.t = snaps[next_snap];
        else if (near(rr.t, opt.t_end))
            rr.t = opt.t_end;

        for (double x : rr.u.v)
            if (!std::isfinite(x))
                throw NumericalError("non-finite solution value after step " +
                                     std::to_string(rr.steps) + " at t = " +
                                     std::to_string(rr.t));
        if (opt.on_step) opt.on_step({rr.steps, rr.t, dt, rr.u});
        if (next_snap < snaps.size() && rr.t == snaps[next_snap]) {
            if (opt.on_snapshot) opt.on_snapshot(rr.t, rr.u);
            ++next_snap;
        }
    }
    return rr;
}

} // namespace elfv
