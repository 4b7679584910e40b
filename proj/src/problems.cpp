#include "elfv/problems.hpp"

#include <cmath>

namespace elfv {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// 4-point Gauss-Legendre rule on [0,1] (degree 7), used for cell-averaging
/// pointwise fields.
constexpr double kGauss4Node[4] = {
    0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
    0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
constexpr double kGauss4Weight[4] = {
    0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461,
    0.5 * 0.6521451548625461, 0.5 * 0.3478548451374538};

/// Deformation field a = -2π cos²(x/2) sin(y) g(t), b = 2π sin(x) cos²(y/2)
/// g(t) with g(t) = cos(πt/1.5), written with half-angle products so each
/// point costs two sincos pairs.
class SwirlVelocity final : public VelocityProvider {
  public:
    void eval(const double* x, const double* y, int n, double t, double* a,
              double* b) const override {
        const double gt = std::cos(kPi * t / 1.5);
        const double ca = -2.0 * kPi * gt, cb = 2.0 * kPi * gt;
        for (int k = 0; k < n; ++k) {
            double sx = std::sin(0.5 * x[k]), cx = std::cos(0.5 * x[k]);
            double sy = std::sin(0.5 * y[k]), cy = std::cos(0.5 * y[k]);
            a[k] = ca * cx * cx * (2.0 * sy * cy);
            b[k] = cb * (2.0 * sx * cx) * cy * cy;
        }
    }
    bool dense_cfl_sampling() const override { return true; }
};

double sq(double v) { return v * v; }

ProblemDef swirl_base() {
    ProblemDef p;
    p.x_lo = -kPi;
    p.x_hi = kPi;
    p.y_lo = -kPi;
    p.y_hi = kPi;
    p.bc_x = p.bc_y = Bc::Periodic;
    p.coupling = FieldCoupling::AnalyticField;
    p.eps = 0;
    p.default_scheme = Scheme::Rk3;
    p.velocity = std::make_shared<SwirlVelocity>();
    return p;
}

ProblemDef swirl_smooth() {
    ProblemDef p = swirl_base();
    p.name = "swirl-smooth";
    p.label = "swirling deformation, cosine-bell IC";
    const double r0 = 0.3 * kPi, xc = 0.3 * kPi, yc = 0.0;
    p.ic = [=](double x, double y) {
        double r = std::hypot(x - xc, y - yc);
        if (r >= r0) return 0.0;
        double c = std::cos(kPi * r / (2.0 * r0));
        double c2 = c * c;
        return r0 * c2 * c2 * c2;
    };
    // The flow returns every body to its start once per period, so the IC is
    // the solution at multiples of T = 1.5.
    p.exact = [ic = p.ic](double x, double y, double) { return ic(x, y); };
    p.exact_period = 1.5;
    return p;
}

ProblemDef swirl_disc() {
    ProblemDef p = swirl_base();
    p.name = "swirl-disc";
    p.label = "swirling deformation, slotted cylinder / cone / bump IC";
    const double r0 = 0.3 * kPi;
    p.ic = [=](double x, double y) {
        // Slotted cylinder at (0, 0.5π).
        double r = std::hypot(x, y - 0.5 * kPi);
        if (r <= r0) {
            bool slot = std::abs(x) < 0.05 * kPi && y - 0.5 * kPi < 0.1 * kPi;
            return slot ? 0.0 : 1.0;
        }
        // Cone at (-0.45π, -0.25π).
        r = std::hypot(x + 0.45 * kPi, y + 0.25 * kPi);
        if (r <= r0) return 1.0 - r / r0;
        // Smooth bump at (0.45π, -0.25π).
        r = std::hypot(x - 0.45 * kPi, y + 0.25 * kPi);
        if (r <= r0) return 0.25 * (1.0 + std::cos(kPi * r / r0));
        return 0.0;
    };
    return p;
}

constexpr double kGasConst = 1.0 / 6.0; // R in D = R*T

std::function<double(double, double)> maxwellian(double n, double vx,
                                                 double vy, double rt) {
    return [=](double x, double y) {
        return n / (2.0 * kPi * rt) *
               std::exp(-(sq(x - vx) + sq(y - vy)) / (2.0 * rt));
    };
}

void lbfp_moments(const GridSpec& g, const CellField& u, double& n, double& vx,
                  double& vy, double& T) {
    StableSum sn, sx, sy;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double m = u(i, j);
            sn.add(m);
            sx.add(g.center_x(i) * m);
            sy.add(g.center_y(j) * m);
        }
    double area = g.cell_area();
    n = sn.value() * area;
    if (!(n > 0))
        throw NumericalError("moment diagnostics: nonpositive number density");
    vx = sx.value() * area / n;
    vy = sy.value() * area / n;
    StableSum st;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            st.add((sq(g.center_x(i) - vx) + sq(g.center_y(j) - vy)) * u(i, j));
    T = st.value() * area / (2.0 * n * kGasConst);
}

ProblemDef lbfp_base(double vx_eq, double vy_eq, double diffusion) {
    ProblemDef p;
    p.x_lo = -2.0 * kPi;
    p.x_hi = 2.0 * kPi;
    p.y_lo = -2.0 * kPi;
    p.y_hi = 2.0 * kPi;
    p.bc_x = p.bc_y = Bc::ZeroGhost;
    p.coupling = FieldCoupling::AnalyticField;
    p.eps = diffusion;
    p.default_scheme = Scheme::Imex233;
    p.velocity = std::make_shared<AnalyticVelocity>(
        [=](double x, double, double) { return -(x - vx_eq); },
        [=](double, double y, double) { return -(y - vy_eq); });
    p.diag_names = {"n", "vx", "vy", "T"};
    p.diag_extras = [](Integrator&, const GridSpec& g, const CellField& u,
                       std::vector<double>& out) {
        double n, vx, vy, T;
        lbfp_moments(g, u, n, vx, vy, T);
        out.push_back(n);
        out.push_back(vx);
        out.push_back(vy);
        out.push_back(T);
    };
    return p;
}

ProblemDef lbfp_maxwellian() {
    // Equilibrium data: n = π, bulk velocity (1,1), T = 3, so D = RT = 1/2.
    ProblemDef p = lbfp_base(1.0, 1.0, kGasConst * 3.0);
    p.name = "lbfp-maxwellian";
    p.label = "linearized Fokker-Planck, equilibrium Maxwellian IC";
    p.ic = maxwellian(kPi, 1.0, 1.0, kGasConst * 3.0);
    p.exact = [ic = p.ic](double x, double y, double) { return ic(x, y); };
    return p;
}

ProblemDef lbfp_relax() {
    const double n1 = 1.990964530353041, vx1 = 0.4979792385268875,
                 T1 = 2.46518981703837;
    const double n2 = 1.150628123236752, vx2 = -0.8616676237412346,
                 T2 = 0.4107062104302872;
    // The collision operator's drift and diffusion target the mixture's
    // conserved moments, so the relaxed state carries the same number
    // density, momentum, and energy as the initial pair of beams.
    const double nm = n1 + n2;
    const double vxm = (n1 * vx1 + n2 * vx2) / nm;
    const double Tm = (n1 * (2.0 * kGasConst * T1 + sq(vx1 - vxm)) +
                       n2 * (2.0 * kGasConst * T2 + sq(vx2 - vxm))) /
                      (2.0 * kGasConst * nm);
    ProblemDef p = lbfp_base(vxm, 0.0, kGasConst * Tm);
    p.name = "lbfp-relax";
    p.label = "linearized Fokker-Planck, two-beam relaxation IC";
    auto f1 = maxwellian(n1, vx1, 0.0, kGasConst * T1);
    auto f2 = maxwellian(n2, vx2, 0.0, kGasConst * T2);
    p.ic = [=](double x, double y) { return f1(x, y) + f2(x, y); };
    return p;
}

ProblemDef guiding_center() {
    ProblemDef p;
    p.name = "guiding-center";
    p.label = "guiding-center plasma shear layer";
    p.x_lo = 0;
    p.x_hi = 4.0 * kPi;
    p.y_lo = 0;
    p.y_hi = 2.0 * kPi;
    p.bc_x = p.bc_y = Bc::Periodic;
    p.coupling = FieldCoupling::GuidingCenter;
    p.eps = 0;
    p.default_scheme = Scheme::Rk3;
    p.ic = [](double x, double y) {
        return std::sin(y) + 0.015 * std::cos(0.5 * x);
    };
    p.diag_names = {"energy", "entropy"};
    p.diag_extras = [](Integrator& integ, const GridSpec& g,
                       const CellField& u, std::vector<double>& out) {
        auto pv = integ.solve_velocity(u);
        StableSum se, ss;
        for (size_t k = 0; k < u.v.size(); ++k) {
            se.add(sq(pv.a.v[k]) + sq(pv.b.v[k]));
            ss.add(sq(u.v[k]));
        }
        out.push_back(se.value() * g.cell_area());
        out.push_back(ss.value() * g.cell_area());
    };
    return p;
}

ProblemDef ins_base() {
    ProblemDef p;
    p.x_lo = 0;
    p.x_hi = 2.0 * kPi;
    p.y_lo = 0;
    p.y_hi = 2.0 * kPi;
    p.bc_x = p.bc_y = Bc::Periodic;
    p.coupling = FieldCoupling::Streamfunction;
    p.eps = 0.01; // kinematic viscosity
    p.default_scheme = Scheme::Imex233;
    return p;
}

ProblemDef ins_smooth() {
    ProblemDef p = ins_base();
    p.name = "ins-smooth";
    p.label = "incompressible vorticity, decaying sine product";
    p.ic = [](double x, double y) { return -2.0 * std::sin(x) * std::sin(y); };
    p.exact = [nu = p.eps](double x, double y, double t) {
        return -2.0 * std::sin(x) * std::sin(y) * std::exp(-2.0 * nu * t);
    };
    return p;
}

ProblemDef ins_patch() {
    ProblemDef p = ins_base();
    p.name = "ins-patch";
    p.label = "incompressible vorticity, opposing patches";
    p.ic = [](double x, double y) {
        bool in_x = x >= 0.5 * kPi && x <= 1.5 * kPi;
        if (in_x && y >= 0.25 * kPi && y <= 0.75 * kPi) return -1.0;
        if (in_x && y >= 1.25 * kPi && y <= 1.75 * kPi) return 1.0;
        return 0.0;
    };
    return p;
}

} // namespace

ProblemDef make_problem(const std::string& name, const std::string& variant) {
    std::string full = variant.empty() ? name : name + "-" + variant;
    if (full == "swirl-smooth") return swirl_smooth();
    if (full == "swirl-disc") return swirl_disc();
    if (full == "lbfp-maxwellian") return lbfp_maxwellian();
    if (full == "lbfp-relax") return lbfp_relax();
    if (full == "guiding-center") return guiding_center();
    if (full == "ins-smooth") return ins_smooth();
    if (full == "ins-patch") return ins_patch();
    std::string known;
    for (const auto& n : problem_names()) known += " " + n;
    throw ConfigError("unknown problem '" + full + "'; known:" + known);
}

std::vector<std::string> problem_names() {
    return {"swirl-smooth", "swirl-disc",     "lbfp-maxwellian", "lbfp-relax",
            "guiding-center", "ins-smooth", "ins-patch"};
}

GridSpec problem_grid(const ProblemDef& p, int nx, int ny) {
    return GridSpec(p.x_lo, p.x_hi, p.y_lo, p.y_hi, nx, ny, p.bc_x, p.bc_y);
}

CellField cell_average_field(const GridSpec& g,
                             const std::function<double(double, double)>& f) {
    CellField out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double s = 0;
            for (int qy = 0; qy < 4; ++qy) {
                double y = g.y_lo + (j + kGauss4Node[qy]) * g.dy;
                double row = 0;
                for (int qx = 0; qx < 4; ++qx)
                    row += kGauss4Weight[qx] *
                           f(g.x_lo + (i + kGauss4Node[qx]) * g.dx, y);
                s += kGauss4Weight[qy] * row;
            }
            out(i, j) = s;
        }
    return out;
}

CellField initial_state(const ProblemDef& p, const GridSpec& g) {
    return cell_average_field(g, p.ic);
}

Integrator make_integrator(const ProblemDef& p, const GridSpec& g,
                           IntegratorOptions opt) {
    Coupling c = Coupling::Analytic;
    switch (p.coupling) {
    case FieldCoupling::AnalyticField: c = Coupling::Analytic; break;
    case FieldCoupling::FluxDerivative: c = Coupling::FluxDerivative; break;
    case FieldCoupling::GuidingCenter:
        c = Coupling::Solved;
        opt.solve_sign = 1.0;
        break;
    case FieldCoupling::Streamfunction:
        c = Coupling::Solved;
        opt.solve_sign = -1.0;
        break;
    }
    return Integrator(g, c, p.eps, p.velocity.get(), opt);
}

double total_mass(const GridSpec& g, const CellField& u) {
    StableSum s;
    for (double v : u.v) s.add(v);
    return s.value() * g.cell_area();
}

ErrorNorms error_norms(const GridSpec& g, const CellField& u,
                       const std::function<double(double, double)>& exact) {
    CellField ue = cell_average_field(g, exact);
    return field_error(g, u, ue);
}

ErrorNorms field_error(const GridSpec& g, const CellField& u,
                       const CellField& ref) {
    if (u.v.size() != ref.v.size())
        throw ConfigError("field_error: size mismatch");
    StableSum s1, s2;
    double linf = 0;
    for (size_t k = 0; k < u.v.size(); ++k) {
        double e = u.v[k] - ref.v[k];
        s1.add(std::abs(e));
        s2.add(e * e);
        linf = std::max(linf, std::abs(e));
    }
    ErrorNorms n;
    n.l1 = s1.value() * g.cell_area();
    n.l2 = std::sqrt(s2.value() * g.cell_area());
    n.linf = linf;
    return n;
}

CellField coarsen_to(const GridSpec& g_fine, const CellField& u_fine,
                     const GridSpec& g_coarse) {
    if (g_fine.nx % g_coarse.nx != 0 || g_fine.ny % g_coarse.ny != 0)
        throw ConfigError("coarsen_to: fine mesh must be a multiple of the "
                          "coarse mesh");
    int fx = g_fine.nx / g_coarse.nx, fy = g_fine.ny / g_coarse.ny;
    CellField out(g_coarse);
    const double inv = 1.0 / (fx * fy);
    for (int j = 0; j < g_coarse.ny; ++j)
        for (int i = 0; i < g_coarse.nx; ++i) {
            double s = 0;
            for (int b = 0; b < fy; ++b)
                for (int a = 0; a < fx; ++a)
                    s += u_fine(i * fx + a, j * fy + b);
            out(i, j) = s * inv;
        }
    return out;
}

DiagRow diagnostics_row(const ProblemDef& p, Integrator& integ,
                        const GridSpec& g, double t, const CellField& u) {
    DiagRow row;
    row.t = t;
    row.mass = total_mass(g, u);
    if (p.diag_extras) p.diag_extras(integ, g, u, row.extras);
    return row;
}

} // namespace elfv
