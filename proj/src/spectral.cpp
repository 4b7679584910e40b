#include "elfv/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>

namespace elfv {

struct SpectralWorkspace::Impl {
    int nx, ny, nkx; // nkx = nx/2 + 1 (half spectrum in x, the fast axis)
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;
    fftw_complex* spec_scratch = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<double> kx, ky;       // continuous wavenumbers
    std::vector<double> dkx, dky;     // derivative multipliers (Nyquist zeroed)
    std::vector<double> lamx, lamy;   // discrete Laplacian symbol per axis

    ~Impl() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(spec_buf);
        fftw_free(spec_scratch);
    }
};

SpectralWorkspace::SpectralWorkspace(const GridSpec& g)
    : g_(g), impl_(std::make_unique<Impl>()) {
    if (g.bc_x != Bc::Periodic || g.bc_y != Bc::Periodic)
        throw ConfigError("spectral workspace requires a fully periodic grid");
    Impl& im = *impl_;
    im.nx = g.nx;
    im.ny = g.ny;
    im.nkx = g.nx / 2 + 1;
    size_t nreal = static_cast<size_t>(g.nx) * g.ny;
    size_t nspec = static_cast<size_t>(im.nkx) * g.ny;
    im.real_buf = fftw_alloc_real(nreal);
    im.spec_buf = fftw_alloc_complex(nspec);
    im.spec_scratch = fftw_alloc_complex(nspec);
    // Row-major (ny, nx) with x fastest, matching CellField's layout.
    // FFTW_ESTIMATE keeps plan selection deterministic across runs.
    im.fwd = fftw_plan_dft_r2c_2d(g.ny, g.nx, im.real_buf, im.spec_buf,
                                  FFTW_ESTIMATE);
    im.bwd = fftw_plan_dft_c2r_2d(g.ny, g.nx, im.spec_buf, im.real_buf,
                                  FFTW_ESTIMATE);

    const double two_pi = 2.0 * std::numbers::pi;
    im.kx.resize(im.nkx);
    im.dkx.resize(im.nkx);
    im.lamx.resize(im.nkx);
    for (int i = 0; i < im.nkx; ++i) {
        double k = two_pi * i / g.lx();
        im.kx[i] = k;
        im.dkx[i] = (g.nx % 2 == 0 && i == g.nx / 2) ? 0.0 : k;
        double th = two_pi * i / g.nx;
        im.lamx[i] = (-2.5 + (8.0 / 3.0) * std::cos(th) -
                      (1.0 / 6.0) * std::cos(2.0 * th)) /
                     (g.dx * g.dx);
    }
    im.ky.resize(g.ny);
    im.dky.resize(g.ny);
    im.lamy.resize(g.ny);
    for (int j = 0; j < g.ny; ++j) {
        int jj = j <= g.ny / 2 ? j : j - g.ny;
        double k = two_pi * jj / g.ly();
        im.ky[j] = k;
        im.dky[j] = (g.ny % 2 == 0 && j == g.ny / 2) ? 0.0 : k;
        double th = two_pi * j / g.ny;
        im.lamy[j] = (-2.5 + (8.0 / 3.0) * std::cos(th) -
                      (1.0 / 6.0) * std::cos(2.0 * th)) /
                     (g.dy * g.dy);
    }
}

SpectralWorkspace::~SpectralWorkspace() = default;

double SpectralWorkspace::dsymbol(int ki, int kj) const {
    const Impl& im = *impl_;
    int i = ki < 0 ? -ki : ki; // symbol is even in each index
    if (i >= im.nkx) i = im.nx - i;
    int j = GridSpec::wrap(kj, im.ny);
    return im.lamx[i] + im.lamy[j];
}

CellField SpectralWorkspace::helmholtz_solve(const CellField& rhs,
                                             double coeff) {
    Impl& im = *impl_;
    size_t nreal = static_cast<size_t>(im.nx) * im.ny;
    std::memcpy(im.real_buf, rhs.data(), nreal * sizeof(double));
    fftw_execute(im.fwd);
    const double scale = 1.0 / static_cast<double>(nreal);
    for (int j = 0; j < im.ny; ++j)
        for (int i = 0; i < im.nkx; ++i) {
            size_t k = static_cast<size_t>(j) * im.nkx + i;
            double d = scale / (1.0 - coeff * (im.lamx[i] + im.lamy[j]));
            im.spec_buf[k][0] *= d;
            im.spec_buf[k][1] *= d;
        }
    fftw_execute(im.bwd);
    CellField out(im.nx, im.ny);
    std::memcpy(out.data(), im.real_buf, nreal * sizeof(double));
    return out;
}

SpectralWorkspace::PerpVelocity
SpectralWorkspace::solve_perp_velocity(const CellField& source) {
    Impl& im = *impl_;
    const GridSpec& g = g_;
    size_t nreal = static_cast<size_t>(im.nx) * im.ny;
    size_t nspec = static_cast<size_t>(im.nkx) * im.ny;
    const double scale = 1.0 / static_cast<double>(nreal);

    std::memcpy(im.real_buf, source.data(), nreal * sizeof(double));
    fftw_execute(im.fwd);
    // Keep the source spectrum; spec_buf is consumed by each inverse.
    std::memcpy(im.spec_scratch, im.spec_buf, nspec * sizeof(fftw_complex));

    PerpVelocity out{CellField(im.nx, im.ny), CellField(im.nx, im.ny),
                     CellField(im.nx, im.ny), NodeVelocity(im.nx, im.ny)};

    // what = 0/1: velocity components (-w_y, +w_x); 2: the potential w.
    // shift: sample half a cell down-left (node positions) instead of centers.
    auto inverse = [&](int what, bool shift, double* dst_ny_nx) {
        for (int j = 0; j < im.ny; ++j)
            for (int i = 0; i < im.nkx; ++i) {
                size_t k = static_cast<size_t>(j) * im.nkx + i;
                double k2 = im.kx[i] * im.kx[i] + im.ky[j] * im.ky[j];
                double re = im.spec_scratch[k][0], imag = im.spec_scratch[k][1];
                double wr, wi;
                bool nyq = (im.nx % 2 == 0 && i == im.nx / 2) ||
                           (im.ny % 2 == 0 && (j == im.ny / 2));
                if (k2 == 0.0 || (shift && nyq)) {
                    // Mean: potential defined up to a constant.  Nyquist under
                    // a half-cell shift: the real signal's content vanishes at
                    // the shifted sample points.
                    wr = wi = 0.0;
                } else {
                    wr = re / k2;
                    wi = imag / k2;
                    if (what == 0) { // -d/dy: multiply by -i*ky
                        double t = wr;
                        wr = im.dky[j] * wi;
                        wi = -im.dky[j] * t;
                    } else if (what == 1) { // +d/dx: multiply by i*kx
                        double t = wr;
                        wr = -im.dkx[i] * wi;
                        wi = im.dkx[i] * t;
                    }
                    if (shift) {
                        // e^{-i(kx*dx/2 + ky*dy/2)}
                        double ph = -0.5 * (im.dkx[i] * g.dx + im.dky[j] * g.dy);
                        double c = std::cos(ph), s = std::sin(ph);
                        double t = wr;
                        wr = c * wr - s * wi;
                        wi = s * t + c * wi;
                    }
                }
                im.spec_buf[k][0] = scale * wr;
                im.spec_buf[k][1] = scale * wi;
            }
        fftw_execute(im.bwd);
        std::memcpy(dst_ny_nx, im.real_buf, nreal * sizeof(double));
    };

    inverse(0, false, out.a.data());
    inverse(1, false, out.b.data());
    inverse(2, false, out.w.data());

    std::vector<double> an(nreal), bn(nreal);
    inverse(0, true, an.data());
    inverse(1, true, bn.data());
    for (int j = 0; j <= im.ny; ++j)
        for (int i = 0; i <= im.nx; ++i) {
            size_t src = static_cast<size_t>(j % im.ny) * im.nx + (i % im.nx);
            out.nodes.a[out.nodes.idx(i, j)] = an[src];
            out.nodes.b[out.nodes.idx(i, j)] = bn[src];
        }
    return out;
}

} // namespace elfv
