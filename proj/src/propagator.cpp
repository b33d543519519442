#include "qc/propagator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qc {

namespace {

using cplx = std::complex<double>;

// Thomas algorithm with constant off-diagonals; diag and rhs have length n,
// solution overwrites rhs. Stable for the diagonally dominant Cayley operator.
void solve_tridiag(cplx off, const std::vector<cplx>& diag, std::vector<cplx>& rhs,
                   std::vector<cplx>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    cplx piv = diag[0];
    rhs[0] /= piv;
    for (std::size_t k = 1; k < n; ++k) {
        scratch[k] = off / piv;
        piv = diag[k] - off * scratch[k];
        rhs[k] = (rhs[k] - off * rhs[k - 1]) / piv;
    }
    for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= scratch[k + 1] * rhs[k + 1];
}

}  // namespace

WaveFunction step_cn_1d(const WaveFunction& psi, const ScalarField& V, double dt) {
    const Grid& g = psi.grid;
    if (g.dim() != 1) throw std::invalid_argument("step_cn_1d needs a 1D grid");
    const int n = g.axis(0).n;
    const double hbar = psi.consts.hbar, m = psi.consts.mass, dx = g.axis(0).dx();
    const cplx a = cplx(0.0, dt / (2.0 * hbar));
    const double kin = hbar * hbar / (m * dx * dx);      // H diagonal kinetic part
    const cplx off_h = -0.5 * kin;                        // H off-diagonal

    // Interior unknowns 1..n-2; boundary values pinned to zero.
    const int ni = n - 2;
    std::vector<cplx> diag(ni), rhs(ni), scratch;
    for (int k = 0; k < ni; ++k) {
        const int i = k + 1;
        const cplx hdiag = kin + V.v[i];
        diag[k] = 1.0 + a * hdiag;
        rhs[k] = (1.0 - a * hdiag) * psi.v[i] -
                 a * off_h * (psi.v[i - 1] + psi.v[i + 1]);
    }
    solve_tridiag(a * off_h, diag, rhs, scratch);

    WaveFunction out(g, psi.consts);
    for (int k = 0; k < ni; ++k) out.v[k + 1] = rhs[k];
    out.v[0] = out.v[n - 1] = 0.0;
    return out;
}

WaveFunction step_adi_2d(const WaveFunction& psi, const ScalarField& V, double dt) {
    const Grid& g = psi.grid;
    if (g.dim() != 2) throw std::invalid_argument("step_adi_2d needs a 2D grid");
    const int n0 = g.axis(0).n, n1 = g.axis(1).n;
    const double hbar = psi.consts.hbar, m = psi.consts.mass;
    const double dx = g.axis(0).dx(), dy = g.axis(1).dx();
    const cplx a = cplx(0.0, dt / (2.0 * hbar));
    const double kinx = hbar * hbar / (m * dx * dx);
    const double kiny = hbar * hbar / (m * dy * dy);
    const cplx offx = -0.5 * kinx, offy = -0.5 * kiny;

    // Half operators: Hx = -(hbar^2/2m) d_xx + V/2, Hy likewise in y.
    auto hx_diag = [&](std::size_t idx) { return cplx(kinx + 0.5 * V.v[idx]); };
    auto hy_diag = [&](std::size_t idx) { return cplx(kiny + 0.5 * V.v[idx]); };

    std::vector<cplx> mid(g.size(), 0.0), out(g.size(), 0.0);
    std::vector<cplx> diag, rhs, scratch;

    // Half-step 1: (I + a Hx) psi* = (I - a Hy) psi. Solve per row j over i=1..n0-2.
    const int mi = n0 - 2, mj = n1 - 2;
    diag.resize(mi);
    rhs.resize(mi);
    for (int j = 1; j < n1 - 1; ++j) {
        for (int k = 0; k < mi; ++k) {
            const int i = k + 1;
            const std::size_t idx = g.index(i, j);
            diag[k] = 1.0 + a * hx_diag(idx);
            rhs[k] = (1.0 - a * hy_diag(idx)) * psi.v[idx] -
                     a * offy * (psi.v[g.index(i, j - 1)] + psi.v[g.index(i, j + 1)]);
        }
        solve_tridiag(a * offx, diag, rhs, scratch);
        for (int k = 0; k < mi; ++k) mid[g.index(k + 1, j)] = rhs[k];
    }

    // Half-step 2: (I + a Hy) psi' = (I - a Hx) psi*. Solve per column i over j=1..n1-2.
    diag.resize(mj);
    rhs.resize(mj);
    for (int i = 1; i < n0 - 1; ++i) {
        for (int k = 0; k < mj; ++k) {
            const int j = k + 1;
            const std::size_t idx = g.index(i, j);
            diag[k] = 1.0 + a * hy_diag(idx);
            rhs[k] = (1.0 - a * hx_diag(idx)) * mid[idx] -
                     a * offx * (mid[g.index(i - 1, j)] + mid[g.index(i + 1, j)]);
        }
        solve_tridiag(a * offy, diag, rhs, scratch);
        for (int k = 0; k < mj; ++k) out[g.index(i, k + 1)] = rhs[k];
    }

    WaveFunction result(g, psi.consts);
    result.v = std::move(out);
    return result;
}

WaveFunction step(const WaveFunction& psi, const ScalarField& V, double dt) {
    return psi.grid.dim() == 1 ? step_cn_1d(psi, V, dt) : step_adi_2d(psi, V, dt);
}

EvolutionResult evolve(const WaveFunction& psi0, const ScalarField& V, const EvolveOptions& opt,
                       const SnapshotCallback& on_snapshot) {
    if (!(opt.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (opt.n_steps < 0) throw std::invalid_argument("n_steps must be >= 0");
    if (opt.snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be >= 1");

    EvolutionResult res;
    double vmax = 0.0;
    for (double x : V.v) vmax = std::max(vmax, std::abs(x));
    if (opt.dt * vmax / psi0.consts.hbar > 0.5)
        res.warnings.push_back("dt*max|V|/hbar exceeds 0.5; potential is stiff on this timestep");

    WaveFunction cur = psi0;
    if (on_snapshot) on_snapshot(0, 0.0, cur);
    if (opt.keep_snapshots) res.snapshots.emplace_back(0.0, cur);

    for (int s = 1; s <= opt.n_steps; ++s) {
        cur = step(cur, V, opt.dt);
        res.norm_history.push_back(norm_squared(cur));
        const double t = s * opt.dt;
        if (s % opt.snapshot_stride == 0 || s == opt.n_steps) {
            if (on_snapshot) on_snapshot(s, t, cur);
            if (opt.keep_snapshots) res.snapshots.emplace_back(t, cur);
        }
    }
    res.final_state = std::move(cur);
    return res;
}

double energy_expectation(const WaveFunction& psi, const ScalarField& V) {
    const Grid& g = psi.grid;
    std::vector<double> re(g.size()), im(g.size());
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        re[k] = psi.v[k].real();
        im[k] = psi.v[k].imag();
    }
    ScalarField fr{g}, fi{g};
    fr.v = std::move(re);
    fi.v = std::move(im);
    const ScalarField lr = laplacian(fr), li = laplacian(fi);

    const double hbar = psi.consts.hbar, m = psi.consts.mass;
    ScalarField num(g), den(g);
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        const cplx lap(lr.v[k], li.v[k]);
        const cplx hpsi = -hbar * hbar / (2.0 * m) * lap + V.v[k] * psi.v[k];
        num.v[k] = (std::conj(psi.v[k]) * hpsi).real();
        den.v[k] = std::norm(psi.v[k]);
    }
    return integrate(num) / integrate(den);
}

}  // namespace qc
