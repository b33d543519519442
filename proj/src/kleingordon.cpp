#include "qc/kleingordon.hpp"

#include <cmath>
#include <stdexcept>

namespace qc {

KGState::KGState(WaveFunction at_minus_dt, WaveFunction at_zero, double dt_)
    : prev(std::move(at_minus_dt)), curr(std::move(at_zero)), dt(dt_) {
    if (curr.grid.dim() != 1) throw std::invalid_argument("KG solver is 1D");
    if (!(prev.grid == curr.grid)) throw std::invalid_argument("KG levels on different grids");
    const double cfl = curr.consts.c * dt / curr.grid.axis(0).dx();
    if (!(dt > 0.0) || cfl > 0.9)
        throw std::invalid_argument("KG CFL violated: need c*dt/dx <= 0.9");
}

KGState step_kg(const KGState& state) {
    const Grid& g = state.curr.grid;
    const int n = g.axis(0).n;
    const double dx = g.axis(0).dx();
    const double c = state.curr.consts.c;
    const double mu = state.curr.consts.mass * c / state.curr.consts.hbar;
    const double cdt2 = c * c * state.dt * state.dt;

    WaveFunction next(g, state.curr.consts);
    for (int i = 1; i < n - 1; ++i) {
        const auto lap =
            (state.curr.v[i - 1] - 2.0 * state.curr.v[i] + state.curr.v[i + 1]) / (dx * dx);
        next.v[i] = 2.0 * state.curr.v[i] - state.prev.v[i] +
                    cdt2 * (lap - mu * mu * state.curr.v[i]);
    }
    KGState out(state.curr, std::move(next), state.dt);
    out.t = state.t + state.dt;
    return out;
}

double kg_energy(const KGState& state) {
    const Grid& g = state.curr.grid;
    const int n = g.axis(0).n;
    const double dx = g.axis(0).dx();
    const double c = state.curr.consts.c;
    const double mu = state.curr.consts.mass * c / state.curr.consts.hbar;

    // Half-level functional conserved exactly by the leapfrog update.
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto dt_u = (state.curr.v[i] - state.prev.v[i]) / (c * state.dt);
        e += std::norm(dt_u);
        e += mu * mu * (std::conj(state.curr.v[i]) * state.prev.v[i]).real();
    }
    for (int i = 0; i < n - 1; ++i) {
        const auto gx_new = (state.curr.v[i + 1] - state.curr.v[i]) / dx;
        const auto gx_old = (state.prev.v[i + 1] - state.prev.v[i]) / dx;
        e += (std::conj(gx_new) * gx_old).real();
    }
    return 0.5 * dx * e;
}

double measure_omega(const WaveFunction& curr, const WaveFunction& next, double dt) {
    std::size_t anchor = 0;
    for (std::size_t k = 0; k < curr.v.size(); ++k)
        if (std::norm(curr.v[k]) > std::norm(curr.v[anchor])) anchor = k;
    return -std::arg(next.v[anchor] / curr.v[anchor]) / dt;
}

namespace {

Mask union_dilated(const Grid& g, const Mask& a, const Mask& b, const Mask& c) {
    Mask u = a;
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = u[k] || b[k] || c[k];
    Mask mk = dilate(g, u, 2);
    const int n = g.axis(0).n;
    for (int i = 0; i < n; ++i)
        if (i < 2 || i >= n - 2) mk[g.index(i)] = 1;
    return mk;
}

void norms(const ScalarField& r, const Mask& excluded, DiagnosticReport& rep) {
    ScalarField sq(r.grid);
    for (std::size_t k = 0; k < r.v.size(); ++k) {
        if (excluded[k]) continue;
        rep.l_inf = std::max(rep.l_inf, std::abs(r.v[k]));
        sq.v[k] = r.v[k] * r.v[k];
    }
    rep.l2 = std::sqrt(integrate_masked(sq, excluded));
    rep.finish();
}

}  // namespace

KGCurrentReport kg_current_residual(const WaveFunction& prev, const WaveFunction& curr,
                                    const WaveFunction& next, double dt, double threshold) {
    const Grid& g = curr.grid;
    const double c = curr.consts.c, hbar = curr.consts.hbar;

    MadelungState m0 = decompose(prev);
    MadelungState m1 = decompose(curr);
    MadelungState m2 = decompose(next);
    const ScalarField S0 = align_phase(m1.S, m0.S, m1.P, hbar);
    const ScalarField& S1 = m1.S;
    const ScalarField S2 = align_phase(m1.S, m2.S, m1.P, hbar);

    const Mask mk = union_dilated(g, m0.node_mask, m1.node_mask, m2.node_mask);

    // (1/c^2) d_t (P d_t S) - div(P grad S) at the middle level.
    ScalarField r_current(g);
    {
        ScalarField flux(g);
        const VectorField gS = gradient(S1);
        for (std::size_t k = 0; k < flux.v.size(); ++k)
            flux.v[k] = m1.P.v[k] * gS.comp[0][k];
        const auto div = deriv_axis(g, flux.v, 0);
        for (std::size_t k = 0; k < r_current.v.size(); ++k) {
            const double a_plus =
                0.5 * (m2.P.v[k] + m1.P.v[k]) * (S2.v[k] - S1.v[k]) / dt;
            const double a_minus =
                0.5 * (m1.P.v[k] + m0.P.v[k]) * (S1.v[k] - S0.v[k]) / dt;
            r_current.v[k] = (a_plus - a_minus) / (dt * c * c) - div[k];
        }
    }

    // d_mu p^mu + (d_mu P / P) p^mu with p^mu = ((1/c) d_t S, -grad S).
    ScalarField r_orth(g);
    {
        const VectorField gS = gradient(S1);
        const VectorField gP = gradient(m1.P);
        const auto Sxx = second_deriv_axis(g, S1.v, 0);
        for (std::size_t k = 0; k < r_orth.v.size(); ++k) {
            const double s_tt = (S0.v[k] - 2.0 * S1.v[k] + S2.v[k]) / (dt * dt);
            const double s_t = (S2.v[k] - S0.v[k]) / (2.0 * dt);
            const double p_t = (m2.P.v[k] - m0.P.v[k]) / (2.0 * dt);
            const double div_p = s_tt / (c * c) - Sxx[k];
            const double scal =
                (p_t * s_t / (c * c) - gP.comp[0][k] * gS.comp[0][k]) / m1.P.v[k];
            if (!mk[k]) r_orth.v[k] = div_p + scal;
        }
    }

    KGCurrentReport rep;
    rep.current.name = "kg_current";
    rep.current.threshold = threshold;
    norms(r_current, mk, rep.current);
    rep.orthogonality.name = "kg_energy_momentum";
    rep.orthogonality.threshold = threshold;
    norms(r_orth, mk, rep.orthogonality);
    return rep;
}

}  // namespace qc
