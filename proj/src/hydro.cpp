#include "qc/hydro.hpp"

#include <cmath>

namespace qc {

namespace {

Mask stencil_mask(const Grid& g, const Mask* node_mask) {
    if (!node_mask) return Mask(g.size(), 0);
    return dilate(g, *node_mask, 2);  // covers the one-sided boundary stencils
}

}  // namespace

VectorField velocity_field(const MadelungState& state, Mask* out_mask) {
    VectorField v = gradient(state.S);
    const double m = state.consts.mass;
    for (auto& c : v.comp)
        for (double& x : c) x /= m;
    Mask mk = stencil_mask(state.P.grid, &state.node_mask);
    for (std::size_t k = 0; k < mk.size(); ++k)
        if (mk[k])
            for (auto& c : v.comp) c[k] = 0.0;
    if (out_mask) *out_mask = std::move(mk);
    return v;
}

VectorField guidance_field(const WaveFunction& psi, Mask* out_mask, double eps_node) {
    const Grid& g = psi.grid;
    std::vector<double> P(g.size());
    double pmax = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) {
        P[k] = std::norm(psi.v[k]);
        pmax = std::max(pmax, P[k]);
    }
    if (eps_node < 0.0) eps_node = 1e-12 * pmax;
    Mask nodes(g.size(), 0);
    for (std::size_t k = 0; k < P.size(); ++k)
        if (P[k] < eps_node) nodes[k] = 1;

    VectorField v(g);
    const double pref = psi.consts.hbar / psi.consts.mass;
    for (int a = 0; a < g.dim(); ++a) {
        const double dx = g.axis(a).dx();
        const int len = g.axis(a).n;
        const std::size_t stride = (g.dim() == 2 && a == 0) ? g.axis(1).n : 1;
        const int n_lines = g.dim() == 1 ? 1 : g.axis(a == 0 ? 1 : 0).n;
        const std::size_t line_step = (g.dim() == 2 && a == 0) ? 1 : stride * len;
        for (int l = 0; l < n_lines; ++l) {
            const std::size_t s = l * line_step;
            auto J = [&](int i) {  // face current between i and i+1
                return std::imag(std::conj(psi.v[s + stride * i]) * psi.v[s + stride * (i + 1)]);
            };
            for (int i = 0; i < len; ++i) {
                const std::size_t k = s + stride * i;
                if (nodes[k]) continue;
                const double flux =
                    i == 0 ? J(0) : i == len - 1 ? J(len - 2) : 0.5 * (J(i - 1) + J(i));
                v.comp[a][k] = pref * flux / (dx * P[k]);
            }
        }
    }
    Mask mk = stencil_mask(g, &nodes);
    for (std::size_t k = 0; k < mk.size(); ++k)
        if (mk[k])
            for (auto& c : v.comp) c[k] = 0.0;
    if (out_mask) *out_mask = std::move(mk);
    return v;
}

ScalarField wavefront_speed(const MadelungState& at_t, const MadelungState& at_t_dt, double dt,
                            double eps_grad, Mask* out_mask) {
    const Grid& g = at_t.P.grid;
    const ScalarField S1 = at_t.S;
    const ScalarField S2 = align_phase(at_t.S, at_t_dt.S, at_t.P, at_t.consts.hbar);
    const VectorField gS = gradient(S1);

    ScalarField u(g);
    Mask mk = stencil_mask(g, &at_t.node_mask);
    for (std::size_t k = 0; k < u.v.size(); ++k) {
        double g2 = 0.0;
        for (const auto& c : gS.comp) g2 += c[k] * c[k];
        const double gnorm = std::sqrt(g2);
        if (gnorm < eps_grad) {
            mk[k] = 1;
            continue;
        }
        const double s_dot = (S2.v[k] - S1.v[k]) / dt;
        if (!mk[k]) u.v[k] = -s_dot / gnorm;
    }
    if (out_mask) *out_mask = std::move(mk);
    return u;
}

VectorField ku_field(const ScalarField& P, const Mask* node_mask) {
    VectorField ku = gradient(P);
    const Mask mk = stencil_mask(P.grid, node_mask);
    for (auto& c : ku.comp)
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = mk[k] ? 0.0 : ALPHA * c[k] / P.v[k];
    return ku;
}

ScalarField fluctuation_magnitude(const ScalarField& P, const PhysicsConstants& consts,
                                  const Mask* node_mask) {
    const VectorField ku = ku_field(P, node_mask);
    ScalarField mag(P.grid);
    for (std::size_t k = 0; k < mag.v.size(); ++k) {
        double s = 0.0;
        for (const auto& c : ku.comp) s += c[k] * c[k];
        mag.v[k] = consts.hbar * std::sqrt(s);
    }
    return mag;
}

ScalarField quantum_potential(const ScalarField& P, const PhysicsConstants& consts,
                              const Mask* node_mask) {
    const VectorField gP = gradient(P);
    const ScalarField lP = laplacian(P);
    const Mask mk = stencil_mask(P.grid, node_mask);
    const double pref = consts.hbar * consts.hbar / (4.0 * consts.mass);
    ScalarField Q(P.grid);
    for (std::size_t k = 0; k < Q.v.size(); ++k) {
        if (mk[k]) continue;
        double g2 = 0.0;
        for (const auto& c : gP.comp) g2 += c[k] * c[k];
        const double rel2 = g2 / (P.v[k] * P.v[k]);
        Q.v[k] = pref * (0.5 * rel2 - lP.v[k] / P.v[k]);
    }
    return Q;
}

ScalarField quantum_potential_amplitude(const ScalarField& P, const PhysicsConstants& consts,
                                        const Mask* node_mask) {
    ScalarField R(P.grid);
    for (std::size_t k = 0; k < R.v.size(); ++k) R.v[k] = std::sqrt(std::max(P.v[k], 0.0));
    const ScalarField lR = laplacian(R);
    const Mask mk = stencil_mask(P.grid, node_mask);
    const double pref = -consts.hbar * consts.hbar / (2.0 * consts.mass);
    ScalarField Q(P.grid);
    for (std::size_t k = 0; k < Q.v.size(); ++k)
        if (!mk[k]) Q.v[k] = pref * lR.v[k] / R.v[k];
    return Q;
}

double rms_fluctuation(const ScalarField& P, const PhysicsConstants& consts,
                       const Mask* node_mask) {
    const ScalarField mag = fluctuation_magnitude(P, consts, node_mask);
    ScalarField integrand(P.grid);
    for (std::size_t k = 0; k < integrand.v.size(); ++k)
        integrand.v[k] = P.v[k] * mag.v[k] * mag.v[k];
    const Mask mk = stencil_mask(P.grid, node_mask);
    return integrate_masked(integrand, mk);
}

ScalarField action_integrand(const MadelungState& state, const ScalarField& S_dot,
                             const ScalarField& V, bool include_fluctuation_term) {
    const Grid& g = state.P.grid;
    const VectorField gS = gradient(state.S);
    const VectorField gP = gradient(state.P);
    const double m = state.consts.mass, hbar = state.consts.hbar;
    const Mask mk = stencil_mask(g, &state.node_mask);

    ScalarField L(g);
    for (std::size_t k = 0; k < L.v.size(); ++k) {
        if (mk[k]) continue;
        double gs2 = 0.0, gp2 = 0.0;
        for (const auto& c : gS.comp) gs2 += c[k] * c[k];
        for (const auto& c : gP.comp) gp2 += c[k] * c[k];
        double l = S_dot.v[k] + gs2 / (2.0 * m) + V.v[k];
        if (include_fluctuation_term)
            l += hbar * hbar / (8.0 * m) * gp2 / (state.P.v[k] * state.P.v[k]);
        L.v[k] = state.P.v[k] * l;
    }
    return L;
}

HydroFields compute_hydro(const MadelungState& state) {
    HydroFields h;
    h.mask = stencil_mask(state.P.grid, &state.node_mask);
    h.v = velocity_field(state);
    h.k_u = ku_field(state.P, &state.node_mask);
    h.dp_mag = fluctuation_magnitude(state.P, state.consts, &state.node_mask);
    h.Q = quantum_potential(state.P, state.consts, &state.node_mask);
    return h;
}

}  // namespace qc
