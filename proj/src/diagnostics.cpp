#include "qc/diagnostics.hpp"

#include <cmath>

#include "nlohmann/json.hpp"

namespace qc {

namespace {

// Interior ring of width 2 excluded together with the dilated node mask.
Mask interior_mask(const Grid& g, const Mask& node_mask) {
    Mask mk = dilate(g, node_mask, 2);
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    const int ring = 2;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (i < ring || i >= n0 - ring ||
                (g.dim() == 2 && (j < ring || j >= n1 - ring)))
                mk[g.index(i, j)] = 1;
    return mk;
}

void residual_norms(const ScalarField& r, const Mask& excluded, DiagnosticReport& rep) {
    rep.l_inf = 0.0;
    ScalarField sq(r.grid);
    for (std::size_t k = 0; k < r.v.size(); ++k) {
        if (excluded[k]) continue;
        rep.l_inf = std::max(rep.l_inf, std::abs(r.v[k]));
        sq.v[k] = r.v[k] * r.v[k];
    }
    rep.l2 = std::sqrt(integrate_masked(sq, excluded));
    rep.finish();
}

struct Midpoint {
    ScalarField P, S, P_dot, S_dot;
    Mask mask;
};

Midpoint midpoint(const MadelungState& a, const MadelungState& b, double dt) {
    Midpoint m;
    const ScalarField Sb = align_phase(a.S, b.S, a.P, a.consts.hbar);
    m.P = a.P;
    m.S = a.S;
    m.P_dot = a.P;
    m.S_dot = a.S;
    for (std::size_t k = 0; k < m.P.v.size(); ++k) {
        m.P.v[k] = 0.5 * (a.P.v[k] + b.P.v[k]);
        m.S.v[k] = 0.5 * (a.S.v[k] + Sb.v[k]);
        m.P_dot.v[k] = (b.P.v[k] - a.P.v[k]) / dt;
        m.S_dot.v[k] = (Sb.v[k] - a.S.v[k]) / dt;
    }
    m.mask = a.node_mask;
    for (std::size_t k = 0; k < m.mask.size(); ++k)
        m.mask[k] = m.mask[k] || b.node_mask[k];
    return m;
}

}  // namespace

std::string report_to_json(const DiagnosticReport& r) {
    nlohmann::json j{{"name", r.name},
                     {"l_inf", r.l_inf},
                     {"l2", r.l2},
                     {"threshold", r.threshold},
                     {"pass", r.pass}};
    return j.dump(2);
}

DiagnosticReport continuity_residual(const MadelungState& at_t, const MadelungState& at_t_dt,
                                     double dt, double threshold) {
    const Midpoint m = midpoint(at_t, at_t_dt, dt);
    const VectorField gS = gradient(m.S);
    VectorField flux(m.P.grid);
    const double mass = at_t.consts.mass;
    for (int a = 0; a < m.P.grid.dim(); ++a)
        for (std::size_t k = 0; k < flux.comp[a].size(); ++k)
            flux.comp[a][k] = m.P.v[k] * gS.comp[a][k] / mass;
    const ScalarField divflux = divergence(flux);

    ScalarField r(m.P.grid);
    for (std::size_t k = 0; k < r.v.size(); ++k) r.v[k] = m.P_dot.v[k] + divflux.v[k];

    DiagnosticReport rep;
    rep.name = "continuity";
    rep.threshold = threshold;
    residual_norms(r, interior_mask(m.P.grid, m.mask), rep);
    return rep;
}

DiagnosticReport hjb_residual(const MadelungState& at_t, const MadelungState& at_t_dt,
                              const ScalarField& V, double dt, double threshold) {
    const Midpoint m = midpoint(at_t, at_t_dt, dt);
    const VectorField gS = gradient(m.S);
    const ScalarField Q = quantum_potential(m.P, at_t.consts, &m.mask);
    const double mass = at_t.consts.mass;

    ScalarField r(m.P.grid);
    for (std::size_t k = 0; k < r.v.size(); ++k) {
        double gs2 = 0.0;
        for (const auto& c : gS.comp) gs2 += c[k] * c[k];
        r.v[k] = m.S_dot.v[k] + gs2 / (2.0 * mass) + V.v[k] + Q.v[k];
    }

    DiagnosticReport rep;
    rep.name = "hamilton_jacobi_bohm";
    rep.threshold = threshold;
    residual_norms(r, interior_mask(m.P.grid, m.mask), rep);
    return rep;
}

double orthogonality_index(const MadelungState& state) {
    Mask mk;
    const VectorField v = velocity_field(state, &mk);
    const VectorField ku = ku_field(state.P, &state.node_mask);
    const Grid& g = state.P.grid;

    ScalarField num(g), den(g);
    for (std::size_t k = 0; k < num.v.size(); ++k) {
        if (mk[k]) continue;
        double dot = 0.0, kn = 0.0, vn = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            dot += ku.comp[a][k] * v.comp[a][k];
            kn += ku.comp[a][k] * ku.comp[a][k];
            vn += v.comp[a][k] * v.comp[a][k];
        }
        num.v[k] = state.P.v[k] * std::abs(dot);
        den.v[k] = state.P.v[k] * std::sqrt(kn) * std::sqrt(vn);
    }
    const double denom = integrate_masked(den, mk);
    if (denom < 1e-12) return 0.0;
    return integrate_masked(num, mk) / (denom + 1e-30);
}

ZeroPointReport zero_point_identity(const MadelungState& at_t, const MadelungState& at_t_dt,
                                    double dt, double omega, double threshold) {
    const Midpoint m = midpoint(at_t, at_t_dt, dt);
    MadelungState mid;
    mid.P = m.P;
    mid.S = m.S;
    mid.node_mask = m.mask;
    mid.consts = at_t.consts;

    Mask vmask;
    const VectorField v = velocity_field(mid, &vmask);
    const VectorField ku = ku_field(m.P, &m.mask);
    const ScalarField divv = divergence(v);
    const Grid& g = m.P.grid;

    ScalarField r(g), kuv(g);
    for (std::size_t k = 0; k < r.v.size(); ++k) {
        if (vmask[k]) continue;
        double dot = 0.0;
        for (int a = 0; a < g.dim(); ++a) dot += ku.comp[a][k] * v.comp[a][k];
        kuv.v[k] = m.P.v[k] * dot;
        r.v[k] = dot + 0.5 * divv.v[k] + 0.5 * m.P_dot.v[k] / m.P.v[k];
    }

    ZeroPointReport zp;
    zp.residual.name = "zero_point_identity";
    zp.residual.threshold = threshold;
    // divv of the masked velocity field picks up spurious values next to masked
    // points; exclude one extra ring.
    residual_norms(r, interior_mask(g, dilate(g, vmask, 1)), zp.residual);
    zp.e0_estimate = -at_t.consts.hbar * integrate_masked(kuv, vmask);
    zp.omega = omega;
    zp.e0_reference = 0.5 * g.dim() * at_t.consts.hbar * omega;
    return zp;
}

ScalarField variable_mass_field(const ScalarField& P_prev, const ScalarField& P_now,
                                const ScalarField& P_next, double dt,
                                const PhysicsConstants& consts, const Mask* node_mask) {
    const Grid& g = P_now.grid;
    ScalarField Rp(g), Rn(g), Rf(g);
    for (std::size_t k = 0; k < Rn.v.size(); ++k) {
        Rp.v[k] = std::sqrt(std::max(P_prev.v[k], 0.0));
        Rn.v[k] = std::sqrt(std::max(P_now.v[k], 0.0));
        Rf.v[k] = std::sqrt(std::max(P_next.v[k], 0.0));
    }
    const ScalarField lapR = laplacian(Rn);
    const double c2 = consts.c * consts.c;
    const double m2c2 = consts.mass * consts.mass * c2;
    Mask mk = node_mask ? dilate(g, *node_mask, 2) : Mask(g.size(), 0);

    ScalarField M2(g);
    for (std::size_t k = 0; k < M2.v.size(); ++k) {
        if (mk[k] || Rn.v[k] == 0.0) {
            M2.v[k] = m2c2;
            continue;
        }
        const double rtt = (Rp.v[k] - 2.0 * Rn.v[k] + Rf.v[k]) / (dt * dt);
        const double box = rtt / c2 - lapR.v[k];
        M2.v[k] = m2c2 + consts.hbar * consts.hbar * box / Rn.v[k];
    }
    return M2;
}

}  // namespace qc
