#include "qc/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace qc {

namespace {

struct LineSet {
    int count;       // number of lines
    int len;         // points per line
    std::size_t stride;   // stride along the line
    std::size_t base_mul; // start of line l is l * base_mul ... except 2D axis0
};

// Iterate all 1D lines along `axis`, calling fn(start_index, stride, len).
template <typename F>
void for_each_line(const Grid& g, int axis, F&& fn) {
    if (g.dim() == 1) {
        fn(std::size_t{0}, std::size_t{1}, g.axis(0).n);
        return;
    }
    const int n0 = g.axis(0).n, n1 = g.axis(1).n;
    if (axis == 0) {
        for (int j = 0; j < n1; ++j) fn(static_cast<std::size_t>(j), static_cast<std::size_t>(n1), n0);
    } else {
        for (int i = 0; i < n0; ++i) fn(static_cast<std::size_t>(i) * n1, std::size_t{1}, n1);
    }
}

}  // namespace

std::vector<double> deriv_axis(const Grid& g, const std::vector<double>& f, int axis) {
    std::vector<double> out(f.size(), 0.0);
    const double dx = g.axis(axis).dx();
    for_each_line(g, axis, [&](std::size_t s, std::size_t st, int len) {
        auto at = [&](int k) { return f[s + st * k]; };
        out[s] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * dx);
        for (int k = 1; k < len - 1; ++k)
            out[s + st * k] = (at(k + 1) - at(k - 1)) / (2.0 * dx);
        out[s + st * (len - 1)] =
            (3.0 * at(len - 1) - 4.0 * at(len - 2) + at(len - 3)) / (2.0 * dx);
    });
    return out;
}

std::vector<double> second_deriv_axis(const Grid& g, const std::vector<double>& f, int axis) {
    std::vector<double> out(f.size(), 0.0);
    const double dx2 = g.axis(axis).dx() * g.axis(axis).dx();
    for_each_line(g, axis, [&](std::size_t s, std::size_t st, int len) {
        auto at = [&](int k) { return f[s + st * k]; };
        out[s] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / dx2;
        for (int k = 1; k < len - 1; ++k)
            out[s + st * k] = (at(k - 1) - 2.0 * at(k) + at(k + 1)) / dx2;
        out[s + st * (len - 1)] =
            (2.0 * at(len - 1) - 5.0 * at(len - 2) + 4.0 * at(len - 3) - at(len - 4)) / dx2;
    });
    return out;
}

VectorField gradient(const ScalarField& f) {
    VectorField g(f.grid);
    for (int a = 0; a < f.grid.dim(); ++a) g.comp[a] = deriv_axis(f.grid, f.v, a);
    return g;
}

ScalarField divergence(const VectorField& v) {
    ScalarField d(v.grid);
    for (int a = 0; a < v.grid.dim(); ++a) {
        auto da = deriv_axis(v.grid, v.comp[a], a);
        for (std::size_t k = 0; k < d.v.size(); ++k) d.v[k] += da[k];
    }
    return d;
}

ScalarField laplacian(const ScalarField& f) {
    ScalarField l(f.grid);
    for (int a = 0; a < f.grid.dim(); ++a) {
        auto da = second_deriv_axis(f.grid, f.v, a);
        for (std::size_t k = 0; k < l.v.size(); ++k) l.v[k] += da[k];
    }
    return l;
}

double integrate(const ScalarField& f) {
    double s = 0.0;
    const Grid& g = f.grid;
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) s += g.weight(i, j) * f.v[g.index(i, j)];
    return s;
}

double integrate_masked(const ScalarField& f, const Mask& mask) {
    double s = 0.0;
    const Grid& g = f.grid;
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const std::size_t k = g.index(i, j);
            if (!mask[k]) s += g.weight(i, j) * f.v[k];
        }
    return s;
}

ScalarField normalize(const ScalarField& P) {
    const double total = integrate(P);
    if (!(total > 0.0)) throw std::domain_error("normalize: field integrates to zero");
    ScalarField out = P;
    for (double& x : out.v) x /= total;
    return out;
}

double norm_squared(const WaveFunction& psi) {
    ScalarField P(psi.grid);
    for (std::size_t k = 0; k < psi.v.size(); ++k) P.v[k] = std::norm(psi.v[k]);
    return integrate(P);
}

namespace {

double wrap_to_pi(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a < 0) a += two_pi;
    return a - std::numbers::pi;
}

}  // namespace

MadelungState decompose(const WaveFunction& psi, double eps_node) {
    const Grid& g = psi.grid;
    MadelungState st;
    st.consts = psi.consts;
    st.P = ScalarField(g);
    st.S = ScalarField(g);
    st.node_mask.assign(g.size(), 0);

    double pmax = 0.0;
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        st.P.v[k] = std::norm(psi.v[k]);
        pmax = std::max(pmax, st.P.v[k]);
    }
    if (eps_node < 0.0) eps_node = 1e-12 * pmax;
    if (!(pmax > 0.0) || pmax < eps_node)
        throw std::domain_error("decompose: wavefunction is numerically zero");

    std::vector<double> phase(g.size());
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        phase[k] = std::arg(psi.v[k]);
        if (st.P.v[k] < eps_node) st.node_mask[k] = 1;
    }

    if (g.dim() == 1) {
        // Sequential unwrap: each cell relative to its left neighbour.
        for (int k = 1; k < g.axis(0).n; ++k)
            phase[k] = phase[k - 1] + wrap_to_pi(phase[k] - phase[k - 1]);
    } else {
        // Quality-guided unwrap: grow outward from the density peak, always
        // extending the highest-P frontier cell, so 2pi slips can only occur
        // in near-node regions where the phase is noise anyway.
        const int n0 = g.axis(0).n, n1 = g.axis(1).n;
        std::size_t kmax = 0;
        for (std::size_t k = 0; k < st.P.v.size(); ++k)
            if (st.P.v[k] > st.P.v[kmax]) kmax = k;
        std::vector<char> done(g.size(), 0);
        std::priority_queue<std::pair<double, std::size_t>> pq;
        pq.emplace(st.P.v[kmax], kmax);
        done[kmax] = 1;
        while (!pq.empty()) {
            const std::size_t k = pq.top().second;
            pq.pop();
            const int i = static_cast<int>(k / n1), j = static_cast<int>(k % n1);
            auto visit = [&](int ii, int jj) {
                if (ii < 0 || ii >= n0 || jj < 0 || jj >= n1) return;
                const std::size_t nb = g.index(ii, jj);
                if (done[nb]) return;
                done[nb] = 1;
                phase[nb] = phase[k] + wrap_to_pi(phase[nb] - phase[k]);
                pq.emplace(st.P.v[nb], nb);
            };
            visit(i - 1, j);
            visit(i + 1, j);
            visit(i, j - 1);
            visit(i, j + 1);
        }
    }

    const double hbar = psi.consts.hbar;
    for (std::size_t k = 0; k < phase.size(); ++k) st.S.v[k] = hbar * phase[k];
    return st;
}

WaveFunction recompose(const MadelungState& state) {
    WaveFunction psi(state.P.grid, state.consts);
    const double hbar = state.consts.hbar;
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        if (state.node_mask[k]) {
            psi.v[k] = 0.0;
        } else {
            psi.v[k] = std::sqrt(state.P.v[k]) *
                       std::polar(1.0, state.S.v[k] / hbar);
        }
    }
    return psi;
}

ScalarField align_phase(const ScalarField& a, const ScalarField& b, const ScalarField& P,
                        double hbar) {
    std::size_t anchor = 0;
    for (std::size_t k = 0; k < P.v.size(); ++k)
        if (P.v[k] > P.v[anchor]) anchor = k;
    const double period = 2.0 * std::numbers::pi * hbar;
    const double shift = std::round((b.v[anchor] - a.v[anchor]) / period) * period;
    ScalarField out = b;
    for (double& x : out.v) x -= shift;
    return out;
}

Mask dilate(const Grid& g, const Mask& m, int radius) {
    Mask out = m;
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            if (!m[g.index(i, j)]) continue;
            for (int di = -radius; di <= radius; ++di)
                for (int dj = -radius; dj <= radius; ++dj) {
                    const int ii = i + di, jj = j + dj;
                    if (ii >= 0 && ii < n0 && jj >= 0 && jj < n1) out[g.index(ii, jj)] = 1;
                }
        }
    return out;
}

Mask mask_from_density(const ScalarField& P, double eps_rel) {
    double pmax = 0.0;
    for (double x : P.v) pmax = std::max(pmax, x);
    Mask m(P.v.size(), 0);
    for (std::size_t k = 0; k < P.v.size(); ++k)
        if (P.v[k] < eps_rel * pmax) m[k] = 1;
    return m;
}

namespace {

struct CellPos {
    int i;      // lower cell index per axis
    double t;   // fractional position in [0,1]
};

std::optional<CellPos> locate(const Axis& ax, double x) {
    if (x < ax.min || x > ax.max) return std::nullopt;
    const double dx = ax.dx();
    int i = static_cast<int>((x - ax.min) / dx);
    if (i >= ax.n - 1) i = ax.n - 2;
    return CellPos{i, (x - ax.coord(i)) / dx};
}

}  // namespace

namespace {

std::optional<double> interp_values(const Grid& g, const std::vector<double>& v,
                                    const std::array<double, 2>& x, const Mask* mask) {
    auto c0 = locate(g.axis(0), x[0]);
    if (!c0) return std::nullopt;
    if (g.dim() == 1) {
        const std::size_t a = c0->i, b = c0->i + 1;
        if (mask && ((*mask)[a] || (*mask)[b])) return std::nullopt;
        return (1.0 - c0->t) * v[a] + c0->t * v[b];
    }
    auto c1 = locate(g.axis(1), x[1]);
    if (!c1) return std::nullopt;
    const std::size_t k00 = g.index(c0->i, c1->i), k01 = g.index(c0->i, c1->i + 1);
    const std::size_t k10 = g.index(c0->i + 1, c1->i), k11 = g.index(c0->i + 1, c1->i + 1);
    if (mask && ((*mask)[k00] || (*mask)[k01] || (*mask)[k10] || (*mask)[k11]))
        return std::nullopt;
    const double u = c0->t, w = c1->t;
    return (1 - u) * (1 - w) * v[k00] + (1 - u) * w * v[k01] + u * (1 - w) * v[k10] +
           u * w * v[k11];
}

}  // namespace

std::optional<double> interp(const ScalarField& f, const std::array<double, 2>& x,
                             const Mask* mask) {
    return interp_values(f.grid, f.v, x, mask);
}

std::optional<std::array<double, 2>> interp(const VectorField& f, const std::array<double, 2>& x,
                                            const Mask* mask) {
    std::array<double, 2> out{0.0, 0.0};
    for (int a = 0; a < f.grid.dim(); ++a) {
        auto val = interp_values(f.grid, f.comp[a], x, mask);
        if (!val) return std::nullopt;
        out[a] = *val;
    }
    return out;
}

}  // namespace qc
