#include "qc/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qc {

DensitySampler1D::DensitySampler1D(std::vector<double> node_density, double xmin, double dx)
    : pdf_(std::move(node_density)), xmin_(xmin), dx_(dx) {
    if (pdf_.size() < 2) throw std::invalid_argument("sampler needs at least 2 nodes");
    cdf_.resize(pdf_.size());
    cdf_[0] = 0.0;
    for (std::size_t i = 1; i < pdf_.size(); ++i)
        cdf_[i] = cdf_[i - 1] + 0.5 * dx_ * (pdf_[i - 1] + pdf_[i]);
    const double total = cdf_.back();
    if (!(total > 0.0)) throw std::domain_error("sampler: density integrates to zero");
    for (auto& c : cdf_) c /= total;
    for (auto& p : pdf_) p /= total;
}

double DensitySampler1D::sample(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = it == cdf_.begin() ? 0 : (it - cdf_.begin() - 1);
    if (i >= pdf_.size() - 1) i = pdf_.size() - 2;
    // Within cell i: u = C_i + dx*(p_i t + (p_{i+1}-p_i) t^2 / 2), t in [0,1].
    const double q = (u - cdf_[i]) / dx_;
    const double p0 = pdf_[i], dp = pdf_[i + 1] - pdf_[i];
    double t;
    if (std::abs(dp) < 1e-14 * (p0 + std::abs(dp))) {
        t = p0 > 0.0 ? q / p0 : 0.0;
    } else {
        const double disc = std::max(p0 * p0 + 2.0 * dp * q, 0.0);
        t = (-p0 + std::sqrt(disc)) / dp;
    }
    t = std::clamp(t, 0.0, 1.0);
    return xmin_ + (i + t) * dx_;
}

double DensitySampler1D::interval_prob(double a, double b) const {
    auto cdf_at = [&](double x) {
        const double xr = std::clamp(x, xmin_, xmin_ + (pdf_.size() - 1) * dx_);
        std::size_t i = static_cast<std::size_t>((xr - xmin_) / dx_);
        if (i >= pdf_.size() - 1) i = pdf_.size() - 2;
        const double t = (xr - (xmin_ + i * dx_)) / dx_;
        const double p0 = pdf_[i], dp = pdf_[i + 1] - pdf_[i];
        return cdf_[i] + dx_ * (p0 * t + 0.5 * dp * t * t);
    };
    return cdf_at(b) - cdf_at(a);
}

std::vector<std::array<double, 2>> sample_initial_positions(const ScalarField& P0, int n,
                                                            std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one sample");
    const Grid& g = P0.grid;
    std::vector<std::array<double, 2>> out(n, {0.0, 0.0});

    if (g.dim() == 1) {
        DensitySampler1D s(P0.v, g.axis(0).min, g.axis(0).dx());
        for (int p = 0; p < n; ++p) {
            Philox rng(seed, static_cast<std::uint64_t>(p));
            out[p][0] = s.sample(rng.uniform());
        }
        return out;
    }

    const int n0 = g.axis(0).n, n1 = g.axis(1).n;
    // Marginal over the transverse axis, trapezoidal per row.
    std::vector<double> marg(n0, 0.0);
    const double dy = g.axis(1).dx();
    for (int i = 0; i < n0; ++i) {
        double s = 0.0;
        for (int j = 0; j < n1; ++j)
            s += P0.at(i, j) * ((j == 0 || j == n1 - 1) ? 0.5 : 1.0);
        marg[i] = s * dy;
    }
    DensitySampler1D sx(marg, g.axis(0).min, g.axis(0).dx());
    std::vector<double> row(n1);
    for (int p = 0; p < n; ++p) {
        Philox rng(seed, static_cast<std::uint64_t>(p));
        const double x = sx.sample(rng.uniform());
        int i = static_cast<int>((x - g.axis(0).min) / g.axis(0).dx());
        i = std::clamp(i, 0, n0 - 2);
        const double t = (x - g.axis(0).coord(i)) / g.axis(0).dx();
        for (int j = 0; j < n1; ++j) row[j] = (1.0 - t) * P0.at(i, j) + t * P0.at(i + 1, j);
        DensitySampler1D sy(row, g.axis(1).min, dy);
        out[p] = {x, sy.sample(rng.uniform())};
    }
    return out;
}

TrajectoryEnsemble make_ensemble(const ScalarField& P0, int n, std::uint64_t seed,
                                 bool record_paths) {
    TrajectoryEnsemble ens;
    ens.seed = seed;
    ens.n_particles = n;
    ens.pos = sample_initial_positions(P0, n, seed);
    ens.status.assign(n, ParticleStatus::active);
    ens.screen_value.assign(n, 0.0);
    ens.record_paths = record_paths;
    if (record_paths) {
        ens.paths.resize(n);
        for (int p = 0; p < n; ++p) ens.paths[p].emplace_back(0.0, ens.pos[p]);
    }
    return ens;
}

namespace {

enum class EvalResult { ok, outside, masked };

EvalResult eval_velocity(const VectorField& v0, const Mask& m0, const VectorField& v1,
                         const Mask& m1, double w, const std::array<double, 2>& x,
                         std::array<double, 2>& out) {
    const auto a = interp(v0, x, &m0);
    const auto b = interp(v1, x, &m1);
    if (!a || !b) {
        // Distinguish leaving the grid from entering the node mask.
        const auto unmasked = interp(v0, x, nullptr);
        return unmasked ? EvalResult::masked : EvalResult::outside;
    }
    out = {(1.0 - w) * (*a)[0] + w * (*b)[0], (1.0 - w) * (*a)[1] + w * (*b)[1]};
    return EvalResult::ok;
}

}  // namespace

void advance(TrajectoryEnsemble& ens, const VectorField& v0, const Mask& m0,
             const VectorField& v1, const Mask& m1, double t0, double t1,
             const ScreenSpec& screen) {
    const double h = t1 - t0;
    const int dim = v0.grid.dim();
    for (int p = 0; p < ens.n_particles; ++p) {
        if (ens.status[p] != ParticleStatus::active) continue;
        const std::array<double, 2> x = ens.pos[p];
        std::array<double, 2> k1{}, k2{}, k3{}, k4{};
        EvalResult r = eval_velocity(v0, m0, v1, m1, 0.0, x, k1);
        auto fail = [&](EvalResult rr) {
            ens.status[p] =
                rr == EvalResult::outside ? ParticleStatus::exited : ParticleStatus::node_stalled;
        };
        if (r != EvalResult::ok) { fail(r); continue; }
        std::array<double, 2> xm{x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]};
        r = eval_velocity(v0, m0, v1, m1, 0.5, xm, k2);
        if (r != EvalResult::ok) { fail(r); continue; }
        xm = {x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]};
        r = eval_velocity(v0, m0, v1, m1, 0.5, xm, k3);
        if (r != EvalResult::ok) { fail(r); continue; }
        xm = {x[0] + h * k3[0], x[1] + h * k3[1]};
        r = eval_velocity(v0, m0, v1, m1, 1.0, xm, k4);
        if (r != EvalResult::ok) { fail(r); continue; }

        std::array<double, 2> xn{
            x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};

        if (screen.enabled && dim == 2 && x[0] < screen.x && xn[0] >= screen.x) {
            const double f = (screen.x - x[0]) / (xn[0] - x[0]);
            ens.screen_value[p] = x[1] + f * (xn[1] - x[1]);
            ens.status[p] = ParticleStatus::exited_screen;
            ens.pos[p] = xn;
            continue;
        }
        ens.pos[p] = xn;
        if (xn[0] < v0.grid.axis(0).min || xn[0] > v0.grid.axis(0).max ||
            (dim == 2 && (xn[1] < v0.grid.axis(1).min || xn[1] > v0.grid.axis(1).max)))
            ens.status[p] = ParticleStatus::exited;
        if (ens.record_paths) ens.paths[p].emplace_back(t1, xn);
    }
}

DotPattern accumulate_dots(const std::vector<double>& values, double lo, double hi, int nbins) {
    if (values.empty()) throw std::invalid_argument("empty dot ensemble");
    if (nbins < 1 || !(hi > lo)) throw std::invalid_argument("bad dot pattern bins");
    DotPattern pat;
    pat.lo = lo;
    pat.hi = hi;
    pat.nbins = nbins;
    pat.counts.assign(nbins, 0);
    pat.n_total = static_cast<long long>(values.size());
    for (double v : values) {
        if (v < lo || v > hi) {
            ++pat.n_excluded;
            continue;
        }
        int b = static_cast<int>((v - lo) / (hi - lo) * nbins);
        if (b >= nbins) b = nbins - 1;
        ++pat.counts[b];
    }
    return pat;
}

DotPattern add_patterns(const DotPattern& a, const DotPattern& b) {
    if (a.nbins != b.nbins || a.lo != b.lo || a.hi != b.hi)
        throw std::invalid_argument("pattern bins differ");
    DotPattern out = a;
    for (int i = 0; i < a.nbins; ++i) out.counts[i] += b.counts[i];
    out.n_total += b.n_total;
    out.n_excluded += b.n_excluded;
    return out;
}

std::vector<double> final_transverse(const TrajectoryEnsemble& ens, int axis,
                                     std::size_t first_n) {
    std::vector<double> vals;
    const std::size_t limit =
        first_n == 0 ? ens.pos.size() : std::min(first_n, ens.pos.size());
    for (std::size_t p = 0; p < limit; ++p)
        if (ens.status[p] == ParticleStatus::active) vals.push_back(ens.pos[p][axis]);
    return vals;
}

std::vector<double> screen_hits(const TrajectoryEnsemble& ens, std::size_t first_n) {
    std::vector<double> vals;
    const std::size_t limit =
        first_n == 0 ? ens.pos.size() : std::min(first_n, ens.pos.size());
    for (std::size_t p = 0; p < limit; ++p)
        if (ens.status[p] == ParticleStatus::exited_screen) vals.push_back(ens.screen_value[p]);
    return vals;
}

}  // namespace qc
