#include "qc/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlohmann/json.hpp"
#include "qc/trajectories.hpp"

namespace qc {

FluctuationSample sample_fluctuation(const VectorField& ku, const Mask& mask,
                                     const PhysicsConstants& consts,
                                     const std::array<double, 2>& x, Philox& rng,
                                     DirectionModel model) {
    const auto kv = interp(ku, x, &mask);
    if (!kv) throw std::domain_error("sample_fluctuation: position on node mask or outside grid");
    const int dim = ku.grid.dim();
    double mag = 0.0;
    for (int a = 0; a < dim; ++a) mag += (*kv)[a] * (*kv)[a];
    mag = consts.hbar * std::sqrt(mag);

    FluctuationSample s;
    s.position = x;
    if (model == DirectionModel::aligned) {
        // n along k_u; degenerate |k_u| = 0 keeps n at +x.
        double knorm = 0.0;
        for (int a = 0; a < dim; ++a) knorm += (*kv)[a] * (*kv)[a];
        knorm = std::sqrt(knorm);
        if (knorm > 0.0)
            for (int a = 0; a < dim; ++a) s.n_unit[a] = (*kv)[a] / knorm;
        else
            s.n_unit[0] = 1.0;
    } else if (dim == 1) {
        s.n_unit[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    } else {
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        s.n_unit = {std::cos(phi), std::sin(phi)};
    }
    for (int a = 0; a < dim; ++a) s.delta_p[a] = s.n_unit[a] * mag;
    return s;
}

namespace {

struct MonteCarlo {
    long long n = 0;
    double sum = 0.0, sum2 = 0.0;
    void add(double x) {
        ++n;
        sum += x;
        sum2 += x * x;
    }
    double mean() const { return sum / n; }
    double se() const {
        const double var = std::max(sum2 / n - mean() * mean(), 0.0);
        return std::sqrt(var / n);
    }
};

}  // namespace

StochasticReport verify_unbiasedness(const MadelungState& state, long long n_samples,
                                     std::uint64_t seed, DirectionModel model) {
    const Grid& g = state.P.grid;
    const Mask mk = dilate(g, state.node_mask, 2);
    const VectorField ku = ku_field(state.P, &state.node_mask);
    const VectorField gS = gradient(state.S);

    MonteCarlo mc;
    const auto xs = sample_initial_positions(state.P, static_cast<int>(n_samples), seed);
    for (long long i = 0; i < n_samples; ++i) {
        Philox rng(seed ^ 0x5bf03635u, static_cast<std::uint64_t>(i));
        const auto gs = interp(gS, xs[i], &mk);
        if (!gs) continue;  // node neighborhood; P-weight there is negligible
        FluctuationSample fs;
        try {
            fs = sample_fluctuation(ku, mk, state.consts, xs[i], rng, model);
        } catch (const std::domain_error&) {
            continue;
        }
        double dot = 0.0;
        for (int a = 0; a < g.dim(); ++a) dot += (*gs)[a] * fs.delta_p[a];
        mc.add(dot);
    }

    StochasticReport r;
    r.quantity = "cross_moment_gradS_dp";
    r.estimate = mc.mean();
    r.std_error = mc.se();
    r.oracle = 0.0;
    r.pass = std::abs(r.estimate) <= 3.0 * r.std_error;
    return r;
}

StochasticReport verify_rms(const ScalarField& P, const PhysicsConstants& consts,
                            long long n_samples, std::uint64_t seed, double rel_tol) {
    const Mask node = mask_from_density(P);
    const Mask mk = dilate(P.grid, node, 2);
    const VectorField ku = ku_field(P, &node);
    const ScalarField Pn = normalize(P);

    MonteCarlo mc;
    const auto xs = sample_initial_positions(Pn, static_cast<int>(n_samples), seed);
    for (long long i = 0; i < n_samples; ++i) {
        Philox rng(seed ^ 0x243f6a88u, static_cast<std::uint64_t>(i));
        FluctuationSample fs;
        try {
            fs = sample_fluctuation(ku, mk, consts, xs[i], rng);
        } catch (const std::domain_error&) {
            continue;
        }
        double m2 = 0.0;
        for (int a = 0; a < P.grid.dim(); ++a) m2 += fs.delta_p[a] * fs.delta_p[a];
        mc.add(m2);
    }

    StochasticReport r;
    r.quantity = "rms_fluctuation_squared";
    r.estimate = mc.mean();
    r.std_error = mc.se();
    r.oracle = rms_fluctuation(Pn, consts, &node);
    const double scale = std::max(std::abs(r.oracle), 1e-300);
    r.pass = r.oracle == 0.0 ? r.estimate == 0.0
                             : std::abs(r.estimate - r.oracle) / scale < rel_tol;
    return r;
}

std::string report_to_json(const StochasticReport& r) {
    nlohmann::json j{{"quantity", r.quantity},
                     {"estimate", r.estimate},
                     {"stderr", r.std_error},
                     {"oracle", r.oracle},
                     {"pass", r.pass}};
    return j.dump(2);
}

}  // namespace qc
