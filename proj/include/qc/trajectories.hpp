#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qc/field.hpp"
#include "qc/rng.hpp"

namespace qc {

enum class ParticleStatus { active, exited, node_stalled, exited_screen };

// Inverse-CDF sampler for a piecewise-linear density given by node values on a
// uniform axis. Sampling inverts the per-cell quadratic of the trapezoidal CDF
// exactly, so draws follow the linear interpolant of the node values.
class DensitySampler1D {
public:
    DensitySampler1D(std::vector<double> node_density, double xmin, double dx);

    double sample(double u) const;  // u uniform in [0,1)

    // Exact probability of the linear interpolant over [a,b] (for test oracles).
    double interval_prob(double a, double b) const;

private:
    std::vector<double> pdf_;  // normalized node values
    std::vector<double> cdf_;  // node CDF, cdf_.front()=0, cdf_.back()=1
    double xmin_, dx_;
};

// i.i.d. draws from P0 (1D inverse CDF; 2D marginal-then-conditional), one RNG
// stream per particle split from the master seed.
std::vector<std::array<double, 2>> sample_initial_positions(const ScalarField& P0, int n,
                                                            std::uint64_t seed);

struct ScreenSpec {
    bool enabled = false;
    double x = 0.0;  // screen plane along axis 0 (2D scenarios)
};

struct TrajectoryEnsemble {
    std::uint64_t seed = 0;
    int n_particles = 0;
    std::vector<std::array<double, 2>> pos;
    std::vector<ParticleStatus> status;
    std::vector<double> screen_value;  // transverse hit coordinate, valid when exited_screen
    bool record_paths = false;
    std::vector<std::vector<std::pair<double, std::array<double, 2>>>> paths;
};

TrajectoryEnsemble make_ensemble(const ScalarField& P0, int n, std::uint64_t seed,
                                 bool record_paths = false);

// One RK4 step from t0 to t1 for every active particle, with v(x,t) bilinearly
// interpolated in space and linearly in t between the two snapshot fields.
// Particles leaving the grid become exited; entering the node mask, stalled.
void advance(TrajectoryEnsemble& ens, const VectorField& v0, const Mask& m0,
             const VectorField& v1, const Mask& m1, double t0, double t1,
             const ScreenSpec& screen = {});

struct DotPattern {
    double lo = 0.0, hi = 1.0;
    int nbins = 0;
    std::vector<long long> counts;
    long long n_total = 0;     // dot values offered
    long long n_excluded = 0;  // outside [lo, hi]

    double bin_center(int b) const { return lo + (b + 0.5) * (hi - lo) / nbins; }
    double bin_width() const { return (hi - lo) / nbins; }
};

DotPattern accumulate_dots(const std::vector<double>& values, double lo, double hi, int nbins);

// Bin-wise sum (incoherent addition; the classical trivial-machine benchmark).
DotPattern add_patterns(const DotPattern& a, const DotPattern& b);

// Final transverse coordinates of active particles (axis = 1 in 2D, 0 in 1D).
std::vector<double> final_transverse(const TrajectoryEnsemble& ens, int axis,
                                     std::size_t first_n = 0);

// Screen-crossing coordinates of exited_screen particles, restricted to the
// first first_n particle streams when nonzero (staged Fig-1 style subsets).
std::vector<double> screen_hits(const TrajectoryEnsemble& ens, std::size_t first_n = 0);

}  // namespace qc
