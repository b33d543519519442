#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "qc/hydro.hpp"
#include "qc/potential.hpp"
#include "qc/propagator.hpp"
#include "qc/stochastic.hpp"

using namespace qc;
namespace {

// A spreading Gaussian some time after release: nonzero v everywhere, k_u and v
// colinear (1D), the standard nontrivial test state.
MadelungState spread_gaussian(Grid g) {
    PhysicsConstants pc;
    WaveFunction psi = gaussian_packet(g, pc, {0, 0}, {1, 1}, {0, 0});
    ScalarField V(g, 0.0);
    EvolveOptions opt;
    opt.dt = 1e-3;
    opt.n_steps = 1000;
    opt.keep_snapshots = false;
    return decompose(evolve(psi, V, opt).final_state, 1e-10);
}
}  // namespace

TEST_CASE("fluctuation samples have magnitude hbar |k_u| and unit direction") {
    Grid g = Grid::make_1d(512, -8, 8);
    PhysicsConstants pc;
    MadelungState m = decompose(gaussian_packet(g, pc, {0, 0}, {1.2, 1}, {0, 0}), 1e-9);
    VectorField ku = ku_field(m.P, &m.node_mask);
    Philox rng(12, 0);
    for (int k = 0; k < 200; ++k) {
        std::array<double, 2> x{rng.uniform(-3.0, 3.0), 0.0};
        FluctuationSample s = sample_fluctuation(ku, m.node_mask, pc, x, rng);
        CHECK(std::abs(s.n_unit[0]) == doctest::Approx(1.0).epsilon(1e-12));
        auto kq = interp(ku, x, &m.node_mask);
        REQUIRE(kq.has_value());
        CHECK(std::abs(s.delta_p[0]) ==
              doctest::Approx(pc.hbar * std::abs((*kq)[0])).epsilon(1e-10));
    }
    // masked position throws
    Mask all(g.size(), 1);
    CHECK_THROWS_AS(sample_fluctuation(ku, all, pc, {0.0, 0.0}, rng), std::domain_error);
}

TEST_CASE("1D isotropic directions are +1/-1 with equal probability") {
    Grid g = Grid::make_1d(256, -8, 8);
    PhysicsConstants pc;
    MadelungState m = decompose(gaussian_packet(g, pc, {0, 0}, {1, 1}, {0, 0}), 1e-9);
    VectorField ku = ku_field(m.P, &m.node_mask);
    Philox rng(77, 1);
    int plus = 0;
    const int N = 20000;
    for (int k = 0; k < N; ++k) {
        FluctuationSample s = sample_fluctuation(ku, m.node_mask, pc, {1.0, 0.0}, rng);
        CHECK(std::abs(std::abs(s.n_unit[0]) - 1.0) < 1e-14);
        if (s.n_unit[0] > 0) ++plus;
    }
    // binomial 3-sigma band
    CHECK(std::abs(plus - N / 2.0) < 3.0 * std::sqrt(N / 4.0));
}

TEST_CASE("2D isotropic directions have vanishing mean and unit norm") {
    Grid g = Grid::make_2d(64, -6, 6, 64, -6, 6);
    PhysicsConstants pc;
    MadelungState m = decompose(gaussian_packet(g, pc, {0, 0}, {1, 1.3}, {0, 0}), 1e-9);
    VectorField ku = ku_field(m.P, &m.node_mask);
    Philox rng(3, 9);
    double sx = 0, sy = 0;
    const int N = 50000;
    for (int k = 0; k < N; ++k) {
        FluctuationSample s = sample_fluctuation(ku, m.node_mask, pc, {0.7, -0.4}, rng);
        CHECK(std::hypot(s.n_unit[0], s.n_unit[1]) == doctest::Approx(1.0).epsilon(1e-12));
        sx += s.n_unit[0];
        sy += s.n_unit[1];
    }
    CHECK(std::abs(sx / N) < 3.0 / std::sqrt(2.0 * N));
    CHECK(std::abs(sy / N) < 3.0 / std::sqrt(2.0 * N));
}

TEST_CASE("cross moment <grad S . dp> is unbiased for the isotropic model") {
    MadelungState m = spread_gaussian(Grid::make_1d(1024, -16, 16));
    StochasticReport r = verify_unbiasedness(m, 200000, 2024);
    CHECK(r.pass);
    CHECK(std::abs(r.estimate) <= 3.0 * r.std_error);
    CHECK(r.oracle == 0.0);
}

TEST_CASE("negative control: the aligned sampler fails the unbiasedness test") {
    MadelungState m = spread_gaussian(Grid::make_1d(1024, -16, 16));
    StochasticReport r = verify_unbiasedness(m, 200000, 2024, DirectionModel::aligned);
    CHECK(!r.pass);
    CHECK(std::abs(r.estimate) > 3.0 * r.std_error);
}

TEST_CASE("rms fluctuation Monte Carlo matches quadrature and the 1/4 sigma^2 law") {
    Grid g = Grid::make_1d(2048, -10, 10);
    PhysicsConstants pc;
    for (double sigma : {0.8, 1.0, 1.5}) {
        WaveFunction psi = gaussian_packet(g, pc, {0, 0}, {sigma, 1}, {0, 0});
        MadelungState m = decompose(psi, 1e-10);
        StochasticReport r = verify_rms(m.P, pc, 1000000, 31);
        CHECK(r.pass);
        CHECK(r.oracle == doctest::Approx(1.0 / (4 * sigma * sigma)).epsilon(1e-3));
        CHECK(r.estimate == doctest::Approx(r.oracle).epsilon(0.02));
    }
}

TEST_CASE("stochastic verification is deterministic in the seed") {
    MadelungState m = spread_gaussian(Grid::make_1d(512, -16, 16));
    StochasticReport a = verify_unbiasedness(m, 50000, 5);
    StochasticReport b = verify_unbiasedness(m, 50000, 5);
    StochasticReport c = verify_unbiasedness(m, 50000, 6);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.estimate != c.estimate);
}

TEST_CASE("report serialization carries all fields") {
    StochasticReport r{"cross_moment", 0.5, 0.1, 0.0, false};
    std::string j = report_to_json(r);
    CHECK(j.find("cross_moment") != std::string::npos);
    CHECK(j.find("0.5") != std::string::npos);
    CHECK(j.find("stderr") != std::string::npos);
    CHECK(j.find("false") != std::string::npos);
}
