#pragma once

#include <cstdint>
#include <string>

#include "qc/field.hpp"
#include "qc/hydro.hpp"
#include "qc/rng.hpp"

namespace qc {

// Direction model for the fluctuation momentum. The sub-quantum process is
// unspecified; isotropic per-sample white noise is the minimal choice that
// leaves the cross term with grad S unbiased. `aligned` pins n to the k_u
// direction and serves as the negative control in tests.
enum class DirectionModel { isotropic, aligned };

struct FluctuationSample {
    std::array<double, 2> position{};
    std::array<double, 2> delta_p{};  // n * hbar |k_u|
    std::array<double, 2> n_unit{};
};

// Throws std::domain_error when the position sits on the node mask.
FluctuationSample sample_fluctuation(const VectorField& ku, const Mask& mask,
                                     const PhysicsConstants& consts,
                                     const std::array<double, 2>& x, Philox& rng,
                                     DirectionModel model = DirectionModel::isotropic);

struct StochasticReport {
    std::string quantity;
    double estimate = 0.0;
    double std_error = 0.0;
    double oracle = 0.0;
    bool pass = false;
};

// Monte-Carlo estimate of the cross moment int P (grad S . dp) d^n x; passes
// when |estimate| <= 3 SE.
StochasticReport verify_unbiasedness(const MadelungState& state, long long n_samples,
                                     std::uint64_t seed,
                                     DirectionModel model = DirectionModel::isotropic);

// Monte-Carlo <|dp|^2> over positions drawn from P against the quadrature
// value; passes when the relative discrepancy is below rel_tol.
StochasticReport verify_rms(const ScalarField& P, const PhysicsConstants& consts,
                            long long n_samples, std::uint64_t seed, double rel_tol = 0.02);

std::string report_to_json(const StochasticReport& r);

}  // namespace qc
