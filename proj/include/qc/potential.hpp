#pragma once

#include <functional>
#include <vector>

#include "qc/field.hpp"

namespace qc {

// Double-slit barrier geometry: a high barrier slab at barrier_x with one or
// two transverse openings. Transverse axis is axis 1.
struct SlitGeometry {
    double barrier_x = 0.0;
    double thickness = 0.2;
    std::vector<double> slit_centers;
    double slit_width = 0.5;
    double barrier_height = 1e4;

    void validate(const Grid& g) const;
};

struct Potential {
    enum class Kind { free, harmonic, barrier_mask, custom };

    Kind kind = Kind::free;
    double omega = 1.0;           // harmonic
    std::array<double, 2> center{0.0, 0.0};
    SlitGeometry slits;           // barrier_mask
    ScalarField custom;

    static Potential make_free() { return {}; }
    static Potential make_harmonic(double omega, std::array<double, 2> center = {0.0, 0.0});
    static Potential make_slits(const SlitGeometry& geom);
    static Potential make_custom(const ScalarField& V);

    ScalarField evaluate(const Grid& grid, const PhysicsConstants& consts) const;
};

// --- canonical initial states ---

WaveFunction gaussian_packet(const Grid& g, const PhysicsConstants& pc,
                             std::array<double, 2> x0, std::array<double, 2> sigma,
                             std::array<double, 2> k0);
WaveFunction plane_wave(const Grid& g, const PhysicsConstants& pc, std::array<double, 2> k);
WaveFunction harmonic_ground(const Grid& g, const PhysicsConstants& pc, double omega,
                             std::array<double, 2> center = {0.0, 0.0});
WaveFunction box_eigenmode(const Grid& g, const PhysicsConstants& pc, int n);

// Normalizes psi so the trapezoidal integral of |psi|^2 is 1.
void normalize_wavefunction(WaveFunction& psi);

}  // namespace qc
