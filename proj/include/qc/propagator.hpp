#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qc/field.hpp"
#include "qc/potential.hpp"

namespace qc {

// One Crank-Nicolson step of i hbar dpsi/dt = (-hbar^2/2m lap + V) psi on a 1D
// grid with Dirichlet ends. Unitary in the Cayley sense; dt may be negative.
WaveFunction step_cn_1d(const WaveFunction& psi, const ScalarField& V, double dt);

// One Peaceman-Rachford ADI step in 2D (x-implicit half, then y-implicit half),
// with V split evenly between the two half operators.
WaveFunction step_adi_2d(const WaveFunction& psi, const ScalarField& V, double dt);

// Dispatches on grid dimension.
WaveFunction step(const WaveFunction& psi, const ScalarField& V, double dt);

struct EvolveOptions {
    double dt = 1e-3;
    int n_steps = 0;
    int snapshot_stride = 1;
    bool keep_snapshots = true;
};

struct EvolutionResult {
    std::vector<std::pair<double, WaveFunction>> snapshots;  // includes t = 0
    std::vector<double> norm_history;                        // after each step
    std::vector<std::string> warnings;
    WaveFunction final_state;
};

// Called at every snapshot time (including t = 0) with (step, t, psi).
using SnapshotCallback = std::function<void(int, double, const WaveFunction&)>;

EvolutionResult evolve(const WaveFunction& psi0, const ScalarField& V, const EvolveOptions& opt,
                       const SnapshotCallback& on_snapshot = nullptr);

// <psi|H|psi> / <psi|psi> with H = -(hbar^2/2m) lap + V.
double energy_expectation(const WaveFunction& psi, const ScalarField& V);

}  // namespace qc
