#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "qc/grid.hpp"

namespace qc {

struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& at(int i, int j = 0) { return v[grid.index(i, j)]; }
    double at(int i, int j = 0) const { return v[grid.index(i, j)]; }
};

struct VectorField {
    Grid grid;
    std::vector<std::vector<double>> comp;  // one array per axis

    VectorField() = default;
    explicit VectorField(const Grid& g)
        : grid(g), comp(g.dim(), std::vector<double>(g.size(), 0.0)) {}
};

struct WaveFunction {
    Grid grid;
    std::vector<std::complex<double>> v;
    PhysicsConstants consts;

    WaveFunction() = default;
    WaveFunction(const Grid& g, const PhysicsConstants& pc)
        : grid(g), v(g.size(), {0.0, 0.0}), consts(pc) {}

    std::complex<double>& at(int i, int j = 0) { return v[grid.index(i, j)]; }
    std::complex<double> at(int i, int j = 0) const { return v[grid.index(i, j)]; }
};

// (P, S) pair with a node mask where the phase is undefined (P below eps_node).
struct MadelungState {
    ScalarField P;
    ScalarField S;
    Mask node_mask;
    PhysicsConstants consts;
};

// --- finite-difference calculus (central interior, one-sided second order at ends) ---

std::vector<double> deriv_axis(const Grid& g, const std::vector<double>& f, int axis);
std::vector<double> second_deriv_axis(const Grid& g, const std::vector<double>& f, int axis);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);

// --- quadrature ---

double integrate(const ScalarField& f);
double integrate_masked(const ScalarField& f, const Mask& mask);  // masked points contribute 0

// Rescales P so the trapezoidal integral is 1. Throws on an all-zero field.
ScalarField normalize(const ScalarField& P);

double norm_squared(const WaveFunction& psi);

// --- Madelung decomposition, convention psi = sqrt(P) * exp(+i S / hbar) ---

// eps_node < 0 selects the default 1e-12 * max(P). Throws if every point is a node.
MadelungState decompose(const WaveFunction& psi, double eps_node = -1.0);
WaveFunction recompose(const MadelungState& state);

// Shifts b by a multiple of 2*pi*hbar so it agrees with a at the maximum-P anchor
// point; used to compare S between snapshots of one evolution.
ScalarField align_phase(const ScalarField& a, const ScalarField& b, const ScalarField& P,
                        double hbar);

// --- mask utilities ---

Mask dilate(const Grid& g, const Mask& m, int radius);
Mask mask_from_density(const ScalarField& P, double eps_rel = 1e-12);

// --- interpolation (linear / bilinear); nullopt outside the grid or on a masked corner ---

std::optional<double> interp(const ScalarField& f, const std::array<double, 2>& x,
                             const Mask* mask = nullptr);
std::optional<std::array<double, 2>> interp(const VectorField& f, const std::array<double, 2>& x,
                                            const Mask* mask = nullptr);

}  // namespace qc
