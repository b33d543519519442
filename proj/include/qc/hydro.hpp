#pragma once

#include "qc/field.hpp"

namespace qc {

// Proportionality between |grad(dS)| and hbar|grad P / P|: |k_u| = ALPHA * |grad P / P|.
inline constexpr double ALPHA = 0.5;

// Derived hydrodynamic fields of one Madelung state. Off-mask values only;
// masked entries are left at zero and flagged in mask.
struct HydroFields {
    VectorField v;        // grad S / m
    VectorField k_u;      // grad P / (2 P)
    ScalarField dp_mag;   // hbar |k_u|
    ScalarField Q;        // quantum potential
    Mask mask;            // node mask dilated by the stencil radius
};

// v = grad S / m; masked points inherit the (dilated) node mask.
VectorField velocity_field(const MadelungState& state, Mask* out_mask = nullptr);

// Guidance velocity from the discrete probability current of the tridiagonal
// Laplacian, v_i = J_i / P_i with face current J = (hbar/m dx) Im(psi_i* psi_{i+1}).
// Agrees with grad S / m to O(dx^2) but transports density at exactly the
// lattice group velocity, so trajectory ensembles stay equivariant with the
// propagator on coarse grids. No phase unwrap involved.
VectorField guidance_field(const WaveFunction& psi, Mask* out_mask = nullptr,
                           double eps_node = -1.0);

// u = -(dS/dt)/|grad S| from two snapshots dt apart; masked where |grad S| < eps_grad.
ScalarField wavefront_speed(const MadelungState& at_t, const MadelungState& at_t_dt, double dt,
                            double eps_grad, Mask* out_mask = nullptr);

// k_u = grad P / (2P) = grad R / R.
VectorField ku_field(const ScalarField& P, const Mask* node_mask = nullptr);

// |dp| = hbar |k_u|.
ScalarField fluctuation_magnitude(const ScalarField& P, const PhysicsConstants& consts,
                                  const Mask* node_mask = nullptr);

// Q = (hbar^2/4m) [ (1/2)(grad P/P)^2 - lap P / P ].
ScalarField quantum_potential(const ScalarField& P, const PhysicsConstants& consts,
                              const Mask* node_mask = nullptr);

// Same quantity through the amplitude route: -(hbar^2/2m) lap(sqrt P)/sqrt P.
ScalarField quantum_potential_amplitude(const ScalarField& P, const PhysicsConstants& consts,
                                        const Mask* node_mask = nullptr);

// (rms dp)^2 = integral of P (hbar/2 |grad P / P|)^2.
double rms_fluctuation(const ScalarField& P, const PhysicsConstants& consts,
                       const Mask* node_mask = nullptr);

// Pointwise Lagrangian density P [ dS/dt + (grad S)^2/2m + (hbar^2/8m)(grad P/P)^2 + V ].
// The hbar^2 term can be toggled off to recover the classical integrand.
ScalarField action_integrand(const MadelungState& state, const ScalarField& S_dot,
                             const ScalarField& V, bool include_fluctuation_term = true);

HydroFields compute_hydro(const MadelungState& state);

}  // namespace qc
