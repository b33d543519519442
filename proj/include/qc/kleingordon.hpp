#pragma once

#include "qc/diagnostics.hpp"
#include "qc/field.hpp"

namespace qc {

// Leapfrog state for (box + m^2 c^2 / hbar^2) Psi = 0 on a 1D grid with
// Dirichlet ends. Holds two consecutive time levels; construction enforces
// the CFL bound c dt / dx <= 0.9.
struct KGState {
    WaveFunction prev;  // Psi(t - dt)
    WaveFunction curr;  // Psi(t)
    double dt = 0.0;
    double t = 0.0;

    KGState(WaveFunction at_minus_dt, WaveFunction at_zero, double dt_);
};

// One explicit leapfrog step: Psi(t+dt) = 2 Psi(t) - Psi(t-dt)
//   + (c dt)^2 [lap Psi - (m c / hbar)^2 Psi].
KGState step_kg(const KGState& state);

// Discrete energy functional exactly conserved by the leapfrog scheme
// (half-level kinetic + averaged gradient and mass terms).
double kg_energy(const KGState& state);

// Phase advance per step at the max-|Psi| point; positive for exp(-i omega t).
double measure_omega(const WaveFunction& curr, const WaveFunction& next, double dt);

struct KGCurrentReport {
    DiagnosticReport current;        // (1/c^2) d_t (P d_t S) - div(P grad S)
    DiagnosticReport orthogonality;  // d_mu p^mu + (d_mu P / P) p^mu
};

// Conserved-current and energy-momentum residuals from three consecutive
// levels Psi(t-dt), Psi(t), Psi(t+dt). Metric signature (+,-).
KGCurrentReport kg_current_residual(const WaveFunction& prev, const WaveFunction& curr,
                                    const WaveFunction& next, double dt, double threshold);

}  // namespace qc
