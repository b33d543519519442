#pragma once

#include <string>

#include "qc/field.hpp"
#include "qc/hydro.hpp"

namespace qc {

// Residual norms taken over interior, off-mask points.
struct DiagnosticReport {
    std::string name;
    double l_inf = 0.0;
    double l2 = 0.0;       // quadrature L2 norm
    double threshold = 0.0;
    bool pass = false;

    void finish() { pass = l_inf < threshold; }
};

std::string report_to_json(const DiagnosticReport& r);

// Residual of dP/dt + div(P grad S / m), evaluated at the midpoint of two
// consecutive snapshots (second order in both dx and dt).
DiagnosticReport continuity_residual(const MadelungState& at_t, const MadelungState& at_t_dt,
                                     double dt, double threshold);

// Residual of dS/dt + (grad S)^2/2m + V + Q at the snapshot midpoint.
DiagnosticReport hjb_residual(const MadelungState& at_t, const MadelungState& at_t_dt,
                              const ScalarField& V, double dt, double threshold);

// I = int P |k_u . v| / int P |k_u||v|, in [0,1]; 0 when the denominator
// integral is below 1e-12 (no fluctuation field or no flow).
double orthogonality_index(const MadelungState& state);

struct ZeroPointReport {
    DiagnosticReport residual;   // k_u.v + (1/2) div v + (1/2P) dP/dt
    double e0_estimate = 0.0;    // -hbar <k_u . v>_P
    double e0_reference = 0.0;   // (d/2) hbar omega
    double omega = 0.0;          // heuristic extraction <E>/hbar supplied by the caller
};

ZeroPointReport zero_point_identity(const MadelungState& at_t, const MadelungState& at_t_dt,
                                    double dt, double omega, double threshold);

// M^2 c^2 = m^2 c^2 + hbar^2 (box sqrt P)/sqrt P from three time levels of P.
ScalarField variable_mass_field(const ScalarField& P_prev, const ScalarField& P_now,
                                const ScalarField& P_next, double dt,
                                const PhysicsConstants& consts, const Mask* node_mask = nullptr);

}  // namespace qc
