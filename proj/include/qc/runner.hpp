#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "nlohmann/json.hpp"
#include "qc/diagnostics.hpp"
#include "qc/propagator.hpp"
#include "qc/scenario.hpp"
#include "qc/trajectories.hpp"

namespace qc {

inline constexpr const char* kVersion = "0.1.0";

// Full in-memory result of one scenario execution (no file output).
struct SimOutput {
    Grid grid;
    ScalarField V;
    WaveFunction psi_initial;
    WaveFunction psi_final;
    // Last two stored snapshots (time, psi), one snapshot stride apart.
    std::vector<std::pair<double, WaveFunction>> last_two;
    TrajectoryEnsemble ensemble;  // empty when no [trajectories]
    std::vector<double> norm_history;
    std::vector<std::string> warnings;
    long long stalled_particles = 0;

    double norm_drift() const;
};

SimOutput simulate(const Scenario& sc, std::optional<std::uint64_t> seed_override = {},
                   const SnapshotCallback& extra_snapshot_hook = nullptr);

// Dot values per the accumulation contract: active particles contribute their
// final transverse position, exited_screen particles their crossing position.
std::vector<double> dot_values(const TrajectoryEnsemble& ens, int transverse_axis,
                               std::size_t first_n = 0);

struct DiagnosticsBundle {
    DiagnosticReport continuity;
    DiagnosticReport hjb;
    ZeroPointReport zero_point;
    double orthogonality = 0.0;
    bool all_pass = false;
};

DiagnosticsBundle run_diagnostics(const SimOutput& out, const Scenario& sc);

struct RunOutcome {
    nlohmann::json manifest;
    int exit_code = 0;  // 0 ok, 2 diagnostic failure (1 = validation, raised earlier)
};

// Executes the scenario and writes fields/, dots/, diagnostics/ and
// manifest.json under outdir.
RunOutcome run_scenario(const Scenario& sc, const std::string& raw_text,
                        const std::filesystem::path& outdir,
                        std::optional<std::uint64_t> seed_override = {},
                        bool force_diagnostics = false, std::ostream* table = nullptr);

// Incoherent single-slit sum: evolves the scenario with only slit A open,
// then only slit B, and adds the two dot patterns bin-wise.
DotPattern classical_pattern(const Scenario& sc, int n_per_slit,
                             std::optional<std::uint64_t> seed_override = {});

// Quantum dot pattern of a (possibly staged) particle subset.
DotPattern quantum_pattern(const SimOutput& out, const Scenario& sc, std::size_t first_n = 0);

const char* builtin_doubleslit_ini();

}  // namespace qc
