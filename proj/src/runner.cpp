#include "qc/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "qc/hydro.hpp"
#include "qc/io.hpp"
#include "qc/propagator.hpp"

namespace qc {

namespace fs = std::filesystem;

double SimOutput::norm_drift() const {
    double worst = 0.0;
    for (double n : norm_history) worst = std::max(worst, std::abs(n - 1.0));
    return worst;
}

namespace {

// Node threshold used when deriving guidance velocity fields from snapshots.
constexpr double kTrajEpsRel = 1e-12;

struct VelocitySnapshot {
    double t = 0.0;
    VectorField v;
    Mask mask;
};

VelocitySnapshot velocity_snapshot(const WaveFunction& psi, double t) {
    VelocitySnapshot vs;
    vs.t = t;
    vs.v = guidance_field(psi, &vs.mask);
    return vs;
}

double boundary_density(const WaveFunction& psi) {
    const Grid& g = psi.grid;
    double worst = 0.0;
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (i <= 1 || i >= n0 - 2 || (g.dim() == 2 && (j <= 1 || j >= n1 - 2)))
                worst = std::max(worst, std::norm(psi.at(i, j)));
    return worst;
}

}  // namespace

SimOutput simulate(const Scenario& sc, std::optional<std::uint64_t> seed_override,
                   const SnapshotCallback& extra_snapshot_hook) {
    SimOutput out;
    out.grid = sc.make_grid();
    out.V = sc.make_potential_field();
    out.psi_initial = sc.make_initial_state();

    const std::uint64_t seed = seed_override.value_or(sc.traj.seed);
    const bool with_traj = sc.traj.n_particles > 0;
    if (with_traj) {
        ScalarField P0(out.grid);
        for (std::size_t k = 0; k < P0.v.size(); ++k) P0.v[k] = std::norm(out.psi_initial.v[k]);
        out.ensemble = make_ensemble(normalize(P0), sc.traj.n_particles, seed);
    }

    EvolveOptions opt;
    opt.dt = sc.time.dt;
    opt.n_steps = sc.time.n_steps;
    opt.snapshot_stride = sc.time.snapshot_stride;
    opt.keep_snapshots = false;

    ScreenSpec screen;
    screen.enabled = sc.traj.screen;
    screen.x = sc.traj.screen_x;

    VelocitySnapshot vel_prev;
    bool have_prev = false;
    double max_boundary = 0.0;

    auto hook = [&](int step, double t, const WaveFunction& psi) {
        max_boundary = std::max(max_boundary, boundary_density(psi));
        if (with_traj) {
            VelocitySnapshot vel_now = velocity_snapshot(psi, t);
            if (have_prev)
                advance(out.ensemble, vel_prev.v, vel_prev.mask, vel_now.v, vel_now.mask,
                        vel_prev.t, t, screen);
            vel_prev = std::move(vel_now);
            have_prev = true;
        }
        if (out.last_two.size() == 2) out.last_two.erase(out.last_two.begin());
        out.last_two.emplace_back(t, psi);
        if (extra_snapshot_hook) extra_snapshot_hook(step, t, psi);
    };

    EvolutionResult res = evolve(out.psi_initial, out.V, opt, hook);
    out.psi_final = std::move(res.final_state);
    out.norm_history = std::move(res.norm_history);
    out.warnings = std::move(res.warnings);
    if (max_boundary > 1e-8)
        out.warnings.push_back("boundary density exceeded 1e-8; grid may be too small");
    for (auto s : out.ensemble.status)
        if (s == ParticleStatus::node_stalled) ++out.stalled_particles;
    return out;
}

std::vector<double> dot_values(const TrajectoryEnsemble& ens, int transverse_axis,
                               std::size_t first_n) {
    std::vector<double> vals;
    const std::size_t limit = first_n == 0 ? ens.pos.size() : std::min(first_n, ens.pos.size());
    for (std::size_t p = 0; p < limit; ++p) {
        if (ens.status[p] == ParticleStatus::active)
            vals.push_back(ens.pos[p][transverse_axis]);
        else if (ens.status[p] == ParticleStatus::exited_screen)
            vals.push_back(ens.screen_value[p]);
    }
    return vals;
}

DotPattern quantum_pattern(const SimOutput& out, const Scenario& sc, std::size_t first_n) {
    const int axis = out.grid.dim() == 2 ? 1 : 0;
    // With a screen, dots are what lands on it; particles that reflect off the
    // barrier and never cross contribute nothing.
    const auto vals = sc.traj.screen ? screen_hits(out.ensemble, first_n)
                                     : dot_values(out.ensemble, axis, first_n);
    const Axis& ax = out.grid.axis(axis);
    if (vals.empty()) {
        // No arrivals yet (small N on a screen run): an all-zero histogram,
        // not an error — the staged outputs must exist for every stage.
        DotPattern pat;
        pat.lo = ax.min;
        pat.hi = ax.max;
        pat.nbins = sc.traj.bins;
        pat.counts.assign(sc.traj.bins, 0);
        return pat;
    }
    return accumulate_dots(vals, ax.min, ax.max, sc.traj.bins);
}

DotPattern classical_pattern(const Scenario& sc, int n_per_slit,
                             std::optional<std::uint64_t> seed_override) {
    if (!sc.slits.present || sc.slits.centers.size() != 2)
        throw std::invalid_argument("classical_pattern needs a double-slit scenario");
    const std::uint64_t seed = seed_override.value_or(sc.traj.seed);
    DotPattern sum;
    for (int which = 0; which < 2; ++which) {
        Scenario single = sc;
        single.slits.centers = {sc.slits.centers[which]};
        single.traj.n_particles = n_per_slit;
        SimOutput out = simulate(single, seed + 1 + which);
        DotPattern pat = quantum_pattern(out, single);
        sum = which == 0 ? pat : add_patterns(sum, pat);
    }
    return sum;
}

DiagnosticsBundle run_diagnostics(const SimOutput& out, const Scenario& sc) {
    DiagnosticsBundle d;
    if (out.last_two.size() < 2)
        throw std::runtime_error("diagnostics need at least two snapshots (n_steps >= 1)");
    const auto& [ta, psia] = out.last_two[0];
    const auto& [tb, psib] = out.last_two[1];
    const double dt = tb - ta;
    // Diagnostics use a stricter node cut than the solver so the residual is
    // not dominated by near-zero-density tails.
    double pmax = 0.0;
    for (const auto& z : psia.v) pmax = std::max(pmax, std::norm(z));
    const MadelungState a = decompose(psia, 1e-6 * pmax);
    const MadelungState b = decompose(psib, 1e-6 * pmax);

    d.continuity = continuity_residual(a, b, dt, 1e-2);
    d.hjb = hjb_residual(a, b, out.V, dt, 5e-2);
    const double omega = energy_expectation(out.psi_final, out.V) / sc.consts.hbar;
    d.zero_point = zero_point_identity(a, b, dt, omega, 2e-1);
    d.orthogonality = orthogonality_index(decompose(out.psi_final));
    d.all_pass = d.continuity.pass && d.hjb.pass && d.zero_point.residual.pass;
    return d;
}

namespace {

nlohmann::json file_entry(const fs::path& outdir, const fs::path& p) {
    return {{"path", fs::relative(p, outdir).generic_string()},
            {"fnv1a", fnv1a_file(p)}};
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, const std::string& raw_text, const fs::path& outdir,
                        std::optional<std::uint64_t> seed_override, bool force_diagnostics,
                        std::ostream* table) {
    const auto t_start = std::chrono::steady_clock::now();
    fs::create_directories(outdir);
    std::vector<fs::path> emitted;

    const bool want_fields = sc.output.fields != OutputSpec::FieldMode::none;
    const bool want_diag = sc.output.diagnostics || force_diagnostics;
    if (want_fields) fs::create_directories(outdir / "fields");
    if (sc.output.dots) fs::create_directories(outdir / "dots");
    if (want_diag) fs::create_directories(outdir / "diagnostics");

    int field_index = 0;
    auto write_fields = [&](const WaveFunction& psi) {
        MadelungState st = decompose(psi);
        const std::string tag = "t" + std::to_string(field_index);
        const fs::path pp = outdir / "fields" / (tag + "_P.csv");
        const fs::path ps = outdir / "fields" / (tag + "_S.csv");
        write_scalar_csv(st.P, pp);
        write_scalar_csv(st.S, ps);
        emitted.push_back(pp);
        emitted.push_back(ps);
        ++field_index;
    };

    SnapshotCallback field_hook = nullptr;
    if (sc.output.fields == OutputSpec::FieldMode::all)
        field_hook = [&](int, double, const WaveFunction& psi) { write_fields(psi); };

    SimOutput out = simulate(sc, seed_override, field_hook);

    if (sc.output.fields == OutputSpec::FieldMode::final) {
        write_fields(out.psi_initial);
        write_fields(out.psi_final);
        // Derived hydrodynamic fields of the final state.
        MadelungState st = decompose(out.psi_final);
        HydroFields h = compute_hydro(st);
        const fs::path pq = outdir / "fields" / "final_Q.csv";
        const fs::path pv = outdir / "fields" / "final_v.csv";
        const fs::path pk = outdir / "fields" / "final_ku_mag.csv";
        write_scalar_csv(h.Q, pq);
        write_vector_csv(h.v, pv);
        write_scalar_csv(h.dp_mag, pk);
        emitted.insert(emitted.end(), {pq, pv, pk});
    }

    if (sc.output.dots) {
        std::vector<long long> stages = sc.output.staged_dots;
        stages.push_back(sc.traj.n_particles);
        for (long long n : stages) {
            const DotPattern pat = quantum_pattern(out, sc, static_cast<std::size_t>(n));
            const fs::path pc = outdir / "dots" / ("N" + std::to_string(n) + ".csv");
            const fs::path pg = outdir / "dots" / ("N" + std::to_string(n) + ".pgm");
            write_dots_csv(pat, pc);
            write_dots_pgm(pat, pg);
            emitted.push_back(pc);
            emitted.push_back(pg);
        }
    }

    bool diag_ok = true;
    nlohmann::json diag_json;
    if (want_diag) {
        const DiagnosticsBundle d = run_diagnostics(out, sc);
        diag_ok = d.all_pass;
        auto emit = [&](const std::string& name, const std::string& body) {
            const fs::path p = outdir / "diagnostics" / (name + ".json");
            std::ofstream(p) << body << '\n';
            emitted.push_back(p);
        };
        emit("continuity", report_to_json(d.continuity));
        emit("hamilton_jacobi_bohm", report_to_json(d.hjb));
        emit("zero_point", nlohmann::json{{"name", d.zero_point.residual.name},
                                          {"l_inf", d.zero_point.residual.l_inf},
                                          {"l2", d.zero_point.residual.l2},
                                          {"threshold", d.zero_point.residual.threshold},
                                          {"pass", d.zero_point.residual.pass},
                                          {"e0_estimate", d.zero_point.e0_estimate},
                                          {"e0_reference", d.zero_point.e0_reference},
                                          {"omega_heuristic", d.zero_point.omega}}
                               .dump(2));
        emit("orthogonality", nlohmann::json{{"name", "orthogonality_index"},
                                             {"value", d.orthogonality}}
                                  .dump(2));
        if (table) {
            auto row = [&](const std::string& n, double linf, double l2, bool pass) {
                (*table) << n << "  l_inf=" << format_g17(linf) << "  l2=" << format_g17(l2)
                         << "  " << (pass ? "PASS" : "FAIL") << '\n';
            };
            row("continuity          ", d.continuity.l_inf, d.continuity.l2, d.continuity.pass);
            row("hamilton_jacobi_bohm", d.hjb.l_inf, d.hjb.l2, d.hjb.pass);
            row("zero_point_identity ", d.zero_point.residual.l_inf, d.zero_point.residual.l2,
                d.zero_point.residual.pass);
            (*table) << "orthogonality_index   I=" << format_g17(d.orthogonality) << '\n'
                     << "zero_point energy     E0_est=" << format_g17(d.zero_point.e0_estimate)
                     << "  d*hbar*omega/2=" << format_g17(d.zero_point.e0_reference)
                     << "  (omega = <E>/hbar, heuristic)" << '\n';
        }
        diag_json = {{"continuity_pass", d.continuity.pass},
                     {"hjb_pass", d.hjb.pass},
                     {"zero_point_pass", d.zero_point.residual.pass},
                     {"orthogonality_index", d.orthogonality}};
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["scenario"] = raw_text;
    manifest["seed"] = seed_override.value_or(sc.traj.seed);
    manifest["wall_time_s"] = wall;
    manifest["norm_drift"] = out.norm_drift();
    manifest["warnings"] = out.warnings;
    manifest["stalled_particles"] = out.stalled_particles;
    if (want_diag) manifest["diagnostics"] = diag_json;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& p : emitted) files.push_back(file_entry(outdir, p));
    manifest["files"] = files;
    std::ofstream(outdir / "manifest.json") << manifest.dump(2) << '\n';

    RunOutcome rc;
    rc.manifest = manifest;
    rc.exit_code = diag_ok ? 0 : 2;
    return rc;
}

const char* builtin_doubleslit_ini() {
    return R"INI(# Double-slit dot-accumulation scenario.
[grid]
dim = 2
n_x = 512
x_min = -14
x_max = 26
n_y = 512
y_min = -20
y_max = 20

[time]
dt = 5e-4
n_steps = 9000
snapshot_stride = 10

[physics]
hbar = 1
mass = 1

[initial]
type = gaussian
x0 = -7
y0 = 0
sigma_x = 1.5
sigma_y = 3.5
kx = 6

[slits]
barrier_x = 0
thickness = 0.3
centers = -3, 3
width = 1.0
height = 18000

[trajectories]
n_particles = 100000
seed = 20230817
screen_x = 12
bins = 256

[output]
dots = true
staged_dots = 8, 100, 3000
)INI";
}

}  // namespace qc
