#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "qc/hydro.hpp"
#include "qc/runner.hpp"

namespace py = pybind11;
using namespace qc;

namespace {

py::array_t<double> field_to_array(const ScalarField& f) {
    const Grid& g = f.grid;
    if (g.dim() == 1) {
        py::array_t<double> out(g.axis(0).n);
        std::copy(f.v.begin(), f.v.end(), out.mutable_data());
        return out;
    }
    py::array_t<double> out({g.axis(0).n, g.axis(1).n});
    std::copy(f.v.begin(), f.v.end(), out.mutable_data());
    return out;
}

py::dict grid_dict(const Grid& g) {
    py::dict d;
    d["dim"] = g.dim();
    py::list axes;
    for (int a = 0; a < g.dim(); ++a) {
        py::dict ax;
        ax["n"] = g.axis(a).n;
        ax["min"] = g.axis(a).min;
        ax["max"] = g.axis(a).max;
        axes.append(ax);
    }
    d["axes"] = axes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qc, m) {
    m.doc() = "Quantum hydrodynamics simulator core";
    m.attr("__version__") = kVersion;

    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

    m.def("builtin_doubleslit_ini", &builtin_doubleslit_ini,
          "Configuration text of the built-in double-slit scenario.");

    m.def(
        "check_scenario",
        [](const std::string& text) {
            Scenario sc = parse_scenario(text);
            py::dict d;
            d["grid"] = grid_dict(sc.make_grid());
            d["dt"] = sc.time.dt;
            d["n_steps"] = sc.time.n_steps;
            d["n_particles"] = sc.traj.n_particles;
            d["has_slits"] = sc.slits.present;
            return d;
        },
        py::arg("text"), "Parses a scenario and returns a summary dict; raises on errors.");

    m.def(
        "simulate",
        [](const std::string& text, std::optional<std::uint64_t> seed) {
            Scenario sc = parse_scenario(text);
            SimOutput out;
            {
                py::gil_scoped_release release;
                out = simulate(sc, seed);
            }
            MadelungState st = decompose(out.psi_final);
            HydroFields h = compute_hydro(st);
            py::dict d;
            d["grid"] = grid_dict(out.grid);
            d["P"] = field_to_array(st.P);
            d["S"] = field_to_array(st.S);
            d["Q"] = field_to_array(h.Q);
            d["norm_drift"] = out.norm_drift();
            d["warnings"] = out.warnings;
            d["stalled_particles"] = out.stalled_particles;
            if (out.ensemble.n_particles > 0) {
                const int axis = out.grid.dim() == 2 ? 1 : 0;
                d["dots"] = dot_values(out.ensemble, axis);
            }
            return d;
        },
        py::arg("text"), py::arg("seed") = py::none(),
        "Runs a scenario in memory; returns final density, phase, quantum potential and dots.");

    m.def(
        "run_scenario",
        [](const std::string& text, const std::string& outdir,
           std::optional<std::uint64_t> seed, bool force_diagnostics) {
            Scenario sc = parse_scenario(text);
            RunOutcome rc;
            {
                py::gil_scoped_release release;
                rc = run_scenario(sc, text, outdir, seed, force_diagnostics, nullptr);
            }
            py::dict d;
            d["exit_code"] = rc.exit_code;
            d["manifest"] = rc.manifest.dump(2);
            return d;
        },
        py::arg("text"), py::arg("outdir"), py::arg("seed") = py::none(),
        py::arg("force_diagnostics") = false,
        "Runs a scenario and writes fields/, dots/, diagnostics/ and manifest.json.");
}
