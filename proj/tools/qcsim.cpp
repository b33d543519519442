#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qc/runner.hpp"
#include "qc/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_config(const std::string& config, const std::string& out,
               std::optional<std::uint64_t> seed, bool force_diagnostics) {
    const std::string text = read_file(config);
    const qc::Scenario sc = qc::parse_scenario(text);
    const qc::RunOutcome rc =
        qc::run_scenario(sc, text, out, seed, force_diagnostics, &std::cout);
    return rc.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum hydrodynamics simulator"};
    app.require_subcommand(1);

    std::string config, out;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("--config", config, "scenario INI file")->required();
    run->add_option("--out", out, "output directory")->required();
    run->add_option("--seed", seed, "override the trajectory seed");

    auto* diag = app.add_subcommand("diagnose", "execute a scenario and emit diagnostics");
    diag->add_option("--config", config, "scenario INI file")->required();
    diag->add_option("--out", out, "output directory")->required();

    std::vector<long long> dots;
    std::uint64_t ds_seed = 20230817ull;
    auto* ds = app.add_subcommand("doubleslit", "built-in double-slit dot accumulation");
    ds->add_option("--dots", dots, "dot counts, e.g. 8,100,3000")
        ->required()
        ->delimiter(',');
    ds->add_option("--seed", ds_seed, "trajectory seed");
    ds->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return run_config(config, out, seed, false);
        if (diag->parsed()) return run_config(config, out, {}, true);

        // doubleslit: built-in scenario with the staged counts swapped in.
        std::string text = qc::builtin_doubleslit_ini();
        qc::Scenario sc = qc::parse_scenario(text);
        std::sort(dots.begin(), dots.end());
        long long total = dots.back();
        for (long long d : dots)
            if (d < 1) throw std::runtime_error("dot counts must be positive");
        sc.output.staged_dots.assign(dots.begin(), dots.end() - 1);
        sc.traj.n_particles = static_cast<int>(total);
        sc.output.dots = true;
        const qc::RunOutcome rc =
            qc::run_scenario(sc, text, out, ds_seed, false, &std::cout);
        return rc.exit_code;
    } catch (const qc::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
