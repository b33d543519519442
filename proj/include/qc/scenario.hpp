#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qc/field.hpp"
#include "qc/potential.hpp"

namespace qc {

struct ScenarioError : std::runtime_error {
    ScenarioError(int line, std::string key, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) +
                                            (key.empty() ? "" : " (" + key + ")") + ": " + msg
                                      : msg),
          line(line),
          key(std::move(key)) {}
    int line;
    std::string key;
};

struct GridSpec {
    int dim = 1;
    int n_x = 0, n_y = 0;
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
};

struct TimeSpec {
    double dt = 0.0;
    int n_steps = 0;
    int snapshot_stride = 1;
};

struct InitialSpec {
    enum class Kind { gaussian, plane_wave, harmonic_ground, eigenmode };
    Kind kind = Kind::gaussian;
    double x0 = 0, y0 = 0;
    double sigma_x = 1.0, sigma_y = 1.0;
    double kx = 0, ky = 0;
    double omega = 1.0;  // harmonic_ground
    int mode_n = 1;      // eigenmode
};

struct PotentialSpec {
    enum class Kind { free, harmonic };
    Kind kind = Kind::free;
    double omega = 1.0;
    double x0 = 0, y0 = 0;
};

struct SlitSpec {
    bool present = false;
    double barrier_x = 0, thickness = 0.2, width = 0.5, height = 1e4;
    std::vector<double> centers;
};

struct TrajectorySpec {
    int n_particles = 0;
    std::uint64_t seed = 1;
    bool screen = false;
    double screen_x = 0.0;
    int bins = 200;
};

struct OutputSpec {
    enum class FieldMode { none, final, all };
    FieldMode fields = FieldMode::none;
    bool dots = false;
    bool diagnostics = false;
    std::vector<long long> staged_dots;
};

struct Scenario {
    GridSpec grid;
    TimeSpec time;
    PhysicsConstants consts;
    InitialSpec initial;
    PotentialSpec potential;
    SlitSpec slits;
    TrajectorySpec traj;
    OutputSpec output;

    Grid make_grid() const;
    ScalarField make_potential_field() const;
    WaveFunction make_initial_state() const;
};

// Parses the INI-style scenario text. Unknown sections or keys, malformed
// values, and inconsistent combinations raise ScenarioError with line/key.
Scenario parse_scenario(const std::string& text);

std::string scenario_kind_name(InitialSpec::Kind k);

}  // namespace qc
