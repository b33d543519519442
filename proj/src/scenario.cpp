#include "qc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace qc {

namespace {

struct Entry {
    std::string value;
    int line;
    bool consumed = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

class IniReader {
public:
    explicit IniReader(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        std::string section;
        int section_line = 0;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ScenarioError(lineno, "", "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                section_line = lineno;
                if (sections_.count(section))
                    throw ScenarioError(lineno, section, "duplicate section");
                sections_[section] = {};
                section_lines_[section] = section_line;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ScenarioError(lineno, "", "expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (section.empty()) throw ScenarioError(lineno, key, "key outside any section");
            if (key.empty()) throw ScenarioError(lineno, "", "empty key");
            auto& sec = sections_[section];
            if (sec.count(key)) throw ScenarioError(lineno, key, "duplicate key");
            sec[key] = {val, lineno};
        }
    }

    bool has_section(const std::string& name) const { return sections_.count(name) > 0; }

    Section* section(const std::string& name) {
        auto it = sections_.find(name);
        return it == sections_.end() ? nullptr : &it->second;
    }

    void finish() const {
        static const char* known[] = {"grid",   "time",  "physics",      "initial",
                                      "potential", "slits", "trajectories", "output"};
        for (const auto& [name, sec] : sections_) {
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) { return name == k; }) == std::end(known))
                throw ScenarioError(section_lines_.at(name), name, "unknown section");
            for (const auto& [key, e] : sec)
                if (!e.consumed) throw ScenarioError(e.line, key, "unknown key");
        }
    }

private:
    std::map<std::string, Section> sections_;
    std::map<std::string, int> section_lines_;
};

const Entry* take(Section* sec, const std::string& key) {
    if (!sec) return nullptr;
    auto it = sec->find(key);
    if (it == sec->end()) return nullptr;
    it->second.consumed = true;
    return &it->second;
}

double parse_double(const Entry& e, const std::string& key) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(e.value, &pos);
    } catch (...) {
        throw ScenarioError(e.line, key, "not a number: '" + e.value + "'");
    }
    if (pos != e.value.size()) throw ScenarioError(e.line, key, "trailing junk: '" + e.value + "'");
    return v;
}

long long parse_int(const Entry& e, const std::string& key) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(e.value, &pos);
    } catch (...) {
        throw ScenarioError(e.line, key, "not an integer: '" + e.value + "'");
    }
    if (pos != e.value.size()) throw ScenarioError(e.line, key, "trailing junk: '" + e.value + "'");
    return v;
}

bool parse_bool(const Entry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ScenarioError(e.line, key, "expected true/false");
}

std::vector<double> parse_double_list(const Entry& e, const std::string& key) {
    std::vector<double> out;
    std::istringstream is(e.value);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) throw ScenarioError(e.line, key, "empty list element");
        Entry sub{tok, e.line};
        out.push_back(parse_double(sub, key));
    }
    if (out.empty()) throw ScenarioError(e.line, key, "empty list");
    return out;
}

double need_double(Section* sec, const std::string& key, int section_fallback_line,
                   const std::string& section_name) {
    const Entry* e = take(sec, key);
    if (!e)
        throw ScenarioError(section_fallback_line, key,
                            "missing required key in [" + section_name + "]");
    return parse_double(*e, key);
}

}  // namespace

std::string scenario_kind_name(InitialSpec::Kind k) {
    switch (k) {
        case InitialSpec::Kind::gaussian: return "gaussian";
        case InitialSpec::Kind::plane_wave: return "plane_wave";
        case InitialSpec::Kind::harmonic_ground: return "harmonic_ground";
        case InitialSpec::Kind::eigenmode: return "eigenmode";
    }
    return "?";
}

Scenario parse_scenario(const std::string& text) {
    IniReader ini(text);
    Scenario sc;

    // [grid]
    {
        Section* sec = ini.section("grid");
        if (!sec) throw ScenarioError(0, "grid", "missing [grid] section");
        const Entry* dim = take(sec, "dim");
        sc.grid.dim = dim ? static_cast<int>(parse_int(*dim, "dim")) : 1;
        if (sc.grid.dim != 1 && sc.grid.dim != 2)
            throw ScenarioError(dim ? dim->line : 0, "dim", "dim must be 1 or 2");
        const Entry* nx = take(sec, "n_x");
        if (!nx) throw ScenarioError(0, "n_x", "missing required key in [grid]");
        sc.grid.n_x = static_cast<int>(parse_int(*nx, "n_x"));
        sc.grid.x_min = need_double(sec, "x_min", 0, "grid");
        sc.grid.x_max = need_double(sec, "x_max", 0, "grid");
        if (sc.grid.n_x < 8) throw ScenarioError(nx->line, "n_x", "need at least 8 points per axis");
        if (!(sc.grid.x_max > sc.grid.x_min))
            throw ScenarioError(nx->line, "x_max", "x_max must exceed x_min");
        if (sc.grid.dim == 2) {
            const Entry* ny = take(sec, "n_y");
            if (!ny) throw ScenarioError(0, "n_y", "missing required key in [grid]");
            sc.grid.n_y = static_cast<int>(parse_int(*ny, "n_y"));
            sc.grid.y_min = need_double(sec, "y_min", 0, "grid");
            sc.grid.y_max = need_double(sec, "y_max", 0, "grid");
            if (sc.grid.n_y < 8)
                throw ScenarioError(ny->line, "n_y", "need at least 8 points per axis");
            if (!(sc.grid.y_max > sc.grid.y_min))
                throw ScenarioError(ny->line, "y_max", "y_max must exceed y_min");
        }
    }

    // [time]
    {
        Section* sec = ini.section("time");
        if (!sec) throw ScenarioError(0, "time", "missing [time] section");
        const Entry* dt = take(sec, "dt");
        if (!dt) throw ScenarioError(0, "dt", "missing required key in [time]");
        sc.time.dt = parse_double(*dt, "dt");
        if (!(sc.time.dt > 0.0)) throw ScenarioError(dt->line, "dt", "dt must be positive");
        const Entry* ns = take(sec, "n_steps");
        if (!ns) throw ScenarioError(0, "n_steps", "missing required key in [time]");
        sc.time.n_steps = static_cast<int>(parse_int(*ns, "n_steps"));
        if (sc.time.n_steps < 0) throw ScenarioError(ns->line, "n_steps", "n_steps must be >= 0");
        if (const Entry* st = take(sec, "snapshot_stride")) {
            sc.time.snapshot_stride = static_cast<int>(parse_int(*st, "snapshot_stride"));
            if (sc.time.snapshot_stride < 1)
                throw ScenarioError(st->line, "snapshot_stride", "stride must be >= 1");
        }
    }

    // [physics] — optional, defaults hbar = m = c = 1
    if (Section* sec = ini.section("physics")) {
        if (const Entry* e = take(sec, "hbar")) sc.consts.hbar = parse_double(*e, "hbar");
        if (const Entry* e = take(sec, "mass")) sc.consts.mass = parse_double(*e, "mass");
        if (const Entry* e = take(sec, "c")) sc.consts.c = parse_double(*e, "c");
        try {
            sc.consts.validate();
        } catch (const std::exception& ex) {
            throw ScenarioError(0, "physics", ex.what());
        }
    }

    // [initial]
    {
        Section* sec = ini.section("initial");
        if (!sec) throw ScenarioError(0, "initial", "missing [initial] section");
        const Entry* type = take(sec, "type");
        if (!type) throw ScenarioError(0, "type", "missing required key in [initial]");
        if (type->value == "gaussian") sc.initial.kind = InitialSpec::Kind::gaussian;
        else if (type->value == "plane_wave") sc.initial.kind = InitialSpec::Kind::plane_wave;
        else if (type->value == "harmonic_ground")
            sc.initial.kind = InitialSpec::Kind::harmonic_ground;
        else if (type->value == "eigenmode") sc.initial.kind = InitialSpec::Kind::eigenmode;
        else throw ScenarioError(type->line, "type", "unknown initial state '" + type->value + "'");

        if (const Entry* e = take(sec, "x0")) sc.initial.x0 = parse_double(*e, "x0");
        if (const Entry* e = take(sec, "y0")) sc.initial.y0 = parse_double(*e, "y0");
        if (const Entry* e = take(sec, "sigma_x")) {
            sc.initial.sigma_x = parse_double(*e, "sigma_x");
            if (!(sc.initial.sigma_x > 0)) throw ScenarioError(e->line, "sigma_x", "sigma must be positive");
        }
        sc.initial.sigma_y = sc.initial.sigma_x;
        if (const Entry* e = take(sec, "sigma_y")) {
            sc.initial.sigma_y = parse_double(*e, "sigma_y");
            if (!(sc.initial.sigma_y > 0)) throw ScenarioError(e->line, "sigma_y", "sigma must be positive");
        }
        if (const Entry* e = take(sec, "kx")) sc.initial.kx = parse_double(*e, "kx");
        if (const Entry* e = take(sec, "ky")) sc.initial.ky = parse_double(*e, "ky");
        if (const Entry* e = take(sec, "omega")) {
            sc.initial.omega = parse_double(*e, "omega");
            if (!(sc.initial.omega > 0)) throw ScenarioError(e->line, "omega", "omega must be positive");
        }
        if (const Entry* e = take(sec, "n")) {
            sc.initial.mode_n = static_cast<int>(parse_int(*e, "n"));
            if (sc.initial.mode_n < 1) throw ScenarioError(e->line, "n", "mode index must be >= 1");
        }
    }

    // [potential] — optional, default free
    if (Section* sec = ini.section("potential")) {
        const Entry* type = take(sec, "type");
        if (!type) throw ScenarioError(0, "type", "missing required key in [potential]");
        if (type->value == "free") sc.potential.kind = PotentialSpec::Kind::free;
        else if (type->value == "harmonic") sc.potential.kind = PotentialSpec::Kind::harmonic;
        else throw ScenarioError(type->line, "type", "unknown potential '" + type->value + "'");
        if (const Entry* e = take(sec, "omega")) {
            sc.potential.omega = parse_double(*e, "omega");
            if (!(sc.potential.omega > 0)) throw ScenarioError(e->line, "omega", "omega must be positive");
        }
        if (const Entry* e = take(sec, "x0")) sc.potential.x0 = parse_double(*e, "x0");
        if (const Entry* e = take(sec, "y0")) sc.potential.y0 = parse_double(*e, "y0");
    }

    // [slits] — optional
    if (Section* sec = ini.section("slits")) {
        sc.slits.present = true;
        int first_line = 0;
        const Entry* bx = take(sec, "barrier_x");
        if (!bx) throw ScenarioError(0, "barrier_x", "missing required key in [slits]");
        first_line = bx->line;
        if (sc.grid.dim != 2) throw ScenarioError(first_line, "slits", "slits require 2D grid");
        sc.slits.barrier_x = parse_double(*bx, "barrier_x");
        sc.slits.thickness = need_double(sec, "thickness", first_line, "slits");
        sc.slits.width = need_double(sec, "width", first_line, "slits");
        sc.slits.height = need_double(sec, "height", first_line, "slits");
        const Entry* centers = take(sec, "centers");
        if (!centers) throw ScenarioError(first_line, "centers", "missing required key in [slits]");
        sc.slits.centers = parse_double_list(*centers, "centers");
        if (sc.slits.centers.size() > 2)
            throw ScenarioError(centers->line, "centers", "at most 2 slits supported");
        if (sc.slits.barrier_x <= sc.grid.x_min || sc.slits.barrier_x >= sc.grid.x_max)
            throw ScenarioError(bx->line, "barrier_x", "barrier must lie inside the grid");
    }

    // [trajectories] — optional
    if (Section* sec = ini.section("trajectories")) {
        const Entry* np = take(sec, "n_particles");
        if (!np) throw ScenarioError(0, "n_particles", "missing required key in [trajectories]");
        sc.traj.n_particles = static_cast<int>(parse_int(*np, "n_particles"));
        if (sc.traj.n_particles < 1)
            throw ScenarioError(np->line, "n_particles", "n_particles must be >= 1");
        if (const Entry* e = take(sec, "seed"))
            sc.traj.seed = static_cast<std::uint64_t>(parse_int(*e, "seed"));
        if (const Entry* e = take(sec, "screen_x")) {
            sc.traj.screen = true;
            sc.traj.screen_x = parse_double(*e, "screen_x");
            if (sc.grid.dim != 2)
                throw ScenarioError(e->line, "screen_x", "screen requires 2D grid");
            if (sc.traj.screen_x <= sc.grid.x_min || sc.traj.screen_x >= sc.grid.x_max)
                throw ScenarioError(e->line, "screen_x", "screen must lie inside the grid");
        }
        if (const Entry* e = take(sec, "bins")) {
            sc.traj.bins = static_cast<int>(parse_int(*e, "bins"));
            if (sc.traj.bins < 1) throw ScenarioError(e->line, "bins", "bins must be >= 1");
        }
    }

    // [output] — optional
    if (Section* sec = ini.section("output")) {
        if (const Entry* e = take(sec, "fields")) {
            if (e->value == "none") sc.output.fields = OutputSpec::FieldMode::none;
            else if (e->value == "final") sc.output.fields = OutputSpec::FieldMode::final;
            else if (e->value == "all") sc.output.fields = OutputSpec::FieldMode::all;
            else throw ScenarioError(e->line, "fields", "expected none/final/all");
        }
        if (const Entry* e = take(sec, "dots")) sc.output.dots = parse_bool(*e, "dots");
        if (const Entry* e = take(sec, "diagnostics"))
            sc.output.diagnostics = parse_bool(*e, "diagnostics");
        if (const Entry* e = take(sec, "staged_dots")) {
            for (double d : parse_double_list(*e, "staged_dots")) {
                if (d < 1 || d != std::floor(d))
                    throw ScenarioError(e->line, "staged_dots", "expected positive integers");
                sc.output.staged_dots.push_back(static_cast<long long>(d));
            }
        }
    }

    ini.finish();

    // Cross-section consistency.
    if (sc.slits.present) {
        const Grid g = sc.make_grid();
        try {
            SlitGeometry geom{sc.slits.barrier_x, sc.slits.thickness, sc.slits.centers,
                              sc.slits.width, sc.slits.height};
            geom.validate(g);
        } catch (const std::exception& ex) {
            throw ScenarioError(0, "slits", ex.what());
        }
    }
    if (sc.output.dots && sc.traj.n_particles == 0)
        throw ScenarioError(0, "output", "dots output requires [trajectories]");
    for (long long n : sc.output.staged_dots)
        if (n > sc.traj.n_particles)
            throw ScenarioError(0, "staged_dots", "staged count exceeds n_particles");

    return sc;
}

Grid Scenario::make_grid() const {
    return grid.dim == 1
               ? Grid::make_1d(grid.n_x, grid.x_min, grid.x_max)
               : Grid::make_2d(grid.n_x, grid.x_min, grid.x_max, grid.n_y, grid.y_min,
                               grid.y_max);
}

ScalarField Scenario::make_potential_field() const {
    const Grid g = make_grid();
    ScalarField V(g);
    if (potential.kind == PotentialSpec::Kind::harmonic) {
        V = Potential::make_harmonic(potential.omega, {potential.x0, potential.y0})
                .evaluate(g, consts);
    }
    if (slits.present) {
        SlitGeometry geom{slits.barrier_x, slits.thickness, slits.centers, slits.width,
                          slits.height};
        const ScalarField B = Potential::make_slits(geom).evaluate(g, consts);
        for (std::size_t k = 0; k < V.v.size(); ++k) V.v[k] += B.v[k];
    }
    return V;
}

WaveFunction Scenario::make_initial_state() const {
    const Grid g = make_grid();
    switch (initial.kind) {
        case InitialSpec::Kind::gaussian:
            return gaussian_packet(g, consts, {initial.x0, initial.y0},
                                   {initial.sigma_x, initial.sigma_y},
                                   {initial.kx, initial.ky});
        case InitialSpec::Kind::plane_wave:
            return plane_wave(g, consts, {initial.kx, initial.ky});
        case InitialSpec::Kind::harmonic_ground:
            return harmonic_ground(g, consts, initial.omega, {initial.x0, initial.y0});
        case InitialSpec::Kind::eigenmode:
            return box_eigenmode(g, consts, initial.mode_n);
    }
    throw std::logic_error("unreachable");
}

}  // namespace qc
