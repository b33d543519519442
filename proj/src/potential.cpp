#include "qc/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qc {

void SlitGeometry::validate(const Grid& g) const {
    if (g.dim() != 2) throw std::invalid_argument("slits require 2D grid");
    if (slit_centers.empty() || slit_centers.size() > 2)
        throw std::invalid_argument("slit geometry needs 1 or 2 slit centers");
    if (barrier_height < 0.0) throw std::invalid_argument("barrier height must be >= 0");
    const double dy = g.axis(1).dx();
    if (!(slit_width > 2.0 * dy))
        throw std::invalid_argument("slit width must exceed 2*dx of the transverse axis");
    if (slit_centers.size() == 2) {
        const double gap = std::abs(slit_centers[1] - slit_centers[0]);
        if (gap <= slit_width) throw std::invalid_argument("slits overlap");
    }
}

Potential Potential::make_harmonic(double omega, std::array<double, 2> center) {
    Potential p;
    p.kind = Kind::harmonic;
    p.omega = omega;
    p.center = center;
    return p;
}

Potential Potential::make_slits(const SlitGeometry& geom) {
    Potential p;
    p.kind = Kind::barrier_mask;
    p.slits = geom;
    return p;
}

Potential Potential::make_custom(const ScalarField& V) {
    Potential p;
    p.kind = Kind::custom;
    p.custom = V;
    return p;
}

ScalarField Potential::evaluate(const Grid& grid, const PhysicsConstants& consts) const {
    ScalarField V(grid);
    switch (kind) {
        case Kind::free:
            break;
        case Kind::harmonic: {
            const int n0 = grid.axis(0).n, n1 = grid.dim() == 2 ? grid.axis(1).n : 1;
            for (int i = 0; i < n0; ++i)
                for (int j = 0; j < n1; ++j) {
                    double r2 = std::pow(grid.axis(0).coord(i) - center[0], 2);
                    if (grid.dim() == 2) r2 += std::pow(grid.axis(1).coord(j) - center[1], 2);
                    V.at(i, j) = 0.5 * consts.mass * omega * omega * r2;
                }
            break;
        }
        case Kind::barrier_mask: {
            slits.validate(grid);
            const int n0 = grid.axis(0).n, n1 = grid.axis(1).n;
            for (int i = 0; i < n0; ++i) {
                const double x = grid.axis(0).coord(i);
                if (std::abs(x - slits.barrier_x) > 0.5 * slits.thickness) continue;
                for (int j = 0; j < n1; ++j) {
                    const double y = grid.axis(1).coord(j);
                    bool open = false;
                    for (double c : slits.slit_centers)
                        if (std::abs(y - c) <= 0.5 * slits.slit_width) open = true;
                    if (!open) V.at(i, j) = slits.barrier_height;
                }
            }
            break;
        }
        case Kind::custom:
            if (!(custom.grid == grid))
                throw std::invalid_argument("custom potential defined on a different grid");
            V = custom;
            break;
    }
    return V;
}

void normalize_wavefunction(WaveFunction& psi) {
    const double n2 = norm_squared(psi);
    if (!(n2 > 0.0)) throw std::domain_error("cannot normalize a zero wavefunction");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& z : psi.v) z *= s;
}

WaveFunction gaussian_packet(const Grid& g, const PhysicsConstants& pc,
                             std::array<double, 2> x0, std::array<double, 2> sigma,
                             std::array<double, 2> k0) {
    WaveFunction psi(g, pc);
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const double x = g.axis(0).coord(i);
            double env = std::exp(-std::pow(x - x0[0], 2) / (4.0 * sigma[0] * sigma[0]));
            double phase = k0[0] * x;
            if (g.dim() == 2) {
                const double y = g.axis(1).coord(j);
                env *= std::exp(-std::pow(y - x0[1], 2) / (4.0 * sigma[1] * sigma[1]));
                phase += k0[1] * y;
            }
            psi.at(i, j) = env * std::polar(1.0, phase);
        }
    normalize_wavefunction(psi);
    return psi;
}

WaveFunction plane_wave(const Grid& g, const PhysicsConstants& pc, std::array<double, 2> k) {
    WaveFunction psi(g, pc);
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            double phase = k[0] * g.axis(0).coord(i);
            if (g.dim() == 2) phase += k[1] * g.axis(1).coord(j);
            psi.at(i, j) = std::polar(1.0, phase);
        }
    return psi;
}

WaveFunction harmonic_ground(const Grid& g, const PhysicsConstants& pc, double omega,
                             std::array<double, 2> center) {
    WaveFunction psi(g, pc);
    const double a = pc.mass * omega / (2.0 * pc.hbar);
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            double r2 = std::pow(g.axis(0).coord(i) - center[0], 2);
            if (g.dim() == 2) r2 += std::pow(g.axis(1).coord(j) - center[1], 2);
            psi.at(i, j) = std::exp(-a * r2);
        }
    normalize_wavefunction(psi);
    return psi;
}

WaveFunction box_eigenmode(const Grid& g, const PhysicsConstants& pc, int n) {
    WaveFunction psi(g, pc);
    const int n0 = g.axis(0).n, n1 = g.dim() == 2 ? g.axis(1).n : 1;
    for (int i = 0; i < n0; ++i) {
        const double u0 =
            (g.axis(0).coord(i) - g.axis(0).min) / (g.axis(0).max - g.axis(0).min);
        for (int j = 0; j < n1; ++j) {
            double val = std::sin(n * std::numbers::pi * u0);
            if (g.dim() == 2) {
                const double u1 =
                    (g.axis(1).coord(j) - g.axis(1).min) / (g.axis(1).max - g.axis(1).min);
                val *= std::sin(n * std::numbers::pi * u1);
            }
            psi.at(i, j) = val;
        }
    }
    normalize_wavefunction(psi);
    return psi;
}

}  // namespace qc
