#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qc {

// One uniformly spaced axis. Spacing is (max - min)/(n - 1), endpoints included.
struct Axis {
    int n = 0;
    double min = 0.0;
    double max = 0.0;

    double dx() const { return (max - min) / static_cast<double>(n - 1); }
    double coord(int i) const { return min + i * dx(); }
};

// Uniform grid in 1 or 2 dimensions. Row-major storage: index = i*n1 + j in 2D.
class Grid {
public:
    static Grid make_1d(int n, double min, double max) {
        Grid g;
        g.dim_ = 1;
        g.ax_[0] = {n, min, max};
        g.validate();
        return g;
    }
    static Grid make_2d(int n0, double min0, double max0, int n1, double min1, double max1) {
        Grid g;
        g.dim_ = 2;
        g.ax_[0] = {n0, min0, max0};
        g.ax_[1] = {n1, min1, max1};
        g.validate();
        return g;
    }

    int dim() const { return dim_; }
    const Axis& axis(int a) const { return ax_[a]; }

    std::size_t size() const {
        std::size_t s = ax_[0].n;
        if (dim_ == 2) s *= ax_[1].n;
        return s;
    }

    std::size_t index(int i, int j = 0) const {
        return dim_ == 1 ? static_cast<std::size_t>(i)
                         : static_cast<std::size_t>(i) * ax_[1].n + j;
    }

    // Trapezoidal quadrature weight of a grid point (product over axes).
    double weight(int i, int j = 0) const {
        double w = ax_[0].dx() * ((i == 0 || i == ax_[0].n - 1) ? 0.5 : 1.0);
        if (dim_ == 2)
            w *= ax_[1].dx() * ((j == 0 || j == ax_[1].n - 1) ? 0.5 : 1.0);
        return w;
    }

    bool operator==(const Grid& o) const {
        if (dim_ != o.dim_) return false;
        for (int a = 0; a < dim_; ++a)
            if (ax_[a].n != o.ax_[a].n || ax_[a].min != o.ax_[a].min || ax_[a].max != o.ax_[a].max)
                return false;
        return true;
    }

private:
    void validate() const {
        for (int a = 0; a < dim_; ++a) {
            if (ax_[a].n < 8) throw std::invalid_argument("grid axis needs at least 8 points");
            if (!(ax_[a].max > ax_[a].min)) throw std::invalid_argument("grid axis needs max > min");
        }
    }

    int dim_ = 1;
    std::array<Axis, 2> ax_{};
};

// hbar/mass/c context carried alongside wavefunctions.
struct PhysicsConstants {
    double hbar = 1.0;
    double mass = 1.0;
    double c = 1.0;

    void validate() const {
        if (!(hbar > 0.0 && mass > 0.0 && c > 0.0))
            throw std::invalid_argument("physics constants must be strictly positive");
    }
};

using Mask = std::vector<unsigned char>;

}  // namespace qc
