#include "qc/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qc {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    return os;
}

}  // namespace

void write_scalar_csv(const ScalarField& f, const std::filesystem::path& path) {
    auto os = open_out(path);
    const Grid& g = f.grid;
    if (g.dim() == 1) {
        os << "# axis0,value\n";
        for (int i = 0; i < g.axis(0).n; ++i)
            os << format_g17(g.axis(0).coord(i)) << ',' << format_g17(f.at(i)) << '\n';
    } else {
        os << "# axis0,axis1,value\n";
        for (int i = 0; i < g.axis(0).n; ++i)
            for (int j = 0; j < g.axis(1).n; ++j)
                os << format_g17(g.axis(0).coord(i)) << ',' << format_g17(g.axis(1).coord(j))
                   << ',' << format_g17(f.at(i, j)) << '\n';
    }
}

void write_vector_csv(const VectorField& f, const std::filesystem::path& path) {
    auto os = open_out(path);
    const Grid& g = f.grid;
    if (g.dim() == 1) {
        os << "# axis0,vx\n";
        for (int i = 0; i < g.axis(0).n; ++i)
            os << format_g17(g.axis(0).coord(i)) << ',' << format_g17(f.comp[0][i]) << '\n';
    } else {
        os << "# axis0,axis1,vx,vy\n";
        for (int i = 0; i < g.axis(0).n; ++i)
            for (int j = 0; j < g.axis(1).n; ++j) {
                const std::size_t k = g.index(i, j);
                os << format_g17(g.axis(0).coord(i)) << ',' << format_g17(g.axis(1).coord(j))
                   << ',' << format_g17(f.comp[0][k]) << ',' << format_g17(f.comp[1][k]) << '\n';
            }
    }
}

void write_dots_csv(const DotPattern& p, const std::filesystem::path& path) {
    auto os = open_out(path);
    os << "# bin_center,count\n";
    for (int b = 0; b < p.nbins; ++b)
        os << format_g17(p.bin_center(b)) << ',' << p.counts[b] << '\n';
}

void write_dots_pgm(const DotPattern& p, const std::filesystem::path& path) {
    auto os = open_out(path, true);
    long long cmax = 0;
    for (auto c : p.counts) cmax = std::max(cmax, c);
    os << "P5\n" << p.nbins << " 1\n255\n";
    for (int b = 0; b < p.nbins; ++b) {
        const unsigned char gray =
            cmax == 0 ? 0
                      : static_cast<unsigned char>(
                            std::clamp<long long>(p.counts[b] * 255 / cmax, 0, 255));
        os.put(static_cast<char>(gray));
    }
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for checksum: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[65536];
    while (is.read(buf, sizeof buf) || is.gcount() > 0) {
        const std::streamsize got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

}  // namespace qc
