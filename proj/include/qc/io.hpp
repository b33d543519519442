#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qc/field.hpp"
#include "qc/trajectories.hpp"

namespace qc {

// CSV, row-major, 17 significant digits, '.' decimal separator.
// 1D header "# axis0,value"; 2D "# axis0,axis1,value" (vector: ...,vx[,vy]).
void write_scalar_csv(const ScalarField& f, const std::filesystem::path& path);
void write_vector_csv(const VectorField& f, const std::filesystem::path& path);

void write_dots_csv(const DotPattern& p, const std::filesystem::path& path);

// Binary P5, maxval 255, linear count -> gray, zero = black; one row.
void write_dots_pgm(const DotPattern& p, const std::filesystem::path& path);

std::uint64_t fnv1a_file(const std::filesystem::path& path);

std::string format_g17(double x);

}  // namespace qc
