#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace qdcav::modevol {

// Rectilinear grid of cell-centred samples. Arrays are row-major with x
// slowest: index = (ix * ny + iy) * nz + iz.
struct FieldGrid {
    std::size_t nx = 0, ny = 0, nz = 0;
    std::array<double, 3> spacing{1.0, 1.0, 1.0};  // nm
    std::vector<double> eps;                      // relative permittivity
    std::vector<double> e_sq;                     // |E|², arbitrary units

    std::size_t cells() const { return nx * ny * nz; }
    std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const
    {
        return (ix * ny + iy) * nz + iz;
    }
    void validate() const;
};

// Energy-weighted mode volume Σ ε|E|² dV / max(ε|E|²), nm³.
double mode_volume(const FieldGrid& grid, unsigned threads = 1);

double normalized_mode_volume(double v_nm3, double lambda_nm, double n);

// Synthetic fields for validation.
FieldGrid uniform_box(std::size_t n, std::array<double, 3> extent, double eps = 1.0);
FieldGrid sine_box(std::size_t n, std::array<double, 3> extent, double eps = 1.0);

// Text grid file:
//   qdcav-grid 1
//   nx ny nz
//   dx dy dz
//   <nx*ny*nz eps values, whitespace separated>
//   <nx*ny*nz e_sq values>
// Values are written with 17 significant digits so a read-back is exact.
void write_grid(std::ostream& os, const FieldGrid& grid);
FieldGrid read_grid(std::istream& is);
void save_grid(const std::filesystem::path& path, const FieldGrid& grid);
FieldGrid load_grid(const std::filesystem::path& path);

}  // namespace qdcav::modevol
