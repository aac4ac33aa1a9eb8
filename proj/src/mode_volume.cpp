#include "qdcav/mode_volume.hpp"

#include "qdcav/parallel.hpp"
#include "qdcav/units.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qdcav::modevol {

namespace {

constexpr std::size_t kBlockCells = 4096;
constexpr const char* kMagic = "qdcav-grid";

}  // namespace

void FieldGrid::validate() const
{
    if (nx == 0 || ny == 0 || nz == 0) throw std::invalid_argument("grid dimensions must be >= 1");
    for (double s : spacing) {
        if (!(s > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    }
    if (eps.size() != cells() || e_sq.size() != cells()) {
        throw std::invalid_argument("grid arrays do not match dimensions");
    }
    for (double e : eps) {
        if (!(e >= 1.0)) throw std::invalid_argument("permittivity must be >= 1");
    }
    for (double e : e_sq) {
        if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("|E|^2 must be finite and non-negative");
    }
}

double mode_volume(const FieldGrid& grid, unsigned threads)
{
    grid.validate();
    const std::size_t n = grid.cells();
    const std::size_t blocks = (n + kBlockCells - 1) / kBlockCells;
    std::vector<double> block_sum(blocks, 0.0);
    std::vector<double> block_max(blocks, 0.0);

    parallel_blocks(n, kBlockCells, threads, [&](std::size_t begin, std::size_t end) {
        CompensatedSum sum;
        double peak = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double u = grid.eps[i] * grid.e_sq[i];
            sum.add(u);
            peak = std::max(peak, u);
        }
        block_sum[begin / kBlockCells] = sum.value();
        block_max[begin / kBlockCells] = peak;
    });

    CompensatedSum total;
    double peak = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        total.add(block_sum[b]);
        peak = std::max(peak, block_max[b]);
    }
    if (!(peak > 0.0)) throw std::invalid_argument("energy density is zero everywhere");
    const double dv = grid.spacing[0] * grid.spacing[1] * grid.spacing[2];
    return total.value() / peak * dv;
}

double normalized_mode_volume(double v_nm3, double lambda_nm, double n)
{
    if (!(v_nm3 > 0.0 && lambda_nm > 0.0 && n > 0.0)) {
        throw std::invalid_argument("volume, wavelength and index must be positive");
    }
    const double side = lambda_nm / n;
    return v_nm3 / (side * side * side);
}

FieldGrid uniform_box(std::size_t n, std::array<double, 3> extent, double eps)
{
    FieldGrid g;
    g.nx = g.ny = g.nz = n;
    for (int k = 0; k < 3; ++k) g.spacing[k] = extent[k] / static_cast<double>(n);
    g.eps.assign(g.cells(), eps);
    g.e_sq.assign(g.cells(), 1.0);
    return g;
}

// Lowest box mode sin(πx/a) sin(πy/b) sin(πz/c), sampled at cell centres.
FieldGrid sine_box(std::size_t n, std::array<double, 3> extent, double eps)
{
    FieldGrid g = uniform_box(n, extent, eps);
    std::vector<double> profile(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::sin(units::kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
        profile[i] = s * s;
    }
    for (std::size_t ix = 0; ix < n; ++ix)
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t iz = 0; iz < n; ++iz)
                g.e_sq[g.index(ix, iy, iz)] = profile[ix] * profile[iy] * profile[iz];
    return g;
}

void write_grid(std::ostream& os, const FieldGrid& grid)
{
    grid.validate();
    os << kMagic << " 1\n";
    os << grid.nx << ' ' << grid.ny << ' ' << grid.nz << '\n';
    os << fmt::format("{:.17g} {:.17g} {:.17g}\n", grid.spacing[0], grid.spacing[1], grid.spacing[2]);
    for (const auto* arr : {&grid.eps, &grid.e_sq}) {
        std::size_t col = 0;
        for (double v : *arr) {
            os << fmt::format("{:.17g}", v) << (++col % 8 == 0 ? '\n' : ' ');
        }
        if (col % 8 != 0) os << '\n';
    }
}

FieldGrid read_grid(std::istream& is)
{
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != kMagic || version != 1) {
        throw std::invalid_argument("not a qdcav-grid v1 file");
    }
    FieldGrid g;
    if (!(is >> g.nx >> g.ny >> g.nz >> g.spacing[0] >> g.spacing[1] >> g.spacing[2])) {
        throw std::invalid_argument("malformed grid header");
    }
    if (g.nx == 0 || g.ny == 0 || g.nz == 0) throw std::invalid_argument("grid dimensions must be >= 1");
    g.eps.resize(g.cells());
    g.e_sq.resize(g.cells());
    for (auto* arr : {&g.eps, &g.e_sq}) {
        for (double& v : *arr) {
            if (!(is >> v)) throw std::invalid_argument("grid file truncated");
        }
    }
    std::string extra;
    if (is >> extra) throw std::invalid_argument("trailing data after grid arrays");
    g.validate();
    return g;
}

void save_grid(const std::filesystem::path& path, const FieldGrid& grid)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    write_grid(os, grid);
}

FieldGrid load_grid(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open grid file " + path.string());
    return read_grid(is);
}

}  // namespace qdcav::modevol
