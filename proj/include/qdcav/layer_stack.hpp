#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace qdcav::stack {

struct Layer {
    double index = 1.0;
    double thickness = 0.0;  // nm
};

// Layers are listed from the ambient side toward the substrate.
struct LayerStack {
    double ambient_index = 1.0;
    std::vector<Layer> layers;
    double substrate_index = 1.0;

    void validate() const;
};

struct InterferenceResult {
    std::complex<double> r;
    double big_r = 0.0;
    double f_up = 0.0;
    double spacing = 0.0;  // nm
    double theta = 0.0;    // round-trip phase wrapped to (-π, π]
};

// `pairs` × (high, low) quarter-wave layers at design_lambda, high index
// first on the ambient side.
LayerStack quarter_wave_dbr(std::size_t pairs, double n_high, double n_low, double design_lambda,
                            double ambient_index, double substrate_index);

// Normal-incidence amplitude reflection via the characteristic-matrix product.
std::complex<double> stack_reflectance(const LayerStack& stack, double lambda);

double round_trip_phase(std::complex<double> r, double spacing, double lambda);

// Two-beam model of a dipole at distance `spacing` above a mirror of
// amplitude reflectivity r: fraction of emission leaving upward.
double upward_fraction(std::complex<double> r, double spacing, double lambda);
double downward_fraction(std::complex<double> r, double spacing, double lambda);

InterferenceResult evaluate_spacing(std::complex<double> r, double spacing, double lambda);

// Dense scan of [d_min, d_max] followed by golden-section refinement of each
// local maximum; ties resolve toward the smaller spacing.
InterferenceResult optimize_spacing(const LayerStack& stack, double lambda, double d_min, double d_max,
                                    std::size_t scan_points = 2001);

struct SweepPoint {
    double spacing = 0.0;
    double f_up = 0.0;
};

std::vector<SweepPoint> sweep_spacing(std::complex<double> r, double lambda, double d_min, double d_max,
                                      std::size_t points);

// CSV "spacing_nm,f_up".
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& sweep);

// Stack description:
//   # comment
//   ambient <index>
//   substrate <index>
//   <index> <thickness_nm>     one line per layer, ambient side first
void write_stack(std::ostream& os, const LayerStack& stack);
LayerStack read_stack(std::istream& is);
LayerStack load_stack(const std::filesystem::path& path);

}  // namespace qdcav::stack
