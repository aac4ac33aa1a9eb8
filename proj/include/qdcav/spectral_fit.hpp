#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace qdcav::spectral {

struct Spectrum {
    std::vector<double> wavelengths;  // nm, strictly increasing
    std::vector<double> counts;

    void validate() const;
};

struct LorentzianFit {
    double lambda0 = 0.0;
    double fwhm = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double q = 0.0;
    double residual_norm = 0.0;  // RMS residual / amplitude
    int iterations = 0;
};

struct SynthesisParams {
    double lambda0 = 929.0;
    double q = 4500.0;
    double amplitude = 1000.0;
    double offset = 10.0;
    double noise_rel = 0.0;
    std::size_t n_points = 200;
    double span_fwhm = 10.0;  // full sampled width, in FWHM
    std::uint64_t seed = 1;
};

double lorentzian(double x, double lambda0, double fwhm, double amplitude, double offset);

Spectrum synthesize_spectrum(const SynthesisParams& params);

// Damped Gauss–Newton (Levenberg–Marquardt) over (λ0, FWHM, amplitude,
// offset). Throws FitFailed for flat input or when it does not converge.
LorentzianFit fit_lorentzian(const Spectrum& spectrum);

// Two-column CSV "wavelength_nm,counts" (header row optional on read).
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& is);
Spectrum load_spectrum_csv(const std::filesystem::path& path);

// Flat "key = value" lines.
void write_fit_report(std::ostream& os, const LorentzianFit& fit);

}  // namespace qdcav::spectral
