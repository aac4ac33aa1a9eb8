#include "qdcav/spectral_fit.hpp"

#include "qdcav/errors.hpp"
#include "qdcav/rng.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qdcav::spectral {

namespace {

constexpr std::uint8_t kNoiseStream = 4;
constexpr int kMaxIterations = 200;
constexpr double kStepTolerance = 1e-10;

using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

double sum_sq_residual(const Spectrum& s, const Vec4& p)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
        const double r = s.counts[i] - lorentzian(s.wavelengths[i], p[0], p[1], p[2], p[3]);
        acc += r * r;
    }
    return acc;
}

}  // namespace

void Spectrum::validate() const
{
    if (wavelengths.size() != counts.size()) throw std::invalid_argument("spectrum columns differ in length");
    if (wavelengths.size() < 8) throw std::invalid_argument("spectrum needs at least 8 points");
    for (std::size_t i = 0; i < wavelengths.size(); ++i) {
        if (!std::isfinite(wavelengths[i]) || !std::isfinite(counts[i])) {
            throw std::invalid_argument("spectrum contains non-finite values");
        }
        if (counts[i] < 0.0) throw std::invalid_argument("spectrum counts must be non-negative");
        if (i > 0 && !(wavelengths[i] > wavelengths[i - 1])) {
            throw std::invalid_argument("spectrum wavelengths must be strictly increasing");
        }
    }
}

double lorentzian(double x, double lambda0, double fwhm, double amplitude, double offset)
{
    const double hw = 0.5 * fwhm;
    const double d = x - lambda0;
    return offset + amplitude * hw * hw / (d * d + hw * hw);
}

Spectrum synthesize_spectrum(const SynthesisParams& p)
{
    if (!(p.q > 0.0) || !(p.lambda0 > 0.0)) throw std::invalid_argument("lambda0 and Q must be positive");
    if (p.n_points < 8) throw std::invalid_argument("need at least 8 spectral points");
    if (!(p.span_fwhm > 0.0) || !(p.noise_rel >= 0.0) || !(p.amplitude >= 0.0) || !(p.offset >= 0.0)) {
        throw std::invalid_argument("invalid spectrum shape parameters");
    }
    const double fwhm = p.lambda0 / p.q;
    const double half_span = 0.5 * p.span_fwhm * fwhm;
    Spectrum s;
    s.wavelengths.resize(p.n_points);
    s.counts.resize(p.n_points);
    rng::Stream noise(p.seed, rng::stream_id(kNoiseStream, 0));
    for (std::size_t i = 0; i < p.n_points; ++i) {
        const double x = p.lambda0 - half_span + 2.0 * half_span * static_cast<double>(i)
                                                       / static_cast<double>(p.n_points - 1);
        const double clean = lorentzian(x, p.lambda0, fwhm, p.amplitude, p.offset);
        const double factor = p.noise_rel > 0.0 ? 1.0 + p.noise_rel * noise.normal() : 1.0;
        s.wavelengths[i] = x;
        s.counts[i] = std::max(0.0, clean * factor);
    }
    return s;
}

LorentzianFit fit_lorentzian(const Spectrum& spectrum)
{
    spectrum.validate();
    const auto& x = spectrum.wavelengths;
    const auto& y = spectrum.counts;
    const std::size_t n = y.size();

    const auto peak_it = std::max_element(y.begin(), y.end());
    const std::size_t peak = static_cast<std::size_t>(peak_it - y.begin());
    const double y_max = *peak_it;
    const double y_min = *std::min_element(y.begin(), y.end());
    if (!(y_max > y_min) || (y_max - y_min) <= 1e-12 * std::max(std::abs(y_max), 1.0)) {
        throw FitFailed("flat spectrum: no discernible peak");
    }

    // Initial width from the half-maximum crossings around the peak.
    const double half = y_min + 0.5 * (y_max - y_min);
    std::size_t left = peak, right = peak;
    while (left > 0 && y[left] > half) --left;
    while (right + 1 < n && y[right] > half) ++right;
    double width = x[right] - x[left];
    if (!(width > 0.0)) width = x[std::min(peak + 1, n - 1)] - x[peak > 0 ? peak - 1 : 0];

    Vec4 p{x[peak], width, y_max - y_min, y_min};
    const double span = x.back() - x.front();
    double cost = sum_sq_residual(spectrum, p);
    double damping = 1e-3;
    int iter = 0;
    bool converged = false;

    for (; iter < kMaxIterations && !converged; ++iter) {
        Mat4 jtj = Mat4::Zero();
        Vec4 jtr = Vec4::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double hw = 0.5 * p[1];
            const double d = x[i] - p[0];
            const double den = d * d + hw * hw;
            const double shape = hw * hw / den;
            Vec4 j;
            j[0] = p[2] * hw * hw * 2.0 * d / (den * den);
            j[1] = p[2] * hw * d * d / (den * den);  // ∂/∂fwhm of A·hw²/(d²+hw²)
            j[2] = shape;
            j[3] = 1.0;
            const double r = y[i] - (p[3] + p[2] * shape);
            jtj += j * j.transpose();
            jtr += j * r;
        }

        bool accepted = false;
        while (!accepted) {
            Mat4 a = jtj;
            a.diagonal() += damping * jtj.diagonal().cwiseMax(1e-300);
            const Vec4 step = a.ldlt().solve(jtr);
            const Vec4 trial = p + step;
            const double trial_cost = (trial[1] > 0.0 && step.allFinite()) ? sum_sq_residual(spectrum, trial)
                                                                           : std::numeric_limits<double>::infinity();
            if (trial_cost <= cost) {
                const Vec4 scale{span, std::abs(trial[1]), std::abs(trial[2]) + std::abs(trial[3]),
                                 std::abs(trial[2]) + std::abs(trial[3])};
                double rel = 0.0;
                for (int k = 0; k < 4; ++k) rel = std::max(rel, std::abs(step[k]) / std::max(scale[k], 1e-300));
                const bool stalled = cost - trial_cost <= 1e-15 * cost;
                p = trial;
                cost = trial_cost;
                damping = std::max(damping * 0.3, 1e-12);
                accepted = true;
                if (rel < kStepTolerance || (stalled && rel < 1e-6)) converged = true;
            } else {
                damping *= 10.0;
                if (damping > 1e16) {
                    // No descent direction left: the current point is a minimum to
                    // machine precision.
                    converged = true;
                    break;
                }
            }
        }
    }

    if (!converged) {
        throw FitFailed(fmt::format("Lorentzian fit did not converge in {} iterations (lambda0={:.9g}, fwhm={:.6g})",
                                    kMaxIterations, p[0], p[1]));
    }
    if (!(p[1] > 0.0) || !(p[2] > 0.0) || !p.allFinite()) {
        throw FitFailed(fmt::format("Lorentzian fit degenerate (fwhm={:.6g}, amplitude={:.6g})", p[1], p[2]));
    }

    LorentzianFit fit;
    fit.lambda0 = p[0];
    fit.fwhm = p[1];
    fit.amplitude = p[2];
    fit.offset = p[3];
    fit.q = fit.lambda0 / fit.fwhm;
    fit.residual_norm = std::sqrt(cost / static_cast<double>(n)) / fit.amplitude;
    fit.iterations = iter;
    return fit;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s)
{
    os << "wavelength_nm,counts\n";
    for (std::size_t i = 0; i < s.wavelengths.size(); ++i) {
        os << fmt::format("{:.17g},{:.17g}\n", s.wavelengths[i], s.counts[i]);
    }
}

Spectrum read_spectrum_csv(std::istream& is)
{
    Spectrum s;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument(fmt::format("spectrum line {}: expected two columns", line_no));
        }
        try {
            const double w = std::stod(line.substr(0, comma));
            const double c = std::stod(line.substr(comma + 1));
            s.wavelengths.push_back(w);
            s.counts.push_back(c);
        } catch (const std::exception&) {
            if (s.wavelengths.empty()) continue;  // header row
            throw std::invalid_argument(fmt::format("spectrum line {}: not numeric", line_no));
        }
    }
    s.validate();
    return s;
}

Spectrum load_spectrum_csv(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open spectrum file " + path.string());
    return read_spectrum_csv(is);
}

void write_fit_report(std::ostream& os, const LorentzianFit& fit)
{
    os << fmt::format("lambda0_nm = {:.12g}\n", fit.lambda0);
    os << fmt::format("fwhm_nm = {:.12g}\n", fit.fwhm);
    os << fmt::format("amplitude = {:.12g}\n", fit.amplitude);
    os << fmt::format("offset = {:.12g}\n", fit.offset);
    os << fmt::format("q = {:.12g}\n", fit.q);
    os << fmt::format("residual_norm = {:.6g}\n", fit.residual_norm);
    os << fmt::format("iterations = {}\n", fit.iterations);
}

}  // namespace qdcav::spectral
