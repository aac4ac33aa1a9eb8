#include "qdcav/errors.hpp"
#include "qdcav/spectral_fit.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace qdcav;
using namespace qdcav::spectral;

TEST_CASE("synthesis")
{
    SynthesisParams p;
    const auto s = synthesize_spectrum(p);
    REQUIRE(s.wavelengths.size() == 200);
    const double fwhm = 929.0 / 4500.0;
    CHECK(fwhm == doctest::Approx(0.20644).epsilon(1e-4));
    CHECK(s.wavelengths.front() == doctest::Approx(929.0 - 5.0 * fwhm));
    CHECK(s.wavelengths.back() == doctest::Approx(929.0 + 5.0 * fwhm));
    for (std::size_t i = 0; i < s.wavelengths.size(); ++i) {
        CHECK(s.counts[i] == doctest::Approx(lorentzian(s.wavelengths[i], 929.0, fwhm, 1000.0, 10.0)).epsilon(1e-14));
    }
    CHECK(lorentzian(929.0 + fwhm / 2, 929.0, fwhm, 1000.0, 10.0) == doctest::Approx(510.0));

    p.noise_rel = 0.05;
    p.seed = 3;
    const auto a = synthesize_spectrum(p);
    CHECK(a.counts == synthesize_spectrum(p).counts);
    p.seed = 4;
    CHECK(a.counts != synthesize_spectrum(p).counts);
    for (double c : a.counts) CHECK(c >= 0.0);

    SynthesisParams bad;
    bad.q = 0.0;
    CHECK_THROWS_AS(synthesize_spectrum(bad), std::invalid_argument);
    bad = {};
    bad.n_points = 7;
    CHECK_THROWS_AS(synthesize_spectrum(bad), std::invalid_argument);
    bad = {};
    bad.noise_rel = -0.1;
    CHECK_THROWS_AS(synthesize_spectrum(bad), std::invalid_argument);
}

TEST_CASE("noiseless round trip over random parameters")
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> lam(850, 1000), logq(std::log(500.0), std::log(50000.0)), amp(10, 1e5),
        off(0, 0.5), span(6, 20);
    for (int k = 0; k < 50; ++k) {
        SynthesisParams p;
        p.lambda0 = lam(gen);
        p.q = std::exp(logq(gen));
        p.amplitude = amp(gen);
        p.offset = off(gen) * p.amplitude;
        p.span_fwhm = span(gen);
        p.n_points = 100 + static_cast<std::size_t>(k) * 7;
        const auto fit = fit_lorentzian(synthesize_spectrum(p));
        CHECK(std::abs(fit.q / p.q - 1.0) < 1e-6);
        CHECK(std::abs(fit.lambda0 / p.lambda0 - 1.0) < 1e-6);
        CHECK(std::abs(fit.amplitude / p.amplitude - 1.0) < 1e-6);
        CHECK(fit.q == doctest::Approx(fit.lambda0 / fit.fwhm).epsilon(1e-12));
        CHECK(fit.residual_norm < 1e-8);
    }
}

TEST_CASE("2% noise recovers Q within 3%")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SynthesisParams p;
        p.noise_rel = 0.02;
        p.seed = seed;
        const auto fit = fit_lorentzian(synthesize_spectrum(p));
        CHECK(std::abs(fit.q / 4500.0 - 1.0) < 0.03);
        CHECK(fit.residual_norm > 0.0);
    }
}

TEST_CASE("equivariance")
{
    SynthesisParams p;
    p.noise_rel = 0.03;
    p.seed = 9;
    const auto s = synthesize_spectrum(p);
    const auto ref = fit_lorentzian(s);

    auto shifted = s;
    for (double& w : shifted.wavelengths) w += 3.5;
    const auto fs = fit_lorentzian(shifted);
    CHECK(fs.lambda0 == doctest::Approx(ref.lambda0 + 3.5).epsilon(1e-9));
    CHECK(fs.fwhm == doctest::Approx(ref.fwhm).epsilon(1e-6));

    auto scaled = s;
    for (double& c : scaled.counts) c *= 7.0;
    const auto fc = fit_lorentzian(scaled);
    CHECK(fc.lambda0 == doctest::Approx(ref.lambda0).epsilon(1e-10));
    CHECK(fc.fwhm == doctest::Approx(ref.fwhm).epsilon(1e-7));
    CHECK(fc.amplitude == doctest::Approx(7.0 * ref.amplitude).epsilon(1e-7));
    CHECK(fc.offset == doctest::Approx(7.0 * ref.offset).epsilon(1e-6));
}

TEST_CASE("degenerate input")
{
    Spectrum flat;
    for (int i = 0; i < 50; ++i) {
        flat.wavelengths.push_back(900.0 + i);
        flat.counts.push_back(5.0);
    }
    CHECK_THROWS_AS(fit_lorentzian(flat), FitFailed);

    Spectrum shortspec{{1, 2, 3}, {0, 1, 0}};
    CHECK_THROWS_AS(fit_lorentzian(shortspec), std::invalid_argument);
    Spectrum unsorted = flat;
    std::swap(unsorted.wavelengths[3], unsorted.wavelengths[4]);
    CHECK_THROWS_AS(unsorted.validate(), std::invalid_argument);
    Spectrum negative = flat;
    negative.counts[2] = -1.0;
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("csv and report")
{
    SynthesisParams p;
    p.noise_rel = 0.01;
    const auto s = synthesize_spectrum(p);
    std::stringstream ss;
    write_spectrum_csv(ss, s);
    const auto back = read_spectrum_csv(ss);
    CHECK(back.wavelengths == s.wavelengths);
    CHECK(back.counts == s.counts);

    std::stringstream headerless("900,1\n901,2\n902,3\n903,9\n904,3\n905,2\n906,1\n907,1\n");
    CHECK(read_spectrum_csv(headerless).wavelengths.size() == 8);
    std::stringstream broken("wavelength_nm,counts\n900,abc\n");
    CHECK_THROWS_AS(read_spectrum_csv(broken), std::invalid_argument);

    std::ostringstream rep;
    write_fit_report(rep, fit_lorentzian(s));
    CHECK(rep.str().find("q = ") != std::string::npos);
    CHECK(rep.str().find("lambda0_nm = ") != std::string::npos);
}
