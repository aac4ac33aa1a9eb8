#include "qdcav/device.hpp"

#include "qdcav/errors.hpp"
#include "qdcav/units.hpp"

#include <cmath>
#include <stdexcept>

namespace qdcav::device {

using units::PhysicalConstants;
using units::kPi;

void EmitterSpec::validate() const
{
    if (!(lambda_emit > 0.0)) throw std::invalid_argument("emitter wavelength must be positive");
    if (!(mu >= 0.0)) throw std::invalid_argument("dipole moment must be non-negative");
    if (!(n_host >= 1.0)) throw std::invalid_argument("host index must be >= 1");
    if (!(alpha >= 0.0)) throw std::invalid_argument("dephasing rate must be non-negative");
    if (!(delta > 0.0)) throw std::invalid_argument("relaxation rate must be positive");
    if (!(gamma_dipole >= 0.0)) throw std::invalid_argument("dipole decay rate must be non-negative");
}

void CavitySpec::validate() const
{
    if (!(lambda_c > 0.0)) throw std::invalid_argument("cavity wavelength must be positive");
    if (!(q > 0.0)) throw std::invalid_argument("quality factor must be positive");
    if (!(v > 0.0)) throw std::invalid_argument("mode volume must be positive");
    if (!(n_cavity >= 1.0)) throw std::invalid_argument("cavity index must be >= 1");
}

double CavitySpec::field_decay() const
{
    return units::cavity_field_decay(lambda_c, q);
}

double CavitySpec::volume_m3() const
{
    const double side = lambda_c / n_cavity * units::kNmToM;
    return v * side * side * side;
}

void Placement::validate() const
{
    if (!(psi >= 0.0 && psi <= 1.0)) throw std::invalid_argument("field overlap psi must lie in [0, 1]");
    if (!std::isfinite(lambda_detuning)) throw std::invalid_argument("detuning must be finite");
}

std::string_view to_string(CouplingRegime regime)
{
    return regime == CouplingRegime::strong ? "strong" : "weak";
}

EmitterSpec preset_emitter_a()
{
    EmitterSpec e;
    e.mu = units::dipole_debye_to_si(kPresetDipoleADebye);
    return e;
}

EmitterSpec preset_emitter_b()
{
    EmitterSpec e;
    e.mu = units::dipole_debye_to_si(kPresetDipoleBDebye);
    return e;
}

double gamma_free(const EmitterSpec& emitter)
{
    emitter.validate();
    const double omega = units::wavelength_to_angular_frequency(emitter.lambda_emit) * 1e9;  // rad/s
    const double c = PhysicalConstants::c;
    const double rate = omega * omega * omega * emitter.mu * emitter.mu * emitter.n_host
                        / (3.0 * kPi * PhysicalConstants::eps0 * PhysicalConstants::hbar * c * c * c);
    return rate * units::kPerSecondToPerNs;
}

double vacuum_coupling(const EmitterSpec& emitter, const CavitySpec& cavity)
{
    emitter.validate();
    if (!(cavity.v > 0.0)) throw std::invalid_argument("mode volume must be positive");
    cavity.validate();
    const double omega = units::wavelength_to_angular_frequency(cavity.lambda_c) * 1e9;
    const double eps = PhysicalConstants::eps0 * cavity.n_cavity * cavity.n_cavity;
    const double hbar = PhysicalConstants::hbar;
    const double g = emitter.mu / hbar * std::sqrt(hbar * omega / (2.0 * eps * cavity.volume_m3()));
    return g * units::kPerSecondToPerNs;
}

double purcell_factor(const CavitySpec& cavity, const Placement& placement)
{
    cavity.validate();
    placement.validate();
    const double dl = cavity.linewidth();
    const double det = placement.lambda_detuning;
    const double spectral = dl * dl / (dl * dl + 4.0 * det * det);
    return 3.0 / (4.0 * kPi * kPi) * (cavity.q / cavity.v) * placement.psi * placement.psi * spectral;
}

RateBudget emission_budget(double gamma0, double purcell, double other_ratio, double eta_extract)
{
    if (!(gamma0 >= 0.0 && purcell >= 0.0 && other_ratio >= 0.0)) {
        throw std::invalid_argument("rates and enhancement ratios must be non-negative");
    }
    if (!(eta_extract >= 0.0 && eta_extract <= 1.0)) {
        throw std::invalid_argument("extraction efficiency must lie in [0, 1]");
    }
    RateBudget b;
    b.gamma0 = gamma0;
    b.gamma_cav = purcell * gamma0;
    b.gamma_other = other_ratio * gamma0;
    b.gamma_total = b.gamma_cav + b.gamma_other;
    if (!(b.gamma_total > 0.0)) {
        throw NumericalError("beta undefined: total emission rate is zero");
    }
    b.beta = b.gamma_cav / b.gamma_total;
    b.eta_extract = eta_extract;
    b.eta = b.beta * eta_extract;
    return b;
}

CouplingRegime classify(double g, double kappa, double gamma_dipole)
{
    return (g > kappa && g > gamma_dipole) ? CouplingRegime::strong : CouplingRegime::weak;
}

CouplingAssessment coupling_regime(const EmitterSpec& emitter, const CavitySpec& cavity)
{
    CouplingAssessment a;
    a.g = vacuum_coupling(emitter, cavity);
    a.kappa = cavity.field_decay();
    a.gamma_dipole = emitter.gamma_dipole;
    a.regime = classify(a.g, a.kappa, a.gamma_dipole);
    return a;
}

}  // namespace qdcav::device
