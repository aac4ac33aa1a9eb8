#include "qdcav/units.hpp"

#include <cmath>
#include <stdexcept>

namespace qdcav::units {

double wavelength_to_angular_frequency(double lambda_nm)
{
    if (!(lambda_nm > 0.0)) {
        throw std::invalid_argument("wavelength must be positive");
    }
    return 2.0 * kPi * kSpeedOfLightNmPerNs / lambda_nm;
}

double angular_frequency_to_wavelength(double omega_rad_per_ns)
{
    if (!(omega_rad_per_ns > 0.0)) {
        throw std::invalid_argument("angular frequency must be positive");
    }
    return 2.0 * kPi * kSpeedOfLightNmPerNs / omega_rad_per_ns;
}

double cavity_field_decay(double lambda_c_nm, double q)
{
    if (!(q > 0.0)) {
        throw std::invalid_argument("quality factor must be positive");
    }
    return wavelength_to_angular_frequency(lambda_c_nm) / (2.0 * q);
}

double dipole_debye_to_si(double mu_debye)
{
    if (!(mu_debye >= 0.0)) {
        throw std::invalid_argument("dipole moment must be non-negative");
    }
    return mu_debye * PhysicalConstants::debye;
}

}  // namespace qdcav::units
