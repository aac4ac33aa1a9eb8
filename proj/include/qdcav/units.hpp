#pragma once

// Canonical units used between modules:
//   time ns, exponential decay rates (Γ, α, δ) ns⁻¹,
//   angular rates (ω, g, κ, γ) rad/ns (numerically equal to Grad/s),
//   lengths nm, dipole moments C·m.

namespace qdcav::units {

struct PhysicalConstants {
    static constexpr double c = 299792458.0;          // m/s
    static constexpr double hbar = 1.054571817e-34;   // J·s
    static constexpr double eps0 = 8.8541878128e-12;  // F/m
    static constexpr double debye = 3.33564e-30;      // C·m
};

inline constexpr double kPi = 3.14159265358979323846;

// Speed of light in nm/ns.
inline constexpr double kSpeedOfLightNmPerNs = PhysicalConstants::c;

inline constexpr double kNmToM = 1e-9;
inline constexpr double kPerSecondToPerNs = 1e-9;

double wavelength_to_angular_frequency(double lambda_nm);
double angular_frequency_to_wavelength(double omega_rad_per_ns);

// Cavity field (amplitude) decay rate κ = ω/(2Q), rad/ns.
double cavity_field_decay(double lambda_c_nm, double q);

double dipole_debye_to_si(double mu_debye);

inline constexpr double ps_to_ns(double ps) { return ps * 1e-3; }
inline constexpr double ns_to_ps(double ns) { return ns * 1e3; }

}  // namespace qdcav::units
