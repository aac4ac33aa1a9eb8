#pragma once

#include <string_view>

namespace qdcav::device {

// Quantum-dot emitter. Rates in ns⁻¹ except gamma_dipole (rad/ns).
struct EmitterSpec {
    double lambda_emit = 929.0;  // nm
    double mu = 0.0;             // C·m
    double n_host = 3.46;
    double alpha = 1.0;          // dephasing
    double delta = 100.0;        // relaxation (jitter)
    double gamma_dipole = 2.0;   // excitonic dipole decay, rad/ns

    void validate() const;
};

// Cavity mode. V is expressed in units of (lambda_c / n_cavity)^3.
struct CavitySpec {
    double lambda_c = 929.0;  // nm
    double q = 4500.0;
    double v = 0.5;
    double n_cavity = 3.46;

    void validate() const;
    double linewidth() const { return lambda_c / q; }  // Δλc, nm
    double field_decay() const;                        // κ, rad/ns
    double volume_m3() const;
};

struct Placement {
    double psi = 1.0;               // |E(r)·μ̂| / |E_max|
    double lambda_detuning = 0.0;   // λ − λc, nm

    void validate() const;
};

struct RateBudget {
    double gamma0 = 0.0;
    double gamma_cav = 0.0;
    double gamma_other = 0.0;
    double gamma_total = 0.0;
    double beta = 0.0;
    double eta_extract = 0.0;
    double eta = 0.0;

    double total_enhancement() const { return gamma_total / gamma0; }
};

enum class CouplingRegime { strong, weak };

std::string_view to_string(CouplingRegime regime);

struct CouplingAssessment {
    double g = 0.0;
    double kappa = 0.0;
    double gamma_dipole = 0.0;
    CouplingRegime regime = CouplingRegime::weak;
};

// Dipole presets. They disagree with each other: A reproduces g ≈ 380 rad/ns
// at Q = 5000, V = 0.5 (λ/n)³; B reproduces a 1.7 ns bulk lifetime.
inline constexpr double kPresetDipoleADebye = 37.2;
inline constexpr double kPresetDipoleBDebye = 20.8;

EmitterSpec preset_emitter_a();
EmitterSpec preset_emitter_b();

// Free-space spontaneous emission rate ω³μ²n / (3π ε₀ ħ c³), ns⁻¹.
double gamma_free(const EmitterSpec& emitter);

// Vacuum Rabi coupling g = (μ/ħ) sqrt(ħω / (2 ε₀ n² V)), rad/ns.
double vacuum_coupling(const EmitterSpec& emitter, const CavitySpec& cavity);

double purcell_factor(const CavitySpec& cavity, const Placement& placement);

RateBudget emission_budget(double gamma0, double purcell, double other_ratio, double eta_extract);

// Strong iff g exceeds both κ and γ.
CouplingRegime classify(double g, double kappa, double gamma_dipole);

CouplingAssessment coupling_regime(const EmitterSpec& emitter, const CavitySpec& cavity);

}  // namespace qdcav::device
