#pragma once

#include <string_view>

namespace qdcav::indist {

// eq3:           I = Γ/(Γ+α) · δ/(2Γ+δ)
// mc_consistent: I = Γ/(Γ+α) · δ/(Γ+δ)   (exponential wavepackets, Exp(δ) start jitter)
enum class Model { eq3, mc_consistent };

std::string_view to_string(Model model);
Model parse_model(std::string_view text);

// Relaxation into the emitting level. `instantaneous()` removes timing jitter
// entirely (δ → ∞).
class Relaxation {
public:
    static Relaxation rate(double delta);
    static Relaxation instantaneous() { return Relaxation(0.0, true); }

    bool is_instantaneous() const { return instantaneous_; }
    double value() const;  // throws when instantaneous

private:
    Relaxation(double d, bool inst) : delta_(d), instantaneous_(inst) {}
    double delta_;
    bool instantaneous_;
};

struct IndistResult {
    double gamma_star = 0.0;     // ns⁻¹
    double lifetime_star = 0.0;  // ps
    double i_star = 0.0;
};

double indistinguishability(double gamma, double alpha, Relaxation relaxation, Model model);

inline double indistinguishability(double gamma, double alpha, double delta, Model model)
{
    return indistinguishability(gamma, alpha, Relaxation::rate(delta), model);
}

// Closed-form maximiser of I over Γ.
//   eq3:           Γ* = sqrt(αδ/2), I* = 1/(1+sqrt(2α/δ))²
//   mc_consistent: Γ* = sqrt(αδ),   I* = 1/(1+sqrt(α/δ))²
IndistResult optimal_rate(double alpha, double delta, Model model);

// Optimum after the relaxation rate is multiplied by `enhancement` (≥ 1).
IndistResult phonon_whatif(double alpha, double delta, double enhancement, Model model);

}  // namespace qdcav::indist
