#include "qdcav/indist.hpp"

#include "qdcav/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdcav::indist {

std::string_view to_string(Model model)
{
    return model == Model::eq3 ? "eq3" : "mc-consistent";
}

Model parse_model(std::string_view text)
{
    if (text == "eq3") return Model::eq3;
    if (text == "mc-consistent" || text == "mc_consistent") return Model::mc_consistent;
    throw std::invalid_argument("unknown indistinguishability model '" + std::string(text) + "'");
}

Relaxation Relaxation::rate(double delta)
{
    if (!(delta > 0.0)) throw std::invalid_argument("relaxation rate must be positive");
    return Relaxation(delta, false);
}

double Relaxation::value() const
{
    if (instantaneous_) throw std::logic_error("instantaneous relaxation has no finite rate");
    return delta_;
}

double indistinguishability(double gamma, double alpha, Relaxation relaxation, Model model)
{
    if (!(gamma > 0.0)) throw std::invalid_argument("radiative rate must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("dephasing rate must be non-negative");
    const double coherence = gamma / (gamma + alpha);
    if (relaxation.is_instantaneous()) return coherence;
    const double delta = relaxation.value();
    const double jitter_gamma = model == Model::eq3 ? 2.0 * gamma : gamma;
    return coherence * delta / (jitter_gamma + delta);
}

IndistResult optimal_rate(double alpha, double delta, Model model)
{
    if (!(alpha > 0.0) || !(delta > 0.0)) {
        throw std::invalid_argument("dephasing and relaxation rates must be positive");
    }
    // eq3: d/dΓ log I = α/(Γ(Γ+α)) − 2/(2Γ+δ) = 0  ⇒  2Γ² = αδ.
    const double ratio = model == Model::eq3 ? 2.0 * alpha / delta : alpha / delta;
    IndistResult r;
    r.gamma_star = model == Model::eq3 ? std::sqrt(alpha * delta / 2.0) : std::sqrt(alpha * delta);
    r.lifetime_star = units::ns_to_ps(1.0 / r.gamma_star);
    const double root = 1.0 + std::sqrt(ratio);
    r.i_star = 1.0 / (root * root);
    return r;
}

IndistResult phonon_whatif(double alpha, double delta, double enhancement, Model model)
{
    if (!(enhancement >= 1.0)) throw std::invalid_argument("phonon enhancement must be >= 1");
    return optimal_rate(alpha, delta * enhancement, model);
}

}  // namespace qdcav::indist
