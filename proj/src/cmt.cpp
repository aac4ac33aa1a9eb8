#include "qdcav/cmt.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qdcav::cmt {

void CmtParams::validate() const
{
    if (!(kappa_wg >= 0.0) || !(kappa_loss >= 0.0)) throw std::invalid_argument("decay rates must be non-negative");
    if (!(kappa_wg + kappa_loss > 0.0)) throw std::invalid_argument("total cavity decay rate must be positive");
    if (!std::isfinite(omega0)) throw std::invalid_argument("resonance frequency must be finite");
}

double transmission_at(const CmtParams& params, double omega)
{
    params.validate();
    const double d = omega - params.omega0;
    const double kt = params.kappa_total();
    return (d * d + params.kappa_loss * params.kappa_loss) / (d * d + kt * kt);
}

TransmissionCurve transmission(const CmtParams& params, const std::vector<double>& omega_grid)
{
    params.validate();
    if (omega_grid.empty()) throw std::invalid_argument("frequency grid is empty");
    TransmissionCurve curve;
    curve.omega = omega_grid;
    curve.t.reserve(omega_grid.size());
    for (double w : omega_grid) curve.t.push_back(transmission_at(params, w));
    return curve;
}

std::vector<double> detuning_grid(const CmtParams& params, double half_widths, std::size_t n)
{
    params.validate();
    if (n < 2 || !(half_widths > 0.0)) throw std::invalid_argument("grid needs >= 2 points and a positive span");
    const double span = half_widths * params.kappa_total();
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = params.omega0 - span + 2.0 * span * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return grid;
}

double drop_efficiency(const CmtParams& params)
{
    params.validate();
    const double r = params.kappa_loss / params.kappa_total();
    return 1.0 - r * r;
}

void write_curve_csv(std::ostream& os, const TransmissionCurve& curve, bool inverted)
{
    os << (inverted ? "omega_rad_per_ns,inverted_transmission\n" : "omega_rad_per_ns,transmission\n");
    for (std::size_t i = 0; i < curve.omega.size(); ++i) {
        os << fmt::format("{:.17g},{:.17g}\n", curve.omega[i], inverted ? 1.0 - curve.t[i] : curve.t[i]);
    }
}

}  // namespace qdcav::cmt
