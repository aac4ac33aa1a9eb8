#pragma once

#include <iosfwd>
#include <vector>

namespace qdcav::cmt {

// Side-coupled single-mode cavity. All κ are field (amplitude) decay rates in
// rad/ns; the corresponding energy decay rates are 2κ.
struct CmtParams {
    double omega0 = 0.0;      // rad/ns
    double kappa_wg = 0.0;    // decay into the waveguide
    double kappa_loss = 0.0;  // intrinsic / out-of-plane decay

    void validate() const;
    double kappa_total() const { return kappa_wg + kappa_loss; }
    double loaded_q() const { return omega0 / (2.0 * kappa_total()); }
};

struct TransmissionCurve {
    std::vector<double> omega;
    std::vector<double> t;
};

// |t(ω)|² = ((ω−ω0)² + κ_loss²) / ((ω−ω0)² + (κ_loss+κ_wg)²)
double transmission_at(const CmtParams& params, double omega);

TransmissionCurve transmission(const CmtParams& params, const std::vector<double>& omega_grid);

// Uniform grid of n points spanning ω0 ± half_widths·(κ_wg+κ_loss).
std::vector<double> detuning_grid(const CmtParams& params, double half_widths, std::size_t n);

double drop_efficiency(const CmtParams& params);

// CSV "omega_rad_per_ns,transmission"; inverted writes 1 − T under
// "omega_rad_per_ns,inverted_transmission".
void write_curve_csv(std::ostream& os, const TransmissionCurve& curve, bool inverted);

}  // namespace qdcav::cmt
