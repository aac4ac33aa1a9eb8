#include "qdcav/cli.hpp"

#include "qdcav/cmt.hpp"
#include "qdcav/config.hpp"
#include "qdcav/device.hpp"
#include "qdcav/errors.hpp"
#include "qdcav/indist.hpp"
#include "qdcav/layer_stack.hpp"
#include "qdcav/mode_volume.hpp"
#include "qdcav/photon_stats.hpp"
#include "qdcav/spectral_fit.hpp"
#include "qdcav/units.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace qdcav::cli {

namespace {

using config::ConfigError;
using config::ParamReader;
using config::format_number;

struct Context {
    ParamReader& params;
    std::uint64_t seed;
    unsigned threads;
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::string& p) const
    {
        const std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    }
};

// A value that may be given as a rate (1/ns) or a lifetime (time units).
double rate_or_lifetime(ParamReader& p, const std::string& rate_key, const std::string& lifetime_key,
                        std::optional<double> default_rate)
{
    if (p.has(rate_key) && p.has(lifetime_key)) {
        throw ConfigError(0, fmt::format("give either '{}' or '{}', not both", rate_key, lifetime_key));
    }
    if (p.has(lifetime_key)) {
        const double tau = p.time_ns(lifetime_key, std::nullopt);
        if (!(tau > 0.0)) throw ConfigError(0, fmt::format("'{}' must be positive", lifetime_key));
        return 1.0 / tau;
    }
    return p.rate_per_ns(rate_key, default_rate);
}

indist::Relaxation relaxation_from(ParamReader& p, double default_delta)
{
    const bool no_jitter = p.flag("no_jitter", false);
    if (no_jitter) {
        if (p.has("delta")) throw ConfigError(0, "'delta' conflicts with no_jitter = true");
        return indist::Relaxation::instantaneous();
    }
    return indist::Relaxation::rate(p.rate_per_ns("delta", default_delta));
}

Output run_rates(Context& ctx)
{
    auto& p = ctx.params;
    device::EmitterSpec e;
    if (p.has("preset") && p.has("mu")) throw ConfigError(0, "give either 'preset' or 'mu', not both");
    const std::string preset = p.has("mu") ? "custom" : p.text("preset", "a");
    if (preset == "a") {
        e = device::preset_emitter_a();
    } else if (preset == "b") {
        e = device::preset_emitter_b();
    } else if (preset == "custom") {
        e.mu = p.dipole_cm("mu", std::nullopt);
    } else {
        throw ConfigError(0, fmt::format("unknown dipole preset '{}' (expected a or b)", preset));
    }
    e.lambda_emit = p.length_nm("lambda", e.lambda_emit);
    e.n_host = p.number("n_host", e.n_host);
    e.gamma_dipole = p.rate_per_ns("gamma_dipole", e.gamma_dipole, "rad/ns");

    device::CavitySpec c;
    c.lambda_c = p.length_nm("lambda_c", e.lambda_emit);
    c.q = p.number("q", c.q);
    c.v = p.number("v", c.v);
    c.n_cavity = p.number("n_cavity", c.n_cavity);

    device::Placement pl;
    pl.psi = p.number("psi", pl.psi);
    pl.lambda_detuning = p.length_nm("detuning", 0.0);

    const double other_ratio = p.number("other_ratio", 0.2);
    const double eta_extract = p.number("eta_extract", 1.0);
    const bool override_purcell = p.has("purcell");
    const double computed_f = device::purcell_factor(c, pl);
    const double f = override_purcell ? p.number("purcell", std::nullopt) : computed_f;

    const double g0 = device::gamma_free(e);
    const auto budget = device::emission_budget(g0, f, other_ratio, eta_extract);
    const auto coupling = device::coupling_regime(e, c);

    Output out;
    out.columns = {"gamma0_per_ns", "lifetime0_ns", "purcell_geometric", "purcell_used", "gamma_cav_per_ns",
                   "gamma_other_per_ns", "gamma_total_per_ns", "lifetime_ns", "total_enhancement", "beta",
                   "eta_extract", "eta", "g_rad_per_ns", "kappa_rad_per_ns", "gamma_dipole_rad_per_ns", "regime"};
    out.rows.push_back({budget.gamma0, 1.0 / budget.gamma0, computed_f, f, budget.gamma_cav, budget.gamma_other,
                        budget.gamma_total, 1.0 / budget.gamma_total, budget.total_enhancement(), budget.beta,
                        budget.eta_extract, budget.eta, coupling.g, coupling.kappa, coupling.gamma_dipole,
                        std::string(device::to_string(coupling.regime))});
    return out;
}

Output run_modevol(Context& ctx)
{
    auto& p = ctx.params;
    modevol::FieldGrid grid;
    if (p.has("grid")) {
        grid = modevol::load_grid(ctx.resolve(p.text("grid", std::nullopt)));
    } else {
        const std::string kind = p.text("synthetic", "sine-box");
        const auto n = p.count("n", 64);
        const std::array<double, 3> extent{p.length_nm("a", 400.0), p.length_nm("b", 400.0),
                                           p.length_nm("c", 160.0)};
        const double eps = p.number("eps", 1.0);
        if (n == 0) throw ConfigError(0, "'n' must be >= 1");
        if (kind == "sine-box") {
            grid = modevol::sine_box(n, extent, eps);
        } else if (kind == "uniform") {
            grid = modevol::uniform_box(n, extent, eps);
        } else {
            throw ConfigError(0, fmt::format("unknown synthetic field '{}' (sine-box or uniform)", kind));
        }
    }
    const double lambda = p.length_nm("lambda", 929.0);
    const double n_index = p.number("n_index", 3.46);
    const double v = modevol::mode_volume(grid, ctx.threads);
    Output out;
    out.columns = {"mode_volume_nm3", "normalized_volume"};
    out.rows.push_back({v, modevol::normalized_mode_volume(v, lambda, n_index)});
    return out;
}

Output run_indist(Context& ctx)
{
    auto& p = ctx.params;
    const double gamma = rate_or_lifetime(p, "gamma", "lifetime", std::nullopt);
    const double alpha = p.rate_per_ns("alpha", 1.0);
    const auto relax = relaxation_from(p, 100.0);
    const auto model = indist::parse_model(p.text("model", "eq3"));
    Output out;
    out.columns = {"gamma_per_ns", "lifetime_ps", "model", "indistinguishability"};
    out.rows.push_back({gamma, units::ns_to_ps(1.0 / gamma), std::string(indist::to_string(model)),
                        indist::indistinguishability(gamma, alpha, relax, model)});
    return out;
}

Output run_optimize(Context& ctx)
{
    auto& p = ctx.params;
    const double alpha = p.rate_per_ns("alpha", 1.0);
    const double delta = p.rate_per_ns("delta", 100.0);
    const double enhancement = p.number("enhancement", 1.0);
    const auto model = indist::parse_model(p.text("model", "eq3"));
    const auto r = indist::phonon_whatif(alpha, delta, enhancement, model);
    Output out;
    out.columns = {"model", "effective_delta_per_ns", "gamma_star_per_ns", "lifetime_star_ps", "i_star"};
    out.rows.push_back({std::string(indist::to_string(model)), delta * enhancement, r.gamma_star, r.lifetime_star,
                        r.i_star});
    return out;
}

Output run_mc_g2(Context& ctx)
{
    auto& p = ctx.params;
    photon::PulseTrainConfig cfg;
    cfg.seed = ctx.seed;
    cfg.rep_period = p.time_ns("rep_period", cfg.rep_period);
    cfg.n_pulses = p.count("pulses", 100000);
    cfg.source = photon::parse_source_mode(p.text("source", "single-emitter"));
    cfg.excitation_prob = p.number("excitation_prob", cfg.excitation_prob);
    cfg.multi_excitation_prob = p.number("multi_excitation_prob", cfg.multi_excitation_prob);
    cfg.mean_photon_number = p.number("mean_photon_number", cfg.mean_photon_number);
    cfg.dark_count_rate = p.rate_per_ns("dark_count_rate", cfg.dark_count_rate);
    cfg.gamma = rate_or_lifetime(p, "gamma", "lifetime", cfg.gamma);
    cfg.delta = p.rate_per_ns("delta", cfg.delta);
    cfg.detector_efficiency = p.number("detector_efficiency", cfg.detector_efficiency);
    const double bin_width = p.time_ns("bin_width", 0.1);
    const double max_lag = p.time_ns("max_lag", 3.0 * cfg.rep_period);
    const bool fit = p.flag("fit_lifetime", true);
    const std::string records_path = p.text("records", "");

    const auto records = photon::simulate_emission_train(cfg, ctx.threads);
    if (!records_path.empty()) {
        std::ostringstream os;
        photon::write_photon_records(os, records);
        write_atomically(ctx.resolve(records_path), os.str());
    }
    if (records.empty()) throw NumericalError("no photons detected: correlation undefined");
    const auto hist = photon::hbt_correlate(records, bin_width, max_lag, cfg.rep_period, ctx.threads);

    Output out;
    out.header.emplace_back("result.photons", std::to_string(records.size()));
    out.header.emplace_back("result.pairs", std::to_string(hist.total_pairs()));
    out.header.emplace_back("result.mean_side_peak_area", format_number(hist.normalization));
    out.header.emplace_back("result.g2_zero", format_number(photon::g2_zero(hist)));
    if (fit) {
        const auto f = photon::extract_lifetime_from_sidepeaks(hist);
        out.header.emplace_back("result.fitted_gamma (1/ns)", format_number(f.gamma));
        out.header.emplace_back("result.fitted_lifetime (ps)", format_number(units::ns_to_ps(1.0 / f.gamma)));
    }
    out.columns = {"bin_center_ns", "normalized_count"};
    for (std::size_t i = 0; i < hist.bins(); ++i) out.rows.push_back({hist.bin_center(i), hist.normalized(i)});
    return out;
}

Output run_mc_hom(Context& ctx)
{
    auto& p = ctx.params;
    const double gamma = rate_or_lifetime(p, "gamma", "lifetime", std::nullopt);
    const double alpha = p.rate_per_ns("alpha", 1.0);
    const auto relax = relaxation_from(p, 100.0);
    const auto trials = p.count("trials", 10000);
    photon::HomGrid grid;
    grid.span_lifetimes = p.number("span_lifetimes", grid.span_lifetimes);
    grid.points_per_lifetime = p.number("points_per_lifetime", grid.points_per_lifetime);
    const auto est = photon::hom_overlap_mc(gamma, alpha, relax, trials, grid, ctx.seed, ctx.threads);
    Output out;
    out.columns = {"mean_overlap", "std_error", "trials", "analytic_mc_consistent", "analytic_eq3"};
    out.rows.push_back({est.mean_overlap, est.std_error, static_cast<std::int64_t>(est.trials),
                        indist::indistinguishability(gamma, alpha, relax, indist::Model::mc_consistent),
                        indist::indistinguishability(gamma, alpha, relax, indist::Model::eq3)});
    return out;
}

Output run_fit_spectrum(Context& ctx)
{
    auto& p = ctx.params;
    spectral::Spectrum spectrum;
    if (p.has("spectrum")) {
        spectrum = spectral::load_spectrum_csv(ctx.resolve(p.text("spectrum", std::nullopt)));
    } else {
        spectral::SynthesisParams s;
        s.seed = ctx.seed;
        s.lambda0 = p.length_nm("lambda0", s.lambda0);
        s.q = p.number("q", s.q);
        s.amplitude = p.number("amplitude", s.amplitude);
        s.offset = p.number("offset", s.offset);
        s.noise_rel = p.number("noise_rel", 0.02);
        s.n_points = p.count("points", s.n_points);
        s.span_fwhm = p.number("span_fwhm", s.span_fwhm);
        spectrum = spectral::synthesize_spectrum(s);
    }
    const std::string report = p.text("report", "");
    const auto fit = spectral::fit_lorentzian(spectrum);
    if (!report.empty()) {
        std::ostringstream os;
        spectral::write_fit_report(os, fit);
        write_atomically(ctx.resolve(report), os.str());
    }
    Output out;
    out.columns = {"lambda0_nm", "fwhm_nm", "amplitude_counts", "offset_counts", "q", "residual_norm", "iterations"};
    out.rows.push_back({fit.lambda0, fit.fwhm, fit.amplitude, fit.offset, fit.q, fit.residual_norm,
                        static_cast<std::int64_t>(fit.iterations)});
    return out;
}

Output run_cmt(Context& ctx)
{
    auto& p = ctx.params;
    cmt::CmtParams c;
    if (p.has("omega0") && p.has("lambda0")) throw ConfigError(0, "give either 'omega0' or 'lambda0', not both");
    c.omega0 = p.has("omega0") ? p.rate_per_ns("omega0", std::nullopt, "rad/ns")
                               : units::wavelength_to_angular_frequency(p.length_nm("lambda0", 929.0));
    c.kappa_wg = p.rate_per_ns("kappa_wg", 100.0, "rad/ns");
    c.kappa_loss = p.rate_per_ns("kappa_loss", 10.0, "rad/ns");
    const auto points = p.count("points", 401);
    const double span = p.number("span_halfwidths", 10.0);
    const bool inverted = p.flag("inverted", false);
    const auto curve = cmt::transmission(c, cmt::detuning_grid(c, span, points));
    Output out;
    out.header.emplace_back("result.drop_efficiency", format_number(cmt::drop_efficiency(c)));
    out.header.emplace_back("result.loaded_q", format_number(c.loaded_q()));
    out.columns = {"omega_rad_per_ns", inverted ? "inverted_transmission" : "transmission"};
    for (std::size_t i = 0; i < curve.omega.size(); ++i) {
        out.rows.push_back({curve.omega[i], inverted ? 1.0 - curve.t[i] : curve.t[i]});
    }
    return out;
}

Output run_stack(Context& ctx)
{
    auto& p = ctx.params;
    stack::LayerStack s;
    double design = 929.0;
    if (p.has("stack")) {
        s = stack::load_stack(ctx.resolve(p.text("stack", std::nullopt)));
    } else {
        const auto pairs = p.count("pairs", 15);
        const double nh = p.number("n_high", 3.46);
        const double nl = p.number("n_low", 2.95);
        design = p.length_nm("design_lambda", design);
        const double ambient = p.number("ambient", 1.0);
        const double substrate = p.number("substrate", 3.46);
        s = stack::quarter_wave_dbr(pairs, nh, nl, design, ambient, substrate);
    }
    const double lambda = p.length_nm("lambda", design);
    const double d_min = p.length_nm("d_min", 0.0);
    const double d_max = p.length_nm("d_max", lambda);
    const auto points = p.count("points", 2001);
    const auto best = stack::optimize_spacing(s, lambda, d_min, d_max, std::max<std::uint64_t>(points, 1000));
    const auto sweep = stack::sweep_spacing(best.r, lambda, d_min, d_max, points);

    Output out;
    out.header.emplace_back("result.reflectance", format_number(best.big_r));
    out.header.emplace_back("result.r_real", format_number(best.r.real()));
    out.header.emplace_back("result.r_imag", format_number(best.r.imag()));
    out.header.emplace_back("result.optimal_spacing (nm)", format_number(best.spacing));
    out.header.emplace_back("result.f_up_max", format_number(best.f_up));
    out.header.emplace_back("result.round_trip_phase (rad)", format_number(best.theta));
    out.columns = {"spacing_nm", "f_up"};
    for (const auto& pt : sweep) out.rows.push_back({pt.spacing, pt.f_up});
    return out;
}

Output run_report(Context& ctx)
{
    auto& p = ctx.params;
    ReportOptions opt;
    opt.seed = ctx.seed;
    opt.threads = ctx.threads;
    opt.mc_pulses = p.count("mc_pulses", opt.mc_pulses);
    opt.hom_trials = p.count("hom_trials", opt.hom_trials);
    const auto rows = reproduction_report(opt);
    Output out;
    int passed = 0;
    out.columns = {"claim", "computed", "unit", "reference_value", "context", "criterion", "pass"};
    for (const auto& r : rows) {
        passed += r.pass ? 1 : 0;
        out.rows.push_back({r.claim, r.computed, r.unit, r.reference, r.context, r.criterion,
                            std::string(r.pass ? "pass" : "fail")});
    }
    out.header.emplace_back("result.rows_passed", fmt::format("{}/{}", passed, rows.size()));
    return out;
}

const std::map<std::string, std::function<Output(Context&)>, std::less<>>& commands()
{
    static const std::map<std::string, std::function<Output(Context&)>, std::less<>> table{
        {"rates", run_rates},     {"modevol", run_modevol},         {"indist", run_indist},
        {"optimize", run_optimize}, {"mc-g2", run_mc_g2},           {"mc-hom", run_mc_hom},
        {"fit-spectrum", run_fit_spectrum}, {"cmt", run_cmt},       {"stack", run_stack},
        {"report", run_report},
    };
    return table;
}

Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError(0, fmt::format("unknown output format '{}' (csv or json)", s));
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int run_scenario(std::string_view config_text, const RunOptions& options, std::ostream& out, std::ostream& err)
{
    std::optional<std::filesystem::path> out_path = options.out;
    Output result;
    Format format = Format::csv;
    try {
        const auto sections = config::parse(config_text);
        ParamReader top(&sections.front());
        const std::string command = top.text("command", std::nullopt);
        const auto it = commands().find(command);
        if (it == commands().end()) {
            int line = 0;
            for (const auto& [k, v] : sections.front().entries) {
                if (k == "command") line = v.line;
            }
            throw ConfigError(line, fmt::format("unknown command '{}'", command));
        }
        const std::uint64_t config_seed = top.count("seed", 1);
        const std::uint64_t seed = options.seed ? *options.seed : config_seed;
        const std::string cfg_out = top.text("out", "");
        const std::string cfg_format = top.text("format", "csv");
        top.finish();
        if (!out_path && !cfg_out.empty()) {
            const std::filesystem::path p(cfg_out);
            out_path = p.is_absolute() ? p : options.base_dir / p;
        }
        format = options.format ? *options.format : parse_format(cfg_format);

        const config::Section* params_section = nullptr;
        for (std::size_t i = 1; i < sections.size(); ++i) {
            if (sections[i].name != command) {
                throw ConfigError(sections[i].line,
                                  fmt::format("unknown section [{}] for command '{}'", sections[i].name, command));
            }
            params_section = &sections[i];
        }
        ParamReader params(params_section, command + ".");
        Context ctx{params, seed, options.threads, options.base_dir};
        try {
            result = it->second(ctx);
        } catch (const std::invalid_argument& e) {
            params.finish();
            throw ConfigError(0, e.what());
        } catch (const NumericalError&) {
            params.finish();
            throw;
        }
        params.finish();

        std::vector<std::pair<std::string, std::string>> header;
        header.emplace_back("command", command);
        for (const auto& kv : top.resolved()) {
            if (kv.first == "seed") {
                header.emplace_back("seed", std::to_string(seed));
            } else if (kv.first != "command" && kv.first != "out" && kv.first != "format") {
                header.push_back(kv);
            }
        }
        for (const auto& kv : params.resolved()) header.emplace_back("param." + kv.first, kv.second);
        header.insert(header.end(), result.header.begin(), result.header.end());
        result.header = std::move(header);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    try {
        const auto text = render(result, format, options.timestamp ? std::optional(utc_timestamp()) : std::nullopt);
        if (out_path) {
            write_atomically(*out_path, text);
        } else {
            out << text;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Figures of merit and Monte Carlo for quantum-dot cavity single-photon sources", "qdcav"};
    std::string config_path, out_path, format_text;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool no_timestamp = false;
    app.add_option("--config", config_path, "Scenario file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
    app.add_option("--out", out_path, "Output path (stdout when omitted)");
    app.add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "Maximum worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--no-timestamp", no_timestamp, "Omit the generated-at header line");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::ifstream is(config_path);
    if (!is) {
        err << "config error: cannot open " << config_path << '\n';
        return kExitConfig;
    }
    std::stringstream buffer;
    buffer << is.rdbuf();

    RunOptions opts;
    if (*seed_opt) opts.seed = seed;
    if (!out_path.empty()) opts.out = out_path;
    if (!format_text.empty()) opts.format = format_text == "json" ? Format::json : Format::csv;
    opts.threads = threads;
    opts.timestamp = !no_timestamp;
    opts.base_dir = std::filesystem::path(config_path).parent_path();
    if (opts.base_dir.empty()) opts.base_dir = ".";
    return run_scenario(buffer.str(), opts, out, err);
}

}  // namespace qdcav::cli
