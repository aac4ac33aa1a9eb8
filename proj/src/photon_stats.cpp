#include "qdcav/photon_stats.hpp"

#include "qdcav/errors.hpp"
#include "qdcav/parallel.hpp"
#include "qdcav/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qdcav::photon {

namespace {

constexpr std::uint8_t kEmissionStream = 1;
constexpr std::uint8_t kDarkStream = 2;
constexpr std::uint8_t kHomStream = 3;

constexpr std::size_t kPulseBlock = 8192;
constexpr std::size_t kHomBlock = 256;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

Detector pick_detector(rng::Stream& s) { return s.bernoulli(0.5) ? Detector::d2 : Detector::d1; }

}  // namespace

std::string_view to_string(SourceMode mode)
{
    return mode == SourceMode::single_emitter ? "single-emitter" : "poisson";
}

SourceMode parse_source_mode(std::string_view text)
{
    if (text == "single-emitter" || text == "single_emitter") return SourceMode::single_emitter;
    if (text == "poisson") return SourceMode::poisson;
    throw std::invalid_argument("unknown source mode '" + std::string(text) + "'");
}

std::string_view to_string(Detector d) { return d == Detector::d1 ? "D1" : "D2"; }

void PulseTrainConfig::validate() const
{
    if (!(rep_period > 0.0)) throw std::invalid_argument("repetition period must be positive");
    if (!is_probability(excitation_prob) || !is_probability(multi_excitation_prob)
        || !is_probability(detector_efficiency)) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    if (!(dark_count_rate >= 0.0)) throw std::invalid_argument("dark count rate must be non-negative");
    if (!(gamma > 0.0)) throw std::invalid_argument("radiative rate must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("relaxation rate must be positive");
    if (!(mean_photon_number >= 0.0)) throw std::invalid_argument("mean photon number must be non-negative");
}

std::vector<PhotonRecord> simulate_emission_train(const PulseTrainConfig& config, unsigned threads)
{
    config.validate();
    const std::size_t n = config.n_pulses;
    const std::size_t blocks = (n + kPulseBlock - 1) / kPulseBlock;
    std::vector<std::vector<PhotonRecord>> per_block(blocks);
    const double T = config.rep_period;

    parallel_blocks(n, kPulseBlock, threads, [&](std::size_t begin, std::size_t end) {
        auto& out = per_block[begin / kPulseBlock];
        std::vector<PhotonRecord> pulse;
        for (std::size_t i = begin; i < end; ++i) {
            pulse.clear();
            const double start = static_cast<double>(i) * T;
            rng::Stream s(config.seed, rng::stream_id(kEmissionStream, i));

            std::uint64_t photons = 0;
            if (config.source == SourceMode::poisson) {
                photons = s.poisson(config.mean_photon_number);
            } else if (s.bernoulli(config.excitation_prob)) {
                photons = 1 + (s.bernoulli(config.multi_excitation_prob) ? 1 : 0);
            }
            for (std::uint64_t k = 0; k < photons; ++k) {
                const double t = start + s.exponential(config.delta) + s.exponential(config.gamma);
                const bool detected = s.bernoulli(config.detector_efficiency);
                const Detector d = pick_detector(s);
                if (detected) pulse.push_back({i, t, d});
            }

            if (config.dark_count_rate > 0.0) {
                rng::Stream dark(config.seed, rng::stream_id(kDarkStream, i));
                const std::uint64_t k = dark.poisson(config.dark_count_rate * T);
                for (std::uint64_t j = 0; j < k; ++j) {
                    const double t = start + T * dark.uniform();
                    pulse.push_back({i, t, pick_detector(dark)});
                }
            }
            std::sort(pulse.begin(), pulse.end(),
                      [](const PhotonRecord& a, const PhotonRecord& b) { return a.detect_time < b.detect_time; });
            out.insert(out.end(), pulse.begin(), pulse.end());
        }
    });

    std::vector<PhotonRecord> records;
    std::size_t total = 0;
    for (const auto& b : per_block) total += b.size();
    records.reserve(total);
    for (const auto& b : per_block) records.insert(records.end(), b.begin(), b.end());
    return records;
}

int CorrelationHistogram::peak_of(std::size_t i) const
{
    return static_cast<int>(std::lround(bin_center(i) / rep_period));
}

bool CorrelationHistogram::in_complete_peak(std::size_t i) const
{
    return std::abs(peak_of(i)) <= max_peak;
}

double CorrelationHistogram::peak_area(int m) const
{
    if (!pulse_areas.empty()) {
        if (std::abs(m) > max_peak) return 0.0;
        return static_cast<double>(pulse_areas[static_cast<std::size_t>(m + max_peak)]);
    }
    double area = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (peak_of(i) == m) area += static_cast<double>(counts[i]);
    }
    return area;
}

std::uint64_t CorrelationHistogram::total_pairs() const
{
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

CorrelationHistogram hbt_correlate(const std::vector<PhotonRecord>& records, double bin_width, double max_lag,
                                   double rep_period, unsigned threads)
{
    if (records.empty()) throw std::invalid_argument("no photon records to correlate");
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
    if (!(max_lag > 0.0)) throw std::invalid_argument("maximum lag must be positive");
    if (!(rep_period > 0.0)) throw std::invalid_argument("repetition period must be positive");

    CorrelationHistogram hist;
    hist.bin_width = bin_width;
    hist.max_lag = max_lag;
    hist.rep_period = rep_period;
    const auto bins = static_cast<std::size_t>(std::ceil(2.0 * max_lag / bin_width - 1e-9));
    hist.counts.assign(bins, 0);
    hist.max_peak = static_cast<int>(std::floor(max_lag / rep_period - 0.5 + 1e-9));

    struct Click {
        double t;
        std::int64_t pulse;
        bool operator<(const Click& o) const { return t < o.t || (t == o.t && pulse < o.pulse); }
    };
    std::vector<Click> t1, t2;
    for (const auto& r : records) {
        (r.detector == Detector::d1 ? t1 : t2).push_back({r.detect_time, static_cast<std::int64_t>(r.pulse_index)});
    }
    std::sort(t1.begin(), t1.end());
    std::sort(t2.begin(), t2.end());

    const std::size_t blocks = (t1.size() + kPulseBlock - 1) / kPulseBlock;
    const std::size_t peaks = static_cast<std::size_t>(2 * std::max(hist.max_peak, 0) + 1);
    std::vector<std::vector<std::uint64_t>> partial(blocks), partial_peaks(blocks);
    const double lo = hist.lower_edge();

    parallel_blocks(t1.size(), kPulseBlock, threads, [&](std::size_t begin, std::size_t end) {
        auto& local = partial[begin / kPulseBlock];
        auto& local_peaks = partial_peaks[begin / kPulseBlock];
        local.assign(bins, 0);
        local_peaks.assign(peaks, 0);
        auto first = std::lower_bound(t2.begin(), t2.end(), Click{t1[begin].t - max_lag, std::numeric_limits<std::int64_t>::min()});
        for (std::size_t i = begin; i < end; ++i) {
            const double a = t1[i].t;
            while (first != t2.end() && first->t < a - max_lag) ++first;
            for (auto it = first; it != t2.end() && it->t <= a + max_lag; ++it) {
                const double tau = it->t - a;
                auto b = static_cast<std::size_t>(std::floor((tau - lo) / bin_width));
                if (b >= bins) b = bins - 1;
                ++local[b];
                const std::int64_t m = it->pulse - t1[i].pulse;
                if (std::abs(m) <= hist.max_peak) ++local_peaks[static_cast<std::size_t>(m + hist.max_peak)];
            }
        }
    });
    hist.pulse_areas.assign(peaks, 0);
    for (std::size_t k = 0; k < blocks; ++k) {
        for (std::size_t b = 0; b < bins; ++b) hist.counts[b] += partial[k][b];
        for (std::size_t m = 0; m < peaks; ++m) hist.pulse_areas[m] += partial_peaks[k][m];
    }

    if (hist.total_pairs() == 0) throw NumericalError("no cross-detector pairs: normalization undefined");
    if (hist.max_peak >= 1) {
        double side = 0.0;
        for (int m = 1; m <= hist.max_peak; ++m) side += hist.peak_area(m) + hist.peak_area(-m);
        hist.normalization = side / (2.0 * hist.max_peak);
    }
    if (!(hist.normalization > 0.0)) {
        throw NumericalError("side peaks are empty or outside the lag range: normalization undefined");
    }
    return hist;
}

double g2_zero(const CorrelationHistogram& hist)
{
    if (hist.max_peak < 2) throw std::invalid_argument("histogram must cover peaks m = -2..2");
    if (!(hist.normalization > 0.0)) throw NumericalError("zero side-peak area");
    return hist.peak_area(0) / hist.normalization;
}

namespace {

// Cumulative integral of the unit-area periodic Laplace train
// Σ_k (Γ/2) e^{-Γ|τ − kT|}, measured from τ = 0.
double periodic_laplace_cdf(double tau, double gamma, double period)
{
    const double n = std::round(tau / period);
    const double u = tau - n * period;
    const double a = std::abs(u);
    // sinh(Γ(T/2 − a)) / sinh(ΓT/2), written to stay finite for large ΓT.
    const double ratio = std::exp(-gamma * a) * (-std::expm1(-2.0 * gamma * (0.5 * period - a)))
                         / (-std::expm1(-gamma * period));
    const double h = 0.5 * (1.0 - ratio);
    return n + (u < 0.0 ? -h : h);
}

double laplace_cdf(double x, double gamma)
{
    return x < 0.0 ? 0.5 * std::exp(gamma * x) : 1.0 - 0.5 * std::exp(-gamma * x);
}

struct BinnedPeaks {
    std::vector<double> lo, hi, n;
    double total = 0.0;
};

double golden_max(double a, double b, double tol, auto&& f, double* best_value = nullptr)
{
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    const double x = 0.5 * (a + b);
    if (best_value) *best_value = f(x);
    return x;
}

}  // namespace

SidePeakFit extract_lifetime_from_sidepeaks(const CorrelationHistogram& hist)
{
    const double T = hist.rep_period;
    int rich_peaks = 0;
    std::string diag;
    for (int m = -hist.max_peak; m <= hist.max_peak; ++m) {
        if (m == 0) continue;
        const double area = hist.peak_area(m);
        diag += fmt::format(" m={}:{:.0f}", m, area);
        if (area >= 1e3) ++rich_peaks;
    }
    if (rich_peaks < 2) {
        throw FitFailed("side-peak lifetime fit needs >= 2 side peaks with >= 1000 counts; got" + diag);
    }

    BinnedPeaks data;
    double abs_offset_sum = 0.0;
    double side_counts = 0.0;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        if (!hist.in_complete_peak(i)) continue;
        const double c = static_cast<double>(hist.counts[i]);
        data.lo.push_back(hist.bin_lo(i));
        data.hi.push_back(hist.bin_lo(i) + hist.bin_width);
        data.n.push_back(c);
        data.total += c;
        const int m = hist.peak_of(i);
        if (m != 0) {
            abs_offset_sum += c * std::abs(hist.bin_center(i) - m * T);
            side_counts += c;
        }
    }
    const double gamma_guess = side_counts / std::max(abs_offset_sum, 1e-300);

    std::vector<double> train(data.n.size()), central(data.n.size());
    auto profile = [&](double log_gamma, double* weight_out) {
        const double g = std::exp(log_gamma);
        for (std::size_t b = 0; b < data.n.size(); ++b) {
            train[b] = periodic_laplace_cdf(data.hi[b], g, T) - periodic_laplace_cdf(data.lo[b], g, T);
            central[b] = laplace_cdf(data.hi[b], g) - laplace_cdf(data.lo[b], g);
        }
        // Multinomial log-likelihood of bin counts; shape = train − (1 − w)·central.
        auto loglik = [&](double w) {
            double norm = 0.0, acc = 0.0;
            for (std::size_t b = 0; b < data.n.size(); ++b) {
                const double mu = std::max(train[b] - (1.0 - w) * central[b], 1e-300);
                norm += mu;
                if (data.n[b] > 0.0) acc += data.n[b] * std::log(mu);
            }
            return acc - data.total * std::log(norm);
        };
        double best = 0.0;
        const double w = golden_max(0.0, 4.0, 1e-9, loglik, &best);
        const double at_zero = loglik(0.0);
        if (at_zero >= best) {
            best = at_zero;
            if (weight_out) *weight_out = 0.0;
        } else if (weight_out) {
            *weight_out = w;
        }
        return best;
    };

    const double centre = std::log(gamma_guess);
    const double half_range = std::log(20.0);
    double best_ll = 0.0;
    const double log_gamma = golden_max(centre - half_range, centre + half_range, 1e-10,
                                        [&](double x) { return profile(x, nullptr); }, &best_ll);
    if (std::abs(log_gamma - centre) > 0.999 * half_range || !std::isfinite(best_ll)) {
        throw FitFailed(fmt::format("side-peak lifetime fit hit its search bound (initial rate {:.6g} /ns)",
                                    gamma_guess));
    }

    SidePeakFit fit;
    fit.gamma = std::exp(log_gamma);
    fit.log_likelihood = profile(log_gamma, &fit.central_weight);
    fit.side_peaks = 2 * hist.max_peak;
    return fit;
}

HomEstimate hom_overlap_mc(double gamma, double alpha, indist::Relaxation relaxation, std::uint64_t trials,
                           HomGrid grid, std::uint64_t seed, unsigned threads)
{
    if (!(gamma > 0.0)) throw std::invalid_argument("radiative rate must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("dephasing rate must be non-negative");
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    if (!(grid.span_lifetimes > 0.0) || !(grid.points_per_lifetime > 0.0)) {
        throw std::invalid_argument("degenerate HOM time grid");
    }
    const double points = std::round(grid.span_lifetimes * grid.points_per_lifetime);
    if (!(points >= 2.0) || points > 1e8) throw std::invalid_argument("degenerate HOM time grid");
    const auto n_points = static_cast<std::size_t>(points);
    const double dt = 1.0 / (grid.points_per_lifetime * gamma);
    const double step_decay = std::exp(-gamma * dt);
    // Only φ2 − φ1 enters the overlap; the difference of two independent
    // increments of variance α·dt is one increment of variance 2α·dt.
    const double phase_sigma = std::sqrt(2.0 * alpha * dt);

    // Discrete norm of one truncated wavepacket on its grid; dividing by it
    // normalizes both photons so identical pure photons overlap exactly.
    double grid_norm = 0.0;
    for (std::size_t k = 0; k < n_points; ++k) {
        grid_norm += gamma * dt * std::exp(-gamma * dt * (static_cast<double>(k) + 0.5));
    }

    std::vector<double> overlap(trials);
    parallel_blocks(trials, kHomBlock, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t trial = begin; trial < end; ++trial) {
            rng::Stream s(seed, rng::stream_id(kHomStream, trial));
            double t1 = 0.0, t2 = 0.0;
            if (!relaxation.is_instantaneous()) {
                t1 = s.exponential(relaxation.value());
                t2 = s.exponential(relaxation.value());
            }
            // ψ1*ψ2 = Γ e^{-Γ(t − (t1+t2)/2)} e^{i(φ2 − φ1)} on t ≥ max(t1, t2).
            const double t_start = std::max(t1, t2);
            double amp = gamma * std::exp(-gamma * (t_start + 0.5 * dt - 0.5 * (t1 + t2))) * dt;
            double phase = 0.0;
            std::complex<double> sum = 0.0;
            for (std::size_t k = 0; k < n_points; ++k) {
                if (k > 0) {
                    amp *= step_decay;
                    if (alpha > 0.0) phase += phase_sigma * s.normal();
                }
                sum += amp * std::polar(1.0, phase);
            }
            overlap[trial] = std::norm(sum) / (grid_norm * grid_norm);
        }
    });

    CompensatedSum sum;
    for (double v : overlap) sum.add(v);
    HomEstimate est;
    est.trials = trials;
    est.mean_overlap = sum.value() / static_cast<double>(trials);
    if (trials > 1) {
        CompensatedSum sq;
        for (double v : overlap) sq.add((v - est.mean_overlap) * (v - est.mean_overlap));
        const double var = sq.value() / static_cast<double>(trials - 1);
        est.std_error = std::sqrt(var / static_cast<double>(trials));
    }
    return est;
}

void write_photon_records(std::ostream& os, const std::vector<PhotonRecord>& records)
{
    os << "pulse_index,detect_time_ns,detector\n";
    for (const auto& r : records) {
        os << fmt::format("{},{:.17g},{}\n", r.pulse_index, r.detect_time, to_string(r.detector));
    }
}

std::vector<PhotonRecord> read_photon_records(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != "pulse_index,detect_time_ns,detector") {
        throw std::invalid_argument("photon record stream lacks its header");
    }
    std::vector<PhotonRecord> out;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string idx, time, det;
        if (!std::getline(ls, idx, ',') || !std::getline(ls, time, ',') || !std::getline(ls, det)) {
            throw std::invalid_argument(fmt::format("malformed photon record on line {}", line_no));
        }
        PhotonRecord r;
        try {
            r.pulse_index = std::stoull(idx);
            r.detect_time = std::stod(time);
        } catch (const std::exception&) {
            throw std::invalid_argument(fmt::format("malformed photon record on line {}", line_no));
        }
        if (det == "D1") {
            r.detector = Detector::d1;
        } else if (det == "D2") {
            r.detector = Detector::d2;
        } else {
            throw std::invalid_argument(fmt::format("unknown detector '{}' on line {}", det, line_no));
        }
        out.push_back(r);
    }
    return out;
}

void write_histogram_csv(std::ostream& os, const CorrelationHistogram& hist)
{
    os << "bin_center_ns,normalized_count\n";
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        os << fmt::format("{:.17g},{:.17g}\n", hist.bin_center(i), hist.normalized(i));
    }
}

}  // namespace qdcav::photon
