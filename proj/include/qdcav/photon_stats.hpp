#pragma once

#include "qdcav/indist.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace qdcav::photon {

enum class SourceMode {
    single_emitter,  // one photon per excitation, plus optional re-excitation photon
    poisson,         // photon number per pulse ~ Poisson(mean_photon_number)
};

std::string_view to_string(SourceMode mode);
SourceMode parse_source_mode(std::string_view text);

struct PulseTrainConfig {
    double rep_period = 13.0;  // ns
    std::uint64_t n_pulses = 0;
    double excitation_prob = 1.0;
    double multi_excitation_prob = 0.0;
    double dark_count_rate = 0.0;  // ns⁻¹, summed over both detectors
    double gamma = 1.0 / 0.65;     // radiative rate, ns⁻¹
    double delta = 100.0;          // relaxation rate, ns⁻¹
    double detector_efficiency = 1.0;
    SourceMode source = SourceMode::single_emitter;
    double mean_photon_number = 0.1;  // poisson mode only
    std::uint64_t seed = 1;

    void validate() const;
};

enum class Detector : std::uint8_t { d1, d2 };

std::string_view to_string(Detector d);

struct PhotonRecord {
    std::uint64_t pulse_index = 0;
    double detect_time = 0.0;  // ns, absolute
    Detector detector = Detector::d1;

    friend bool operator==(const PhotonRecord&, const PhotonRecord&) = default;
};

// Records come out grouped by pulse (ascending pulse_index), time-ordered
// within a pulse. Pulse i draws from its own counter-based stream, so the
// output is independent of `threads`.
std::vector<PhotonRecord> simulate_emission_train(const PulseTrainConfig& config, unsigned threads = 1);

// Histogram of τ = t(D2) − t(D1) over [-max_lag, max_lag]. Bin edges are
// placed symmetrically about τ = 0. Peak m occupies the window
// |τ − mT| < T/2; only windows lying completely inside the range are peaks.
struct CorrelationHistogram {
    double bin_width = 0.1;
    double max_lag = 39.0;
    double rep_period = 13.0;
    std::vector<std::uint64_t> counts;
    double normalization = 0.0;  // mean raw side-peak area
    int max_peak = 0;            // complete peaks are m = -max_peak .. max_peak
    // Pair counts by excitation-pulse difference m (index m + max_peak). When
    // empty, peak areas fall back to the lag windows |τ − mT| < T/2.
    std::vector<std::uint64_t> pulse_areas;

    std::size_t bins() const { return counts.size(); }
    double lower_edge() const { return -0.5 * bin_width * static_cast<double>(counts.size()); }
    double bin_lo(std::size_t i) const { return lower_edge() + bin_width * static_cast<double>(i); }
    double bin_center(std::size_t i) const { return bin_lo(i) + 0.5 * bin_width; }
    double normalized(std::size_t i) const { return static_cast<double>(counts[i]) / normalization; }

    // Nearest peak index for bin i (by bin centre).
    int peak_of(std::size_t i) const;
    bool in_complete_peak(std::size_t i) const;
    double peak_area(int m) const;  // raw pairs
    std::uint64_t total_pairs() const;
};

CorrelationHistogram hbt_correlate(const std::vector<PhotonRecord>& records, double bin_width, double max_lag,
                                   double rep_period, unsigned threads = 1);

// Central-peak area over mean side-peak area.
double g2_zero(const CorrelationHistogram& hist);

struct SidePeakFit {
    double gamma = 0.0;           // ns⁻¹
    double central_weight = 0.0;  // fitted central/side area ratio
    double log_likelihood = 0.0;
    int side_peaks = 0;
};

// Binned maximum-likelihood fit of a periodic train of two-sided
// exponentials exp(-Γ|τ − mT|) (equal side peaks, free central weight) to the
// complete peak windows. Needs at least two side peaks with 1e3 counts each.
SidePeakFit extract_lifetime_from_sidepeaks(const CorrelationHistogram& hist);

struct HomGrid {
    double span_lifetimes = 8.0;
    double points_per_lifetime = 200.0;
};

struct HomEstimate {
    double mean_overlap = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

// Two-photon overlap |∫ψ1*ψ2 dt|² averaged over trials. Each photon starts
// after an Exp(δ) delay (none if instantaneous), decays as sqrt(Γ)e^{-Γt/2},
// and carries an independent Wiener phase with variance rate α, so its
// first-order coherence decays as e^{-α|t−s|/2}. Wavepackets are normalized
// on the truncated grid.
HomEstimate hom_overlap_mc(double gamma, double alpha, indist::Relaxation relaxation, std::uint64_t trials,
                           HomGrid grid, std::uint64_t seed, unsigned threads = 1);

// CSV with header "pulse_index,detect_time_ns,detector".
void write_photon_records(std::ostream& os, const std::vector<PhotonRecord>& records);
std::vector<PhotonRecord> read_photon_records(std::istream& is);

// CSV with header "bin_center_ns,normalized_count".
void write_histogram_csv(std::ostream& os, const CorrelationHistogram& hist);

}  // namespace qdcav::photon
