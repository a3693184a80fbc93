#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ringpair {

// Detector channels, also the index into path_efficiencies.
enum Channel : int {
    thru_signal = 0,
    thru_idler = 1,
    drop_signal = 2,
    drop_idler = 3,
};

struct ExperimentConfig {
    double pair_rate_ring = 0.0;           // pairs/s generated inside the ring
    double pair_rate_bus_background = 0.0; // pairs/s of waveguide FWM, both photons -> through
    double p_drop = 0.5;                   // per-photon drop routing
    double p_thru = 0.5;
    std::array<double, 4> path_efficiencies{1.0, 1.0, 1.0, 1.0};
    double detector_efficiency = 1.0;
    double dark_count_rate = 0.0;     // counts/s per detector
    double timing_jitter_sigma = 0.0; // s
    double bin_width = 81e-12;        // s
    double integration_time = 0.0;    // s
    double histogram_span = 10e-9;    // s, +/- range
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct CoincidenceHistogram {
    std::string channel_pair;
    double bin_width = 81e-12;
    double span = 10e-9; // +/- range; bin count 2*floor(span/bin_width)+1, centred on 0
    std::vector<std::int64_t> counts;

    std::size_t bins() const { return counts.size(); }
    double bin_center(std::size_t i) const {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(counts.size() - 1)) * bin_width;
    }
    std::int64_t total() const;
};

struct HistogramSet {
    CoincidenceHistogram dd; // drop-signal x drop-idler
    CoincidenceHistogram tt; // thru-signal x thru-idler
    CoincidenceHistogram td; // thru-signal x drop-idler
    CoincidenceHistogram dt; // drop-signal x thru-idler
};

// Reproducibility contract: the integration time is cut into fixed 1 s
// shards; shard k of stream s uses an mt19937_64 seeded with
// splitmix64(splitmix64(seed ^ stream_salt(s)) + k). Streams: ring pairs,
// bus pairs, one dark stream per detector. Uniform doubles are
// (x >> 11) * 2^-53, exponentials -log1p(-u)/rate, normals Box-Muller.
// Counts are therefore identical for a given seed at any worker count.
HistogramSet simulate(const ExperimentConfig& config, unsigned workers = 1);

// Same experiment with the pump parked off-resonance: no ring pairs, bus
// background unchanged.
HistogramSet off_resonance_control(const ExperimentConfig& config, unsigned workers = 1);

struct CoincidenceCounts {
    // background-subtracted peak counts (floored at 0)
    double c_drop_drop = 0.0;
    double c_thru_thru = 0.0;
    double c_thru_drop = 0.0;
    double c_drop_thru = 0.0;
    std::array<double, 4> accidental_estimates{}; // dd, tt, td, dt
    std::array<double, 4> raw_peaks{};
    std::array<bool, 4> floored{};

    double split() const { return c_thru_drop + c_drop_thru; }
    // excess over the accidental floor in units of its Poisson sigma
    double significance(std::size_t which) const;
};

// Peak = bins within +/- peak_window/2 of zero delay; accidentals estimated
// from bins beyond 3x that window, scaled to the window width.
CoincidenceCounts extract_counts(const HistogramSet& histograms, double peak_window);

// C_dd^2 / (C_dd + (C_td + C_dt)/2)^2; through-through pairs are excluded
// so broadband generation in the input waveguide does not bias the ratio.
double eta_from_counts(const CoincidenceCounts& counts);

// Combine a run with its path-swapped partner; per-path efficiencies cancel
// in the geometric mean. A zero count facing a nonzero partner falls back to
// the arithmetic mean and is flagged.
struct CalibratedCounts {
    CoincidenceCounts counts;
    std::array<bool, 4> fallback{}; // dd, tt, td, dt
};
CalibratedCounts path_swap_calibration(const CoincidenceCounts& run_a,
                                       const CoincidenceCounts& run_b);

// Path-swapped copy of a config (through and drop fiber chains exchanged).
ExperimentConfig swap_paths(const ExperimentConfig& config);

} // namespace ringpair
