#include "ringpair/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

constexpr double kShardSeconds = 1.0;
constexpr std::uint64_t kStreamSalt[6] = {
    0x52494e47ull, // ring pairs
    0x42555321ull, // bus pairs
    0xda3c0001ull, 0xda3c0002ull, 0xda3c0003ull, 0xda3c0004ull, // darks per detector
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t shard_seed(std::uint64_t master, int stream, std::uint64_t shard) {
    return splitmix64(splitmix64(master ^ kStreamSalt[stream]) + shard);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& rng, double rate) {
    return -std::log1p(-uniform01(rng)) / rate;
}

double standard_normal(std::mt19937_64& rng) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586 * u2);
}

struct EventBuffer {
    std::array<std::vector<double>, 4> channels;

    void append(const EventBuffer& other) {
        for (std::size_t c = 0; c < 4; ++c)
            channels[c].insert(channels[c].end(), other.channels[c].begin(),
                               other.channels[c].end());
    }
};

void emit_photon(const ExperimentConfig& cfg, std::mt19937_64& rng, double t, Channel chan,
                 EventBuffer& out) {
    const double survive = cfg.path_efficiencies[chan] * cfg.detector_efficiency;
    if (uniform01(rng) >= survive)
        return;
    double detected = t;
    if (cfg.timing_jitter_sigma > 0.0)
        detected += cfg.timing_jitter_sigma * standard_normal(rng);
    out.channels[chan].push_back(detected);
}

void generate_shard(const ExperimentConfig& cfg, std::uint64_t shard, EventBuffer& out) {
    const double t0 = static_cast<double>(shard) * kShardSeconds;
    const double t1 = std::min(t0 + kShardSeconds, cfg.integration_time);

    if (cfg.pair_rate_ring > 0.0) {
        std::mt19937_64 rng(shard_seed(cfg.rng_seed, 0, shard));
        double t = t0;
        while ((t += exponential(rng, cfg.pair_rate_ring)) < t1) {
            const Channel sig = uniform01(rng) < cfg.p_drop ? drop_signal : thru_signal;
            const Channel idl = uniform01(rng) < cfg.p_drop ? drop_idler : thru_idler;
            emit_photon(cfg, rng, t, sig, out);
            emit_photon(cfg, rng, t, idl, out);
        }
    }
    if (cfg.pair_rate_bus_background > 0.0) {
        std::mt19937_64 rng(shard_seed(cfg.rng_seed, 1, shard));
        double t = t0;
        while ((t += exponential(rng, cfg.pair_rate_bus_background)) < t1) {
            emit_photon(cfg, rng, t, thru_signal, out);
            emit_photon(cfg, rng, t, thru_idler, out);
        }
    }
    if (cfg.dark_count_rate > 0.0) {
        for (int det = 0; det < 4; ++det) {
            std::mt19937_64 rng(shard_seed(cfg.rng_seed, 2 + det, shard));
            double t = t0;
            while ((t += exponential(rng, cfg.dark_count_rate)) < t1)
                out.channels[det].push_back(t);
        }
    }
}

CoincidenceHistogram correlate(const std::vector<double>& sig, const std::vector<double>& idl,
                               const ExperimentConfig& cfg, const std::string& label) {
    CoincidenceHistogram h;
    h.channel_pair = label;
    h.bin_width = cfg.bin_width;
    h.span = cfg.histogram_span;
    const std::size_t n_bins =
        2 * static_cast<std::size_t>(std::floor(cfg.histogram_span / cfg.bin_width)) + 1;
    h.counts.assign(n_bins, 0);
    const double half = 0.5 * static_cast<double>(n_bins) * cfg.bin_width;

    std::size_t lo = 0;
    for (const double a : sig) {
        while (lo < idl.size() && idl[lo] < a - half)
            ++lo;
        for (std::size_t j = lo; j < idl.size() && idl[j] <= a + half; ++j) {
            const double dt = a - idl[j];
            auto bin = static_cast<std::size_t>((dt + half) / cfg.bin_width);
            if (bin >= n_bins)
                bin = n_bins - 1;
            ++h.counts[bin];
        }
    }
    return h;
}

} // namespace

void ExperimentConfig::validate() const {
    if (pair_rate_ring < 0.0 || pair_rate_bus_background < 0.0 || dark_count_rate < 0.0)
        throw config_error("coincidence: rates must be >= 0");
    if (!(p_drop >= 0.0 && p_drop <= 1.0) || !(p_thru >= 0.0 && p_thru <= 1.0))
        throw config_error("coincidence: routing probabilities must be in [0, 1]");
    if (std::abs(p_drop + p_thru - 1.0) > 1e-9)
        throw config_error("coincidence: p_drop + p_thru must equal 1");
    for (const double e : path_efficiencies)
        if (!(e > 0.0 && e <= 1.0))
            throw config_error("coincidence: path efficiencies must be in (0, 1]");
    if (!(detector_efficiency >= 0.0 && detector_efficiency <= 1.0))
        throw config_error("coincidence: detector efficiency must be in [0, 1]");
    if (!(bin_width > 0.0))
        throw config_error("coincidence: bin_width must be > 0");
    if (integration_time < 0.0)
        throw config_error("coincidence: integration_time must be >= 0");
    if (timing_jitter_sigma < 0.0)
        throw config_error("coincidence: timing_jitter_sigma must be >= 0");
    if (!(histogram_span > 0.0))
        throw config_error("coincidence: histogram_span must be > 0");
}

std::int64_t CoincidenceHistogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

HistogramSet simulate(const ExperimentConfig& config, unsigned workers) {
    config.validate();
    const auto n_shards = static_cast<std::uint64_t>(
        std::ceil(config.integration_time / kShardSeconds));

    std::vector<EventBuffer> per_shard(n_shards);
    if (workers <= 1 || n_shards <= 1) {
        for (std::uint64_t k = 0; k < n_shards; ++k)
            generate_shard(config, k, per_shard[k]);
    } else {
        std::vector<std::thread> pool;
        const unsigned n_workers = std::min<unsigned>(workers, 64);
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::uint64_t k = w; k < n_shards; k += n_workers)
                    generate_shard(config, k, per_shard[k]);
            });
        }
        for (auto& t : pool)
            t.join();
    }

    EventBuffer all;
    for (const auto& buf : per_shard)
        all.append(buf);
    for (auto& ch : all.channels)
        std::sort(ch.begin(), ch.end());

    HistogramSet set;
    set.dd = correlate(all.channels[drop_signal], all.channels[drop_idler], config,
                       "drop-signal x drop-idler");
    set.tt = correlate(all.channels[thru_signal], all.channels[thru_idler], config,
                       "thru-signal x thru-idler");
    set.td = correlate(all.channels[thru_signal], all.channels[drop_idler], config,
                       "thru-signal x drop-idler");
    set.dt = correlate(all.channels[drop_signal], all.channels[thru_idler], config,
                       "drop-signal x thru-idler");
    return set;
}

HistogramSet off_resonance_control(const ExperimentConfig& config, unsigned workers) {
    ExperimentConfig off = config;
    off.pair_rate_ring = 0.0;
    return simulate(off, workers);
}

CoincidenceCounts extract_counts(const HistogramSet& histograms, double peak_window) {
    const CoincidenceHistogram* hists[4] = {&histograms.dd, &histograms.tt, &histograms.td,
                                            &histograms.dt};
    if (peak_window < hists[0]->bin_width)
        throw std::domain_error("extract_counts: peak window narrower than one bin");
    if (0.5 * peak_window > hists[0]->span)
        throw std::domain_error("extract_counts: peak window exceeds the histogram span");

    CoincidenceCounts out;
    double* fields[4] = {&out.c_drop_drop, &out.c_thru_thru, &out.c_thru_drop, &out.c_drop_thru};
    for (std::size_t h = 0; h < 4; ++h) {
        const CoincidenceHistogram& hist = *hists[h];
        double peak = 0.0;
        std::size_t window_bins = 0;
        double sideband = 0.0;
        std::size_t sideband_bins = 0;
        for (std::size_t i = 0; i < hist.bins(); ++i) {
            const double c = std::abs(hist.bin_center(i));
            if (c <= 0.5 * peak_window) {
                peak += static_cast<double>(hist.counts[i]);
                ++window_bins;
            } else if (c > 1.5 * peak_window) {
                sideband += static_cast<double>(hist.counts[i]);
                ++sideband_bins;
            }
        }
        const double acc_per_bin = sideband_bins ? sideband / static_cast<double>(sideband_bins)
                                                 : 0.0;
        const double accidental = acc_per_bin * static_cast<double>(window_bins);
        out.raw_peaks[h] = peak;
        out.accidental_estimates[h] = accidental;
        const double net = peak - accidental;
        out.floored[h] = net < 0.0;
        *fields[h] = std::max(net, 0.0);
    }
    return out;
}

double CoincidenceCounts::significance(std::size_t which) const {
    const double excess = raw_peaks[which] - accidental_estimates[which];
    return excess / std::sqrt(std::max(accidental_estimates[which], 1.0));
}

double eta_from_counts(const CoincidenceCounts& counts) {
    const double denom = counts.c_drop_drop + 0.5 * counts.split();
    if (counts.c_drop_drop + counts.split() <= 0.0)
        throw std::domain_error("eta_from_counts: no drop or split coincidences recorded");
    const double r = counts.c_drop_drop / denom;
    return r * r;
}

CalibratedCounts path_swap_calibration(const CoincidenceCounts& run_a,
                                       const CoincidenceCounts& run_b) {
    CalibratedCounts out;
    const double* a[4] = {&run_a.c_drop_drop, &run_a.c_thru_thru, &run_a.c_thru_drop,
                          &run_a.c_drop_thru};
    const double* b[4] = {&run_b.c_drop_drop, &run_b.c_thru_thru, &run_b.c_thru_drop,
                          &run_b.c_drop_thru};
    double* c[4] = {&out.counts.c_drop_drop, &out.counts.c_thru_thru, &out.counts.c_thru_drop,
                    &out.counts.c_drop_thru};
    for (std::size_t i = 0; i < 4; ++i) {
        if (*a[i] > 0.0 && *b[i] > 0.0) {
            *c[i] = std::sqrt(*a[i] * *b[i]);
        } else if (*a[i] > 0.0 || *b[i] > 0.0) {
            *c[i] = 0.5 * (*a[i] + *b[i]);
            out.fallback[i] = true;
        }
        out.counts.raw_peaks[i] = 0.5 * (run_a.raw_peaks[i] + run_b.raw_peaks[i]);
        out.counts.accidental_estimates[i] =
            0.5 * (run_a.accidental_estimates[i] + run_b.accidental_estimates[i]);
    }
    return out;
}

ExperimentConfig swap_paths(const ExperimentConfig& config) {
    ExperimentConfig swapped = config;
    std::swap(swapped.path_efficiencies[thru_signal], swapped.path_efficiencies[drop_signal]);
    std::swap(swapped.path_efficiencies[thru_idler], swapped.path_efficiencies[drop_idler]);
    return swapped;
}

} // namespace ringpair
