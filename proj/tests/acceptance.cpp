// Acceptance suite: one pass/fail line per criterion, exit code = failures.
// argv[1] (optional, required for the determinism criterion) is the path to
// the ringpair CLI binary.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ringpair/coincidence.hpp"
#include "ringpair/core.hpp"
#include "ringpair/pair_source.hpp"
#include "ringpair/presets.hpp"
#include "ringpair/transfer.hpp"
#include "ringpair/tuning.hpp"

using namespace ringpair;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail,
            double seconds) {
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << what;
    if (!detail.empty())
        line << " [" << detail << "]";
    line << " (" << seconds << " s)";
    std::cout << line.str() << std::endl;
    if (!pass)
        ++failures;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

DeviceSpec point_ring(double k1_sq, double k2_sq, double loss_db_per_m = 0.0,
                      double ring_phase = 0.0) {
    DeviceSpec dev;
    dev.geometry.radius = 15e-6;
    dev.geometry.ring_phase_offset = ring_phase;
    dev.waveguide.propagation_loss_db_per_m = loss_db_per_m;
    dev.input_coupler = PointCoupler::from_power_cross_coupling(k1_sq);
    dev.output_coupler = PointCoupler::from_power_cross_coupling(k2_sq);
    return dev;
}

// ---------------------------------------------------------------- 1
void criterion_closed_form() {
    Timer t;
    const double symmetric = coincidence_ratio(0.5, 0.5);
    const double decoupled = coincidence_ratio(0.9999, 0.5);
    const bool pass = std::abs(symmetric - 0.25) <= 1e-12 && decoupled > 0.999;
    report(1, pass, "closed-form coincidence ratio",
           "eta(sym)=" + fmt(symmetric) + ", eta(0.9999)=" + fmt(decoupled), t.seconds());
}

// ---------------------------------------------------------------- 2
double eta_standard_error(const CoincidenceCounts& c) {
    const double d = c.c_drop_drop;
    const double s = c.split();
    const double m = d + 0.5 * s;
    return std::sqrt(d * d * d * s * (s + d)) / (m * m * m);
}

void criterion_monte_carlo() {
    Timer t;
    bool pass = true;
    std::string detail;
    std::uint64_t seed = 4201;
    for (const double t1_sq : {0.5, 0.9, 0.99}) {
        ExperimentConfig cfg;
        cfg.p_drop = p_drop(t1_sq, 0.5);
        cfg.p_thru = 1.0 - cfg.p_drop;
        cfg.pair_rate_ring = 3e4;
        cfg.integration_time = 2.0;
        cfg.rng_seed = seed++;
        const CoincidenceCounts counts = extract_counts(simulate(cfg), 3 * cfg.bin_width);
        const double eta_hat = eta_from_counts(counts);
        const double eta_ref = coincidence_ratio(t1_sq, 0.5);
        const double sigma = eta_standard_error(counts);
        const bool ok = counts.c_drop_drop >= 1e4 && std::abs(eta_hat - eta_ref) <= 3.0 * sigma;
        pass = pass && ok;
        detail += "t1sq=" + fmt(t1_sq) + ": |d|=" + fmt(std::abs(eta_hat - eta_ref)) +
                  " vs 3se=" + fmt(3.0 * sigma) + "; ";
    }
    report(2, pass, "Monte Carlo matches the closed form within 3 standard errors", detail,
           t.seconds());
}

// ---------------------------------------------------------------- 3
void criterion_energy_conservation() {
    Timer t;
    WavelengthGrid grid{1542e-9, 1558e-9, 10000};
    double worst = 0.0;
    DeviceSpec lossless_dmzr = presets::ideal_dmzr();
    lossless_dmzr.waveguide.propagation_loss_db_per_m = 0.0;
    for (const DeviceSpec& dev : {point_ring(0.04, 0.09), lossless_dmzr}) {
        for (const Excitation exc : {Excitation::input, Excitation::add}) {
            const ComplexSpectrum s = device_spectrum(dev, grid, exc);
            for (std::size_t i = 0; i < grid.points; ++i)
                worst = std::max(worst, std::abs(s.through_power(i) + s.drop_power(i) - 1.0));
        }
    }
    report(3, worst <= 1e-10, "lossless spectra conserve power on a 10^4-point grid",
           "max |T+D-1| = " + fmt(worst), t.seconds());
}

// ---------------------------------------------------------------- 4
void criterion_geometric_series() {
    Timer t;
    // couplings keep the truncation tail of the series far below 1e-8
    const DeviceSpec dev = point_ring(0.10, 0.12, 250.0, 0.35);
    WavelengthGrid grid{1545e-9, 1555e-9, 10000};
    const ComplexSpectrum s = device_spectrum(dev, grid);

    const auto& c1 = std::get<PointCoupler>(dev.input_coupler);
    const auto& c2 = std::get<PointCoupler>(dev.output_coupler);
    const complex t1 = c1.self_coupling_t, k1 = complex(0, 1) * c1.cross_coupling_kappa;
    const complex t2 = c2.self_coupling_t, k2 = complex(0, 1) * c2.cross_coupling_kappa;

    double worst = 0.0;
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double lambda = grid.wavelength(i);
        const complex half =
            propagation_phase(dev.waveguide, 0.5 * dev.geometry.circumference(), lambda).factor();
        const complex half_a = half * std::polar(1.0, dev.geometry.ring_phase_offset);
        complex drop = k1 * half_a * k2;
        complex thru = t1;
        complex circ = k1 * half_a * t2 * half;
        for (int n = 0; n < 200; ++n) {
            thru += circ * k1;
            drop += circ * t1 * half_a * k2;
            circ *= t1 * t2 * half_a * half;
        }
        worst = std::max(worst, std::abs(s.through_amplitude[i] - thru));
        worst = std::max(worst, std::abs(s.drop_amplitude[i] - drop));
    }
    report(4, worst <= 1e-8, "point-coupled spectrum equals the 200-term field summation",
           "max |diff| = " + fmt(worst), t.seconds());
}

// ---------------------------------------------------------------- 5
void criterion_alternation() {
    Timer t;
    const DeviceSpec dev = presets::tuned_for_alternation(presets::ideal_dmzr(), 1550e-9);
    WavelengthGrid grid{1528e-9, 1572e-9, 88001};
    const ComplexSpectrum s = device_spectrum(dev, grid);
    const ResonanceList res = find_resonances(s, 0.3);

    bool alternating = res.size() >= 6;
    for (std::size_t i = 1; i < res.size(); ++i)
        alternating = alternating && (res.suppressed[i] != res.suppressed[i - 1]);

    double min_supported = 1e9, max_suppressed = -1e9;
    for (std::size_t i = 0; i < res.size(); ++i) {
        if (res.suppressed[i])
            max_suppressed = std::max(max_suppressed, res.drop_peaks_db[i]);
        else
            min_supported = std::min(min_supported, res.drop_peaks_db[i]);
    }
    const double separation = min_supported - max_suppressed;
    const bool pass = alternating && separation >= 20.0;
    report(5, pass, "ideal DMZR comb alternates with >= 20 dB drop suppression",
           fmt(res.size()) + " resonances, separation = " + fmt(separation) + " dB",
           t.seconds());
}

// ---------------------------------------------------------------- 6
void criterion_theory_curve() {
    Timer t;
    const GapCouplingMap map = presets::default_gap_map();
    const double t2_sq = map.t_sq(150e-9);
    std::vector<double> sweep;
    for (int i = 0; i < 2000; ++i)
        sweep.push_back(t2_sq + (0.99968 - t2_sq) * i / 1999.0);
    const auto curve = theory_curve(t2_sq, 0.0, sweep);

    bool pass = std::abs(curve.front().relative_pump_power - 1.0) <= 1e-9 &&
                std::abs(curve.front().eta_coinc - 0.25) <= 0.01;
    std::string detail = "start=(" + fmt(curve.front().relative_pump_power) + ", " +
                         fmt(curve.front().eta_coinc) + "); ";
    const double factors[3] = {2.56, 8.60, 10.1};
    const double targets[3] = {0.809, 0.911, 0.967};
    for (int i = 0; i < 3; ++i) {
        const double eta = eta_at_pump_factor(curve, factors[i]);
        pass = pass && std::abs(eta - targets[i]) <= 0.08;
        detail += "p=" + fmt(factors[i]) + ": eta=" + fmt(eta) + "; ";
    }
    report(6, pass, "theory curve reproduces the measured trade-off band", detail, t.seconds());
}

// ---------------------------------------------------------------- 7
struct TuneOutcome {
    TuningObjective objective;
    ObjectiveValue untuned;
    TuningResult tuned;
    DeviceSpec device;
};

TuneOutcome run_table1_sweep() {
    TuneOutcome out;
    out.device = presets::table1_dmzr();
    const double pump = resonance_near(out.device, 1550e-9);
    const double spacing =
        fsr(out.device.waveguide, out.device.geometry.circumference(), pump);
    out.objective = presets::table1_objective(pump, resonance_near(out.device, pump - spacing),
                                              resonance_near(out.device, pump + spacing));
    out.untuned = evaluate_objective(out.device, {0.0, 0.0, 0.0}, out.objective);
    out.tuned = grid_sweep(out.device, presets::table1_heater(), out.objective, 11);
    return out;
}

double dd_rate(const DeviceSpec& dev, const TuningObjective& obj, double buildup_ref,
               double base_rate, double seconds, std::uint64_t seed) {
    ExperimentConfig cfg;
    const double b = peak_buildup(dev, obj.pump_wavelength);
    cfg.pair_rate_ring = base_rate * (b / buildup_ref) * (b / buildup_ref);
    cfg.p_drop = 0.5 * (drop_routing_probability(dev, obj.signal_wavelength) +
                        drop_routing_probability(dev, obj.idler_wavelength));
    cfg.p_thru = 1.0 - cfg.p_drop;
    cfg.integration_time = seconds;
    cfg.rng_seed = seed;
    const CoincidenceCounts counts = extract_counts(simulate(cfg), 3 * cfg.bin_width);
    return counts.c_drop_drop / seconds;
}

void criterion_tuning(const TuneOutcome& outcome) {
    Timer t;
    const double gain = outcome.tuned.diagnostics.pump_extinction_db -
                        outcome.untuned.diagnostics.pump_extinction_db;

    const DeviceSpec tuned_dev = apply_heater_phases(outcome.device, outcome.tuned.phases);
    const double b_untuned = peak_buildup(outcome.device, outcome.objective.pump_wavelength);
    const double untuned_rate =
        dd_rate(outcome.device, outcome.objective, b_untuned, 200.0, 20.0, 808);
    const double tuned_rate = dd_rate(tuned_dev, outcome.objective, b_untuned, 200.0, 0.5, 809);
    const double ratio = tuned_rate / untuned_rate;

    const bool pass = gain >= 7.0 && ratio >= 2.0;
    report(7, pass, "11^3 grid sweep recovers the tuned operating point",
           "extinction gain = " + fmt(gain) + " dB (tuned " +
               fmt(outcome.tuned.diagnostics.pump_extinction_db) + ", untuned " +
               fmt(outcome.untuned.diagnostics.pump_extinction_db) + "), dd-rate ratio = " +
               fmt(ratio),
           t.seconds());
}

// ---------------------------------------------------------------- 8
void criterion_end_to_end(const TuneOutcome& outcome) {
    Timer t;
    const DeviceSpec tuned_dev = apply_heater_phases(outcome.device, outcome.tuned.phases);
    ExperimentConfig cfg;
    cfg.pair_rate_ring = 4e4;
    cfg.integration_time = 3.0;
    cfg.p_drop = 0.5 * (drop_routing_probability(tuned_dev, outcome.objective.signal_wavelength) +
                        drop_routing_probability(tuned_dev, outcome.objective.idler_wavelength));
    cfg.p_thru = 1.0 - cfg.p_drop;
    cfg.path_efficiencies = {1.0, 0.85, 0.95, 0.9};
    cfg.rng_seed = 515;

    const CoincidenceCounts run_a = extract_counts(simulate(cfg), 3 * cfg.bin_width);
    ExperimentConfig swapped = swap_paths(cfg);
    swapped.rng_seed = cfg.rng_seed + 1;
    const CoincidenceCounts run_b = extract_counts(simulate(swapped), 3 * cfg.bin_width);
    const CalibratedCounts cal = path_swap_calibration(run_a, run_b);
    const double eta_hat = eta_from_counts(cal.counts);

    report(8, eta_hat >= 0.95, "tuned DMZR end-to-end coincidence ratio",
           "eta(calibrated) = " + fmt(eta_hat) + ", p_drop = " + fmt(cfg.p_drop), t.seconds());
}

// ---------------------------------------------------------------- 9
void criterion_off_resonance() {
    Timer t;
    ExperimentConfig cfg;
    cfg.pair_rate_ring = 5e3;
    cfg.pair_rate_bus_background = 800.0;
    cfg.dark_count_rate = 50.0;
    cfg.timing_jitter_sigma = 30e-12;
    cfg.p_drop = 0.6;
    cfg.p_thru = 0.4;
    cfg.integration_time = 10.0;
    cfg.rng_seed = 99;

    const CoincidenceCounts c =
        extract_counts(off_resonance_control(cfg), 9 * cfg.bin_width);
    const bool pass = c.significance(1) > 5.0 && c.significance(0) < 2.0 &&
                      c.significance(2) < 2.0 && c.significance(3) < 2.0;
    report(9, pass, "off-resonance control: only through-port coincidences persist",
           "sigma(tt)=" + fmt(c.significance(1)) + ", sigma(dd)=" + fmt(c.significance(0)) +
               ", sigma(td)=" + fmt(c.significance(2)) + ", sigma(dt)=" +
               fmt(c.significance(3)),
           t.seconds());
}

// ---------------------------------------------------------------- 10
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

bool trees_equal(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<fs::path> names;
    for (const auto& e : fs::directory_iterator(a))
        names.push_back(e.path().filename());
    for (const auto& name : names) {
        if (!fs::exists(b / name)) {
            why = name.string() + " missing";
            return false;
        }
        if (slurp(a / name) != slurp(b / name)) {
            why = name.string() + " differs";
            return false;
        }
    }
    return true;
}

void criterion_determinism(const char* cli_path) {
    Timer t;
    if (!cli_path) {
        report(10, false, "CLI determinism", "no CLI binary path supplied", t.seconds());
        return;
    }
    const fs::path base = fs::temp_directory_path() / "ringpair_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    // a compact tune config keeps the double sweep affordable
    const std::string tune_config = R"({
      "device": {
        "ring": {"radius_um": 15.0, "phase_offset_rad": 0.18849555921538758},
        "waveguide": {"effective_index": 2.4, "group_index": 4.2,
                      "propagation_loss_db_per_cm": 3.0},
        "input_coupler": {"type": "mzi", "sub_power_cross_coupling": 0.0017,
                          "bus_arm_length_um": 67.8, "ring_arm_length_um": 20.0},
        "output_coupler": {"type": "mzi", "gap_nm": 175,
                           "bus_arm_length_um": 68.0, "ring_arm_length_um": 20.0}
      },
      "tune": {"steps_per_axis": 5, "refine": false},
      "seed": 7
    })";
    std::ofstream(base / "tune.json") << tune_config;

    const std::string coinc_workers1 = R"({
      "device": {
        "ring": {"radius_um": 18.5},
        "waveguide": {},
        "input_coupler": {"type": "point", "gap_nm": 150},
        "output_coupler": {"type": "point", "gap_nm": 150}
      },
      "coinc": {"pair_rate_ring_hz": 20000, "pair_rate_bus_hz": 500,
                "dark_count_rate_hz": 100, "timing_jitter_ps": 40,
                "integration_time_s": 2.0, "workers": 1},
      "seed": 7
    })";
    std::string coinc_workers4 = coinc_workers1;
    coinc_workers4.replace(coinc_workers4.find("\"workers\": 1"), 12, "\"workers\": 4");
    std::ofstream(base / "coinc1.json") << coinc_workers1;
    std::ofstream(base / "coinc4.json") << coinc_workers4;

    bool pass = true;
    std::string why;
    const auto twice = [&](const std::string& name, const std::string& args_a,
                           const std::string& args_b) {
        const fs::path da = base / (name + "_a");
        const fs::path db = base / (name + "_b");
        if (!run_cli(cli_path, args_a + " --out " + da.string()) ||
            !run_cli(cli_path, args_b + " --out " + db.string())) {
            pass = false;
            why += name + ": run failed; ";
            return;
        }
        std::string diff;
        if (!trees_equal(da, db, diff)) {
            pass = false;
            why += name + ": " + diff + "; ";
        }
    };

    twice("spectrum", "spectrum --preset symmetric-ring --quiet",
          "spectrum --preset symmetric-ring --quiet");
    twice("figures", "figures --preset fig4-family --quiet",
          "figures --preset fig4-family --quiet");
    twice("coinc", "coinc --config " + (base / "coinc1.json").string() + " --quiet",
          "coinc --config " + (base / "coinc4.json").string() + " --quiet");
    twice("tune", "tune --config " + (base / "tune.json").string() + " --quiet",
          "tune --config " + (base / "tune.json").string() + " --quiet");

    report(10, pass, "CLI reruns are byte-identical, any worker count", why, t.seconds());
}

} // namespace

int main(int argc, char** argv) {
    criterion_closed_form();
    criterion_monte_carlo();
    criterion_energy_conservation();
    criterion_geometric_series();
    criterion_alternation();
    criterion_theory_curve();
    const TuneOutcome outcome = run_table1_sweep();
    criterion_tuning(outcome);
    criterion_end_to_end(outcome);
    criterion_off_resonance();
    criterion_determinism(argc > 1 ? argv[1] : nullptr);

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
              << std::endl;
    return failures;
}
