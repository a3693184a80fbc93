#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "csv.hpp"
#include "ringpair/coincidence.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/pair_source.hpp"
#include "ringpair/presets.hpp"
#include "ringpair/transfer.hpp"
#include "ringpair/tuning.hpp"

namespace ringpair {
namespace cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path prepare_out_dir(const CommandOptions& options) {
    fs::path dir(options.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw config_error("cannot create output directory " + dir.string());
    return dir;
}

void write_json(const fs::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_spectrum_csv(const fs::path& path, const ComplexSpectrum& s) {
    CsvWriter csv(path, {"wavelength_nm", "thru_power_db", "drop_power_db", "thru_phase_rad",
                         "drop_phase_rad"});
    for (std::size_t i = 0; i < s.grid.points; ++i) {
        const double t = std::max(s.through_power(i), 1e-300);
        const double d = std::max(s.drop_power(i), 1e-300);
        csv.row({s.grid.wavelength(i) * 1e9, 10.0 * std::log10(t), 10.0 * std::log10(d),
                 std::arg(s.through_amplitude[i]), std::arg(s.drop_amplitude[i])});
    }
}

json resonance_report(const ComplexSpectrum& s, const ResonanceList& res) {
    json out = json::array();
    for (std::size_t i = 0; i < res.size(); ++i) {
        json r;
        r["wavelength_nm"] = res.wavelengths[i] * 1e9;
        r["depth_db"] = res.depths_db[i];
        r["drop_peak_db"] = res.drop_peaks_db[i];
        r["suppressed"] = static_cast<bool>(res.suppressed[i]);
        r["extinction_db"] = extinction_db(s, res.wavelengths[i]);
        out.push_back(r);
    }
    return out;
}

double mean_spacing(const ResonanceList& res) {
    if (res.size() < 2)
        return 0.0;
    return (res.wavelengths.back() - res.wavelengths.front()) /
           static_cast<double>(res.size() - 1);
}

ExperimentConfig resolve_experiment(const RunConfig& config, const CommandOptions& options) {
    const CoincParams& p = *config.coinc;
    ExperimentConfig e = p.experiment;
    e.rng_seed = options.seed_override.value_or(config.seed);
    if (p.routing_pump_nm) {
        const double pump = resonance_near(config.device, *p.routing_pump_nm * 1e-9);
        const double spacing =
            fsr(config.device.waveguide, config.device.geometry.circumference(), pump);
        const double signal = resonance_near(config.device, pump - spacing);
        const double idler = resonance_near(config.device, pump + spacing);
        e.p_drop = 0.5 * (drop_routing_probability(config.device, signal) +
                          drop_routing_probability(config.device, idler));
        e.p_thru = 1.0 - e.p_drop;
    }
    return e;
}

json counts_report(const CoincidenceCounts& c) {
    json out;
    out["c_drop_drop"] = c.c_drop_drop;
    out["c_thru_thru"] = c.c_thru_thru;
    out["c_thru_drop"] = c.c_thru_drop;
    out["c_drop_thru"] = c.c_drop_thru;
    out["accidentals"] = {c.accidental_estimates[0], c.accidental_estimates[1],
                          c.accidental_estimates[2], c.accidental_estimates[3]};
    out["raw_peaks"] = {c.raw_peaks[0], c.raw_peaks[1], c.raw_peaks[2], c.raw_peaks[3]};
    out["significance"] = {c.significance(0), c.significance(1), c.significance(2),
                           c.significance(3)};
    return out;
}

void write_histograms(const fs::path& dir, const std::string& suffix, const HistogramSet& set) {
    const CoincidenceHistogram* hists[4] = {&set.dd, &set.tt, &set.td, &set.dt};
    const char* names[4] = {"dd", "tt", "td", "dt"};
    for (int i = 0; i < 4; ++i) {
        CsvWriter csv(dir / ("hist_" + std::string(names[i]) + suffix + ".csv"),
                      {"bin_center_ns", "counts"});
        for (std::size_t b = 0; b < hists[i]->bins(); ++b)
            csv.row({hists[i]->bin_center(b) * 1e9, static_cast<double>(hists[i]->counts[b])});
    }
}

} // namespace

int cmd_spectrum(const RunConfig& config, const CommandOptions& options) {
    if (!config.spectrum)
        throw config_error("spectrum: section required for this command");
    const fs::path dir = prepare_out_dir(options);
    const SpectrumParams& p = *config.spectrum;

    json summary;
    for (const Excitation exc : {Excitation::input, Excitation::add}) {
        const ComplexSpectrum s = device_spectrum(config.device, p.grid, exc);
        const char* tag = exc == Excitation::input ? "input" : "add";
        write_spectrum_csv(dir / ("spectrum_" + std::string(tag) + ".csv"), s);
        const ResonanceList res = find_resonances(s, p.prominence_db);
        json side;
        side["port_pair"] = s.port_pair();
        side["resonances"] = resonance_report(s, res);
        side["fsr_nm"] = mean_spacing(res) * 1e9;
        summary[tag] = side;
        if (!options.quiet)
            std::cout << tag << ": " << res.size() << " resonances, mean spacing "
                      << format_number(mean_spacing(res) * 1e9) << " nm\n";
    }
    write_json(dir / "summary.json", summary);
    return 0;
}

int cmd_figures(const RunConfig& config, const CommandOptions& options) {
    if (!config.figures)
        throw config_error("figures: section required for this command");
    const fs::path dir = prepare_out_dir(options);
    const FiguresParams& p = *config.figures;

    const double a = std::pow(10.0, -p.curve.ring_loss_db_per_round_trip / 20.0);
    const double t2_sq = p.curve.t2_sq.value_or(config.gap_map.t_sq(p.curve.drop_gap_nm * 1e-9));
    const double t1_lo = p.curve.t1_sq_min.value_or(t2_sq * a * a);
    if (!(t1_lo < p.curve.t1_sq_max))
        throw config_error("figures.theory_curve: empty sweep range");
    std::vector<double> sweep(p.curve.points);
    for (std::size_t i = 0; i < sweep.size(); ++i)
        sweep[i] = t1_lo + (p.curve.t1_sq_max - t1_lo) * static_cast<double>(i) /
                               static_cast<double>(sweep.size() - 1);
    const auto curve = theory_curve(t2_sq, p.curve.ring_loss_db_per_round_trip, sweep);
    {
        CsvWriter csv(dir / "theory_curve.csv", {"t1_sq", "relative_pump_power", "eta_coinc"});
        for (const auto& pt : curve)
            csv.row({pt.t1_sq, pt.relative_pump_power, pt.eta_coinc});
    }

    json report;
    report["theory_curve"] = {{"t2_sq", t2_sq},
                              {"ring_loss_db_per_round_trip", p.curve.ring_loss_db_per_round_trip},
                              {"points", curve.size()}};

    const double pump = p.pump_nm * 1e-9;
    const PairSourceFigures dev_fig = device_figures(config.device, pump, pump, pump);
    json dev;
    dev["p_drop"] = dev_fig.p_drop;
    dev["p_thru"] = dev_fig.p_thru;
    dev["eta_coinc"] = dev_fig.eta_coinc;
    dev["buildup_factor"] = dev_fig.buildup_factor;
    if (dev_fig.eta_coinc == 0.0)
        dev["warning"] = "drop port fully decoupled: no pairs can be extracted";
    report["device"] = dev;

    if (!p.gap_family_nm.empty()) {
        const DeviceSpec reference = presets::fig4_device(150.0, config.gap_map);
        json family = json::array();
        for (const double gap_nm : p.gap_family_nm) {
            const DeviceSpec member = presets::fig4_device(gap_nm, config.gap_map);
            const PairSourceFigures f =
                device_figures(member, pump, pump, pump, &reference);
            family.push_back({{"gap_nm", gap_nm},
                              {"t1_sq", config.gap_map.t_sq(gap_nm * 1e-9)},
                              {"relative_pump_power", f.relative_pump_power},
                              {"eta_coinc", f.eta_coinc}});
        }
        report["gap_family"] = family;
    }
    write_json(dir / "figures.json", report);
    if (!options.quiet)
        std::cout << "device eta_coinc = " << format_number(dev_fig.eta_coinc) << "\n";
    return 0;
}

int cmd_coinc(const RunConfig& config, const CommandOptions& options) {
    if (!config.coinc)
        throw config_error("coinc: section required for this command");
    const fs::path dir = prepare_out_dir(options);
    const CoincParams& p = *config.coinc;
    const ExperimentConfig experiment = resolve_experiment(config, options);

    const HistogramSet set = simulate(experiment, p.workers);
    write_histograms(dir, "", set);
    const CoincidenceCounts counts = extract_counts(set, p.peak_window);

    json summary;
    summary["seed"] = experiment.rng_seed;
    summary["p_drop"] = experiment.p_drop;
    summary["counts"] = counts_report(counts);
    try {
        summary["eta"] = eta_from_counts(counts);
    } catch (const std::domain_error& e) {
        summary["eta_error"] = e.what();
    }

    if (p.path_swap) {
        // The swapped run is a second acquisition: next seed in sequence.
        ExperimentConfig swapped = swap_paths(experiment);
        swapped.rng_seed = experiment.rng_seed + 1;
        const HistogramSet swapped_set = simulate(swapped, p.workers);
        write_histograms(dir, "_swapped", swapped_set);
        const CoincidenceCounts swapped_counts = extract_counts(swapped_set, p.peak_window);
        const CalibratedCounts calibrated = path_swap_calibration(counts, swapped_counts);
        summary["swapped_seed"] = swapped.rng_seed;
        summary["swapped_counts"] = counts_report(swapped_counts);
        summary["calibrated_counts"] = counts_report(calibrated.counts);
        try {
            summary["eta_calibrated"] = eta_from_counts(calibrated.counts);
        } catch (const std::domain_error& e) {
            summary["eta_calibrated_error"] = e.what();
        }
    }

    if (p.off_resonance_control) {
        ExperimentConfig off = experiment;
        off.rng_seed = experiment.rng_seed + 2;
        const HistogramSet off_set = off_resonance_control(off, p.workers);
        write_histograms(dir, "_offres", off_set);
        summary["off_resonance_seed"] = off.rng_seed;
        summary["off_resonance_counts"] = counts_report(extract_counts(off_set, p.peak_window));
    }

    write_json(dir / "coinc_summary.json", summary);
    if (!options.quiet) {
        if (summary.contains("eta"))
            std::cout << "eta = " << format_number(summary["eta"].get<double>()) << "\n";
        if (summary.contains("eta_calibrated"))
            std::cout << "eta (path-swap calibrated) = "
                      << format_number(summary["eta_calibrated"].get<double>()) << "\n";
    }
    return 0;
}

int cmd_tune(const RunConfig& config, const CommandOptions& options) {
    if (!config.tune)
        throw config_error("tune: section required for this command");
    const fs::path dir = prepare_out_dir(options);
    const TuneParams& p = *config.tune;

    TuningObjective objective;
    objective.w_pump_extinction = p.w_pump_extinction;
    objective.w_pump_drop_suppression = p.w_pump_drop_suppression;
    objective.w_signal_idler_drop_transmission = p.w_signal_idler_drop_transmission;
    objective.cap_db = p.cap_db;
    if (p.pump_nm) {
        objective.pump_wavelength = *p.pump_nm * 1e-9;
        objective.signal_wavelength = *p.signal_nm * 1e-9;
        objective.idler_wavelength = *p.idler_nm * 1e-9;
    } else {
        // lab procedure: targets are the untuned device's comb lines
        const double pump = resonance_near(config.device, p.target_nm * 1e-9);
        const double spacing =
            fsr(config.device.waveguide, config.device.geometry.circumference(), pump);
        objective.pump_wavelength = pump;
        objective.signal_wavelength = resonance_near(config.device, pump - spacing);
        objective.idler_wavelength = resonance_near(config.device, pump + spacing);
    }

    const double spacing = fsr(config.device.waveguide, config.device.geometry.circumference(),
                               objective.pump_wavelength);
    WavelengthGrid grid;
    grid.start = objective.signal_wavelength - 1.5 * spacing;
    grid.stop = objective.idler_wavelength + 1.5 * spacing;
    grid.points = 40001;

    write_spectrum_csv(dir / "spectrum_before.csv",
                       device_spectrum(config.device, grid, Excitation::input));
    const ObjectiveValue before = evaluate_objective(config.device, {0.0, 0.0, 0.0}, objective);

    TuningResult result = grid_sweep(config.device, p.heater, objective, p.steps_per_axis);
    if (p.do_refine)
        result = refine(config.device, p.heater, objective, result, p.refine_tolerance_rad);

    const DeviceSpec tuned = apply_heater_phases(config.device, result.phases);
    write_spectrum_csv(dir / "spectrum_after.csv",
                       device_spectrum(tuned, grid, Excitation::input));

    json report;
    report["targets_nm"] = {{"pump", objective.pump_wavelength * 1e9},
                            {"signal", objective.signal_wavelength * 1e9},
                            {"idler", objective.idler_wavelength * 1e9}};
    report["voltages"] = {result.voltages[0], result.voltages[1], result.voltages[2]};
    report["phases_rad"] = {result.phases[0], result.phases[1], result.phases[2]};
    report["objective_value"] = result.objective_value;
    report["diagnostics_db"] = {{"pump_extinction", result.diagnostics.pump_extinction_db},
                                {"pump_drop_suppression",
                                 result.diagnostics.pump_drop_suppression_db},
                                {"signal_idler_drop", result.diagnostics.signal_idler_drop_db}};
    report["untuned_diagnostics_db"] = {
        {"pump_extinction", before.diagnostics.pump_extinction_db},
        {"pump_drop_suppression", before.diagnostics.pump_drop_suppression_db},
        {"signal_idler_drop", before.diagnostics.signal_idler_drop_db}};
    write_json(dir / "tuning.json", report);

    if (!options.quiet)
        std::cout << "tuned: V = (" << format_number(result.voltages[0]) << ", "
                  << format_number(result.voltages[1]) << ", "
                  << format_number(result.voltages[2]) << "), pump extinction "
                  << format_number(result.diagnostics.pump_extinction_db) << " dB (untuned "
                  << format_number(before.diagnostics.pump_extinction_db) << " dB)\n";
    return 0;
}

} // namespace cli
} // namespace ringpair
