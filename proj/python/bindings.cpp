#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ringpair/coincidence.hpp"
#include "ringpair/core.hpp"
#include "ringpair/pair_source.hpp"
#include "ringpair/presets.hpp"
#include "ringpair/transfer.hpp"
#include "ringpair/tuning.hpp"

namespace py = pybind11;
using namespace ringpair;

namespace {

std::vector<double> grid_wavelengths(const WavelengthGrid& g) {
    std::vector<double> out(g.points);
    for (std::size_t i = 0; i < g.points; ++i)
        out[i] = g.wavelength(i);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Microring photon-pair source toolkit";

    py::class_<WaveguideModel>(m, "WaveguideModel")
        .def(py::init<>())
        .def_readwrite("effective_index", &WaveguideModel::effective_index)
        .def_readwrite("group_index", &WaveguideModel::group_index)
        .def_readwrite("reference_wavelength", &WaveguideModel::reference_wavelength)
        .def_readwrite("propagation_loss_db_per_m", &WaveguideModel::propagation_loss_db_per_m)
        .def("effective_index_at", &WaveguideModel::effective_index_at);

    py::class_<PropagationResult>(m, "PropagationResult")
        .def_readonly("phase_rad", &PropagationResult::phase_rad)
        .def_readonly("amplitude", &PropagationResult::amplitude)
        .def("factor", &PropagationResult::factor);

    m.def("propagation_phase", &propagation_phase, py::arg("waveguide"), py::arg("length"),
          py::arg("wavelength"));
    m.def("fsr", &fsr, py::arg("waveguide"), py::arg("round_trip_length"), py::arg("wavelength"));

    py::class_<PointCoupler>(m, "PointCoupler")
        .def(py::init<>())
        .def_static("from_power_cross_coupling", &PointCoupler::from_power_cross_coupling)
        .def_readwrite("self_coupling_t", &PointCoupler::self_coupling_t)
        .def_readwrite("cross_coupling_kappa", &PointCoupler::cross_coupling_kappa);

    py::class_<MziCouplerSpec>(m, "MziCouplerSpec")
        .def(py::init<>())
        .def_readwrite("sub_coupler_a", &MziCouplerSpec::sub_coupler_a)
        .def_readwrite("sub_coupler_b", &MziCouplerSpec::sub_coupler_b)
        .def_readwrite("bus_arm_length", &MziCouplerSpec::bus_arm_length)
        .def_readwrite("ring_arm_length", &MziCouplerSpec::ring_arm_length)
        .def_readwrite("tunable_phase", &MziCouplerSpec::tunable_phase)
        .def("path_length_difference", &MziCouplerSpec::path_length_difference);

    py::class_<RingGeometry>(m, "RingGeometry")
        .def(py::init<>())
        .def_readwrite("radius", &RingGeometry::radius)
        .def_readwrite("ring_phase_offset", &RingGeometry::ring_phase_offset)
        .def("circumference", &RingGeometry::circumference);

    py::class_<DeviceSpec>(m, "DeviceSpec")
        .def(py::init<>())
        .def_readwrite("geometry", &DeviceSpec::geometry)
        .def_readwrite("waveguide", &DeviceSpec::waveguide)
        .def_readwrite("input_coupler", &DeviceSpec::input_coupler)
        .def_readwrite("output_coupler", &DeviceSpec::output_coupler)
        .def("validate", &DeviceSpec::validate);

    py::class_<WavelengthGrid>(m, "WavelengthGrid")
        .def(py::init<>())
        .def(py::init([](double start, double stop, std::size_t points) {
                 WavelengthGrid g{start, stop, points};
                 g.validate();
                 return g;
             }),
             py::arg("start"), py::arg("stop"), py::arg("points"))
        .def_readwrite("start", &WavelengthGrid::start)
        .def_readwrite("stop", &WavelengthGrid::stop)
        .def_readwrite("points", &WavelengthGrid::points)
        .def("wavelengths", &grid_wavelengths);

    py::class_<Coupler2x2>(m, "Coupler2x2")
        .def_readonly("bus_bus", &Coupler2x2::bus_bus)
        .def_readonly("bus_ring", &Coupler2x2::bus_ring)
        .def_readonly("ring_bus", &Coupler2x2::ring_bus)
        .def_readonly("ring_ring", &Coupler2x2::ring_ring)
        .def("power_cross_coupling", &Coupler2x2::power_cross_coupling)
        .def("power_self_coupling", &Coupler2x2::power_self_coupling);

    m.def("effective_coupler", &effective_coupler, py::arg("spec"), py::arg("wavelength"),
          py::arg("waveguide"));

    py::enum_<Excitation>(m, "Excitation")
        .value("input", Excitation::input)
        .value("add", Excitation::add);

    py::class_<ComplexSpectrum>(m, "ComplexSpectrum")
        .def_readonly("grid", &ComplexSpectrum::grid)
        .def_readonly("through_amplitude", &ComplexSpectrum::through_amplitude)
        .def_readonly("drop_amplitude", &ComplexSpectrum::drop_amplitude)
        .def("port_pair", &ComplexSpectrum::port_pair)
        .def("through_power", &ComplexSpectrum::through_power)
        .def("drop_power", &ComplexSpectrum::drop_power);

    m.def("device_spectrum", &device_spectrum, py::arg("device"), py::arg("grid"),
          py::arg("excitation") = Excitation::input);

    py::class_<ResonanceList>(m, "ResonanceList")
        .def_readonly("wavelengths", &ResonanceList::wavelengths)
        .def_readonly("depths_db", &ResonanceList::depths_db)
        .def_readonly("drop_peaks_db", &ResonanceList::drop_peaks_db)
        .def_readonly("suppressed", &ResonanceList::suppressed)
        .def("__len__", &ResonanceList::size);

    m.def("find_resonances", &find_resonances, py::arg("spectrum"), py::arg("prominence_db"));
    m.def("extinction_db", &extinction_db, py::arg("spectrum"), py::arg("wavelength"));

    py::class_<SfwmTriplet>(m, "SfwmTriplet")
        .def_readonly("pump", &SfwmTriplet::pump)
        .def_readonly("signal", &SfwmTriplet::signal)
        .def_readonly("idler", &SfwmTriplet::idler);

    m.def("select_sfwm_triplet", &select_sfwm_triplet, py::arg("resonances"),
          py::arg("pump_target"));
    m.def("round_trip_phase", &round_trip_phase, py::arg("device"), py::arg("wavelength"));
    m.def("resonance_near", &resonance_near, py::arg("device"), py::arg("target_wavelength"));

    m.def("p_drop", &p_drop, py::arg("t1_sq"), py::arg("t2_sq"));
    m.def("coincidence_ratio", &coincidence_ratio, py::arg("t1_sq"), py::arg("t2_sq"));

    py::class_<RoutingProbabilities>(m, "RoutingProbabilities")
        .def_readonly("p_drop", &RoutingProbabilities::p_drop)
        .def_readonly("p_thru", &RoutingProbabilities::p_thru)
        .def_readonly("p_loss", &RoutingProbabilities::p_loss);
    m.def("routing_probabilities", &routing_probabilities, py::arg("t1_sq"), py::arg("t2_sq"),
          py::arg("round_trip_amplitude_sq") = 1.0);

    m.def("buildup_factor", &buildup_factor, py::arg("device"), py::arg("pump_wavelength"));
    m.def("peak_buildup", &peak_buildup, py::arg("device"), py::arg("target_wavelength"));
    m.def("relative_pump_power", &relative_pump_power, py::arg("device"), py::arg("reference"),
          py::arg("pump_wavelength"));
    m.def("drop_routing_probability", &drop_routing_probability, py::arg("device"),
          py::arg("wavelength"));

    py::class_<TheoryCurvePoint>(m, "TheoryCurvePoint")
        .def_readonly("t1_sq", &TheoryCurvePoint::t1_sq)
        .def_readonly("relative_pump_power", &TheoryCurvePoint::relative_pump_power)
        .def_readonly("eta_coinc", &TheoryCurvePoint::eta_coinc);
    m.def("theory_curve", &theory_curve, py::arg("t2_sq"), py::arg("ring_loss_db_per_round_trip"),
          py::arg("t1_sq_sweep"));
    m.def("eta_at_pump_factor", &eta_at_pump_factor, py::arg("curve"), py::arg("pump_factor"));

    py::class_<GapCouplingMap>(m, "GapCouplingMap")
        .def(py::init<>())
        .def_readwrite("kappa0", &GapCouplingMap::kappa0)
        .def_readwrite("decay_length", &GapCouplingMap::decay_length)
        .def("kappa", &GapCouplingMap::kappa)
        .def("power_cross_coupling", &GapCouplingMap::power_cross_coupling)
        .def("t_sq", &GapCouplingMap::t_sq);

    py::class_<GapObservation>(m, "GapObservation")
        .def(py::init([](double gap, double t_sq) { return GapObservation{gap, t_sq}; }),
             py::arg("gap"), py::arg("t_sq"))
        .def_readwrite("gap", &GapObservation::gap)
        .def_readwrite("t_sq", &GapObservation::t_sq);

    py::class_<GapFitResult>(m, "GapFitResult")
        .def_readonly("map", &GapFitResult::map)
        .def_readonly("rms_log_residual", &GapFitResult::rms_log_residual)
        .def_readonly("poor_fit", &GapFitResult::poor_fit);
    m.def("fit_gap_map", &fit_gap_map, py::arg("observations"));

    py::class_<PairSourceFigures>(m, "PairSourceFigures")
        .def_readonly("p_drop", &PairSourceFigures::p_drop)
        .def_readonly("p_thru", &PairSourceFigures::p_thru)
        .def_readonly("eta_coinc", &PairSourceFigures::eta_coinc)
        .def_readonly("buildup_factor", &PairSourceFigures::buildup_factor)
        .def_readonly("relative_pump_power", &PairSourceFigures::relative_pump_power);
    m.def(
        "device_figures",
        [](const DeviceSpec& device, double pump, double signal, double idler) {
            return device_figures(device, pump, signal, idler);
        },
        py::arg("device"), py::arg("pump_wavelength"), py::arg("signal_wavelength"),
        py::arg("idler_wavelength"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("pair_rate_ring", &ExperimentConfig::pair_rate_ring)
        .def_readwrite("pair_rate_bus_background", &ExperimentConfig::pair_rate_bus_background)
        .def_readwrite("p_drop", &ExperimentConfig::p_drop)
        .def_readwrite("p_thru", &ExperimentConfig::p_thru)
        .def_readwrite("path_efficiencies", &ExperimentConfig::path_efficiencies)
        .def_readwrite("detector_efficiency", &ExperimentConfig::detector_efficiency)
        .def_readwrite("dark_count_rate", &ExperimentConfig::dark_count_rate)
        .def_readwrite("timing_jitter_sigma", &ExperimentConfig::timing_jitter_sigma)
        .def_readwrite("bin_width", &ExperimentConfig::bin_width)
        .def_readwrite("integration_time", &ExperimentConfig::integration_time)
        .def_readwrite("histogram_span", &ExperimentConfig::histogram_span)
        .def_readwrite("rng_seed", &ExperimentConfig::rng_seed);

    py::class_<CoincidenceHistogram>(m, "CoincidenceHistogram")
        .def_readonly("channel_pair", &CoincidenceHistogram::channel_pair)
        .def_readonly("bin_width", &CoincidenceHistogram::bin_width)
        .def_readonly("span", &CoincidenceHistogram::span)
        .def_readonly("counts", &CoincidenceHistogram::counts)
        .def("bins", &CoincidenceHistogram::bins)
        .def("bin_center", &CoincidenceHistogram::bin_center)
        .def("total", &CoincidenceHistogram::total);

    py::class_<HistogramSet>(m, "HistogramSet")
        .def_readonly("dd", &HistogramSet::dd)
        .def_readonly("tt", &HistogramSet::tt)
        .def_readonly("td", &HistogramSet::td)
        .def_readonly("dt", &HistogramSet::dt);

    m.def("simulate", &simulate, py::arg("config"), py::arg("workers") = 1);
    m.def("off_resonance_control", &off_resonance_control, py::arg("config"),
          py::arg("workers") = 1);

    py::class_<CoincidenceCounts>(m, "CoincidenceCounts")
        .def(py::init<>())
        .def_readwrite("c_drop_drop", &CoincidenceCounts::c_drop_drop)
        .def_readwrite("c_thru_thru", &CoincidenceCounts::c_thru_thru)
        .def_readwrite("c_thru_drop", &CoincidenceCounts::c_thru_drop)
        .def_readwrite("c_drop_thru", &CoincidenceCounts::c_drop_thru)
        .def_readonly("accidental_estimates", &CoincidenceCounts::accidental_estimates)
        .def_readonly("raw_peaks", &CoincidenceCounts::raw_peaks)
        .def_readonly("floored", &CoincidenceCounts::floored)
        .def("split", &CoincidenceCounts::split)
        .def("significance", &CoincidenceCounts::significance);

    m.def("extract_counts", &extract_counts, py::arg("histograms"), py::arg("peak_window"));
    m.def("eta_from_counts", &eta_from_counts, py::arg("counts"));

    py::class_<CalibratedCounts>(m, "CalibratedCounts")
        .def_readonly("counts", &CalibratedCounts::counts)
        .def_readonly("fallback", &CalibratedCounts::fallback);
    m.def("path_swap_calibration", &path_swap_calibration, py::arg("run_a"), py::arg("run_b"));
    m.def("swap_paths", &swap_paths, py::arg("config"));

    py::class_<HeaterModel>(m, "HeaterModel")
        .def(py::init<>())
        .def_readwrite("phase_per_volt_sq", &HeaterModel::phase_per_volt_sq)
        .def_readwrite("max_voltage", &HeaterModel::max_voltage)
        .def("phase", &HeaterModel::phase)
        .def("max_phase", &HeaterModel::max_phase);

    py::class_<TuningObjective>(m, "TuningObjective")
        .def(py::init<>())
        .def_readwrite("w_pump_extinction", &TuningObjective::w_pump_extinction)
        .def_readwrite("w_pump_drop_suppression", &TuningObjective::w_pump_drop_suppression)
        .def_readwrite("w_signal_idler_drop_transmission",
                       &TuningObjective::w_signal_idler_drop_transmission)
        .def_readwrite("pump_wavelength", &TuningObjective::pump_wavelength)
        .def_readwrite("signal_wavelength", &TuningObjective::signal_wavelength)
        .def_readwrite("idler_wavelength", &TuningObjective::idler_wavelength)
        .def_readwrite("cap_db", &TuningObjective::cap_db);

    py::class_<ObjectiveDiagnostics>(m, "ObjectiveDiagnostics")
        .def_readonly("pump_extinction_db", &ObjectiveDiagnostics::pump_extinction_db)
        .def_readonly("pump_drop_suppression_db",
                      &ObjectiveDiagnostics::pump_drop_suppression_db)
        .def_readonly("signal_idler_drop_db", &ObjectiveDiagnostics::signal_idler_drop_db);

    py::class_<ObjectiveValue>(m, "ObjectiveValue")
        .def_readonly("value", &ObjectiveValue::value)
        .def_readonly("diagnostics", &ObjectiveValue::diagnostics);

    py::class_<TuningResult>(m, "TuningResult")
        .def(py::init<>())
        .def_readwrite("voltages", &TuningResult::voltages)
        .def_readwrite("phases", &TuningResult::phases)
        .def_readonly("objective_value", &TuningResult::objective_value)
        .def_readonly("diagnostics", &TuningResult::diagnostics);

    m.def("apply_heater_phases", &apply_heater_phases, py::arg("device"), py::arg("phases"));
    m.def("evaluate_objective", &evaluate_objective, py::arg("device"), py::arg("phases"),
          py::arg("objective"));
    m.def("grid_sweep", &grid_sweep, py::arg("device"), py::arg("heater"), py::arg("objective"),
          py::arg("steps_per_axis"));
    m.def("refine", &refine, py::arg("device"), py::arg("heater"), py::arg("objective"),
          py::arg("start"), py::arg("tolerance_rad"), py::arg("search_halfwidth_rad") = 0.7);

    auto presets_mod = m.def_submodule("presets", "device and experiment presets");
    presets_mod.def("default_gap_map", &presets::default_gap_map);
    presets_mod.def("symmetric_ring", &presets::symmetric_ring);
    presets_mod.def("fig4_device", py::overload_cast<double>(&presets::fig4_device),
                    py::arg("input_gap_nm"));
    presets_mod.def("table1_dmzr", &presets::table1_dmzr);
    presets_mod.def("table1_heater", &presets::table1_heater);
    presets_mod.def("table1_objective", &presets::table1_objective, py::arg("pump_wavelength"),
                    py::arg("signal_wavelength"), py::arg("idler_wavelength"));
    presets_mod.def("ideal_dmzr", &presets::ideal_dmzr);
    presets_mod.def("tuned_for_alternation", &presets::tuned_for_alternation, py::arg("device"),
                    py::arg("target_wavelength"));
}
