#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringpair/coincidence.hpp"
#include "ringpair/core.hpp"
#include "ringpair/pair_source.hpp"
#include "ringpair/tuning.hpp"

namespace ringpair {
namespace cli {

struct SpectrumParams {
    WavelengthGrid grid;
    double prominence_db = 3.0;
};

struct TheoryCurveParams {
    std::optional<double> t2_sq;  // default: from the gap map at drop_gap_nm
    double drop_gap_nm = 150.0;
    double ring_loss_db_per_round_trip = 0.0;
    std::optional<double> t1_sq_min; // default: critical coupling
    double t1_sq_max = 0.9996;
    std::size_t points = 400;
};

struct FiguresParams {
    double pump_nm = 1550.0;
    TheoryCurveParams curve;
    std::vector<double> gap_family_nm; // empty: no family report
};

struct CoincParams {
    ExperimentConfig experiment;
    double peak_window = 3 * 81e-12;
    bool off_resonance_control = false;
    bool path_swap = false;
    unsigned workers = 1;
    std::optional<double> routing_pump_nm; // derive p_drop from the device comb
};

struct TuneParams {
    HeaterModel heater;
    double w_pump_extinction = 3.0;
    double w_pump_drop_suppression = 1.0;
    double w_signal_idler_drop_transmission = 2.0;
    double cap_db = 60.0;
    std::optional<double> pump_nm, signal_nm, idler_nm; // explicit targets
    double target_nm = 1550.0;                          // auto targets otherwise
    std::size_t steps_per_axis = 11;
    bool do_refine = true;
    double refine_tolerance_rad = 1e-4;
};

struct RunConfig {
    DeviceSpec device;
    GapCouplingMap gap_map;
    std::optional<SpectrumParams> spectrum;
    std::optional<FiguresParams> figures;
    std::optional<CoincParams> coinc;
    std::optional<TuneParams> tune;
    std::uint64_t seed = 1;
};

// Throws config_error with a field path on any schema violation.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

} // namespace cli
} // namespace ringpair
