#include "config.hpp"

#include <fstream>

#include "ringpair/errors.hpp"
#include "ringpair/presets.hpp"

namespace ringpair {
namespace cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw config_error(path + ": " + message);
}

const json& member(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object())
        fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end())
        fail(path + "." + key, "missing required field");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number())
        fail(path, "expected a number");
    return j.get<double>();
}

double get_number(const json& j, const std::string& path, const std::string& key) {
    return number(member(j, path, key), path + "." + key);
}

double opt_number(const json& j, const std::string& path, const std::string& key, double dflt) {
    if (!j.is_object())
        fail(path, "expected an object");
    const auto it = j.find(key);
    return it == j.end() ? dflt : number(*it, path + "." + key);
}

bool opt_bool(const json& j, const std::string& path, const std::string& key, bool dflt) {
    const auto it = j.find(key);
    if (it == j.end())
        return dflt;
    if (!it->is_boolean())
        fail(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

std::size_t get_count(const json& j, const std::string& path, const std::string& key) {
    const json& v = member(j, path, key);
    if (!v.is_number_unsigned())
        fail(path + "." + key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

Coupler parse_coupler(const json& j, const std::string& path, const GapCouplingMap& map) {
    if (!j.is_object())
        fail(path, "expected an object");
    const json& type = member(j, path, "type");
    if (!type.is_string())
        fail(path + ".type", "expected \"point\" or \"mzi\"");
    const std::string kind = type.get<std::string>();

    const auto cross_coupling = [&](const std::string& power_key) {
        if (j.contains(power_key))
            return get_number(j, path, power_key);
        if (j.contains("gap_nm"))
            return map.power_cross_coupling(get_number(j, path, "gap_nm") * 1e-9);
        fail(path, "needs either " + power_key + " or gap_nm");
    };

    if (kind == "point") {
        const double k2 = cross_coupling("power_cross_coupling");
        if (!(k2 >= 0.0 && k2 <= 1.0))
            fail(path, "power cross-coupling must be in [0, 1]");
        return PointCoupler::from_power_cross_coupling(k2);
    }
    if (kind == "mzi") {
        const double k2 = cross_coupling("sub_power_cross_coupling");
        if (!(k2 >= 0.0 && k2 <= 1.0))
            fail(path, "sub-coupler power cross-coupling must be in [0, 1]");
        MziCouplerSpec mzi;
        mzi.sub_coupler_a = PointCoupler::from_power_cross_coupling(k2);
        mzi.sub_coupler_b = mzi.sub_coupler_a;
        mzi.bus_arm_length = get_number(j, path, "bus_arm_length_um") * 1e-6;
        mzi.ring_arm_length = get_number(j, path, "ring_arm_length_um") * 1e-6;
        mzi.tunable_phase = opt_number(j, path, "phase_rad", 0.0);
        if (!(mzi.bus_arm_length > 0.0) || !(mzi.ring_arm_length > 0.0))
            fail(path, "arm lengths must be > 0");
        return mzi;
    }
    fail(path + ".type", "unknown coupler type '" + kind + "'");
}

DeviceSpec parse_device(const json& j, const std::string& path, const GapCouplingMap& map) {
    DeviceSpec dev;
    const json& ring = member(j, path, "ring");
    dev.geometry.radius = get_number(ring, path + ".ring", "radius_um") * 1e-6;
    dev.geometry.ring_phase_offset = opt_number(ring, path + ".ring", "phase_offset_rad", 0.0);

    const json& wg = member(j, path, "waveguide");
    dev.waveguide.effective_index = opt_number(wg, path + ".waveguide", "effective_index", 2.4);
    dev.waveguide.group_index = opt_number(wg, path + ".waveguide", "group_index", 4.2);
    dev.waveguide.reference_wavelength =
        opt_number(wg, path + ".waveguide", "reference_wavelength_nm", 1550.0) * 1e-9;
    dev.waveguide.propagation_loss_db_per_m =
        opt_number(wg, path + ".waveguide", "propagation_loss_db_per_cm", 0.0) * 100.0;

    dev.input_coupler = parse_coupler(member(j, path, "input_coupler"), path + ".input_coupler", map);
    dev.output_coupler =
        parse_coupler(member(j, path, "output_coupler"), path + ".output_coupler", map);

    try {
        dev.validate();
    } catch (const config_error& e) {
        fail(path, e.what());
    }
    return dev;
}

SpectrumParams parse_spectrum(const json& j, const std::string& path) {
    SpectrumParams p;
    p.grid.start = get_number(j, path, "start_nm") * 1e-9;
    p.grid.stop = get_number(j, path, "stop_nm") * 1e-9;
    p.grid.points = get_count(j, path, "points");
    p.prominence_db = opt_number(j, path, "prominence_db", 3.0);
    try {
        p.grid.validate();
    } catch (const config_error& e) {
        fail(path, e.what());
    }
    if (!(p.prominence_db > 0.0))
        fail(path + ".prominence_db", "must be > 0");
    return p;
}

FiguresParams parse_figures(const json& j, const std::string& path) {
    FiguresParams p;
    p.pump_nm = opt_number(j, path, "pump_nm", 1550.0);
    if (j.contains("theory_curve")) {
        const json& c = j.at("theory_curve");
        const std::string cp = path + ".theory_curve";
        if (c.contains("t2_sq"))
            p.curve.t2_sq = get_number(c, cp, "t2_sq");
        p.curve.drop_gap_nm = opt_number(c, cp, "drop_gap_nm", 150.0);
        p.curve.ring_loss_db_per_round_trip =
            opt_number(c, cp, "ring_loss_db_per_round_trip", 0.0);
        if (c.contains("t1_sq_min"))
            p.curve.t1_sq_min = get_number(c, cp, "t1_sq_min");
        p.curve.t1_sq_max = opt_number(c, cp, "t1_sq_max", 0.9996);
        if (c.contains("points"))
            p.curve.points = get_count(c, cp, "points");
        if (p.curve.points < 2)
            fail(cp + ".points", "need at least 2 sweep points");
    }
    if (j.contains("gap_family_nm")) {
        const json& fam = j.at("gap_family_nm");
        if (!fam.is_array())
            fail(path + ".gap_family_nm", "expected an array of gaps in nm");
        for (const auto& g : fam)
            p.gap_family_nm.push_back(number(g, path + ".gap_family_nm[]"));
    }
    return p;
}

CoincParams parse_coinc(const json& j, const std::string& path) {
    CoincParams p;
    ExperimentConfig& e = p.experiment;
    e.pair_rate_ring = get_number(j, path, "pair_rate_ring_hz");
    e.pair_rate_bus_background = opt_number(j, path, "pair_rate_bus_hz", 0.0);
    e.p_drop = opt_number(j, path, "p_drop", 0.5);
    e.p_thru = 1.0 - e.p_drop;
    if (j.contains("path_efficiencies")) {
        const json& eff = j.at("path_efficiencies");
        if (!eff.is_array() || eff.size() != 4)
            fail(path + ".path_efficiencies",
                 "expected [thru_signal, thru_idler, drop_signal, drop_idler]");
        for (std::size_t i = 0; i < 4; ++i)
            e.path_efficiencies[i] = number(eff[i], path + ".path_efficiencies[]");
    }
    e.detector_efficiency = opt_number(j, path, "detector_efficiency", 1.0);
    e.dark_count_rate = opt_number(j, path, "dark_count_rate_hz", 0.0);
    e.timing_jitter_sigma = opt_number(j, path, "timing_jitter_ps", 0.0) * 1e-12;
    e.bin_width = opt_number(j, path, "bin_width_ps", 81.0) * 1e-12;
    e.integration_time = get_number(j, path, "integration_time_s");
    e.histogram_span = opt_number(j, path, "histogram_span_ns", 10.0) * 1e-9;
    p.peak_window = opt_number(j, path, "peak_window_ps", 243.0) * 1e-12;
    p.off_resonance_control = opt_bool(j, path, "off_resonance_control", false);
    p.path_swap = opt_bool(j, path, "path_swap", false);
    p.workers = static_cast<unsigned>(opt_number(j, path, "workers", 1.0));
    if (j.contains("routing_pump_nm"))
        p.routing_pump_nm = get_number(j, path, "routing_pump_nm");
    try {
        e.validate();
    } catch (const config_error& err) {
        fail(path, err.what());
    }
    return p;
}

TuneParams parse_tune(const json& j, const std::string& path) {
    TuneParams p;
    if (j.contains("heater")) {
        const json& h = j.at("heater");
        const std::string hp = path + ".heater";
        if (h.contains("phase_per_volt_sq")) {
            const json& c = h.at("phase_per_volt_sq");
            if (!c.is_array() || c.size() != 3)
                fail(hp + ".phase_per_volt_sq", "expected [ring, mzi1, mzi2]");
            for (std::size_t i = 0; i < 3; ++i)
                p.heater.phase_per_volt_sq[i] = number(c[i], hp + ".phase_per_volt_sq[]");
        } else {
            p.heater = presets::table1_heater();
        }
        p.heater.max_voltage = opt_number(h, hp, "max_voltage", 10.0);
    } else {
        p.heater = presets::table1_heater();
    }

    if (j.contains("objective")) {
        const json& o = j.at("objective");
        const std::string op = path + ".objective";
        if (o.contains("weights")) {
            const json& w = o.at("weights");
            if (!w.is_array() || w.size() != 3)
                fail(op + ".weights", "expected [extinction, suppression, si_transmission]");
            p.w_pump_extinction = number(w[0], op + ".weights[0]");
            p.w_pump_drop_suppression = number(w[1], op + ".weights[1]");
            p.w_signal_idler_drop_transmission = number(w[2], op + ".weights[2]");
        }
        p.cap_db = opt_number(o, op, "cap_db", 60.0);
        if (o.contains("pump_nm")) {
            p.pump_nm = get_number(o, op, "pump_nm");
            p.signal_nm = get_number(o, op, "signal_nm");
            p.idler_nm = get_number(o, op, "idler_nm");
        }
        p.target_nm = opt_number(o, op, "target_nm", 1550.0);
    }
    p.steps_per_axis = j.contains("steps_per_axis")
                           ? get_count(j, path, "steps_per_axis")
                           : std::size_t{11};
    p.do_refine = opt_bool(j, path, "refine", true);
    p.refine_tolerance_rad = opt_number(j, path, "refine_tolerance_rad", 1e-4);
    if (p.w_pump_extinction == 0.0 && p.w_pump_drop_suppression == 0.0 &&
        p.w_signal_idler_drop_transmission == 0.0)
        fail(path + ".objective.weights", "weights must not all be zero");
    return p;
}

} // namespace

RunConfig parse_run_config(const json& j) {
    if (!j.is_object())
        fail("config", "expected a JSON object");
    RunConfig cfg;
    cfg.gap_map = presets::default_gap_map();
    if (j.contains("gap_map")) {
        const json& m = j.at("gap_map");
        cfg.gap_map.kappa0 = get_number(m, "gap_map", "kappa0");
        cfg.gap_map.decay_length = get_number(m, "gap_map", "decay_length_nm") * 1e-9;
        if (!(cfg.gap_map.kappa0 > 0.0) || !(cfg.gap_map.decay_length > 0.0))
            fail("gap_map", "kappa0 and decay_length_nm must be > 0");
    }
    cfg.device = parse_device(member(j, "config", "device"), "device", cfg.gap_map);
    if (j.contains("spectrum"))
        cfg.spectrum = parse_spectrum(j.at("spectrum"), "spectrum");
    if (j.contains("figures"))
        cfg.figures = parse_figures(j.at("figures"), "figures");
    if (j.contains("coinc"))
        cfg.coinc = parse_coinc(j.at("coinc"), "coinc");
    if (j.contains("tune"))
        cfg.tune = parse_tune(j.at("tune"), "tune");
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned())
            fail("seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("config file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_run_config(j);
}

namespace {

RunConfig symmetric_ring_preset() {
    RunConfig cfg;
    cfg.gap_map = presets::default_gap_map();
    cfg.device = presets::symmetric_ring();
    cfg.spectrum = SpectrumParams{{1540e-9, 1560e-9, 20001}, 3.0};
    FiguresParams fig;
    fig.pump_nm = 1550.0;
    cfg.figures = fig;
    CoincParams coinc;
    coinc.experiment.pair_rate_ring = 2e4;
    coinc.experiment.integration_time = 5.0;
    cfg.coinc = coinc;
    return cfg;
}

RunConfig fig4_family_preset() {
    RunConfig cfg;
    cfg.gap_map = presets::default_gap_map();
    cfg.device = presets::fig4_device(350.0);
    cfg.spectrum = SpectrumParams{{1540e-9, 1560e-9, 20001}, 3.0};
    FiguresParams fig;
    fig.pump_nm = 1550.0;
    fig.gap_family_nm = {150.0, 225.0, 300.0, 350.0};
    cfg.figures = fig;
    return cfg;
}

RunConfig table1_dmzr_preset() {
    RunConfig cfg;
    cfg.gap_map = presets::default_gap_map();
    cfg.device = presets::table1_dmzr();
    cfg.spectrum = SpectrumParams{{1540e-9, 1565e-9, 50001}, 1.0};
    TuneParams tune;
    tune.heater = presets::table1_heater();
    tune.target_nm = 1550.0;
    cfg.tune = tune;
    CoincParams coinc;
    coinc.experiment.pair_rate_ring = 5e4;
    coinc.experiment.integration_time = 5.0;
    coinc.experiment.path_efficiencies = {1.0, 0.92, 0.95, 0.9};
    coinc.path_swap = true;
    coinc.routing_pump_nm = 1550.0;
    cfg.coinc = coinc;
    return cfg;
}

RunConfig ideal_dmzr_preset() {
    RunConfig cfg;
    cfg.gap_map = presets::default_gap_map();
    cfg.device = presets::tuned_for_alternation(presets::ideal_dmzr(), 1550e-9);
    cfg.spectrum = SpectrumParams{{1528e-9, 1572e-9, 88001}, 0.3};
    return cfg;
}

} // namespace

RunConfig preset_config(const std::string& name) {
    if (name == "symmetric-ring")
        return symmetric_ring_preset();
    if (name == "fig4-family")
        return fig4_family_preset();
    if (name == "table1-dmzr")
        return table1_dmzr_preset();
    if (name == "ideal-dmzr")
        return ideal_dmzr_preset();
    throw config_error("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"symmetric-ring", "fig4-family", "table1-dmzr", "ideal-dmzr"};
}

} // namespace cli
} // namespace ringpair
