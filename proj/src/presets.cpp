#include "ringpair/presets.hpp"

#include <cmath>

#include "ringpair/transfer.hpp"

namespace ringpair {
namespace presets {

namespace {

double wrap_2pi(double phase) {
    phase = std::fmod(phase, two_pi);
    return phase < 0.0 ? phase + two_pi : phase;
}

double arm_phase_difference(const MziCouplerSpec& mzi, const WaveguideModel& wg,
                            double wavelength) {
    const double bus = propagation_phase(wg, mzi.bus_arm_length, wavelength).phase_rad;
    const double ring = propagation_phase(wg, mzi.ring_arm_length, wavelength).phase_rad;
    return bus - ring + mzi.tunable_phase;
}

} // namespace

GapCouplingMap default_gap_map() {
    GapCouplingMap map;
    map.decay_length = 110e-9;
    map.kappa0 = std::sqrt(1.0 - 0.98 * 0.98) * std::exp(150e-9 / map.decay_length);
    return map;
}

DeviceSpec symmetric_ring() {
    return fig4_device(150.0);
}

DeviceSpec fig4_device(double input_gap_nm) {
    return fig4_device(input_gap_nm, default_gap_map());
}

DeviceSpec fig4_device(double input_gap_nm, const GapCouplingMap& map) {
    DeviceSpec dev;
    dev.geometry.radius = 18.5e-6;
    dev.waveguide = WaveguideModel{};
    dev.input_coupler =
        PointCoupler::from_power_cross_coupling(map.power_cross_coupling(input_gap_nm * 1e-9));
    dev.output_coupler =
        PointCoupler::from_power_cross_coupling(map.power_cross_coupling(150e-9));
    return dev;
}

DeviceSpec table1_dmzr() {
    DeviceSpec dev;
    dev.geometry.radius = 15e-6;
    dev.geometry.ring_phase_offset = 0.03 * two_pi;
    dev.waveguide = WaveguideModel{};
    dev.waveguide.propagation_loss_db_per_m = 300.0; // 3 dB/cm

    const double ring_arm = 20e-6;
    MziCouplerSpec input;
    input.sub_coupler_a = PointCoupler::from_power_cross_coupling(0.0017);
    input.sub_coupler_b = input.sub_coupler_a;
    input.ring_arm_length = ring_arm;
    input.bus_arm_length = ring_arm + 47.8e-6;

    MziCouplerSpec output;
    const double k2_out = default_gap_map().power_cross_coupling(175e-9);
    output.sub_coupler_a = PointCoupler::from_power_cross_coupling(k2_out);
    output.sub_coupler_b = output.sub_coupler_a;
    output.ring_arm_length = ring_arm;
    output.bus_arm_length = ring_arm + 48.0e-6;

    dev.input_coupler = input;
    dev.output_coupler = output;
    return dev;
}

HeaterModel table1_heater() {
    HeaterModel h;
    const double coeff = 1.05 * two_pi / 100.0; // 10 V spans just over 2 pi
    h.phase_per_volt_sq = {coeff, coeff, coeff};
    h.max_voltage = 10.0;
    return h;
}

TuningObjective table1_objective(double pump_wavelength, double signal_wavelength,
                                 double idler_wavelength) {
    TuningObjective obj;
    obj.w_pump_extinction = 3.0;
    obj.w_pump_drop_suppression = 1.0;
    obj.w_signal_idler_drop_transmission = 2.0;
    obj.pump_wavelength = pump_wavelength;
    obj.signal_wavelength = signal_wavelength;
    obj.idler_wavelength = idler_wavelength;
    return obj;
}

DeviceSpec ideal_dmzr() {
    DeviceSpec dev;
    dev.geometry.radius = 15e-6;
    dev.waveguide = WaveguideModel{};
    dev.waveguide.propagation_loss_db_per_m = 400.0; // 4 dB/cm

    const double circumference = dev.geometry.circumference();
    const double ring_arm = 0.2 * circumference;
    MziCouplerSpec coupler;
    coupler.sub_coupler_a = PointCoupler::from_power_cross_coupling(0.06);
    coupler.sub_coupler_b = coupler.sub_coupler_a;
    coupler.ring_arm_length = ring_arm;
    coupler.bus_arm_length = ring_arm + 0.5 * circumference; // fringe period = 2 FSR

    dev.input_coupler = coupler;
    dev.output_coupler = coupler;
    return dev;
}

DeviceSpec tuned_for_alternation(DeviceSpec device, double target_wavelength) {
    auto& input = std::get<MziCouplerSpec>(device.input_coupler);
    auto& output = std::get<MziCouplerSpec>(device.output_coupler);
    // Phase targets move the comb slightly; a few rounds settle the
    // alignment.
    for (int iteration = 0; iteration < 4; ++iteration) {
        const double resonance = resonance_near(device, target_wavelength);
        const double base_in = arm_phase_difference(input, device.waveguide, resonance) -
                               input.tunable_phase;
        const double base_out = arm_phase_difference(output, device.waveguide, resonance) -
                                output.tunable_phase;
        input.tunable_phase = wrap_2pi(0.5 * 3.14159265358979323846 - base_in);
        output.tunable_phase = wrap_2pi(3.14159265358979323846 - base_out);
    }
    return device;
}

} // namespace presets
} // namespace ringpair
