#pragma once

#include <array>
#include <cstddef>

#include "ringpair/core.hpp"

namespace ringpair {

// Thermal tuners: phase = coefficient * V^2 (heater power goes as V^2).
// Axis order: ring, input MZI, output MZI.
struct HeaterModel {
    std::array<double, 3> phase_per_volt_sq{0.0, 0.0, 0.0}; // rad / V^2
    double max_voltage = 10.0;

    double phase(std::size_t axis, double voltage) const {
        return phase_per_volt_sq[axis] * voltage * voltage;
    }
    double max_phase(std::size_t axis) const { return phase(axis, max_voltage); }
    void validate() const;
};

struct TuningObjective {
    double w_pump_extinction = 3.0;
    double w_pump_drop_suppression = 1.0;
    double w_signal_idler_drop_transmission = 2.0;
    double pump_wavelength = 0.0;
    double signal_wavelength = 0.0;
    double idler_wavelength = 0.0;
    double cap_db = 60.0; // per-term magnitude cap before weighting

    void validate() const;
};

struct ObjectiveDiagnostics {
    double pump_extinction_db = 0.0;        // through-port dip depth at the pump
    double pump_drop_suppression_db = 0.0;  // -(drop peak at the pump), dB
    double signal_idler_drop_db = 0.0;      // mean pair drop-routing probability, dB
};

struct ObjectiveValue {
    double value = 0.0;
    ObjectiveDiagnostics diagnostics;
};

struct TuningResult {
    std::array<double, 3> voltages{0.0, 0.0, 0.0};
    std::array<double, 3> phases{0.0, 0.0, 0.0};
    double objective_value = 0.0;
    ObjectiveDiagnostics diagnostics;
};

// Device with heater phases added on top of its static offsets. MZI phases
// are ignored for point couplers.
DeviceSpec apply_heater_phases(const DeviceSpec& device, const std::array<double, 3>& phases);

// Weighted sum of the three dB terms, each clamped to +/- cap_db. Spectra
// are evaluated on narrow windows around the pump only; the signal/idler
// term comes from the effective couplers directly.
ObjectiveValue evaluate_objective(const DeviceSpec& device, const std::array<double, 3>& phases,
                                  const TuningObjective& objective);

// Exhaustive scan of the voltage cube; deterministic, ties resolved to the
// lexicographically smallest voltage triple.
TuningResult grid_sweep(const DeviceSpec& device, const HeaterModel& heater,
                        const TuningObjective& objective, std::size_t steps_per_axis);

// Cyclic coordinate descent with a golden-section line search per phase;
// the objective never decreases. search_halfwidth bounds each line search
// around the current phase.
TuningResult refine(const DeviceSpec& device, const HeaterModel& heater,
                    const TuningObjective& objective, const TuningResult& start,
                    double tolerance_rad, double search_halfwidth_rad = 0.7);

} // namespace ringpair
