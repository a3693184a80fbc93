#include "ringpair/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringpair/errors.hpp"
#include "ringpair/pair_source.hpp"
#include "ringpair/transfer.hpp"

namespace ringpair {

namespace {

double to_db(double power) {
    return 10.0 * std::log10(std::max(power, 1e-300));
}

struct WindowScan {
    double min_thru = 1.0;
    double max_drop = 0.0;
    double min_thru_wavelength = 0.0;
};

WindowScan scan_window(const DeviceSpec& device, double center, double half, std::size_t n) {
    WindowScan w;
    w.min_thru = std::numeric_limits<double>::infinity();
    const double step = n > 1 ? 2.0 * half / static_cast<double>(n - 1) : 0.0;
    const double circumference = device.geometry.circumference();
    const double seg = 0.5 * (circumference - coupler_ring_arm_length(device.input_coupler) -
                              coupler_ring_arm_length(device.output_coupler));
    const complex heater = std::polar(1.0, device.geometry.ring_phase_offset);
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = center - half + static_cast<double>(i) * step;
        const Coupler2x2 m_in = coupler_matrix(device.input_coupler, lambda, device.waveguide);
        const Coupler2x2 m_out = coupler_matrix(device.output_coupler, lambda, device.waveguide);
        const complex p = propagation_phase(device.waveguide, seg, lambda).factor();
        const complex loop = m_in.ring_ring * m_out.ring_ring * p * p * heater;
        const complex ring_field = m_in.ring_bus / (1.0 - loop);
        const complex thru =
            m_in.bus_bus + m_in.bus_ring * p * m_out.ring_ring * p * heater * ring_field;
        const complex drop = m_out.bus_ring * p * heater * ring_field;
        if (std::norm(thru) < w.min_thru) {
            w.min_thru = std::norm(thru);
            w.min_thru_wavelength = lambda;
        }
        w.max_drop = std::max(w.max_drop, std::norm(drop));
    }
    return w;
}

template <typename F>
double golden_section_max(F&& f, double lo, double hi, double xtol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

void HeaterModel::validate() const {
    for (const double c : phase_per_volt_sq)
        if (c < 0.0)
            throw config_error("heater: phase coefficients must be >= 0");
    if (!(max_voltage > 0.0))
        throw config_error("heater: max_voltage must be > 0");
}

void TuningObjective::validate() const {
    if (w_pump_extinction < 0.0 || w_pump_drop_suppression < 0.0 ||
        w_signal_idler_drop_transmission < 0.0)
        throw std::invalid_argument("objective: weights must be >= 0");
    if (w_pump_extinction == 0.0 && w_pump_drop_suppression == 0.0 &&
        w_signal_idler_drop_transmission == 0.0)
        throw std::invalid_argument("objective: weights must not all be zero");
    if (!(pump_wavelength > 0.0) || !(signal_wavelength > 0.0) || !(idler_wavelength > 0.0))
        throw std::invalid_argument("objective: target wavelengths must be > 0");
    if (!(cap_db > 0.0))
        throw std::invalid_argument("objective: cap_db must be > 0");
}

DeviceSpec apply_heater_phases(const DeviceSpec& device, const std::array<double, 3>& phases) {
    DeviceSpec tuned = device;
    tuned.geometry.ring_phase_offset += phases[0];
    if (auto* in = std::get_if<MziCouplerSpec>(&tuned.input_coupler))
        in->tunable_phase += phases[1];
    if (auto* out = std::get_if<MziCouplerSpec>(&tuned.output_coupler))
        out->tunable_phase += phases[2];
    return tuned;
}

ObjectiveValue evaluate_objective(const DeviceSpec& device, const std::array<double, 3>& phases,
                                  const TuningObjective& objective) {
    objective.validate();
    const DeviceSpec dev = apply_heater_phases(device, phases);
    const double lambda_p = objective.pump_wavelength;
    const double free_range = fsr(dev.waveguide, dev.geometry.circumference(), lambda_p);

    // Coarse pass locates the dip, a fine pass at the linewidth scale
    // resolves its depth.
    const double coarse_half = free_range / 16.0;
    WindowScan coarse = scan_window(dev, lambda_p, coarse_half, 161);
    const double k1 =
        coupler_matrix(dev.input_coupler, lambda_p, dev.waveguide).power_cross_coupling();
    const double k2 =
        coupler_matrix(dev.output_coupler, lambda_p, dev.waveguide).power_cross_coupling();
    const double round_trip_amp_sq = std::pow(
        10.0, -dev.waveguide.propagation_loss_db_per_m * dev.geometry.circumference() / 10.0);
    const double linewidth =
        free_range * (k1 + k2 + (1.0 - round_trip_amp_sq)) / (2.0 * two_pi);

    const double fine_half = std::max(3.0 * linewidth, coarse_half / 40.0);
    const WindowScan fine = scan_window(dev, coarse.min_thru_wavelength, fine_half, 81);

    ObjectiveDiagnostics diag;
    diag.pump_extinction_db = -to_db(std::min(coarse.min_thru, fine.min_thru));
    diag.pump_drop_suppression_db = -to_db(std::max(coarse.max_drop, fine.max_drop));
    diag.signal_idler_drop_db =
        0.5 * (to_db(drop_routing_probability(dev, objective.signal_wavelength)) +
               to_db(drop_routing_probability(dev, objective.idler_wavelength)));

    const auto cap = [&](double v) { return std::clamp(v, -objective.cap_db, objective.cap_db); };
    ObjectiveValue out;
    out.diagnostics = diag;
    out.value = objective.w_pump_extinction * cap(diag.pump_extinction_db) +
                objective.w_pump_drop_suppression * cap(diag.pump_drop_suppression_db) +
                objective.w_signal_idler_drop_transmission * cap(diag.signal_idler_drop_db);
    return out;
}

TuningResult grid_sweep(const DeviceSpec& device, const HeaterModel& heater,
                        const TuningObjective& objective, std::size_t steps_per_axis) {
    heater.validate();
    objective.validate();
    if (steps_per_axis < 2)
        throw std::invalid_argument("grid_sweep: need at least 2 steps per axis");

    const double dv = heater.max_voltage / static_cast<double>(steps_per_axis - 1);
    TuningResult best;
    bool first = true;
    for (std::size_t i = 0; i < steps_per_axis; ++i) {
        for (std::size_t j = 0; j < steps_per_axis; ++j) {
            for (std::size_t k = 0; k < steps_per_axis; ++k) {
                const std::array<double, 3> volts{static_cast<double>(i) * dv,
                                                  static_cast<double>(j) * dv,
                                                  static_cast<double>(k) * dv};
                const std::array<double, 3> phases{heater.phase(0, volts[0]),
                                                   heater.phase(1, volts[1]),
                                                   heater.phase(2, volts[2])};
                const ObjectiveValue v = evaluate_objective(device, phases, objective);
                if (first || v.value > best.objective_value) {
                    best.voltages = volts;
                    best.phases = phases;
                    best.objective_value = v.value;
                    best.diagnostics = v.diagnostics;
                    first = false;
                }
            }
        }
    }
    return best;
}

TuningResult refine(const DeviceSpec& device, const HeaterModel& heater,
                    const TuningObjective& objective, const TuningResult& start,
                    double tolerance_rad, double search_halfwidth_rad) {
    heater.validate();
    objective.validate();
    if (!(tolerance_rad > 0.0))
        throw std::invalid_argument("refine: tolerance must be > 0");

    std::array<double, 3> phases = start.phases;
    ObjectiveValue current = evaluate_objective(device, phases, objective);

    for (int cycle = 0; cycle < 50; ++cycle) {
        double max_update = 0.0;
        for (std::size_t axis = 0; axis < 3; ++axis) {
            if (heater.phase_per_volt_sq[axis] == 0.0)
                continue;
            const double lo = std::max(0.0, phases[axis] - search_halfwidth_rad);
            const double hi = std::min(heater.max_phase(axis), phases[axis] + search_halfwidth_rad);
            if (hi - lo < tolerance_rad)
                continue;
            auto line = [&](double x) {
                std::array<double, 3> trial = phases;
                trial[axis] = x;
                return evaluate_objective(device, trial, objective).value;
            };
            const double x_star = golden_section_max(line, lo, hi, tolerance_rad);
            std::array<double, 3> trial = phases;
            trial[axis] = x_star;
            const ObjectiveValue v = evaluate_objective(device, trial, objective);
            if (v.value > current.value) {
                max_update = std::max(max_update, std::abs(x_star - phases[axis]));
                phases = trial;
                current = v;
            }
        }
        if (max_update < tolerance_rad)
            break;
    }

    TuningResult out;
    out.phases = phases;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const double c = heater.phase_per_volt_sq[axis];
        out.voltages[axis] = c > 0.0
                                 ? std::clamp(std::sqrt(phases[axis] / c), 0.0, heater.max_voltage)
                                 : start.voltages[axis];
    }
    out.objective_value = current.value;
    out.diagnostics = current.diagnostics;
    return out;
}

} // namespace ringpair
