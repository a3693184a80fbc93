#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "ringpair/core.hpp"
#include "ringpair/presets.hpp"
#include "ringpair/transfer.hpp"
#include "ringpair/tuning.hpp"

using namespace ringpair;

namespace {

TuningObjective targets_from(const DeviceSpec& dev, double near_nm = 1550e-9) {
    const double pump = resonance_near(dev, near_nm);
    const double spacing = fsr(dev.waveguide, dev.geometry.circumference(), pump);
    return presets::table1_objective(pump, resonance_near(dev, pump - spacing),
                                     resonance_near(dev, pump + spacing));
}

} // namespace

TEST_CASE("objective validation") {
    TuningObjective obj;
    obj.pump_wavelength = 1550e-9;
    obj.signal_wavelength = 1544e-9;
    obj.idler_wavelength = 1556e-9;
    CHECK_NOTHROW(obj.validate());
    obj.w_pump_extinction = 0.0;
    obj.w_pump_drop_suppression = 0.0;
    obj.w_signal_idler_drop_transmission = 0.0;
    CHECK_THROWS_AS(obj.validate(), std::invalid_argument);
    obj.w_pump_extinction = -1.0;
    CHECK_THROWS_AS(obj.validate(), std::invalid_argument);
}

TEST_CASE("objective evaluation basics on the published DMZR geometry") {
    const DeviceSpec dev = presets::table1_dmzr();
    const TuningObjective obj = targets_from(dev);

    SUBCASE("untuned state reports finite terms") {
        const ObjectiveValue v = evaluate_objective(dev, {0.0, 0.0, 0.0}, obj);
        CHECK(std::isfinite(v.value));
        CHECK(v.diagnostics.pump_extinction_db > 0.0);
        CHECK(std::isfinite(v.diagnostics.pump_drop_suppression_db));
        CHECK(v.diagnostics.signal_idler_drop_db <= 0.0);
    }
    SUBCASE("a 2 pi shift of the ring heater changes nothing") {
        const ObjectiveValue a = evaluate_objective(dev, {0.3, 0.1, 0.2}, obj);
        const ObjectiveValue b = evaluate_objective(dev, {0.3 + two_pi, 0.1, 0.2}, obj);
        CHECK(std::abs(a.value - b.value) <= 1e-9 * std::max(1.0, std::abs(a.value)));
    }
    SUBCASE("each single-phase 2 pi period is respected") {
        const ObjectiveValue a = evaluate_objective(dev, {0.4, 0.9, 1.3}, obj);
        for (int axis = 0; axis < 3; ++axis) {
            std::array<double, 3> shifted{0.4, 0.9, 1.3};
            shifted[axis] += two_pi;
            const ObjectiveValue b = evaluate_objective(dev, shifted, obj);
            CHECK(std::abs(a.value - b.value) <= 1e-9 * std::max(1.0, std::abs(a.value)));
        }
    }
}

TEST_CASE("point-coupled ring: the sweep aligns the comb to the pump") {
    DeviceSpec dev;
    dev.geometry.radius = 15e-6;
    dev.waveguide.propagation_loss_db_per_m = 600.0;
    // near-critical coupling so extinction rewards alignment
    const double a_sq = std::pow(10.0, -600.0 * dev.geometry.circumference() / 10.0);
    const double t2_sq = 0.98;
    dev.input_coupler = PointCoupler::from_power_cross_coupling(1.0 - t2_sq * a_sq);
    dev.output_coupler = PointCoupler::from_power_cross_coupling(1.0 - t2_sq);

    // park the comb off the target so only the ring heater can fix it
    dev.geometry.ring_phase_offset = 2.0;
    const double pump = resonance_near(dev, 1550e-9);
    const double spacing = fsr(dev.waveguide, dev.geometry.circumference(), pump);
    // target a wavelength between comb lines
    TuningObjective obj;
    obj.w_pump_extinction = 1.0;
    obj.w_pump_drop_suppression = 0.0;
    obj.w_signal_idler_drop_transmission = 0.0;
    obj.pump_wavelength = pump + 0.37 * spacing;
    obj.signal_wavelength = obj.pump_wavelength - spacing;
    obj.idler_wavelength = obj.pump_wavelength + spacing;

    HeaterModel heater = presets::table1_heater();
    const TuningResult best = grid_sweep(dev, heater, obj, 21);
    // tuned comb must sit within a tenth of an FSR of the pump target
    const DeviceSpec tuned = apply_heater_phases(dev, best.phases);
    const double aligned = resonance_near(tuned, obj.pump_wavelength);
    CHECK(std::abs(aligned - obj.pump_wavelength) < 0.1 * spacing);
    CHECK(best.diagnostics.pump_extinction_db > 15.0);
}

TEST_CASE("grid sweep on the published DMZR geometry") {
    const DeviceSpec dev = presets::table1_dmzr();
    const HeaterModel heater = presets::table1_heater();
    const TuningObjective obj = targets_from(dev);

    const ObjectiveValue untuned = evaluate_objective(dev, {0.0, 0.0, 0.0}, obj);
    const TuningResult best = grid_sweep(dev, heater, obj, 11);

    CHECK(best.objective_value >= untuned.value);
    CHECK(best.diagnostics.pump_extinction_db >=
          untuned.diagnostics.pump_extinction_db + 10.0);

    SUBCASE("sweep is deterministic") {
        const TuningResult again = grid_sweep(dev, heater, obj, 11);
        CHECK(again.voltages == best.voltages);
        CHECK(again.objective_value == best.objective_value);
    }
    SUBCASE("zero-weight objectives are rejected before compute") {
        TuningObjective bad = obj;
        bad.w_pump_extinction = 0.0;
        bad.w_pump_drop_suppression = 0.0;
        bad.w_signal_idler_drop_transmission = 0.0;
        CHECK_THROWS_AS(grid_sweep(dev, heater, bad, 3), std::invalid_argument);
        CHECK_THROWS_AS(grid_sweep(dev, heater, obj, 1), std::invalid_argument);
    }
    SUBCASE("refinement never lowers the objective and stays put at optima") {
        const TuningResult polished = refine(dev, heater, obj, best, 1e-4);
        CHECK(polished.objective_value >= best.objective_value);
        const TuningResult fixed_point = refine(dev, heater, obj, polished, 1e-4);
        CHECK(fixed_point.objective_value >= polished.objective_value);
        CHECK(std::abs(fixed_point.phases[0] - polished.phases[0]) < 0.05);
        CHECK(std::abs(fixed_point.phases[1] - polished.phases[1]) < 0.05);
        CHECK(std::abs(fixed_point.phases[2] - polished.phases[2]) < 0.05);
    }
}

TEST_CASE("refine converges to a dense-scan optimum of a smooth objective") {
    // the pair-routing term varies smoothly with the MZI phases, so the
    // golden-section line search must land on the dense-scan optimum
    const DeviceSpec dev = presets::table1_dmzr();
    const HeaterModel heater = presets::table1_heater();
    TuningObjective obj = targets_from(dev);
    obj.w_pump_extinction = 0.0;
    obj.w_pump_drop_suppression = 0.0;
    obj.w_signal_idler_drop_transmission = 1.0;

    const auto line1 = [&](double phase) {
        return evaluate_objective(dev, {0.0, phase, 0.0}, obj).value;
    };
    double best1 = 0.0, best1_val = line1(0.0);
    for (int i = 1; i <= 2000; ++i) {
        const double x = heater.max_phase(1) * i / 2000.0;
        const double v = line1(x);
        if (v > best1_val) {
            best1_val = v;
            best1 = x;
        }
    }

    TuningResult start;
    start.phases = {0.0, std::min(heater.max_phase(1), best1 + 0.25), 0.0};
    const TuningResult refined = refine(dev, heater, obj, start, 1e-5);
    CHECK(refined.objective_value >= best1_val - 0.01);
    CHECK(std::abs(refined.phases[1] - best1) < 0.05);

    SUBCASE("tolerance wider than the search window returns the start") {
        TuningResult anchor;
        anchor.phases = {0.5, 1.0, 1.5};
        const TuningResult lazy = refine(dev, heater, obj, anchor, 2.0);
        CHECK(lazy.phases[0] == anchor.phases[0]);
        CHECK(lazy.phases[1] == anchor.phases[1]);
        CHECK(lazy.phases[2] == anchor.phases[2]);
    }
}

TEST_CASE("tuned ideal DMZR complements the drop response across the comb") {
    // at the operating point the drop response alternates between the two
    // resonance classes; measure drop power at the comb lines directly
    DeviceSpec dev = presets::tuned_for_alternation(presets::ideal_dmzr(), 1550e-9);
    const double pump = resonance_near(dev, 1550e-9);
    const double spacing = fsr(dev.waveguide, dev.geometry.circumference(), pump);

    WavelengthGrid grid{pump - 3.2 * spacing, pump + 3.2 * spacing, 64001};
    const ComplexSpectrum s = device_spectrum(dev, grid);
    const ResonanceList res = find_resonances(s, 0.3);
    REQUIRE(res.size() >= 6);
    for (std::size_t i = 1; i < res.size(); ++i)
        CHECK(res.suppressed[i] != res.suppressed[i - 1]);
}
