#include "ringpair/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ringpair/errors.hpp"

namespace ringpair {

void WaveguideModel::validate() const {
    if (!(effective_index > 0.0))
        throw config_error("waveguide: effective_index must be > 0");
    if (!(group_index > 0.0))
        throw config_error("waveguide: group_index must be > 0");
    if (!(reference_wavelength > 0.0))
        throw config_error("waveguide: reference_wavelength must be > 0");
    if (propagation_loss_db_per_m < 0.0)
        throw config_error("waveguide: propagation_loss must be >= 0");
}

PropagationResult propagation_phase(const WaveguideModel& wg, double length, double wavelength) {
    if (!(wavelength > 0.0))
        throw std::domain_error("propagation_phase: wavelength must be > 0");
    if (length < 0.0)
        throw std::domain_error("propagation_phase: length must be >= 0");
    PropagationResult r;
    r.phase_rad = two_pi * wg.effective_index_at(wavelength) * length / wavelength;
    r.amplitude = std::pow(10.0, -(wg.propagation_loss_db_per_m * length) / 20.0);
    return r;
}

double fsr(const WaveguideModel& wg, double round_trip_length, double wavelength) {
    if (!(round_trip_length > 0.0) || !(wavelength > 0.0))
        throw std::domain_error("fsr: lengths and wavelength must be > 0");
    return wavelength * wavelength / (wg.group_index * round_trip_length);
}

PointCoupler PointCoupler::from_power_cross_coupling(double kappa_sq) {
    if (!(kappa_sq >= 0.0 && kappa_sq <= 1.0))
        throw config_error("coupler: power cross-coupling must be in [0, 1], got " +
                           std::to_string(kappa_sq));
    PointCoupler c;
    c.cross_coupling_kappa = std::sqrt(kappa_sq);
    c.self_coupling_t = std::sqrt(1.0 - kappa_sq);
    return c;
}

void PointCoupler::validate() const {
    const double power = std::norm(self_coupling_t) + std::norm(cross_coupling_kappa);
    if (std::abs(power - 1.0) > 1e-12)
        throw config_error("coupler: |t|^2 + |kappa|^2 must equal 1 (lossless), got " +
                           std::to_string(power));
}

void MziCouplerSpec::validate() const {
    sub_coupler_a.validate();
    sub_coupler_b.validate();
    if (!(bus_arm_length > 0.0) || !(ring_arm_length > 0.0))
        throw config_error("mzi coupler: arm lengths must be > 0");
}

void RingGeometry::validate() const {
    if (!(radius > 0.0))
        throw config_error("ring: radius must be > 0");
}

double coupler_ring_arm_length(const Coupler& c) {
    if (const auto* m = std::get_if<MziCouplerSpec>(&c))
        return m->ring_arm_length;
    return 0.0;
}

void DeviceSpec::validate() const {
    geometry.validate();
    waveguide.validate();
    std::visit([](const auto& c) { c.validate(); }, input_coupler);
    std::visit([](const auto& c) { c.validate(); }, output_coupler);
    const double consumed =
        coupler_ring_arm_length(input_coupler) + coupler_ring_arm_length(output_coupler);
    if (consumed > geometry.circumference())
        throw config_error("device: coupler ring arms exceed the ring circumference");
}

void WavelengthGrid::validate() const {
    if (!(start > 0.0) || !(stop > start))
        throw config_error("grid: need 0 < start < stop");
    if (points < 2)
        throw config_error("grid: need at least 2 points");
}

} // namespace ringpair
