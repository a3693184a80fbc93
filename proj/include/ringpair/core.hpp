#pragma once

#include <complex>
#include <cstddef>
#include <variant>

namespace ringpair {

using complex = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Strip waveguide described by its modal indices at a reference wavelength.
// Dispersion is the first-order (group index) expansion about the reference:
//   n_eff(lambda) = n_eff0 + (lambda - lambda0) * (n_eff0 - n_g) / lambda0
struct WaveguideModel {
    double effective_index = 2.4;
    double group_index = 4.2;
    double reference_wavelength = 1550e-9; // m
    double propagation_loss_db_per_m = 0.0;

    double effective_index_at(double wavelength) const {
        const double dn_dl = (effective_index - group_index) / reference_wavelength;
        return effective_index + (wavelength - reference_wavelength) * dn_dl;
    }
    void validate() const;
};

struct PropagationResult {
    double phase_rad = 0.0;
    double amplitude = 1.0;
    complex factor() const { return std::polar(amplitude, phase_rad); }
};

// beta * L with loss; throws std::domain_error for wavelength <= 0.
PropagationResult propagation_phase(const WaveguideModel& wg, double length, double wavelength);

// Free spectral range lambda^2 / (n_g * L) of a cavity with round trip L.
double fsr(const WaveguideModel& wg, double round_trip_length, double wavelength);

// Lossless evanescent coupler. The scattering matrix places the +i phase on
// the cross path: (bus_out, ring_out) = [[t, i k], [i k, t]] (bus_in, ring_in).
struct PointCoupler {
    complex self_coupling_t{1.0, 0.0};
    complex cross_coupling_kappa{0.0, 0.0};

    static PointCoupler from_power_cross_coupling(double kappa_sq);
    void validate() const; // |t|^2 + |k|^2 = 1 within 1e-12
};

// Two-point coupler: sub-coupler a, two free-propagation arms, sub-coupler b.
// The heater phase acts on the bus arm only; the ring arm is part of the
// ring round trip.
struct MziCouplerSpec {
    PointCoupler sub_coupler_a;
    PointCoupler sub_coupler_b;
    double bus_arm_length = 0.0;  // m
    double ring_arm_length = 0.0; // m
    double tunable_phase = 0.0;   // rad, bus arm

    double path_length_difference() const {
        return bus_arm_length > ring_arm_length ? bus_arm_length - ring_arm_length
                                                : ring_arm_length - bus_arm_length;
    }
    void validate() const;
};

using Coupler = std::variant<PointCoupler, MziCouplerSpec>;

struct RingGeometry {
    double radius = 0.0;            // m
    double ring_phase_offset = 0.0; // rad, lumped heater phase per round trip

    double circumference() const { return two_pi * radius; }
    void validate() const;
};

// Full ring source: geometry, waveguide and the two bus couplers.
// MZI ring arms consume part of the circumference; the remainder is split
// evenly between the two connecting arcs.
struct DeviceSpec {
    RingGeometry geometry;
    WaveguideModel waveguide;
    Coupler input_coupler;
    Coupler output_coupler;

    void validate() const;
};

double coupler_ring_arm_length(const Coupler& c);

struct WavelengthGrid {
    double start = 0.0; // m
    double stop = 0.0;  // m
    std::size_t points = 0;

    double step() const { return (stop - start) / static_cast<double>(points - 1); }
    double wavelength(std::size_t i) const { return start + static_cast<double>(i) * step(); }
    void validate() const;
};

} // namespace ringpair
