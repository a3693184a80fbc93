#pragma once

#include <string>
#include <vector>

#include "ringpair/core.hpp"

namespace ringpair {

// 2x2 field scattering matrix on the state (bus, ring).
struct Coupler2x2 {
    complex bus_bus{1.0, 0.0};
    complex bus_ring{0.0, 0.0};
    complex ring_bus{0.0, 0.0};
    complex ring_ring{1.0, 0.0};

    double power_cross_coupling() const { return std::norm(ring_bus); }
    double power_self_coupling() const { return std::norm(bus_bus); }
};

Coupler2x2 as_matrix(const PointCoupler& c);

// Composite coupler of an MZI at one wavelength: C_b * P(lambda) * C_a with
// P the diagonal arm-propagation matrix. Unitary when the arms are lossless.
Coupler2x2 effective_coupler(const MziCouplerSpec& spec, double wavelength,
                             const WaveguideModel& wg);

Coupler2x2 coupler_matrix(const Coupler& c, double wavelength, const WaveguideModel& wg);

enum class Excitation { input, add };

// Complex field transmission per grid point. For excitation at the input
// port, through = input->through and drop = input->drop; for add-port
// excitation, through = add->drop (the direct bus) and drop = add->input.
struct ComplexSpectrum {
    WavelengthGrid grid;
    std::vector<complex> through_amplitude;
    std::vector<complex> drop_amplitude;
    Excitation excitation = Excitation::input;

    std::string port_pair() const {
        return excitation == Excitation::input ? "input->through / input->drop"
                                               : "add->drop / add->input";
    }
    double through_power(std::size_t i) const { return std::norm(through_amplitude[i]); }
    double drop_power(std::size_t i) const { return std::norm(drop_amplitude[i]); }
};

ComplexSpectrum device_spectrum(const DeviceSpec& device, const WavelengthGrid& grid,
                                Excitation excitation = Excitation::input);

// Resonances of a spectrum. Positions come from through-port minima merged
// with drop-port maxima (a strongly suppressed resonance may only be visible
// on one port); every entry sits at a local extremum of the through power.
struct ResonanceList {
    std::vector<double> wavelengths;      // m, strictly increasing
    std::vector<double> depths_db;        // through-port extinction at each dip
    std::vector<double> drop_peaks_db;    // drop-port peak height near each resonance
    std::vector<bool> suppressed;

    std::size_t size() const { return wavelengths.size(); }
};

// Caller guarantees >= 3 grid points per linewidth (>= 20 recommended).
ResonanceList find_resonances(const ComplexSpectrum& spectrum, double prominence_db);

// Off-resonance baseline (median over the enclosing FSR, dip linewidth
// excluded) over the power at the given wavelength, in dB.
double extinction_db(const ComplexSpectrum& spectrum, double wavelength);

struct SfwmTriplet {
    double pump = 0.0;
    double signal = 0.0; // shorter wavelength
    double idler = 0.0;  // longer wavelength
};

// Pump = resonance nearest pump_target; signal/idler = first supported
// neighbour on each side, required symmetric in frequency.
SfwmTriplet select_sfwm_triplet(const ResonanceList& resonances, double pump_target);

// Accumulated ring round-trip phase, wrapped to (-pi, pi].
double round_trip_phase(const DeviceSpec& device, double wavelength);

// Resonance wavelength (round-trip phase = 0 mod 2pi) nearest the target;
// searched over +/- 0.75 FSR.
double resonance_near(const DeviceSpec& device, double target_wavelength);

} // namespace ringpair
