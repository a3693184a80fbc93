#pragma once

#include <vector>

#include "ringpair/core.hpp"

namespace ringpair {

// Probability that a photon born in a lossless ring leaves via the drop
// port: (1 - t2^2) / (2 - t1^2 - t2^2).
double p_drop(double t1_sq, double t2_sq);

// Fraction of pairs with both photons out the drop port: p_drop^2.
double coincidence_ratio(double t1_sq, double t2_sq);

// Extended three-way split with intracavity loss folded in as a third exit
// channel (p_drop + p_thru + p_loss = 1). Reduces to the two-way split at
// round_trip_amplitude_sq = 1.
struct RoutingProbabilities {
    double p_drop = 0.0;
    double p_thru = 0.0;
    double p_loss = 0.0;
};
RoutingProbabilities routing_probabilities(double t1_sq, double t2_sq,
                                           double round_trip_amplitude_sq = 1.0);

// Circulating over input bus power just after the input coupler.
double buildup_factor(const DeviceSpec& device, double pump_wavelength);

// Buildup at the device's own resonance peak nearest the target wavelength.
double peak_buildup(const DeviceSpec& device, double target_wavelength);

// Pump power needed for the same ring excitation, relative to the reference
// device; both devices are realigned to their own nearest resonance peak.
// +infinity when the device cannot couple at all.
double relative_pump_power(const DeviceSpec& device, const DeviceSpec& reference,
                           double pump_wavelength);

// p_drop of pairs born at this wavelength, from the effective couplers.
double drop_routing_probability(const DeviceSpec& device, double wavelength);

struct TheoryCurvePoint {
    double t1_sq = 0.0;
    double relative_pump_power = 1.0;
    double eta_coinc = 0.0;
};

// Parametric trade-off curve (pump penalty vs coincidence ratio) for a fixed
// drop coupler; the reference is the critically coupled point t1 = a * t2.
std::vector<TheoryCurvePoint> theory_curve(double t2_sq, double ring_loss_db_per_round_trip,
                                           const std::vector<double>& t1_sq_sweep);

// Interpolate eta on a theory curve at a given pump-power factor.
double eta_at_pump_factor(const std::vector<TheoryCurvePoint>& curve, double pump_factor);

// |kappa|(gap) = kappa0 * exp(-gap / decay_length).
struct GapCouplingMap {
    double kappa0 = 0.0;
    double decay_length = 0.0; // m

    double kappa(double gap) const;
    double power_cross_coupling(double gap) const { return kappa(gap) * kappa(gap); }
    double t_sq(double gap) const { return 1.0 - power_cross_coupling(gap); }
};

struct GapFitResult {
    GapCouplingMap map;
    double rms_log_residual = 0.0;
    bool poor_fit = false;
};

struct GapObservation {
    double gap = 0.0;  // m
    double t_sq = 0.0; // power self-coupling
};

// Least squares on log|kappa| vs gap; needs >= 2 distinct gaps.
GapFitResult fit_gap_map(const std::vector<GapObservation>& observations);

struct PairSourceFigures {
    double p_drop = 0.0;
    double p_thru = 0.0;
    double eta_coinc = 0.0;
    double buildup_factor = 0.0;
    double relative_pump_power = 1.0;
};

// Routing uses the mean of the signal/idler effective couplers; pass the
// pump wavelength for all three when frequency dependence is irrelevant.
PairSourceFigures device_figures(const DeviceSpec& device, double pump_wavelength,
                                 double signal_wavelength, double idler_wavelength,
                                 const DeviceSpec* reference = nullptr);

} // namespace ringpair
