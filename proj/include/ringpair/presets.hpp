#pragma once

#include "ringpair/core.hpp"
#include "ringpair/pair_source.hpp"
#include "ringpair/tuning.hpp"

namespace ringpair {
namespace presets {

// Gap map anchored so the 150 nm symmetric device is critically coupled in
// the lumped single-bus sense with a 0.98 round-trip amplitude; 110 nm decay
// puts the 350 nm device near a 10x pump-power penalty.
GapCouplingMap default_gap_map();

// Symmetric lossless add-drop ring, 150 nm gaps, R = 18.5 um.
DeviceSpec symmetric_ring();

// Asymmetric-gap family member: input coupler at the given gap, drop coupler
// fixed at 150 nm, R = 18.5 um, lossless.
DeviceSpec fig4_device(double input_gap_nm);
DeviceSpec fig4_device(double input_gap_nm, const GapCouplingMap& map);

// Dual-MZI ring with the published design dimensions (R = 15 um, path
// length differences 47.8 / 48.0 um, gaps 250 / 175 nm). The input
// sub-couplers are pinned near the critical point of the 3 dB/cm ring so
// the peak of the input fringe critically couples the pump; the static ring
// phase places the as-fabricated comb at a partially coupled state.
DeviceSpec table1_dmzr();

// Heaters spanning slightly more than 2 pi at 10 V, all three axes.
HeaterModel table1_heater();

// Objective weights favouring pump extinction, then pair routing, then pump
// filtering.
TuningObjective table1_objective(double pump_wavelength, double signal_wavelength,
                                 double idler_wavelength);

// DMZR with the MZI fringe period exactly twice the ring FSR and a 4 dB/cm
// ring, for resonance-suppression studies.
DeviceSpec ideal_dmzr();

// Characterization state: the input MZI sits at quadrature so every
// resonance stays visible from the input bus while the output MZI zeros
// fall on every second resonance. Phases are aligned to the comb iteratively.
DeviceSpec tuned_for_alternation(DeviceSpec device, double target_wavelength);

} // namespace presets
} // namespace ringpair
