#include "ringpair/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

constexpr complex kImag{0.0, 1.0};

double to_db(double power) {
    return 10.0 * std::log10(std::max(power, 1e-300));
}

// Parabola through three uniformly spaced samples; returns the vertex offset
// in units of the sample spacing, clamped to [-1, 1].
double parabolic_offset(double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0)
        return 0.0;
    return std::clamp(0.5 * (ym - yp) / denom, -1.0, 1.0);
}

double median(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1, v.end());
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

struct Extremum {
    std::size_t index;
    double wavelength;
    double value; // linear power at the refined position (grid sample)
};

// Local minima with topographic prominence >= prominence_db.
std::vector<Extremum> prominent_minima(const std::vector<double>& p, const WavelengthGrid& grid,
                                       double prominence_db) {
    std::vector<Extremum> out;
    const std::size_t n = p.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(p[i] <= p[i - 1] && p[i] < p[i + 1]))
            continue;
        double left_max = p[i];
        for (std::size_t j = i; j-- > 0;) {
            if (p[j] < p[i])
                break;
            left_max = std::max(left_max, p[j]);
        }
        double right_max = p[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (p[j] < p[i])
                break;
            right_max = std::max(right_max, p[j]);
        }
        const double prom = to_db(std::min(left_max, right_max)) - to_db(p[i]);
        if (prom < prominence_db)
            continue;
        const double off = parabolic_offset(p[i - 1], p[i], p[i + 1]);
        out.push_back({i, grid.wavelength(i) + off * grid.step(), p[i]});
    }
    return out;
}

std::vector<Extremum> prominent_maxima(const std::vector<double>& p, const WavelengthGrid& grid,
                                       double prominence_db) {
    std::vector<Extremum> out;
    const std::size_t n = p.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(p[i] >= p[i - 1] && p[i] > p[i + 1]))
            continue;
        double left_min = p[i];
        for (std::size_t j = i; j-- > 0;) {
            if (p[j] > p[i])
                break;
            left_min = std::min(left_min, p[j]);
        }
        double right_min = p[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (p[j] > p[i])
                break;
            right_min = std::min(right_min, p[j]);
        }
        const double prom = to_db(p[i]) - to_db(std::max(left_min, right_min));
        if (prom < prominence_db)
            continue;
        const double off = parabolic_offset(p[i - 1], p[i], p[i + 1]);
        out.push_back({i, grid.wavelength(i) + off * grid.step(), p[i]});
    }
    return out;
}

double interpolate_power(const std::vector<double>& p, const WavelengthGrid& grid,
                         double wavelength) {
    const double x = (wavelength - grid.start) / grid.step();
    if (x <= 0.0)
        return p.front();
    if (x >= static_cast<double>(p.size() - 1))
        return p.back();
    const auto i = static_cast<std::size_t>(x);
    const double f = x - static_cast<double>(i);
    return p[i] * (1.0 - f) + p[i + 1] * f;
}

} // namespace

Coupler2x2 as_matrix(const PointCoupler& c) {
    Coupler2x2 m;
    m.bus_bus = c.self_coupling_t;
    m.bus_ring = kImag * c.cross_coupling_kappa;
    m.ring_bus = kImag * c.cross_coupling_kappa;
    m.ring_ring = c.self_coupling_t;
    return m;
}

Coupler2x2 effective_coupler(const MziCouplerSpec& spec, double wavelength,
                             const WaveguideModel& wg) {
    const Coupler2x2 ca = as_matrix(spec.sub_coupler_a);
    const Coupler2x2 cb = as_matrix(spec.sub_coupler_b);
    const complex p_bus = propagation_phase(wg, spec.bus_arm_length, wavelength).factor() *
                          std::polar(1.0, spec.tunable_phase);
    const complex p_ring = propagation_phase(wg, spec.ring_arm_length, wavelength).factor();

    // C_b * diag(p_bus, p_ring) * C_a
    Coupler2x2 m;
    m.bus_bus = cb.bus_bus * p_bus * ca.bus_bus + cb.bus_ring * p_ring * ca.ring_bus;
    m.bus_ring = cb.bus_bus * p_bus * ca.bus_ring + cb.bus_ring * p_ring * ca.ring_ring;
    m.ring_bus = cb.ring_bus * p_bus * ca.bus_bus + cb.ring_ring * p_ring * ca.ring_bus;
    m.ring_ring = cb.ring_bus * p_bus * ca.bus_ring + cb.ring_ring * p_ring * ca.ring_ring;
    return m;
}

Coupler2x2 coupler_matrix(const Coupler& c, double wavelength, const WaveguideModel& wg) {
    if (const auto* pt = std::get_if<PointCoupler>(&c))
        return as_matrix(*pt);
    return effective_coupler(std::get<MziCouplerSpec>(c), wavelength, wg);
}

ComplexSpectrum device_spectrum(const DeviceSpec& device, const WavelengthGrid& grid,
                                Excitation excitation) {
    device.validate();
    grid.validate();

    const double circumference = device.geometry.circumference();
    const double arc = circumference - coupler_ring_arm_length(device.input_coupler) -
                       coupler_ring_arm_length(device.output_coupler);
    const double seg = arc / 2.0;

    ComplexSpectrum s;
    s.grid = grid;
    s.excitation = excitation;
    s.through_amplitude.resize(grid.points);
    s.drop_amplitude.resize(grid.points);

    const complex ring_heater = std::polar(1.0, device.geometry.ring_phase_offset);
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double lambda = grid.wavelength(i);
        const Coupler2x2 m_in = coupler_matrix(device.input_coupler, lambda, device.waveguide);
        const Coupler2x2 m_out = coupler_matrix(device.output_coupler, lambda, device.waveguide);
        // The heater phase is lumped on the input->output arc.
        const complex p = propagation_phase(device.waveguide, seg, lambda).factor();
        const complex p_a = p * ring_heater;
        const complex p_b = p;

        const Coupler2x2& first = excitation == Excitation::input ? m_in : m_out;
        const Coupler2x2& second = excitation == Excitation::input ? m_out : m_in;

        const complex loop = first.ring_ring * second.ring_ring * p_a * p_b;
        const complex ring_field = first.ring_bus / (1.0 - loop);
        s.through_amplitude[i] =
            first.bus_bus + first.bus_ring * p_b * second.ring_ring * p_a * ring_field;
        s.drop_amplitude[i] = second.bus_ring * p_a * ring_field;
    }
    return s;
}

ResonanceList find_resonances(const ComplexSpectrum& spectrum, double prominence_db) {
    const std::size_t n = spectrum.grid.points;
    std::vector<double> pt(n), pd(n);
    for (std::size_t i = 0; i < n; ++i) {
        pt[i] = spectrum.through_power(i);
        pd[i] = spectrum.drop_power(i);
    }

    const auto dips = prominent_minima(pt, spectrum.grid, prominence_db);
    const auto peaks = prominent_maxima(pd, spectrum.grid, prominence_db);

    // Merge: a drop peak within a quarter of the typical spacing of an
    // existing dip is the same resonance.
    std::vector<double> positions;
    for (const auto& d : dips)
        positions.push_back(d.wavelength);
    std::vector<double> all_pos = positions;
    for (const auto& pk : peaks)
        all_pos.push_back(pk.wavelength);
    std::sort(all_pos.begin(), all_pos.end());
    std::vector<double> spacings;
    for (std::size_t i = 1; i < all_pos.size(); ++i)
        spacings.push_back(all_pos[i] - all_pos[i - 1]);
    const double typical = spacings.empty() ? 6.0 * spectrum.grid.step() : median(spacings);
    const double merge_tol = std::max(0.25 * typical, 3.0 * spectrum.grid.step());

    // A resonance only visible on the drop port must still carry real drop
    // power; faint unmatched maxima (zero-crossing side lobes) are ignored.
    double strongest_peak = 0.0;
    for (const auto& pk : peaks)
        strongest_peak = std::max(strongest_peak, pk.value);
    for (const auto& pk : peaks) {
        bool merged = false;
        for (const double w : positions) {
            if (std::abs(pk.wavelength - w) <= merge_tol) {
                merged = true;
                break;
            }
        }
        if (!merged && pk.value > strongest_peak * 0.0316) // within 15 dB of the best
            positions.push_back(pk.wavelength);
    }
    std::sort(positions.begin(), positions.end());

    ResonanceList out;
    if (positions.empty())
        return out;

    // Peak/dip measurement window: a quarter of the local spacing on each
    // side, narrow enough that a neighbouring peak's tail stays out.
    std::vector<double> window(positions.size(), typical * 0.25);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        double w = std::numeric_limits<double>::infinity();
        if (i > 0)
            w = std::min(w, positions[i] - positions[i - 1]);
        if (i + 1 < positions.size())
            w = std::min(w, positions[i + 1] - positions[i]);
        if (std::isfinite(w))
            window[i] = 0.25 * w;
    }

    for (std::size_t i = 0; i < positions.size(); ++i) {
        const double lam = positions[i];
        const double lo = lam - window[i], hi = lam + window[i];
        double drop_peak = 0.0, thru_min = std::numeric_limits<double>::infinity();
        double thru_max = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = spectrum.grid.wavelength(j);
            if (x < lo || x > hi)
                continue;
            drop_peak = std::max(drop_peak, pd[j]);
            thru_min = std::min(thru_min, pt[j]);
            thru_max = std::max(thru_max, pt[j]);
        }
        if (!std::isfinite(thru_min)) {
            thru_min = interpolate_power(pt, spectrum.grid, lam);
            thru_max = thru_min;
        }
        out.wavelengths.push_back(lam);
        out.depths_db.push_back(to_db(thru_max) - to_db(thru_min));
        out.drop_peaks_db.push_back(to_db(drop_peak));
    }

    // A resonance is suppressed when its drop peak sits >= 10 dB below the
    // median of the supported peaks (those within 10 dB of the strongest).
    const double max_peak = *std::max_element(out.drop_peaks_db.begin(), out.drop_peaks_db.end());
    std::vector<double> supported;
    for (const double p : out.drop_peaks_db)
        if (p >= max_peak - 10.0)
            supported.push_back(p);
    const double reference = median(supported);
    for (const double p : out.drop_peaks_db)
        out.suppressed.push_back(p <= reference - 10.0);
    return out;
}

double extinction_db(const ComplexSpectrum& spectrum, double wavelength) {
    const WavelengthGrid& grid = spectrum.grid;
    if (wavelength < grid.start || wavelength > grid.stop)
        throw std::domain_error("extinction_db: wavelength outside the spectrum grid");

    const std::size_t n = grid.points;
    std::vector<double> pt(n);
    for (std::size_t i = 0; i < n; ++i)
        pt[i] = spectrum.through_power(i);

    const auto res = find_resonances(spectrum, 1.0);
    double lo = grid.start, hi = grid.stop, center = wavelength;
    if (!res.wavelengths.empty()) {
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < res.size(); ++i)
            if (std::abs(res.wavelengths[i] - wavelength) <
                std::abs(res.wavelengths[nearest] - wavelength))
                nearest = i;
        center = res.wavelengths[nearest];
        lo = nearest > 0 ? 0.5 * (res.wavelengths[nearest - 1] + center) : grid.start;
        hi = nearest + 1 < res.size() ? 0.5 * (res.wavelengths[nearest + 1] + center) : grid.stop;
    }

    std::vector<std::size_t> in_window;
    double wmax = 0.0, wmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.wavelength(i);
        if (x < lo || x > hi)
            continue;
        in_window.push_back(i);
        wmax = std::max(wmax, pt[i]);
        wmin = std::min(wmin, pt[i]);
    }
    if (in_window.empty())
        return 0.0;

    // Exclude the contiguous half-power region around the dip centre.
    const double half_power = 0.5 * (wmax + wmin);
    const auto center_idx = static_cast<std::size_t>(
        std::clamp((center - grid.start) / grid.step(), 0.0, static_cast<double>(n - 1)));
    std::size_t excl_lo = center_idx, excl_hi = center_idx;
    while (excl_lo > in_window.front() && pt[excl_lo] < half_power)
        --excl_lo;
    while (excl_hi < in_window.back() && pt[excl_hi] < half_power)
        ++excl_hi;

    std::vector<double> baseline_samples;
    for (const std::size_t i : in_window)
        if (i < excl_lo || i > excl_hi)
            baseline_samples.push_back(pt[i]);
    if (baseline_samples.empty())
        for (const std::size_t i : in_window)
            baseline_samples.push_back(pt[i]);

    const double baseline = median(baseline_samples);
    const double at = interpolate_power(pt, grid, wavelength);
    return to_db(baseline) - to_db(at);
}

double round_trip_phase(const DeviceSpec& device, double wavelength) {
    const Coupler2x2 m_in = coupler_matrix(device.input_coupler, wavelength, device.waveguide);
    const Coupler2x2 m_out = coupler_matrix(device.output_coupler, wavelength, device.waveguide);
    const double seg = 0.5 * (device.geometry.circumference() -
                              coupler_ring_arm_length(device.input_coupler) -
                              coupler_ring_arm_length(device.output_coupler));
    const complex p = propagation_phase(device.waveguide, seg, wavelength).factor();
    const complex loop =
        m_in.ring_ring * m_out.ring_ring * p * p * std::polar(1.0, device.geometry.ring_phase_offset);
    return std::arg(loop);
}

double resonance_near(const DeviceSpec& device, double target_wavelength) {
    const double free_range =
        fsr(device.waveguide, device.geometry.circumference(), target_wavelength);
    const std::size_t n = 512;
    const double lo = target_wavelength - 0.75 * free_range;
    const double step = 1.5 * free_range / static_cast<double>(n - 1);

    double best = 0.0;
    bool found = false;
    double prev = round_trip_phase(device, lo);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        const double cur = round_trip_phase(device, x);
        // sign change without a +/-pi wrap marks a zero crossing
        if (prev * cur <= 0.0 && std::abs(prev - cur) < 3.141592653589793) {
            double a = x - step, b = x;
            double fa = prev;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = round_trip_phase(device, m);
                if (fa * fm <= 0.0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            const double cand = 0.5 * (a + b);
            if (!found || std::abs(cand - target_wavelength) < std::abs(best - target_wavelength)) {
                best = cand;
                found = true;
            }
        }
        prev = cur;
    }
    if (!found)
        throw selection_error("resonance_near: no resonance within 0.75 FSR of the target");
    return best;
}

SfwmTriplet select_sfwm_triplet(const ResonanceList& resonances, double pump_target) {
    if (resonances.size() < 3)
        throw selection_error("select_sfwm_triplet: need at least 3 resonances");

    std::size_t pump = 0;
    for (std::size_t i = 1; i < resonances.size(); ++i)
        if (std::abs(resonances.wavelengths[i] - pump_target) <
            std::abs(resonances.wavelengths[pump] - pump_target))
            pump = i;

    // First supported neighbour on each side.
    std::size_t lo = pump;
    while (lo-- > 0)
        if (!resonances.suppressed[lo])
            break;
    std::size_t hi = pump;
    bool hi_found = false;
    for (std::size_t i = pump + 1; i < resonances.size(); ++i) {
        if (!resonances.suppressed[i]) {
            hi = i;
            hi_found = true;
            break;
        }
    }
    const bool lo_found = lo != static_cast<std::size_t>(-1) && !resonances.suppressed[lo];
    if (!lo_found || !hi_found)
        throw selection_error("select_sfwm_triplet: no supported symmetric pair about the pump");

    const double lp = resonances.wavelengths[pump];
    const double ls = resonances.wavelengths[lo];
    const double li = resonances.wavelengths[hi];

    // Energy conservation 2/lp ~ 1/ls + 1/li; a quarter of the smaller
    // frequency offset stands in for "one linewidth".
    const double left = 1.0 / ls - 1.0 / lp;
    const double right = 1.0 / lp - 1.0 / li;
    if (std::abs(left - right) > 0.25 * std::min(left, right))
        throw selection_error("select_sfwm_triplet: candidate pair is not symmetric about the pump");

    return {lp, ls, li};
}

} // namespace ringpair
