#include "ringpair/pair_source.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringpair/errors.hpp"
#include "ringpair/transfer.hpp"

namespace ringpair {

namespace {

void check_transmissions(double t1_sq, double t2_sq) {
    if (!(t1_sq >= 0.0 && t1_sq <= 1.0) || !(t2_sq >= 0.0 && t2_sq <= 1.0))
        throw std::invalid_argument("power self-transmissions must be in [0, 1]");
    if (t1_sq == 1.0 && t2_sq == 1.0)
        throw std::invalid_argument("degenerate device: both couplers fully decoupled");
}

} // namespace

double p_drop(double t1_sq, double t2_sq) {
    check_transmissions(t1_sq, t2_sq);
    return (1.0 - t2_sq) / (2.0 - t1_sq - t2_sq);
}

double coincidence_ratio(double t1_sq, double t2_sq) {
    const double p = p_drop(t1_sq, t2_sq);
    return p * p;
}

RoutingProbabilities routing_probabilities(double t1_sq, double t2_sq,
                                           double round_trip_amplitude_sq) {
    check_transmissions(t1_sq, t2_sq);
    if (!(round_trip_amplitude_sq > 0.0 && round_trip_amplitude_sq <= 1.0))
        throw std::invalid_argument("round_trip_amplitude_sq must be in (0, 1]");
    const double k1 = 1.0 - t1_sq;
    const double k2 = 1.0 - t2_sq;
    const double kl = 1.0 - round_trip_amplitude_sq;
    const double total = k1 + k2 + kl;
    return {k2 / total, k1 / total, kl / total};
}

double buildup_factor(const DeviceSpec& device, double pump_wavelength) {
    device.validate();
    const Coupler2x2 m_in = coupler_matrix(device.input_coupler, pump_wavelength, device.waveguide);
    const Coupler2x2 m_out =
        coupler_matrix(device.output_coupler, pump_wavelength, device.waveguide);
    const double seg = 0.5 * (device.geometry.circumference() -
                              coupler_ring_arm_length(device.input_coupler) -
                              coupler_ring_arm_length(device.output_coupler));
    const complex p = propagation_phase(device.waveguide, seg, pump_wavelength).factor();
    const complex p_a = p * std::polar(1.0, device.geometry.ring_phase_offset);
    const complex loop = m_in.ring_ring * m_out.ring_ring * p_a * p;
    return std::norm(m_in.ring_bus / (1.0 - loop));
}

double peak_buildup(const DeviceSpec& device, double target_wavelength) {
    const double free_range =
        fsr(device.waveguide, device.geometry.circumference(), target_wavelength);
    const std::size_t n = 1201;
    const double lo = target_wavelength - 0.6 * free_range;
    const double step = 1.2 * free_range / static_cast<double>(n - 1);
    double best = 0.0;
    std::size_t best_i = 0;
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = buildup_factor(device, lo + static_cast<double>(i) * step);
        if (b[i] > best) {
            best = b[i];
            best_i = i;
        }
    }
    if (best_i == 0 || best_i + 1 == n)
        return best;
    // two parabolic refinement stages around the discrete peak
    double center = lo + static_cast<double>(best_i) * step;
    double h = step;
    for (int stage = 0; stage < 2; ++stage) {
        const double ym = buildup_factor(device, center - h);
        const double y0 = buildup_factor(device, center);
        const double yp = buildup_factor(device, center + h);
        const double denom = ym - 2.0 * y0 + yp;
        if (denom < 0.0)
            center += std::clamp(0.5 * (ym - yp) / denom, -1.0, 1.0) * h;
        h *= 0.1;
    }
    return std::max(best, buildup_factor(device, center));
}

double relative_pump_power(const DeviceSpec& device, const DeviceSpec& reference,
                           double pump_wavelength) {
    const double b_ref = peak_buildup(reference, pump_wavelength);
    const double b_dev = peak_buildup(device, pump_wavelength);
    if (b_dev <= 0.0)
        return std::numeric_limits<double>::infinity();
    return b_ref / b_dev;
}

double drop_routing_probability(const DeviceSpec& device, double wavelength) {
    const double k1 =
        coupler_matrix(device.input_coupler, wavelength, device.waveguide).power_cross_coupling();
    const double k2 =
        coupler_matrix(device.output_coupler, wavelength, device.waveguide).power_cross_coupling();
    if (k1 + k2 <= 0.0)
        throw std::invalid_argument("degenerate device: both couplers fully decoupled");
    return k2 / (k1 + k2);
}

std::vector<TheoryCurvePoint> theory_curve(double t2_sq, double ring_loss_db_per_round_trip,
                                           const std::vector<double>& t1_sq_sweep) {
    if (!(t2_sq >= 0.0 && t2_sq < 1.0))
        throw std::invalid_argument("theory_curve: t2_sq must be in [0, 1)");
    if (ring_loss_db_per_round_trip < 0.0)
        throw std::invalid_argument("theory_curve: loss must be >= 0");
    const double a = std::pow(10.0, -ring_loss_db_per_round_trip / 20.0);
    const double t2 = std::sqrt(t2_sq);
    const double critical_t1_sq = t2_sq * a * a;

    // on-resonance circulating / input power for the lumped single-bus ring
    const auto buildup = [&](double t1_sq) {
        const double t1 = std::sqrt(t1_sq);
        const double denom = 1.0 - t1 * t2 * a;
        return (1.0 - t1_sq) / (denom * denom);
    };
    const double b_ref = buildup(critical_t1_sq);

    std::vector<TheoryCurvePoint> curve;
    curve.reserve(t1_sq_sweep.size());
    for (const double t1_sq : t1_sq_sweep) {
        if (t1_sq < critical_t1_sq - 1e-12 || t1_sq >= 1.0)
            throw std::invalid_argument("theory_curve: sweep must stay within [t2^2 a^2, 1)");
        TheoryCurvePoint pt;
        pt.t1_sq = t1_sq;
        const double b = buildup(t1_sq);
        pt.relative_pump_power =
            b > 0.0 ? b_ref / b : std::numeric_limits<double>::infinity();
        pt.eta_coinc = coincidence_ratio(t1_sq, t2_sq);
        curve.push_back(pt);
    }
    return curve;
}

double eta_at_pump_factor(const std::vector<TheoryCurvePoint>& curve, double pump_factor) {
    if (curve.size() < 2)
        throw std::invalid_argument("eta_at_pump_factor: need a curve with >= 2 points");
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const double p0 = curve[i].relative_pump_power;
        const double p1 = curve[i + 1].relative_pump_power;
        if ((pump_factor >= p0 && pump_factor <= p1) || (pump_factor >= p1 && pump_factor <= p0)) {
            const double f = p1 == p0 ? 0.0 : (pump_factor - p0) / (p1 - p0);
            return curve[i].eta_coinc + f * (curve[i + 1].eta_coinc - curve[i].eta_coinc);
        }
    }
    throw std::invalid_argument("eta_at_pump_factor: pump factor outside the curve range");
}

double GapCouplingMap::kappa(double gap) const {
    if (gap < 0.0)
        throw std::invalid_argument("gap must be >= 0");
    return kappa0 * std::exp(-gap / decay_length);
}

GapFitResult fit_gap_map(const std::vector<GapObservation>& observations) {
    if (observations.size() < 2)
        throw fit_error("fit_gap_map: need at least 2 observations");
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs, ys;
    for (const auto& o : observations) {
        if (!(o.t_sq >= 0.0 && o.t_sq < 1.0))
            throw fit_error("fit_gap_map: t_sq must be in [0, 1)");
        const double k = std::sqrt(1.0 - o.t_sq);
        xs.push_back(o.gap);
        ys.push_back(std::log(k));
        sx += o.gap;
        sy += ys.back();
    }
    const double n = static_cast<double>(xs.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0)
        throw fit_error("fit_gap_map: observations share a single gap value");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    GapFitResult result;
    result.map.kappa0 = std::exp(intercept);
    result.map.decay_length = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    result.rms_log_residual = std::sqrt(ss / n);
    result.poor_fit = result.rms_log_residual > 0.1 || slope >= 0.0;
    return result;
}

PairSourceFigures device_figures(const DeviceSpec& device, double pump_wavelength,
                                 double signal_wavelength, double idler_wavelength,
                                 const DeviceSpec* reference) {
    PairSourceFigures f;
    f.p_drop = 0.5 * (drop_routing_probability(device, signal_wavelength) +
                      drop_routing_probability(device, idler_wavelength));
    f.p_thru = 1.0 - f.p_drop;
    f.eta_coinc = f.p_drop * f.p_drop;
    f.buildup_factor = buildup_factor(device, pump_wavelength);
    f.relative_pump_power =
        reference ? relative_pump_power(device, *reference, pump_wavelength) : 1.0;
    return f;
}

} // namespace ringpair
