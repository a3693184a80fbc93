#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ringpair/core.hpp"
#include "ringpair/errors.hpp"

using namespace ringpair;

TEST_CASE("point coupler construction is lossless across the power range") {
    for (const double k2 : {0.0, 1e-9, 0.0396, 0.25, 0.5, 0.75, 0.9999, 1.0}) {
        const PointCoupler c = PointCoupler::from_power_cross_coupling(k2);
        const double power = std::norm(c.self_coupling_t) + std::norm(c.cross_coupling_kappa);
        CHECK(std::abs(power - 1.0) <= 1e-12);
        CHECK_NOTHROW(c.validate());
    }
    CHECK_THROWS_AS(PointCoupler::from_power_cross_coupling(-0.1), config_error);
    CHECK_THROWS_AS(PointCoupler::from_power_cross_coupling(1.1), config_error);
}

TEST_CASE("propagation phase identity, frozen value, loss amplitude") {
    WaveguideModel wg;

    SUBCASE("zero length") {
        const auto r = propagation_phase(wg, 0.0, 1550e-9);
        CHECK(r.phase_rad == 0.0);
        CHECK(r.amplitude == 1.0);
    }
    SUBCASE("reference wavelength, n_eff 2.4, 1 um") {
        // 2*pi * 2.4 * 1e-6 / 1.55e-6
        const auto r = propagation_phase(wg, 1e-6, 1.55e-6);
        CHECK(r.phase_rad == doctest::Approx(9.72880305627807).epsilon(1e-12));
    }
    SUBCASE("3 dB/cm over 1 cm") {
        wg.propagation_loss_db_per_m = 300.0;
        const auto r = propagation_phase(wg, 1e-2, 1550e-9);
        CHECK(r.amplitude == doctest::Approx(0.7079457843841379).epsilon(1e-12));
    }
    SUBCASE("invalid wavelength") {
        CHECK_THROWS_AS(propagation_phase(wg, 1e-6, 0.0), std::domain_error);
        CHECK_THROWS_AS(propagation_phase(wg, 1e-6, -1550e-9), std::domain_error);
    }
}

TEST_CASE("propagation phase is additive in length, amplitudes multiply") {
    WaveguideModel wg;
    wg.propagation_loss_db_per_m = 120.0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> len(1e-7, 5e-4);
    for (int i = 0; i < 50; ++i) {
        const double l1 = len(rng), l2 = len(rng);
        const double lambda = 1540e-9 + 20e-9 * (i / 50.0);
        const auto a = propagation_phase(wg, l1, lambda);
        const auto b = propagation_phase(wg, l2, lambda);
        const auto c = propagation_phase(wg, l1 + l2, lambda);
        CHECK(std::abs(a.phase_rad + b.phase_rad - c.phase_rad) <=
              1e-10 * std::abs(c.phase_rad));
        CHECK(a.amplitude * b.amplitude == doctest::Approx(c.amplitude).epsilon(1e-12));
    }
}

TEST_CASE("free spectral range") {
    WaveguideModel wg;

    SUBCASE("frozen value for the published ring size") {
        const double l = two_pi * 15e-6;
        CHECK(fsr(wg, l, 1550e-9) == doctest::Approx(6.069361123464738e-9).epsilon(1e-12));
    }
    SUBCASE("doubling the round trip halves the FSR") {
        const double f1 = fsr(wg, 100e-6, 1550e-9);
        const double f2 = fsr(wg, 200e-6, 1550e-9);
        CHECK(f1 == doctest::Approx(2.0 * f2).epsilon(1e-12));
    }
    SUBCASE("monotone decreasing in length and group index") {
        double prev = fsr(wg, 50e-6, 1550e-9);
        for (double l = 60e-6; l < 200e-6; l += 10e-6) {
            const double cur = fsr(wg, l, 1550e-9);
            CHECK(cur < prev);
            prev = cur;
        }
        WaveguideModel faster = wg;
        faster.group_index = 4.3;
        CHECK(fsr(faster, 100e-6, 1550e-9) < fsr(wg, 100e-6, 1550e-9));
    }
    SUBCASE("MZI with arm difference of half the round trip has a 2 FSR fringe period") {
        const double l = two_pi * 15e-6;
        const double ring_fsr = fsr(wg, l, 1550e-9);
        CHECK(fsr(wg, l / 2.0, 1550e-9) == doctest::Approx(2.0 * ring_fsr).epsilon(1e-12));
        // the published arm differences sit within ~2% of that condition
        for (const double dl : {47.8e-6, 48.0e-6}) {
            const double period = fsr(wg, dl, 1550e-9);
            CHECK(period / ring_fsr == doctest::Approx(2.0).epsilon(0.025));
        }
    }
}

TEST_CASE("ring geometry and device validation") {
    RingGeometry g;
    g.radius = 15e-6;
    CHECK(g.circumference() == doctest::Approx(two_pi * 15e-6).epsilon(1e-12));
    g.radius = -1.0;
    CHECK_THROWS_AS(g.validate(), config_error);

    DeviceSpec dev;
    dev.geometry.radius = 15e-6;
    dev.input_coupler = PointCoupler::from_power_cross_coupling(0.05);
    dev.output_coupler = PointCoupler::from_power_cross_coupling(0.05);
    CHECK_NOTHROW(dev.validate());

    // MZI ring arms longer than the circumference cannot be laid out
    MziCouplerSpec huge;
    huge.sub_coupler_a = PointCoupler::from_power_cross_coupling(0.05);
    huge.sub_coupler_b = huge.sub_coupler_a;
    huge.ring_arm_length = 60e-6;
    huge.bus_arm_length = 80e-6;
    dev.input_coupler = huge;
    dev.output_coupler = huge;
    CHECK_THROWS_AS(dev.validate(), config_error);
}

TEST_CASE("wavelength grid validation and spacing") {
    WavelengthGrid g{1540e-9, 1560e-9, 5};
    CHECK_NOTHROW(g.validate());
    CHECK(g.wavelength(0) == doctest::Approx(1540e-9));
    CHECK(g.wavelength(4) == doctest::Approx(1560e-9));
    CHECK(g.step() == doctest::Approx(5e-9));

    CHECK_THROWS_AS((WavelengthGrid{1560e-9, 1540e-9, 5}.validate()), config_error);
    CHECK_THROWS_AS((WavelengthGrid{1540e-9, 1560e-9, 1}.validate()), config_error);
}
