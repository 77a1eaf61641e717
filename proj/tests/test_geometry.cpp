// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "patsim/geometry.hpp"

using namespace patsim;
using patsim::constants::two_pi;

namespace {

WaveguideSpec reference_waveguide() {
    WaveguideSpec w;
    w.frequency_hz = 60e9;
    w.wide_wall_m = 2.80e-3;
    w.narrow_wall_m = 0.68e-3;
    w.slot_width_m = 0.70e-3;
    return w;
}

}  // namespace

TEST_CASE("guide wavelength of the 60 GHz design") {
    const double lambda_g = guide_wavelength(reference_waveguide());
    CHECK(lambda_g * 1e3 == Catch::Approx(11.065).margin(1e-3));
    // independent route: 1/lambda_g^2 = 1/lambda0^2 - 1/(2 a_w)^2
    const double lambda0 = reference_waveguide().free_space_wavelength();
    const double alt = 1.0 / std::sqrt(1.0 / (lambda0 * lambda0) -
                                       1.0 / (4.0 * 2.80e-3 * 2.80e-3));
    CHECK(lambda_g == Catch::Approx(alt).epsilon(1e-14));
    CHECK(lambda_g > lambda0);
}

TEST_CASE("guide wavelength closed form at a_w = lambda0") {
    WaveguideSpec w = reference_waveguide();
    const double lambda0 = w.free_space_wavelength();
    w.wide_wall_m = lambda0;
    CHECK(guide_wavelength(w) == Catch::Approx(2.0 * lambda0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(is_multimode(w));
    CHECK_FALSE(is_multimode(reference_waveguide()));
}

TEST_CASE("guide wavelength always exceeds the free-space wavelength") {
    WaveguideSpec w = reference_waveguide();
    const double lambda0 = w.free_space_wavelength();
    for (double ratio : {0.505, 0.6, 0.75, 0.9, 0.999, 1.0, 1.3, 2.0}) {
        w.wide_wall_m = ratio * lambda0;
        INFO("a_w/lambda0 = " << ratio);
        CHECK(guide_wavelength(w) > lambda0);
    }
}

TEST_CASE("cutoff raises") {
    WaveguideSpec w = reference_waveguide();
    w.wide_wall_m = 0.5 * w.free_space_wavelength();
    CHECK_THROWS_AS(guide_wavelength(w), domain_error);
    w.wide_wall_m *= 0.9;
    CHECK_THROWS_AS(guide_wavelength(w), domain_error);
}

TEST_CASE("inner radius of the traveling-wave aperture") {
    const WaveguideSpec w = reference_waveguide();
    CHECK(inner_radius(40, w) * 1e3 == Catch::Approx(69.04).margin(0.01));
    CHECK(inner_radius(1, w) * 1e3 == Catch::Approx(0.361).margin(0.005));
    CHECK(inner_radius(-40, w) == inner_radius(40, w));
    CHECK_THROWS_AS(inner_radius(0, w), domain_error);
}

TEST_CASE("inner radius is linear and increasing in |l|") {
    const WaveguideSpec w = reference_waveguide();
    const double a_half = 0.5 * w.wide_wall_m;
    double previous = 0.0;
    for (int l = 1; l <= 12; ++l) {
        const double r = inner_radius(l, w);
        CHECK(r > previous);
        previous = r;
        CHECK(inner_radius(2 * l, w) + a_half ==
              Catch::Approx(2.0 * (inner_radius(l, w) + a_half)).epsilon(1e-12));
    }
}

TEST_CASE("make_arc places the slot at the mean radius") {
    const WaveguideSpec w = reference_waveguide();
    const ArcApertureSpec arc = make_arc(w, 40, two_pi / 9.0, 0.0, +1, 400);
    CHECK(arc.slot_radius_m * 1e3 == Catch::Approx(70.44).margin(0.01));
    CHECK(arc.guide_wavenumber * arc.slot_radius_m == Catch::Approx(40.0).epsilon(1e-12));
    CHECK(arc.slot_radius_m ==
          Catch::Approx(inner_radius(40, w) + 0.5 * w.wide_wall_m).epsilon(1e-12));
}

TEST_CASE("make_arc accepts the full circle and rejects undersampling") {
    const WaveguideSpec w = reference_waveguide();
    CHECK_NOTHROW(make_arc(w, 1, two_pi, 0.0, +1, 64));
    CHECK_THROWS_AS(make_arc(w, 40, two_pi / 9.0, 0.0, +1, 4), domain_error);
    CHECK_THROWS_AS(make_arc(w, 0, two_pi / 9.0, 0.0, +1, 400), domain_error);
    CHECK_THROWS_AS(make_arc(w, 40, 0.0, 0.0, +1, 400), domain_error);
    CHECK_THROWS_AS(make_arc(w, 40, two_pi / 9.0, 0.0, +2, 400), domain_error);
}

TEST_CASE("auto element count follows the density rule") {
    const WaveguideSpec w = reference_waveguide();
    const double lambda_g = guide_wavelength(w);
    const double r_s = 40.0 * lambda_g / two_pi;
    const int n = auto_element_count(w, 40, two_pi / 9.0);
    CHECK(n == static_cast<int>(std::ceil(20.0 * r_s * (two_pi / 9.0) / lambda_g - 1e-9)));
    CHECK(auto_element_count(w, 1, two_pi) == 20);  // circumference is one guide wavelength
}

TEST_CASE("discretize produces the traveling-wave phasing") {
    const WaveguideSpec w = reference_waveguide();

    SECTION("full circle winds once per center order") {
        const ArcApertureSpec arc = make_arc(w, 1, two_pi, 0.0, +1, 64);
        const ElementSet set = discretize(arc, w.frequency_hz);
        REQUIRE(set.positions.size() == 64);
        // positive direction advances the phase with azimuth
        const double psi0 = std::arg(set.excitations.front());
        const double psiN = std::arg(set.excitations.back());
        const double expected = two_pi * 63.0 / 64.0;
        CHECK(std::remainder(psiN - psi0 - expected, two_pi) == Catch::Approx(0.0).margin(1e-9));
        // all on the slot circle, z = 0, unit magnitudes
        for (std::size_t i = 0; i < set.positions.size(); ++i) {
            const auto& p = set.positions[i];
            CHECK(std::hypot(p[0], p[1]) == Catch::Approx(arc.slot_radius_m).epsilon(1e-12));
            CHECK(p[2] == 0.0);
            CHECK(std::abs(set.excitations[i]) == Catch::Approx(1.0).epsilon(1e-12));
        }
        CHECK(set.wavenumber == Catch::Approx(two_pi * 60e9 / constants::speed_of_light));
    }

    SECTION("phase run across the partial slot") {
        const int n = 400;
        const ArcApertureSpec arc = make_arc(w, 40, two_pi / 9.0, 0.0, +1, n);
        const ElementSet set = discretize(arc, w.frequency_hz);
        double total = 0.0;
        for (int i = 1; i < n; ++i) {
            total += std::arg(set.excitations[i] * std::conj(set.excitations[i - 1]));
        }
        const double expected = 40.0 * (two_pi / 9.0) * (n - 1) / n;
        CHECK(total == Catch::Approx(expected).epsilon(1e-12));
    }

    SECTION("direction flip conjugates the excitations") {
        const ArcApertureSpec plus = make_arc(w, 40, two_pi / 9.0, 0.3, +1, 120);
        const ArcApertureSpec minus = make_arc(w, 40, two_pi / 9.0, 0.3, -1, 120);
        const ElementSet sp = discretize(plus, w.frequency_hz);
        const ElementSet sm = discretize(minus, w.frequency_hz);
        for (std::size_t i = 0; i < sp.positions.size(); ++i) {
            CHECK(sp.positions[i] == sm.positions[i]);
            CHECK(sm.excitations[i] == std::conj(sp.excitations[i]));
        }
    }

    SECTION("density rule enforced") {
        ArcApertureSpec arc = make_arc(w, 40, two_pi / 9.0, 0.0, +1, 89);
        arc.element_count = 30;  // bypass make_arc, discretize re-checks
        CHECK_THROWS_AS(discretize(arc, w.frequency_hz), domain_error);
    }
}
