// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "patsim/metrics.hpp"
#include "patsim/spectrum.hpp"
#include "patsim/synthesis.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace patsim;
using patsim::constants::two_pi;

TEST_CASE("decompose of a pure mode is a Kronecker spectrum") {
    const auto ring = support::pure_mode_ring(3, 64);
    const OamSpectrum s = decompose(ring, -10, 10);
    CHECK(s.normalized);
    CHECK(s.power(3) == Catch::Approx(1.0).margin(1e-12));
    for (int l = -10; l <= 10; ++l) {
        if (l != 3) CHECK(s.power(l) < 1e-20);
    }
}

TEST_CASE("decompose splits a two-mode superposition evenly") {
    std::vector<std::complex<double>> ring(64);
    for (std::size_t m = 0; m < 64; ++m) {
        const double phi = two_pi * m / 64.0;
        ring[m] = std::polar(1.0, 5.0 * phi) + std::polar(1.0, -5.0 * phi);
    }
    const OamSpectrum s = decompose(ring, -10, 10);
    CHECK(s.power(5) == Catch::Approx(0.5).margin(1e-12));
    CHECK(s.power(-5) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("decompose of a rectangular window matches the finite-window transform") {
    // E = 1 on [0, 2pi/9), 0 elsewhere, sampled at 720 points (80 inside).
    const std::size_t m_count = 720;
    std::vector<std::complex<double>> ring(m_count, {0.0, 0.0});
    for (std::size_t m = 0; m < 80; ++m) ring[m] = {1.0, 0.0};
    const OamSpectrum s = decompose(ring, -20, 20);

    // closed form |W(l)| proportional to |sinc(l pi / 9)| / 9, cross-checked
    // against the dense quadrature oracle of the same finite-window integral
    double closed_norm = 0.0;
    for (int l = -20; l <= 20; ++l) {
        const double w = sinc(l * constants::pi / 9.0) / 9.0;
        closed_norm += w * w;
    }
    for (int l = -20; l <= 20; ++l) {
        const double closed_raw = std::abs(sinc(l * constants::pi / 9.0)) / 9.0;
        const double oracle_raw = std::abs(oracle::rect_window_mode_weight(l, two_pi / 9.0));
        CHECK(std::abs(oracle_raw - closed_raw) < 1e-8);
        const double closed = closed_raw / std::sqrt(closed_norm);
        INFO("l=" << l);
        if (closed > 1e-2) {
            CHECK(std::abs(s.weight(l)) == Catch::Approx(closed).epsilon(1e-2));
        }
    }
}

TEST_CASE("decompose rejects aliased and empty rings") {
    const auto ring = support::pure_mode_ring(1, 16);
    CHECK_THROWS_AS(decompose(ring, -10, 10), domain_error);  // needs 21 samples
    std::vector<std::complex<double>> zeros(64, {0.0, 0.0});
    CHECK_THROWS_AS(decompose(zeros, -5, 5), domain_error);
    CHECK_THROWS_AS(decompose(ring, 5, -5), domain_error);
}

TEST_CASE("Parseval: range power equals the ring mean square") {
    std::mt19937 rng(20240613);
    std::uniform_real_distribution<double> amp(0.1, 1.0);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    const std::size_t m_count = 256;
    const int band = 40;

    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::complex<double>> modes(2 * band + 1);
        for (auto& c : modes) c = std::polar(amp(rng), phase(rng));
        std::vector<std::complex<double>> ring(m_count, {0.0, 0.0});
        for (std::size_t m = 0; m < m_count; ++m) {
            const double phi = two_pi * m / m_count;
            for (int l = -band; l <= band; ++l) {
                ring[m] += modes[l + band] * std::polar(1.0, l * phi);
            }
        }
        const OamSpectrum s = decompose(ring, -band - 10, band + 10);
        double mean_square = 0.0;
        for (const auto& e : ring) mean_square += std::norm(e);
        mean_square /= static_cast<double>(m_count);
        CHECK(s.total_power == Catch::Approx(mean_square).epsilon(1e-9));
    }
}

TEST_CASE("mirror property: direction flip reflects the spectrum") {
    GridSpec g;
    g.theta_count = 181;
    g.phi_count = 256;
    const FarFieldGrid fp = far_field(support::pat_elements(+1, 89), g);
    const FarFieldGrid fm = far_field(support::pat_elements(-1, 89), g);
    const std::size_t row = find_peak(fp).theta_index;
    const OamSpectrum sp = decompose(fp.row(row), -60, 60);
    const OamSpectrum sm = decompose(fm.row(row), -60, 60);
    for (int l = -60; l <= 60; ++l) {
        CHECK(std::abs(std::abs(sm.weight(-l)) - std::abs(sp.weight(l))) < 1e-10);
    }
}

TEST_CASE("rotation property: rigid rotation phases the spectrum by exp(-j l dphi)") {
    GridSpec g;
    g.theta_count = 181;
    g.phi_count = 256;
    const int shift = 9;
    const double dphi = two_pi / g.phi_count;

    ElementSet base = support::pat_elements(+1, 89);
    ElementSet rotated = base;
    const double c = std::cos(shift * dphi), s = std::sin(shift * dphi);
    for (auto& p : rotated.positions) {
        const double x = p[0], y = p[1];
        p[0] = x * c - y * s;
        p[1] = x * s + y * c;
    }

    const FarFieldGrid f0 = far_field(base, g);
    const FarFieldGrid f1 = far_field(rotated, g);
    const std::size_t row = find_peak(f0).theta_index;
    const OamSpectrum s0 = decompose(f0.row(row), 10, 70);
    const OamSpectrum s1 = decompose(f1.row(row), 10, 70);
    for (int l = 10; l <= 70; ++l) {
        CHECK(std::abs(std::abs(s1.weight(l)) - std::abs(s0.weight(l))) < 1e-10);
        if (std::abs(s0.weight(l)) > 1e-6) {
            const std::complex<double> ratio = s1.weight(l) / s0.weight(l);
            const std::complex<double> expected = std::polar(1.0, -l * shift * dphi);
            CHECK(std::abs(ratio - expected) < 1e-9);
        }
    }
}

TEST_CASE("envelope_optical basics") {
    const OamSpectrum s = envelope_optical(two_pi / 9.0, 40, 13, 67);
    // pre-normalization weight at the center is sinc(0) = 1
    CHECK(std::abs(s.weight(40)) * std::sqrt(s.total_power) == Catch::Approx(1.0).epsilon(1e-12));
    // first sidelobe null at delta-l = 9
    const double peak = std::abs(s.weight(40));
    CHECK(std::abs(s.weight(49)) < 1e-14 * peak);
    CHECK(std::abs(s.weight(31)) < 1e-14 * peak);
}

TEST_CASE("envelope_optical with the full aperture passes a single mode") {
    const OamSpectrum s = envelope_optical(two_pi, 5, -10, 10);
    CHECK(s.power(5) == Catch::Approx(1.0).margin(1e-25));
    for (int l = -10; l <= 10; ++l) {
        if (l != 5) CHECK(s.power(l) < 1e-28);
    }
}

TEST_CASE("envelope_rf carries the Bessel factor") {
    const WaveguideSpec w = support::reference_waveguide();
    const double lambda_g = guide_wavelength(w);
    const double r_s = 40.0 * lambda_g / two_pi;
    const double k = two_pi / w.free_space_wavelength();
    const double theta0 = constants::deg_to_rad(24.0);

    const OamSpectrum s = envelope_rf(two_pi / 9.0, 40, k, r_s, theta0, 30, 50);
    const double z = k * r_s * std::sin(theta0);
    CHECK(z == Catch::Approx(36.03).margin(0.01));
    // center weight before normalization is J_40(z), against the oracle
    const double raw_center = std::abs(s.weight(40)) * std::sqrt(s.total_power);
    CHECK(raw_center == Catch::Approx(std::abs(oracle::quadrature_bessel_j(40, z))).margin(1e-11));
    // sinc zeros at delta-l = 9 survive the Bessel factor
    CHECK(std::abs(s.weight(49)) < 1e-13);
    CHECK(std::abs(s.weight(31)) < 1e-13);
}

TEST_CASE("envelope_rf concentrates the mode group at the divergence angle") {
    const WaveguideSpec w = support::reference_waveguide();
    const double lambda_g = guide_wavelength(w);
    const double r_s = 40.0 * lambda_g / two_pi;
    const double k = two_pi / w.free_space_wavelength();
    const OamSpectrum s =
        envelope_rf(two_pi / 9.0, 40, k, r_s, constants::deg_to_rad(24.5), 30, 50);
    CHECK(power_fraction(s, 35, 45) >= 0.80);
}

TEST_CASE("envelope_rf full-circle limit matches envelope_optical") {
    const OamSpectrum rf = envelope_rf(two_pi, 4, 1256.6, 5e-3, 0.8, -10, 10);
    const OamSpectrum opt = envelope_optical(two_pi, 4, -10, 10);
    CHECK(rf.power(4) == Catch::Approx(1.0).margin(1e-20));
    CHECK(opt.power(4) == Catch::Approx(1.0).margin(1e-20));
}

TEST_CASE("compare reports perfect and anti-aligned spectra") {
    const OamSpectrum s = envelope_optical(two_pi / 9.0, 0, -5, 5);
    const SpectrumComparison same = compare(s, s, -5, 5);
    CHECK(same.correlation == Catch::Approx(1.0).margin(1e-12));
    CHECK(same.rmse == Catch::Approx(0.0).margin(1e-15));

    OamSpectrum a, b;
    a.l_min = b.l_min = 0;
    a.l_max = b.l_max = 1;
    a.weights = {{1.0, 0.0}, {0.0, 0.0}};
    b.weights = {{0.0, 0.0}, {1.0, 0.0}};
    const SpectrumComparison anti = compare(a, b, 0, 1);
    CHECK(anti.correlation == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("compare rejects bad windows") {
    const OamSpectrum s = envelope_optical(two_pi / 9.0, 0, -5, 5);
    CHECK_THROWS_AS(compare(s, s, 3, -3), domain_error);
    CHECK_THROWS_AS(compare(s, s, -8, 5), domain_error);
    OamSpectrum flat = s;
    for (auto& w : flat.weights) w = {0.5, 0.0};
    CHECK_THROWS_AS(compare(flat, flat, -5, 5), domain_error);  // zero variance
}

TEST_CASE("power_fraction windows") {
    const auto ring = support::pure_mode_ring(2, 64);
    const OamSpectrum s = decompose(ring, -10, 10);
    CHECK(power_fraction(s, 0, 5) == Catch::Approx(1.0).margin(1e-12));
    CHECK(power_fraction(s, -10, -1) == Catch::Approx(0.0).margin(1e-20));
    CHECK_THROWS_AS(power_fraction(s, 5, 15), domain_error);
    OamSpectrum raw = s;
    raw.normalized = false;
    CHECK_THROWS_AS(power_fraction(raw, 0, 5), domain_error);
}

TEST_CASE("Kronecker property holds for every admissible winding") {
    const std::size_t m_count = 64;
    for (int l0 = -30; l0 <= 30; l0 += 5) {
        const auto ring = support::pure_mode_ring(l0, m_count);
        const OamSpectrum s = decompose(ring, -31, 31);
        INFO("l0=" << l0);
        CHECK(s.power(l0) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("default mode half-span covers three sidelobes") {
    CHECK(default_mode_half_span(two_pi / 9.0) == 27);
    CHECK(default_mode_half_span(two_pi) == 3);
    CHECK(default_mode_half_span(constants::deg_to_rad(40.0)) == 27);
}
