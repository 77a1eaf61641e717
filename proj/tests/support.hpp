// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the test suites: the 60 GHz design and a few
// hand-built element sets.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "patsim/geometry.hpp"
#include "patsim/synthesis.hpp"

namespace support {

inline patsim::WaveguideSpec reference_waveguide() {
    patsim::WaveguideSpec w;
    w.frequency_hz = 60e9;
    w.wide_wall_m = 2.80e-3;
    w.narrow_wall_m = 0.68e-3;
    w.slot_width_m = 0.70e-3;
    return w;
}

inline patsim::ElementSet pat_elements(int direction = +1, int count = 89,
                                       double arc_center = 0.0) {
    const patsim::WaveguideSpec w = reference_waveguide();
    const patsim::ArcApertureSpec arc = patsim::make_arc(
        w, 40, patsim::constants::two_pi / 9.0, arc_center, direction, count);
    return patsim::discretize(arc, w.frequency_hz);
}

/// Uniform ring of isotropic radiators with an explicit phase winding.
inline patsim::ElementSet ring_elements(int winding, int count, double radius,
                                        double wavenumber) {
    patsim::ElementSet set;
    for (int i = 0; i < count; ++i) {
        const double phi = patsim::constants::two_pi * (i + 0.5) / count;
        set.positions.push_back({radius * std::cos(phi), radius * std::sin(phi), 0.0});
        const double psi = winding * phi;
        set.excitations.emplace_back(std::cos(psi), std::sin(psi));
    }
    set.wavenumber = wavenumber;
    return set;
}

/// Synthetic pure-mode ring exp(j l0 phi) sampled at M azimuths.
inline std::vector<std::complex<double>> pure_mode_ring(int l0, std::size_t m_count) {
    std::vector<std::complex<double>> ring(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        const double phi = patsim::constants::two_pi * static_cast<double>(m) /
                           static_cast<double>(m_count);
        ring[m] = std::polar(1.0, l0 * phi);
    }
    return ring;
}

}  // namespace support
