// SPDX-License-Identifier: Apache-2.0
//
// Waveguide design equations and the arc aperture model: TE10 guide
// wavelength, traveling-wave inner radius, arc construction and the
// discretization of the slot into a phased element set.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "patsim/constants.hpp"
#include "patsim/error.hpp"

namespace patsim {

/// Operating frequency plus the rectangular cross-section of the curved
/// waveguide. narrow_wall_m and slot_width_m are carried for reporting only;
/// they do not enter the radiation model.
struct WaveguideSpec {
    double frequency_hz = 0.0;
    double wide_wall_m = 0.0;
    double narrow_wall_m = 0.0;
    double slot_width_m = 0.0;

    double free_space_wavelength() const { return constants::speed_of_light / frequency_hz; }

    void validate() const {
        if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
            throw domain_error("WaveguideSpec: frequency must be positive");
        if (!(wide_wall_m > 0.0)) throw domain_error("WaveguideSpec: wide wall must be positive");
        if (!(narrow_wall_m > 0.0)) throw domain_error("WaveguideSpec: narrow wall must be positive");
        if (narrow_wall_m > wide_wall_m)
            throw domain_error("WaveguideSpec: narrow wall exceeds wide wall");
        if (slot_width_m < 0.0) throw domain_error("WaveguideSpec: slot width must be non-negative");
    }
};

/// TE10 guide wavelength, lambda0 / sqrt(1 - (lambda0 / 2 a_w)^2).
/// Throws when the mode is at or below cutoff (a_w <= lambda0/2).
inline double guide_wavelength(const WaveguideSpec& spec) {
    spec.validate();
    const double lambda0 = spec.free_space_wavelength();
    const double ratio = lambda0 / (2.0 * spec.wide_wall_m);
    if (ratio >= 1.0) {
        throw domain_error("guide_wavelength: TE10 below cutoff, wide wall " +
                           std::to_string(spec.wide_wall_m * 1e3) + " mm <= lambda0/2 = " +
                           std::to_string(0.5 * lambda0 * 1e3) + " mm");
    }
    return lambda0 / std::sqrt(1.0 - ratio * ratio);
}

/// True when the wide wall also admits the next mode (a_w >= lambda0).
/// Callers surface this as a warning; the TE10 formulas stay valid.
inline bool is_multimode(const WaveguideSpec& spec) {
    return spec.wide_wall_m >= spec.free_space_wavelength();
}

/// Inner radius of the circular traveling-wave aperture carrying order l:
/// |l| * lambda_g / (2 pi) - a_w / 2.
inline double inner_radius(int l, const WaveguideSpec& spec) {
    if (l == 0) throw domain_error("inner_radius: order 0 is degenerate, need |l| >= 1");
    const double lambda_g = guide_wavelength(spec);
    return std::abs(l) * lambda_g / constants::two_pi - 0.5 * spec.wide_wall_m;
}

/// The radiating arc: slot radius, angular extent and the traveling-wave
/// parameters that phase it.
struct ArcApertureSpec {
    double slot_radius_m = 0.0;    // mean radius of the slot
    double arc_span_rad = 0.0;     // phi_s, (0, 2pi]
    double arc_center_rad = 0.0;   // phi_c
    int center_order = 0;          // l_center, |l| >= 1
    int direction = +1;            // traveling sense, +1 or -1
    double guide_wavenumber = 0.0; // beta, rad/m
    int element_count = 0;

    void validate() const {
        if (std::abs(center_order) < 1) throw domain_error("ArcApertureSpec: |l_center| must be >= 1");
        if (!(arc_span_rad > 0.0) || arc_span_rad > constants::two_pi + 1e-12)
            throw domain_error("ArcApertureSpec: arc span must be in (0, 2pi]");
        if (!(slot_radius_m > 0.0)) throw domain_error("ArcApertureSpec: slot radius must be positive");
        if (direction != 1 && direction != -1)
            throw domain_error("ArcApertureSpec: direction must be +1 or -1");
        if (element_count < 8) throw domain_error("ArcApertureSpec: need at least 8 elements");
        const double resonance = guide_wavenumber * slot_radius_m;
        if (std::abs(resonance - std::abs(center_order)) > 1e-9 * std::abs(center_order))
            throw domain_error("ArcApertureSpec: beta * r_s = " + std::to_string(resonance) +
                               " does not match |l_center| = " + std::to_string(std::abs(center_order)));
    }
};

/// Minimum element count under the density rule: at least 20 elements per
/// guide wavelength of arc length, never fewer than 8.
inline int min_element_count(double slot_radius_m, double arc_span_rad, double lambda_g) {
    const double arc_length = slot_radius_m * arc_span_rad;
    const int by_density = static_cast<int>(std::ceil(20.0 * arc_length / lambda_g - 1e-9));
    return std::max(8, by_density);
}

inline int auto_element_count(const WaveguideSpec& spec, int l_center, double arc_span_rad) {
    const double lambda_g = guide_wavelength(spec);
    const double r_s = std::abs(l_center) * lambda_g / constants::two_pi;
    return min_element_count(r_s, arc_span_rad, lambda_g);
}

/// Build the arc for a given center order. The slot is modeled at the mean
/// radius r_s = |l| lambda_g / (2 pi), which makes beta * r_s = |l| exact.
inline ArcApertureSpec make_arc(const WaveguideSpec& spec, int l_center, double arc_span_rad,
                                double arc_center_rad, int direction, int element_count) {
    if (std::abs(l_center) < 1) throw domain_error("make_arc: |l_center| must be >= 1");
    if (!(arc_span_rad > 0.0) || arc_span_rad > constants::two_pi + 1e-12)
        throw domain_error("make_arc: arc span must be in (0, 2pi]");
    const double lambda_g = guide_wavelength(spec);
    const double r_s = std::abs(l_center) * lambda_g / constants::two_pi;
    const int n_min = min_element_count(r_s, arc_span_rad, lambda_g);
    if (element_count < n_min) {
        throw domain_error("make_arc: " + std::to_string(element_count) +
                           " elements undersample the slot, need >= " + std::to_string(n_min) +
                           " (20 per guide wavelength of arc length)");
    }
    ArcApertureSpec arc;
    arc.slot_radius_m = r_s;
    arc.arc_span_rad = std::min(arc_span_rad, constants::two_pi);
    arc.arc_center_rad = arc_center_rad;
    arc.center_order = l_center;
    arc.direction = direction;
    arc.guide_wavenumber = constants::two_pi / lambda_g;
    arc.element_count = element_count;
    arc.validate();
    return arc;
}

/// Point radiators sampling the slot: positions in the z = 0 plane and
/// unit-magnitude traveling-wave phasors.
struct ElementSet {
    std::vector<std::array<double, 3>> positions;
    std::vector<std::complex<double>> excitations;
    double wavenumber = 0.0;  // free-space k, rad/m

    void validate() const {
        if (positions.empty()) throw domain_error("ElementSet: empty");
        if (positions.size() != excitations.size())
            throw domain_error("ElementSet: positions/excitations size mismatch");
        if (!(wavenumber > 0.0)) throw domain_error("ElementSet: wavenumber must be positive");
    }
};

/// Sample the arc at N midpoints. Element n sits at azimuth
/// phi_n = phi_c - phi_s/2 + (n + 1/2) phi_s / N and carries the
/// traveling-wave phase psi_n = direction * l_center * phi_n, so direction +1
/// produces a far-field ring winding of +l_center.
inline ElementSet discretize(const ArcApertureSpec& arc, double frequency_hz) {
    arc.validate();
    if (!(frequency_hz > 0.0)) throw domain_error("discretize: frequency must be positive");

    const int n_min = min_element_count(arc.slot_radius_m, arc.arc_span_rad,
                                        constants::two_pi / arc.guide_wavenumber);
    if (arc.element_count < n_min)
        throw domain_error("discretize: element density rule violated, need >= " +
                           std::to_string(n_min) + " elements");

    ElementSet set;
    const int n = arc.element_count;
    set.positions.reserve(n);
    set.excitations.reserve(n);
    const double phi_start = arc.arc_center_rad - 0.5 * arc.arc_span_rad;
    const double step = arc.arc_span_rad / n;
    for (int i = 0; i < n; ++i) {
        const double phi_i = phi_start + (i + 0.5) * step;
        set.positions.push_back({arc.slot_radius_m * std::cos(phi_i),
                                 arc.slot_radius_m * std::sin(phi_i), 0.0});
        const double psi = arc.direction * arc.center_order * phi_i;
        set.excitations.emplace_back(std::cos(psi), std::sin(psi));
    }
    set.wavenumber = constants::two_pi * frequency_hz / constants::speed_of_light;
    return set;
}

}  // namespace patsim
