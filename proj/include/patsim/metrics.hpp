// SPDX-License-Identifier: Apache-2.0
//
// Beam metrics on a far-field grid: peak direction, half-power beamwidths,
// directivity, the half-power azimuthal mainlobe window and the equivalent
// order estimate from the phase slope inside it.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patsim/constants.hpp"
#include "patsim/error.hpp"
#include "patsim/synthesis.hpp"

namespace patsim {

struct PeakInfo {
    std::size_t theta_index = 0;
    std::size_t phi_index = 0;
    double theta_rad = 0.0;
    double phi_rad = 0.0;
    double magnitude = 0.0;
};

/// Grid-point argmax of |E|, ties toward smaller theta then smaller phi.
inline PeakInfo find_peak(const FarFieldGrid& grid) {
    PeakInfo best;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < grid.theta_count(); ++i) {
        for (std::size_t j = 0; j < grid.phi_count(); ++j) {
            const double m = std::abs(grid.at(i, j));
            if (m > best_mag) {
                best_mag = m;
                best.theta_index = i;
                best.phi_index = j;
            }
        }
    }
    if (!(best_mag > 0.0)) throw domain_error("find_peak: all-zero grid");
    best.theta_rad = grid.theta(best.theta_index);
    best.phi_rad = grid.phi(best.phi_index);
    best.magnitude = best_mag;
    return best;
}

enum class Axis { theta, phi };

namespace detail {

// Fractional offset of the half-power crossing between an inside sample a
// (>= threshold) and the adjacent outside sample b (< threshold).
inline double crossing_fraction(double a, double b, double threshold) {
    return (a - threshold) / (a - b);
}

}  // namespace detail

/// Half-power beamwidth in degrees along one axis of the cut through the
/// peak (or through an overridden cut index). Crossings are located by
/// linear interpolation of |E|; the phi axis is treated circularly and a
/// ring that never drops below half power reports 360 degrees.
inline double hpbw(const FarFieldGrid& grid, Axis axis,
                   std::optional<std::size_t> cut_index = std::nullopt) {
    const PeakInfo peak = find_peak(grid);

    if (axis == Axis::theta) {
        const std::size_t col = cut_index.value_or(peak.phi_index);
        const std::size_t nt = grid.theta_count();
        std::vector<double> cut(nt);
        std::size_t imax = 0;
        for (std::size_t i = 0; i < nt; ++i) {
            cut[i] = std::abs(grid.at(i, col));
            if (cut[i] > cut[imax]) imax = i;
        }
        const double threshold = cut[imax] / std::sqrt(2.0);
        std::size_t lo = imax, hi = imax;
        while (lo > 0 && cut[lo - 1] >= threshold) --lo;
        while (hi + 1 < nt && cut[hi + 1] >= threshold) ++hi;
        if (lo == 0 || hi + 1 == nt)
            throw domain_error("hpbw: theta mainlobe clipped by the grid boundary");
        const double dt = grid.theta_step();
        const double left = grid.theta(lo) - dt * detail::crossing_fraction(cut[lo], cut[lo - 1], threshold);
        const double right = grid.theta(hi) + dt * detail::crossing_fraction(cut[hi], cut[hi + 1], threshold);
        return constants::rad_to_deg(right - left);
    }

    const std::size_t row = cut_index.value_or(peak.theta_index);
    const std::size_t np = grid.phi_count();
    std::vector<double> ring(np);
    std::size_t jmax = 0;
    for (std::size_t j = 0; j < np; ++j) {
        ring[j] = std::abs(grid.at(row, j));
        if (ring[j] > ring[jmax]) jmax = j;
    }
    const double threshold = ring[jmax] / std::sqrt(2.0);
    long lo = static_cast<long>(jmax), hi = static_cast<long>(jmax);
    const long n = static_cast<long>(np);
    while (hi - lo + 1 < n && ring[static_cast<std::size_t>(((lo - 1) % n + n) % n)] >= threshold) --lo;
    if (hi - lo + 1 >= n) return 360.0;  // never drops below half power
    while (hi - lo + 1 < n && ring[static_cast<std::size_t>(((hi + 1) % n + n) % n)] >= threshold) ++hi;
    if (hi - lo + 1 >= n) return 360.0;
    const double dp = grid.phi_step();
    const double in_lo = ring[static_cast<std::size_t>(((lo % n) + n) % n)];
    const double out_lo = ring[static_cast<std::size_t>((((lo - 1) % n) + n) % n)];
    const double in_hi = ring[static_cast<std::size_t>(((hi % n) + n) % n)];
    const double out_hi = ring[static_cast<std::size_t>((((hi + 1) % n) + n) % n)];
    const double left = static_cast<double>(lo) * dp - dp * detail::crossing_fraction(in_lo, out_lo, threshold);
    const double right = static_cast<double>(hi) * dp + dp * detail::crossing_fraction(in_hi, out_hi, threshold);
    return constants::rad_to_deg(right - left);
}

/// D = 4 pi |E|^2_peak / integral of |E|^2 over the sampled solid angle,
/// trapezoid in theta and rectangle in phi with the sin(theta) Jacobian.
/// The field is taken as zero outside the sampled theta range.
inline double directivity_dbi(const FarFieldGrid& grid) {
    const std::size_t nt = grid.theta_count();
    const std::size_t np = grid.phi_count();
    double total = 0.0;
    double peak_sq = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const double w = (i == 0 || i + 1 == nt) ? 0.5 : 1.0;
        const double jac = w * std::sin(grid.theta(i));
        double row_sum = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double p = std::norm(grid.at(i, j));
            row_sum += p;
            if (p > peak_sq) peak_sq = p;
        }
        total += jac * row_sum;
    }
    total *= grid.theta_step() * grid.phi_step();
    if (!(total > 0.0)) throw domain_error("directivity: zero total power");
    return 10.0 * std::log10(4.0 * constants::pi * peak_sq / total);
}

/// Contiguous circular half-power window around the ring argmax.
/// lo_rad <= hi_rad always; hi_rad may exceed 2pi when the window wraps.
struct PhiWindow {
    double lo_rad = 0.0;
    double hi_rad = 0.0;
    long first_index = 0;   // may be negative when the window wraps below 0
    std::size_t count = 0;
    bool full_circle = false;
};

inline PhiWindow mainlobe_window(const FarFieldGrid& grid,
                                 std::optional<std::size_t> cut_index = std::nullopt) {
    const std::size_t row = cut_index.value_or(find_peak(grid).theta_index);
    const std::size_t np = grid.phi_count();
    std::vector<double> ring(np);
    std::size_t jmax = 0;
    for (std::size_t j = 0; j < np; ++j) {
        ring[j] = std::abs(grid.at(row, j));
        if (ring[j] > ring[jmax]) jmax = j;
    }
    if (!(ring[jmax] > 0.0)) throw domain_error("mainlobe_window: zero ring");
    const double threshold = ring[jmax] / std::sqrt(2.0);
    const long n = static_cast<long>(np);
    long lo = static_cast<long>(jmax), hi = static_cast<long>(jmax);
    while (hi - lo + 1 < n && ring[static_cast<std::size_t>((((lo - 1) % n) + n) % n)] >= threshold) --lo;
    PhiWindow w;
    const double dp = grid.phi_step();
    if (hi - lo + 1 >= n) {
        w.full_circle = true;
        w.first_index = 0;
        w.count = np;
        w.lo_rad = 0.0;
        w.hi_rad = constants::two_pi;
        return w;
    }
    while (hi - lo + 1 < n && ring[static_cast<std::size_t>((((hi + 1) % n) + n) % n)] >= threshold) ++hi;
    if (hi - lo + 1 >= n) {
        w.full_circle = true;
        w.first_index = 0;
        w.count = np;
        w.lo_rad = 0.0;
        w.hi_rad = constants::two_pi;
        return w;
    }
    w.first_index = lo;
    w.count = static_cast<std::size_t>(hi - lo + 1);
    w.lo_rad = static_cast<double>(lo) * dp;
    w.hi_rad = static_cast<double>(hi) * dp;
    return w;
}

struct SlopeFit {
    int l_e = 0;
    double slope = 0.0;          // radians of phase per radian of azimuth
    double phase_rms_deg = 0.0;  // RMS residual of the linear fit
};

/// Unwrap the ring phase inside the window (successive differences mapped to
/// (-pi, pi]) and least-squares fit a line; l_e is the rounded slope.
inline SlopeFit estimate_le(std::span<const std::complex<double>> ring, const PhiWindow& window) {
    const std::size_t m = ring.size();
    if (m < 2) throw domain_error("estimate_le: ring too short");
    if (window.count < 8) throw domain_error("estimate_le: window too narrow, need >= 8 samples");
    if (window.count > m) throw domain_error("estimate_le: window exceeds ring span");

    const double dphi = constants::two_pi / static_cast<double>(m);
    const long n = static_cast<long>(m);

    std::vector<double> x(window.count), y(window.count);
    double previous = 0.0;
    for (std::size_t i = 0; i < window.count; ++i) {
        const long raw = window.first_index + static_cast<long>(i);
        const std::size_t idx = static_cast<std::size_t>(((raw % n) + n) % n);
        x[i] = static_cast<double>(raw) * dphi;
        const double phase = std::arg(ring[idx]);
        if (i == 0) {
            y[i] = phase;
        } else {
            // wrapped successive difference in (-pi, pi]
            const double step = std::arg(ring[idx] * std::conj(ring[static_cast<std::size_t>(
                                             (((raw - 1) % n) + n) % n)]));
            if (std::abs(step) >= constants::pi - 1e-12)
                throw domain_error("estimate_le: phase wraps faster than the sampling");
            y[i] = previous + step;
        }
        previous = y[i];
    }

    const double count = static_cast<double>(window.count);
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < window.count; ++i) {
        x_mean += x[i];
        y_mean += y[i];
    }
    x_mean /= count;
    y_mean /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < window.count; ++i) {
        sxx += (x[i] - x_mean) * (x[i] - x_mean);
        sxy += (x[i] - x_mean) * (y[i] - y_mean);
    }
    if (!(sxx > 0.0)) throw domain_error("estimate_le: degenerate window");

    SlopeFit fit;
    fit.slope = sxy / sxx;
    const double intercept = y_mean - fit.slope * x_mean;
    double sq = 0.0;
    for (std::size_t i = 0; i < window.count; ++i) {
        const double r = y[i] - (fit.slope * x[i] + intercept);
        sq += r * r;
    }
    fit.phase_rms_deg = constants::rad_to_deg(std::sqrt(sq / count));
    fit.l_e = static_cast<int>(std::llround(fit.slope));
    return fit;
}

/// Everything the run report carries about the beam.
struct BeamMetrics {
    double theta_peak_deg = 0.0;
    double phi_peak_deg = 0.0;
    double divergence_angle_deg = 0.0;  // the peak polar angle of the vortex ring
    double hpbw_theta_deg = 0.0;
    double hpbw_phi_deg = 0.0;
    double directivity_dbi = 0.0;
    int l_e = 0;
    double phase_slope = 0.0;
    double phase_rms_deg = 0.0;
    double mainlobe_phi_deg[2] = {0.0, 0.0};
    double cut_theta_deg = 0.0;  // theta of the row the phi metrics used
};

/// Aggregate metrics. The phi-cut metrics (hpbw_phi, mainlobe window, l_e)
/// use the peak row unless cut_theta_rad overrides it. A theta mainlobe that
/// runs into the grid boundary (the full-circle baseline does this) reports
/// NaN instead of aborting the run.
inline BeamMetrics compute_beam_metrics(const FarFieldGrid& grid,
                                        std::optional<double> cut_theta_rad = std::nullopt) {
    const PeakInfo peak = find_peak(grid);
    const std::size_t row =
        cut_theta_rad ? nearest_theta_row(grid, *cut_theta_rad) : peak.theta_index;

    BeamMetrics out;
    out.theta_peak_deg = constants::rad_to_deg(peak.theta_rad);
    out.phi_peak_deg = constants::rad_to_deg(peak.phi_rad);
    out.divergence_angle_deg = out.theta_peak_deg;
    try {
        out.hpbw_theta_deg = hpbw(grid, Axis::theta);
    } catch (const domain_error&) {
        out.hpbw_theta_deg = std::numeric_limits<double>::quiet_NaN();
    }
    out.hpbw_phi_deg = hpbw(grid, Axis::phi, row);
    out.directivity_dbi = patsim::directivity_dbi(grid);

    const PhiWindow window = mainlobe_window(grid, row);
    const SlopeFit fit = estimate_le(grid.row(row), window);
    out.l_e = fit.l_e;
    out.phase_slope = fit.slope;
    out.phase_rms_deg = fit.phase_rms_deg;
    double lo_deg = constants::rad_to_deg(window.lo_rad);
    double hi_deg = constants::rad_to_deg(window.hi_rad);
    if (lo_deg < 0.0) {
        lo_deg += 360.0;
        hi_deg += 360.0;
    }
    out.mainlobe_phi_deg[0] = lo_deg;
    out.mainlobe_phi_deg[1] = hi_deg;
    out.cut_theta_deg = constants::rad_to_deg(grid.theta(row));
    return out;
}

}  // namespace patsim
