// SPDX-License-Identifier: Apache-2.0
//
// OAM spectral analysis: azimuthal Fourier decomposition of a field ring,
// the closed-form spectrum envelopes (optical angular restriction and the
// RF partial-arc form with the Bessel factor), and spectrum comparison.

#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "patsim/constants.hpp"
#include "patsim/error.hpp"
#include "patsim/special_functions.hpp"

namespace patsim {

/// Complex mode weights W(l) over a signed integer range [l_min, l_max].
/// total_power records the power the weights carried before unit-power
/// normalization.
struct OamSpectrum {
    int l_min = 0;
    int l_max = 0;
    std::vector<std::complex<double>> weights;
    bool normalized = false;
    double total_power = 0.0;

    int mode_count() const { return l_max - l_min + 1; }
    bool covers(int lo, int hi) const { return lo >= l_min && hi <= l_max && lo <= hi; }

    const std::complex<double>& weight(int l) const {
        if (l < l_min || l > l_max) throw domain_error("OamSpectrum: mode outside range");
        return weights[static_cast<std::size_t>(l - l_min)];
    }
    double power(int l) const { return std::norm(weight(l)); }
};

namespace detail {

inline void normalize_spectrum(OamSpectrum& s) {
    double total = 0.0;
    for (const auto& w : s.weights) total += std::norm(w);
    if (!(total > 0.0) || !std::isfinite(total))
        throw domain_error("spectrum: no power in the requested mode range");
    s.total_power = total;
    const double scale = 1.0 / std::sqrt(total);
    for (auto& w : s.weights) w *= scale;
    s.normalized = true;
}

}  // namespace detail

/// Default half-span of the analysis range for an arc of span phi_s:
/// three sinc sidelobes, 3 * ceil(2pi / phi_s).
inline int default_mode_half_span(double arc_span_rad) {
    if (!(arc_span_rad > 0.0)) throw domain_error("default_mode_half_span: span must be positive");
    return 3 * static_cast<int>(std::ceil(constants::two_pi / arc_span_rad - 1e-9));
}

/// W(l) = (1/M) sum_m E(phi_m) exp(-j l phi_m) over a uniform [0, 2pi) ring,
/// then normalized to unit power over [l_min, l_max]. Direct summation.
inline OamSpectrum decompose(std::span<const std::complex<double>> ring, int l_min, int l_max) {
    if (l_min > l_max) throw domain_error("decompose: l_min > l_max");
    const std::size_t m_count = ring.size();
    const int l_abs = std::max(std::abs(l_min), std::abs(l_max));
    if (m_count < static_cast<std::size_t>(2 * l_abs + 1))
        throw domain_error("decompose: " + std::to_string(m_count) +
                           " ring samples alias modes up to |l| = " + std::to_string(l_abs) +
                           ", need at least " + std::to_string(2 * l_abs + 1));

    double mean_square = 0.0;
    for (const auto& e : ring) mean_square += std::norm(e);
    mean_square /= static_cast<double>(m_count);
    if (mean_square < 1e-30) throw domain_error("decompose: ring field is zero");

    OamSpectrum s;
    s.l_min = l_min;
    s.l_max = l_max;
    s.weights.resize(static_cast<std::size_t>(l_max - l_min + 1));
    const double dphi = constants::two_pi / static_cast<double>(m_count);
    for (int l = l_min; l <= l_max; ++l) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t m = 0; m < m_count; ++m) {
            const double angle = -static_cast<double>(l) * (static_cast<double>(m) * dphi);
            acc += ring[m] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        s.weights[static_cast<std::size_t>(l - l_min)] = acc / static_cast<double>(m_count);
    }
    detail::normalize_spectrum(s);
    return s;
}

/// Angular-restriction envelope: W(l) = sinc(gamma (l - l_center) / 2),
/// power-normalized over the range.
inline OamSpectrum envelope_optical(double gamma_rad, int l_center, int l_min, int l_max) {
    if (!(gamma_rad > 0.0) || gamma_rad > constants::two_pi + 1e-12)
        throw domain_error("envelope_optical: gamma must be in (0, 2pi]");
    if (l_min > l_max) throw domain_error("envelope_optical: l_min > l_max");
    OamSpectrum s;
    s.l_min = l_min;
    s.l_max = l_max;
    s.weights.reserve(static_cast<std::size_t>(l_max - l_min + 1));
    for (int l = l_min; l <= l_max; ++l)
        s.weights.emplace_back(sinc(0.5 * gamma_rad * (l - l_center)), 0.0);
    detail::normalize_spectrum(s);
    return s;
}

/// Partial-arc envelope: W(l) = sinc(phi_s (l - l_center) / 2) * J_l(k r_s sin theta0),
/// power-normalized over the range.
inline OamSpectrum envelope_rf(double arc_span_rad, int l_center, double k, double r_s,
                               double theta0_rad, int l_min, int l_max) {
    if (!(arc_span_rad > 0.0) || arc_span_rad > constants::two_pi + 1e-12)
        throw domain_error("envelope_rf: arc span must be in (0, 2pi]");
    if (!(k > 0.0) || !(r_s > 0.0)) throw domain_error("envelope_rf: k and r_s must be positive");
    if (!(theta0_rad > 0.0) || !(theta0_rad < constants::half_pi))
        throw domain_error("envelope_rf: theta0 must be in (0, pi/2)");
    if (l_min > l_max) throw domain_error("envelope_rf: l_min > l_max");

    const double z = k * r_s * std::sin(theta0_rad);
    const int l_abs = std::max(std::abs(l_min), std::abs(l_max));
    const std::vector<double> j_seq = bessel_j_sequence(l_abs, z);

    OamSpectrum s;
    s.l_min = l_min;
    s.l_max = l_max;
    s.weights.reserve(static_cast<std::size_t>(l_max - l_min + 1));
    for (int l = l_min; l <= l_max; ++l) {
        const int n = std::abs(l);
        double j_l = j_seq[static_cast<std::size_t>(n)];
        if (l < 0 && (n % 2) != 0) j_l = -j_l;
        s.weights.emplace_back(sinc(0.5 * arc_span_rad * (l - l_center)) * j_l, 0.0);
    }
    detail::normalize_spectrum(s);
    return s;
}

struct SpectrumComparison {
    double correlation = 0.0;  // Pearson correlation of peak-normalized |W|
    double rmse = 0.0;         // over the peak-normalized magnitudes
};

/// Restrict both spectra to [lw_min, lw_max], peak-normalize the magnitude
/// sequences and report their Pearson correlation and RMSE.
inline SpectrumComparison compare(const OamSpectrum& a, const OamSpectrum& b, int lw_min,
                                  int lw_max) {
    if (lw_min > lw_max) throw domain_error("compare: empty mode window");
    if (!a.covers(lw_min, lw_max) || !b.covers(lw_min, lw_max))
        throw domain_error("compare: spectra do not cover the window [" +
                           std::to_string(lw_min) + ", " + std::to_string(lw_max) + "]");

    const std::size_t n = static_cast<std::size_t>(lw_max - lw_min + 1);
    if (n < 2) throw domain_error("compare: window needs at least two modes");

    std::vector<double> u(n), v(n);
    double u_max = 0.0, v_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::abs(a.weight(lw_min + static_cast<int>(i)));
        v[i] = std::abs(b.weight(lw_min + static_cast<int>(i)));
        u_max = std::max(u_max, u[i]);
        v_max = std::max(v_max, v[i]);
    }
    if (u_max == 0.0 || v_max == 0.0)
        throw domain_error("compare: zero magnitude over the window");
    for (std::size_t i = 0; i < n; ++i) {
        u[i] /= u_max;
        v[i] /= v_max;
    }

    double u_mean = 0.0, v_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u_mean += u[i];
        v_mean += v[i];
    }
    u_mean /= static_cast<double>(n);
    v_mean /= static_cast<double>(n);

    double cov = 0.0, u_var = 0.0, v_var = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double du = u[i] - u_mean;
        const double dv = v[i] - v_mean;
        cov += du * dv;
        u_var += du * du;
        v_var += dv * dv;
        sq += (u[i] - v[i]) * (u[i] - v[i]);
    }
    if (u_var <= 0.0 || v_var <= 0.0)
        throw domain_error("compare: degenerate window, zero variance");

    SpectrumComparison out;
    out.correlation = cov / std::sqrt(u_var * v_var);
    out.rmse = std::sqrt(sq / static_cast<double>(n));
    return out;
}

/// Sum of |W(l)|^2 over the window; the spectrum must be normalized.
inline double power_fraction(const OamSpectrum& s, int lw_min, int lw_max) {
    if (!s.normalized) throw domain_error("power_fraction: spectrum must be normalized");
    if (lw_min > lw_max) throw domain_error("power_fraction: empty window");
    if (!s.covers(lw_min, lw_max))
        throw domain_error("power_fraction: window [" + std::to_string(lw_min) + ", " +
                           std::to_string(lw_max) + "] outside spectrum range [" +
                           std::to_string(s.l_min) + ", " + std::to_string(s.l_max) + "]");
    double total = 0.0;
    for (int l = lw_min; l <= lw_max; ++l) total += s.power(l);
    return total;
}

}  // namespace patsim
