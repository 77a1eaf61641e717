// SPDX-License-Identifier: Apache-2.0
//
// Far-field synthesis on a uniform spherical grid. Fraunhofer phase only,
// scalar field, isotropic elements by default with an optional cos(theta)
// element pattern. Grid rows may be computed concurrently; the per-point
// summation order over elements is fixed, so the output is bit-identical
// for any thread count.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "patsim/constants.hpp"
#include "patsim/error.hpp"
#include "patsim/geometry.hpp"

namespace patsim {

enum class ElementPattern { isotropic, cosine };

/// Sample counts for the synthesis grid. theta spans [0, theta_max]
/// inclusive, phi spans [0, 2pi) with the endpoint excluded.
struct GridSpec {
    std::size_t theta_count = 361;  // 0.25 deg steps over [0, 90 deg]
    std::size_t phi_count = 720;    // 0.5 deg steps
    double theta_max_rad = constants::half_pi;

    void validate() const {
        if (theta_count < 2 || phi_count < 2)
            throw domain_error("GridSpec: need at least 2 samples per axis");
        if (!(theta_max_rad > 0.0) || theta_max_rad > constants::pi + 1e-12)
            throw domain_error("GridSpec: theta_max must be in (0, pi]");
    }
};

/// Complex scalar field samples, row-major with theta as the outer index.
class FarFieldGrid {
public:
    FarFieldGrid() = default;
    FarFieldGrid(std::vector<double> theta, std::vector<double> phi,
                 std::vector<std::complex<double>> values)
        : theta_(std::move(theta)), phi_(std::move(phi)), values_(std::move(values)) {
        validate();
    }

    std::size_t theta_count() const { return theta_.size(); }
    std::size_t phi_count() const { return phi_.size(); }
    double theta(std::size_t i) const { return theta_[i]; }
    double phi(std::size_t j) const { return phi_[j]; }
    double theta_step() const { return theta_[1] - theta_[0]; }
    double phi_step() const { return phi_[1] - phi_[0]; }
    const std::vector<double>& theta_samples() const { return theta_; }
    const std::vector<double>& phi_samples() const { return phi_; }

    const std::complex<double>& at(std::size_t i, std::size_t j) const {
        return values_[i * phi_.size() + j];
    }
    std::complex<double>& at(std::size_t i, std::size_t j) { return values_[i * phi_.size() + j]; }
    const std::vector<std::complex<double>>& values() const { return values_; }
    std::vector<std::complex<double>>& values() { return values_; }

    std::span<const std::complex<double>> row(std::size_t i) const {
        return {values_.data() + i * phi_.size(), phi_.size()};
    }

    void validate() const {
        if (theta_.size() < 2 || phi_.size() < 2)
            throw domain_error("FarFieldGrid: need at least 2 samples per axis");
        if (values_.size() != theta_.size() * phi_.size())
            throw domain_error("FarFieldGrid: value count does not match grid");
        if (theta_.front() < 0.0 || theta_.back() > constants::pi + 1e-12)
            throw domain_error("FarFieldGrid: theta must lie in [0, pi]");
        const double dt = theta_[1] - theta_[0];
        for (std::size_t i = 1; i < theta_.size(); ++i) {
            if (std::abs((theta_[i] - theta_[i - 1]) - dt) > 1e-12)
                throw domain_error("FarFieldGrid: theta samples not uniform");
        }
        const double dp = phi_[1] - phi_[0];
        if (std::abs(phi_.front()) > 1e-12 ||
            std::abs(phi_.back() + dp - constants::two_pi) > 1e-9)
            throw domain_error("FarFieldGrid: phi must cover [0, 2pi) uniformly");
        for (std::size_t j = 1; j < phi_.size(); ++j) {
            if (std::abs((phi_[j] - phi_[j - 1]) - dp) > 1e-12)
                throw domain_error("FarFieldGrid: phi samples not uniform");
        }
        for (const auto& v : values_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw domain_error("FarFieldGrid: non-finite field value");
        }
    }

private:
    std::vector<double> theta_;
    std::vector<double> phi_;
    std::vector<std::complex<double>> values_;
};

/// E(theta, phi) = sum_n excitation_n * exp(j k (x_n sin t cos p + y_n sin t sin p)),
/// optionally times cos(theta). thread_count 0 picks the hardware default.
inline FarFieldGrid far_field(const ElementSet& elements, const GridSpec& spec,
                              ElementPattern pattern = ElementPattern::isotropic,
                              unsigned thread_count = 0) {
    elements.validate();
    spec.validate();

    const std::size_t nt = spec.theta_count;
    const std::size_t np = spec.phi_count;
    std::vector<double> theta(nt), phi(np);
    const double dt = spec.theta_max_rad / static_cast<double>(nt - 1);
    for (std::size_t i = 0; i < nt; ++i) theta[i] = static_cast<double>(i) * dt;
    const double dp = constants::two_pi / static_cast<double>(np);
    for (std::size_t j = 0; j < np; ++j) phi[j] = static_cast<double>(j) * dp;

    std::vector<double> cos_phi(np), sin_phi(np);
    for (std::size_t j = 0; j < np; ++j) {
        cos_phi[j] = std::cos(phi[j]);
        sin_phi[j] = std::sin(phi[j]);
    }

    const std::size_t n_elem = elements.positions.size();
    std::vector<double> ex(n_elem), ey(n_elem), er(n_elem), ei(n_elem);
    for (std::size_t n = 0; n < n_elem; ++n) {
        ex[n] = elements.positions[n][0];
        ey[n] = elements.positions[n][1];
        er[n] = elements.excitations[n].real();
        ei[n] = elements.excitations[n].imag();
    }
    const double k = elements.wavenumber;

    std::vector<std::complex<double>> values(nt * np);
    auto compute_rows = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t i = row_begin; i < row_end; ++i) {
            const double w = k * std::sin(theta[i]);
            const double pat = (pattern == ElementPattern::cosine) ? std::cos(theta[i]) : 1.0;
            std::complex<double>* out = values.data() + i * np;
            for (std::size_t j = 0; j < np; ++j) {
                const double u = w * cos_phi[j];
                const double v = w * sin_phi[j];
                double acc_re = 0.0, acc_im = 0.0;
                for (std::size_t n = 0; n < n_elem; ++n) {
                    const double arg = u * ex[n] + v * ey[n];
                    const double c = std::cos(arg);
                    const double s = std::sin(arg);
                    acc_re += er[n] * c - ei[n] * s;
                    acc_im += er[n] * s + ei[n] * c;
                }
                out[j] = {pat * acc_re, pat * acc_im};
            }
        }
    };

    unsigned workers = thread_count != 0 ? thread_count : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, nt));
    if (workers <= 1) {
        compute_rows(0, nt);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (nt + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::size_t begin = static_cast<std::size_t>(t) * chunk;
            const std::size_t end = std::min(begin + chunk, nt);
            if (begin >= end) break;
            pool.emplace_back(compute_rows, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    return FarFieldGrid(std::move(theta), std::move(phi), std::move(values));
}

/// Row index of the theta sample nearest theta0, ties toward smaller theta.
inline std::size_t nearest_theta_row(const FarFieldGrid& grid, double theta0) {
    const double first = grid.theta(0);
    const double last = grid.theta(grid.theta_count() - 1);
    if (theta0 < first - 1e-12 || theta0 > last + 1e-12)
        throw domain_error("field_cut_at_theta: theta0 = " +
                           std::to_string(constants::rad_to_deg(theta0)) +
                           " deg outside grid range");
    double r = (theta0 - first) / grid.theta_step();
    if (r < 0.0) r = 0.0;
    const double lower = std::floor(r);
    const double frac = r - lower;
    std::size_t idx = static_cast<std::size_t>(lower);
    if (frac > 0.5 + 1e-12) ++idx;  // exact midpoints resolve toward smaller theta
    if (idx >= grid.theta_count()) idx = grid.theta_count() - 1;
    return idx;
}

/// The full phi ring at the grid row nearest theta0 (no interpolation).
inline std::vector<std::complex<double>> field_cut_at_theta(const FarFieldGrid& grid,
                                                            double theta0) {
    const std::size_t i = nearest_theta_row(grid, theta0);
    auto r = grid.row(i);
    return {r.begin(), r.end()};
}

}  // namespace patsim
