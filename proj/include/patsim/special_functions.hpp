// SPDX-License-Identifier: Apache-2.0
//
// Self-contained special functions used by the far-field and spectrum code:
// the unnormalized sinc and the integer-order Bessel function of the first
// kind. Bessel values come from a Miller-type downward recurrence, which is
// stable in the order > argument regime the mode-group envelopes live in.

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "patsim/error.hpp"

namespace patsim {

inline constexpr int bessel_max_order = 200;
inline constexpr double bessel_max_argument = 1000.0;

/// Unnormalized sinc: sin(x)/x with the removable singularity filled in.
/// Even function, total on the reals.
inline double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

/// J_0(x) ... J_max_order(x) in one downward pass, normalized through the
/// even-order sum identity J_0 + 2*sum_k J_{2k} = 1.
inline std::vector<double> bessel_j_sequence(int max_order, double x) {
    if (max_order < 0 || max_order > bessel_max_order) {
        throw domain_error("bessel_j_sequence: order " + std::to_string(max_order) +
                           " outside [0, " + std::to_string(bessel_max_order) + "]");
    }
    if (!std::isfinite(x) || x < 0.0 || x > bessel_max_argument) {
        throw domain_error("bessel_j_sequence: argument " + std::to_string(x) +
                           " outside [0, 1000]");
    }

    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }

    // Start well above both the order and the argument so the downward
    // recurrence has converged onto the minimal solution by the time it
    // reaches the requested orders.
    const int top = std::max(max_order, static_cast<int>(std::ceil(x)));
    int start = top + 20 + static_cast<int>(std::ceil(12.0 * std::sqrt(static_cast<double>(top + 1))));
    if (start % 2 != 0) ++start;

    const double rescale_limit = 1e250;
    const double rescale = 1e-250;

    double above = 0.0;    // J_{m+1} trial value
    double current = 1e-300;  // J_m trial value
    double norm = 0.0;

    for (int m = start; m >= 1; --m) {
        const double below = (2.0 * m / x) * current - above;  // J_{m-1}
        above = current;
        current = below;

        const int order = m - 1;
        if (order <= max_order) out[static_cast<std::size_t>(order)] = current;
        if (order == 0) {
            norm += current;
        } else if (order % 2 == 0) {
            norm += 2.0 * current;
        }

        if (std::abs(current) > rescale_limit) {
            above *= rescale;
            current *= rescale;
            norm *= rescale;
            for (double& v : out) v *= rescale;
        }
    }

    if (norm == 0.0 || !std::isfinite(norm)) {
        throw domain_error("bessel_j_sequence: normalization failed");
    }
    for (double& v : out) v /= norm;
    return out;
}

/// J_order(x) for signed integer order; negative orders through the
/// reflection J_{-n}(x) = (-1)^n J_n(x).
inline double bessel_j(int order, double x) {
    const int n = std::abs(order);
    if (n > bessel_max_order) {
        throw domain_error("bessel_j: |order| " + std::to_string(n) + " exceeds " +
                           std::to_string(bessel_max_order));
    }
    const double value = bessel_j_sequence(n, x)[static_cast<std::size_t>(n)];
    if (order < 0 && (n % 2) != 0) return -value;
    return value;
}

}  // namespace patsim
