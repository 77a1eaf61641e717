// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace patsim::constants {

inline constexpr double speed_of_light = 299792458.0;  // m/s, exact
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double half_pi = 0.5 * pi;

inline constexpr double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / pi; }

}  // namespace patsim::constants
