// SPDX-License-Identifier: Apache-2.0
//
// CSV serialization of far-field grids and OAM spectra. Fixed printf-style
// formatting, '.' decimal separator and '\n' line endings keep repeated runs
// byte-identical.

#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "patsim/constants.hpp"
#include "patsim/error.hpp"
#include "patsim/spectrum.hpp"
#include "patsim/synthesis.hpp"

namespace patsim {

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace detail

/// Columns: theta_deg, phi_deg, re, im, mag_db, phase_deg. Zero magnitude is
/// clamped to -400 dB so the column stays numeric.
inline std::string far_field_csv(const FarFieldGrid& grid) {
    std::string out;
    out.reserve(grid.theta_count() * grid.phi_count() * 64);
    out += "theta_deg,phi_deg,re,im,mag_db,phase_deg\n";
    for (std::size_t i = 0; i < grid.theta_count(); ++i) {
        const double theta_deg = constants::rad_to_deg(grid.theta(i));
        for (std::size_t j = 0; j < grid.phi_count(); ++j) {
            const std::complex<double>& v = grid.at(i, j);
            const double mag = std::abs(v);
            const double mag_db = mag > 0.0 ? 20.0 * std::log10(mag) : -400.0;
            const double phase_deg = constants::rad_to_deg(std::arg(v));
            out += detail::fmt("%.10g", theta_deg);
            out += ',';
            out += detail::fmt("%.10g", constants::rad_to_deg(grid.phi(j)));
            out += ',';
            out += detail::fmt("%.9e", v.real());
            out += ',';
            out += detail::fmt("%.9e", v.imag());
            out += ',';
            out += detail::fmt("%.6f", mag_db);
            out += ',';
            out += detail::fmt("%.6f", phase_deg);
            out += '\n';
        }
    }
    return out;
}

/// Columns: l, re, im, mag, power. %.17g keeps the weights lossless for the
/// compare subcommand.
inline std::string spectrum_csv(const OamSpectrum& s) {
    std::string out;
    out += "l,re,im,mag,power\n";
    for (int l = s.l_min; l <= s.l_max; ++l) {
        const std::complex<double>& w = s.weight(l);
        out += std::to_string(l);
        out += ',';
        out += detail::fmt("%.17g", w.real());
        out += ',';
        out += detail::fmt("%.17g", w.imag());
        out += ',';
        out += detail::fmt("%.17g", std::abs(w));
        out += ',';
        out += detail::fmt("%.17g", std::norm(w));
        out += '\n';
    }
    return out;
}

inline OamSpectrum read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open spectrum file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty spectrum file '" + path + "'");
    if (line.rfind("l,re,im", 0) != 0)
        throw io_error("'" + path + "' is not a spectrum CSV (bad header)");

    OamSpectrum s;
    bool first = true;
    int expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        int l = 0;
        double re = 0.0, im = 0.0;
        try {
            std::getline(row, cell, ',');
            l = std::stoi(cell);
            std::getline(row, cell, ',');
            re = std::stod(cell);
            std::getline(row, cell, ',');
            im = std::stod(cell);
        } catch (const std::exception&) {
            throw io_error("malformed spectrum row in '" + path + "': " + line);
        }
        if (first) {
            s.l_min = l;
            first = false;
        } else if (l != expected) {
            throw io_error("non-contiguous mode index in '" + path + "'");
        }
        expected = l + 1;
        s.l_max = l;
        s.weights.emplace_back(re, im);
    }
    if (s.weights.empty()) throw io_error("no spectrum rows in '" + path + "'");
    double total = 0.0;
    for (const auto& w : s.weights) total += std::norm(w);
    s.total_power = total;
    s.normalized = std::abs(total - 1.0) < 1e-9;
    return s;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw io_error("cannot create directory '" + path.parent_path().string() + "'");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write failed for '" + path.string() + "'");
}

}  // namespace patsim
