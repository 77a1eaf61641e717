// SPDX-License-Identifier: Apache-2.0
//
// Run orchestration: configuration parsing, the design -> synthesize ->
// decompose -> metrics chain, parameter sweeps and report serialization.
// Configs carry millimeters and degrees; conversion to meters and radians
// happens once, in waveguide_spec()/design().

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "patsim/constants.hpp"
#include "patsim/error.hpp"
#include "patsim/geometry.hpp"
#include "patsim/io.hpp"
#include "patsim/metrics.hpp"
#include "patsim/spectrum.hpp"
#include "patsim/special_functions.hpp"
#include "patsim/synthesis.hpp"

namespace patsim {

struct RunConfig {
    double frequency_hz = 60e9;
    double a_w_mm = 2.80;
    double b_w_mm = 0.68;
    double h_s_mm = 0.70;
    int l_center = 40;
    double phi_s_deg = 40.0;
    double phi_c_deg = 0.0;
    int direction = +1;
    std::optional<int> elements;                      // nullopt = auto (density rule)
    double dtheta_deg = 0.25;
    double dphi_deg = 0.5;
    std::optional<std::array<int, 2>> l_range;        // nullopt = auto
    std::optional<double> theta0_deg;                 // nullopt = peak
    std::optional<double> metrics_cut_deg;            // nullopt = peak
    ElementPattern element_pattern = ElementPattern::isotropic;
    std::optional<std::array<int, 2>> power_window;   // nullopt = auto
    std::optional<std::array<int, 2>> compare_window; // nullopt = auto
    std::optional<double> reference_r_i_mm;
    std::string output_dir = ".";

    bool operator==(const RunConfig&) const = default;

    /// Signed order the mode group concentrates at.
    int equivalent_center() const { return direction * l_center; }
};

namespace detail {

inline void check_finite(const std::string& key, double v) {
    if (!std::isfinite(v)) throw config_error(key + ": not a finite number");
}

inline double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number()) throw config_error(key + ": expected a number");
    const double v = j.get<double>();
    check_finite(key, v);
    return v;
}

inline int require_int(const nlohmann::json& j, const std::string& key) {
    if (j.is_number_integer()) return j.get<int>();
    if (j.is_number()) {
        const double v = j.get<double>();
        if (v == std::floor(v)) return static_cast<int>(v);
    }
    throw config_error(key + ": expected an integer");
}

inline std::array<int, 2> require_window(const nlohmann::json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2)
        throw config_error(key + ": expected [min, max] or \"auto\"");
    const std::array<int, 2> w{require_int(j[0], key), require_int(j[1], key)};
    if (w[0] > w[1]) throw config_error(key + ": min exceeds max");
    return w;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw config_error("config root must be an object");
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "frequency_hz") {
            cfg.frequency_hz = detail::require_number(value, key);
            if (!(cfg.frequency_hz > 0.0)) throw config_error("frequency_hz: must be positive");
        } else if (key == "a_w_mm") {
            cfg.a_w_mm = detail::require_number(value, key);
            if (!(cfg.a_w_mm > 0.0)) throw config_error("a_w_mm: must be positive");
        } else if (key == "b_w_mm") {
            cfg.b_w_mm = detail::require_number(value, key);
            if (!(cfg.b_w_mm > 0.0)) throw config_error("b_w_mm: must be positive");
        } else if (key == "h_s_mm") {
            cfg.h_s_mm = detail::require_number(value, key);
            if (cfg.h_s_mm < 0.0) throw config_error("h_s_mm: must be non-negative");
        } else if (key == "l_center") {
            cfg.l_center = detail::require_int(value, key);
            if (std::abs(cfg.l_center) < 1) throw config_error("l_center: |l| must be >= 1");
        } else if (key == "phi_s_deg") {
            cfg.phi_s_deg = detail::require_number(value, key);
            if (!(cfg.phi_s_deg > 0.0) || cfg.phi_s_deg > 360.0)
                throw config_error("phi_s_deg: must be in (0, 360]");
        } else if (key == "phi_c_deg") {
            cfg.phi_c_deg = detail::require_number(value, key);
        } else if (key == "direction") {
            cfg.direction = detail::require_int(value, key);
            if (cfg.direction != 1 && cfg.direction != -1)
                throw config_error("direction: must be +1 or -1");
        } else if (key == "elements") {
            if (value.is_string() && value.get<std::string>() == "auto") {
                cfg.elements.reset();
            } else {
                const int n = detail::require_int(value, key);
                if (n < 8) throw config_error("elements: must be >= 8 or \"auto\"");
                cfg.elements = n;
            }
        } else if (key == "dtheta_deg") {
            cfg.dtheta_deg = detail::require_number(value, key);
            if (!(cfg.dtheta_deg > 0.0) || cfg.dtheta_deg > 45.0)
                throw config_error("dtheta_deg: must be in (0, 45]");
        } else if (key == "dphi_deg") {
            cfg.dphi_deg = detail::require_number(value, key);
            if (!(cfg.dphi_deg > 0.0) || cfg.dphi_deg > 90.0)
                throw config_error("dphi_deg: must be in (0, 90]");
        } else if (key == "l_range") {
            if (value.is_string() && value.get<std::string>() == "auto") {
                cfg.l_range.reset();
            } else {
                cfg.l_range = detail::require_window(value, key);
            }
        } else if (key == "theta0_deg") {
            if (value.is_string() && value.get<std::string>() == "peak") {
                cfg.theta0_deg.reset();
            } else {
                const double v = detail::require_number(value, key);
                if (!(v > 0.0) || v >= 90.0) throw config_error("theta0_deg: must be in (0, 90)");
                cfg.theta0_deg = v;
            }
        } else if (key == "metrics_cut_deg") {
            if (value.is_string() && value.get<std::string>() == "peak") {
                cfg.metrics_cut_deg.reset();
            } else {
                const double v = detail::require_number(value, key);
                if (v < 0.0 || v > 90.0) throw config_error("metrics_cut_deg: must be in [0, 90]");
                cfg.metrics_cut_deg = v;
            }
        } else if (key == "element_pattern") {
            if (!value.is_string()) throw config_error("element_pattern: expected a string");
            const std::string p = value.get<std::string>();
            if (p == "isotropic") cfg.element_pattern = ElementPattern::isotropic;
            else if (p == "cos") cfg.element_pattern = ElementPattern::cosine;
            else throw config_error("element_pattern: must be \"isotropic\" or \"cos\"");
        } else if (key == "power_window") {
            if (value.is_string() && value.get<std::string>() == "auto") cfg.power_window.reset();
            else cfg.power_window = detail::require_window(value, key);
        } else if (key == "compare_window") {
            if (value.is_string() && value.get<std::string>() == "auto") cfg.compare_window.reset();
            else cfg.compare_window = detail::require_window(value, key);
        } else if (key == "reference_r_i_mm") {
            const double v = detail::require_number(value, key);
            if (!(v > 0.0)) throw config_error("reference_r_i_mm: must be positive");
            cfg.reference_r_i_mm = v;
        } else if (key == "output_dir") {
            if (!value.is_string()) throw config_error("output_dir: expected a string");
            cfg.output_dir = value.get<std::string>();
        } else {
            throw config_error("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config file '" + path + "': " + e.what());
    }
    return parse_config(doc);
}

inline nlohmann::ordered_json emit_config(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["frequency_hz"] = cfg.frequency_hz;
    j["a_w_mm"] = cfg.a_w_mm;
    j["b_w_mm"] = cfg.b_w_mm;
    j["h_s_mm"] = cfg.h_s_mm;
    j["l_center"] = cfg.l_center;
    j["phi_s_deg"] = cfg.phi_s_deg;
    j["phi_c_deg"] = cfg.phi_c_deg;
    j["direction"] = cfg.direction;
    if (cfg.elements) j["elements"] = *cfg.elements; else j["elements"] = "auto";
    j["dtheta_deg"] = cfg.dtheta_deg;
    j["dphi_deg"] = cfg.dphi_deg;
    if (cfg.l_range) j["l_range"] = *cfg.l_range; else j["l_range"] = "auto";
    if (cfg.theta0_deg) j["theta0_deg"] = *cfg.theta0_deg; else j["theta0_deg"] = "peak";
    if (cfg.metrics_cut_deg) j["metrics_cut_deg"] = *cfg.metrics_cut_deg;
    else j["metrics_cut_deg"] = "peak";
    j["element_pattern"] = cfg.element_pattern == ElementPattern::cosine ? "cos" : "isotropic";
    if (cfg.power_window) j["power_window"] = *cfg.power_window; else j["power_window"] = "auto";
    if (cfg.compare_window) j["compare_window"] = *cfg.compare_window;
    else j["compare_window"] = "auto";
    if (cfg.reference_r_i_mm) j["reference_r_i_mm"] = *cfg.reference_r_i_mm;
    j["output_dir"] = cfg.output_dir;
    return j;
}

inline WaveguideSpec waveguide_spec(const RunConfig& cfg) {
    WaveguideSpec w;
    w.frequency_hz = cfg.frequency_hz;
    w.wide_wall_m = cfg.a_w_mm * 1e-3;
    w.narrow_wall_m = cfg.b_w_mm * 1e-3;
    w.slot_width_m = cfg.h_s_mm * 1e-3;
    return w;
}

/// Reference-radius agreement threshold: 10 micrometers.
inline constexpr double reference_radius_tolerance_m = 1e-5;

struct DesignReport {
    double lambda0_m = 0.0;
    double lambda_g_m = 0.0;
    double r_i_m = 0.0;   // computed inner radius
    double r_s_m = 0.0;   // slot (mean) radius
    double beta_rad_per_m = 0.0;
    double k_rad_per_m = 0.0;
    int n_elements = 0;
    bool auto_elements = false;
    bool multimode = false;
    std::optional<double> reference_r_i_m;
    bool reference_mismatch = false;
};

inline DesignReport design(const RunConfig& cfg) {
    const WaveguideSpec w = waveguide_spec(cfg);
    DesignReport r;
    r.lambda0_m = w.free_space_wavelength();
    r.lambda_g_m = guide_wavelength(w);
    r.multimode = is_multimode(w);
    r.r_i_m = inner_radius(cfg.l_center, w);
    r.r_s_m = std::abs(cfg.l_center) * r.lambda_g_m / constants::two_pi;
    r.beta_rad_per_m = constants::two_pi / r.lambda_g_m;
    r.k_rad_per_m = constants::two_pi / r.lambda0_m;
    r.auto_elements = !cfg.elements.has_value();
    r.n_elements = cfg.elements
                       ? *cfg.elements
                       : auto_element_count(w, cfg.l_center, constants::deg_to_rad(cfg.phi_s_deg));
    if (cfg.reference_r_i_mm) {
        r.reference_r_i_m = *cfg.reference_r_i_mm * 1e-3;
        r.reference_mismatch = std::abs(*r.reference_r_i_m - r.r_i_m) > reference_radius_tolerance_m;
    }
    return r;
}

inline std::string design_report_text(const RunConfig& cfg, const DesignReport& r) {
    std::string out;
    out += "design report\n";
    out += "  frequency                 " + detail::fmt("%.6f", cfg.frequency_hz * 1e-9) + " GHz\n";
    out += "  free-space wavelength     lambda0 = " + detail::fmt("%.6f", r.lambda0_m * 1e3) + " mm\n";
    out += "  guide wavelength (TE10)   lambda_g = " + detail::fmt("%.6f", r.lambda_g_m * 1e3) + " mm\n";
    out += std::string("  single-mode operation     ") + (r.multimode ? "NO (a_w >= lambda0, multimode)" : "yes") + "\n";
    out += "  center order              l_center = " + std::to_string(cfg.l_center) +
           ", direction " + (cfg.direction > 0 ? std::string("+1") : std::string("-1")) + "\n";
    out += "  arc span                  phi_s = " + detail::fmt("%.6f", cfg.phi_s_deg) + " deg\n";
    out += "  inner radius (computed)   r_i = " + detail::fmt("%.6f", r.r_i_m * 1e3) + " mm\n";
    out += "  slot (mean) radius        r_s = " + detail::fmt("%.6f", r.r_s_m * 1e3) + " mm\n";
    out += "  guide wavenumber          beta = " + detail::fmt("%.6f", r.beta_rad_per_m) + " rad/m\n";
    out += "  free-space wavenumber     k = " + detail::fmt("%.6f", r.k_rad_per_m) + " rad/m\n";
    out += "  beta * r_s                " + detail::fmt("%.9f", r.beta_rad_per_m * r.r_s_m) + "\n";
    out += "  elements                  N = " + std::to_string(r.n_elements) +
           (r.auto_elements ? " (auto, 20 per guide wavelength of arc)" : "") + "\n";
    if (r.reference_r_i_m) {
        const double ref_mm = *r.reference_r_i_m * 1e3;
        const double diff_mm = (*r.reference_r_i_m - r.r_i_m) * 1e3;
        out += "  reference inner radius    r_i_ref = " + detail::fmt("%.6f", ref_mm) + " mm ";
        if (r.reference_mismatch) {
            out += "[MISMATCH: differs from computed by " + detail::fmt("%.6f", diff_mm) + " mm]\n";
        } else {
            out += "[matches computed radius]\n";
        }
    }
    return out;
}

struct RunResult {
    RunConfig config;
    DesignReport design;
    FarFieldGrid grid;
    BeamMetrics metrics;
    OamSpectrum spectrum;
    OamSpectrum envelope;
    SpectrumComparison comparison;
    double power_frac = 0.0;
    std::array<int, 2> l_range{0, 0};
    std::array<int, 2> power_window{0, 0};
    std::array<int, 2> compare_window{0, 0};
    double theta0_deg_used = 0.0;
};

inline GridSpec grid_spec(const RunConfig& cfg) {
    const double nt = 90.0 / cfg.dtheta_deg;
    const double np = 360.0 / cfg.dphi_deg;
    if (std::abs(nt - std::round(nt)) > 1e-9)
        throw config_error("dtheta_deg: must divide 90 evenly");
    if (std::abs(np - std::round(np)) > 1e-9)
        throw config_error("dphi_deg: must divide 360 evenly");
    GridSpec g;
    g.theta_count = static_cast<std::size_t>(std::llround(nt)) + 1;
    g.phi_count = static_cast<std::size_t>(std::llround(np));
    g.theta_max_rad = constants::half_pi;
    return g;
}

inline RunResult run_pipeline(const RunConfig& cfg) {
    RunResult result;
    result.config = cfg;
    result.design = design(cfg);

    const WaveguideSpec w = waveguide_spec(cfg);
    const ArcApertureSpec arc =
        make_arc(w, cfg.l_center, constants::deg_to_rad(cfg.phi_s_deg),
                 constants::deg_to_rad(cfg.phi_c_deg), cfg.direction, result.design.n_elements);
    const ElementSet elements = discretize(arc, cfg.frequency_hz);

    result.grid = far_field(elements, grid_spec(cfg), cfg.element_pattern);

    std::optional<double> cut_rad;
    if (cfg.metrics_cut_deg) cut_rad = constants::deg_to_rad(*cfg.metrics_cut_deg);
    result.metrics = compute_beam_metrics(result.grid, cut_rad);

    const int center = cfg.equivalent_center();
    if (cfg.l_range) {
        result.l_range = *cfg.l_range;
    } else {
        const int half = default_mode_half_span(constants::deg_to_rad(cfg.phi_s_deg));
        result.l_range = {std::max(center - half, -bessel_max_order),
                          std::min(center + half, bessel_max_order)};
    }

    const double theta0_rad = cfg.theta0_deg
                                  ? constants::deg_to_rad(*cfg.theta0_deg)
                                  : constants::deg_to_rad(result.metrics.theta_peak_deg);
    const std::size_t ring_row = nearest_theta_row(result.grid, theta0_rad);
    const double theta_used = result.grid.theta(ring_row);
    result.theta0_deg_used = constants::rad_to_deg(theta_used);

    result.spectrum = decompose(result.grid.row(ring_row), result.l_range[0], result.l_range[1]);
    result.envelope = envelope_rf(constants::deg_to_rad(cfg.phi_s_deg), center,
                                  result.design.k_rad_per_m, result.design.r_s_m, theta_used,
                                  result.l_range[0], result.l_range[1]);

    auto clamp_window = [&](std::array<int, 2> win) {
        win[0] = std::max(win[0], result.l_range[0]);
        win[1] = std::min(win[1], result.l_range[1]);
        return win;
    };
    result.power_window = cfg.power_window ? *cfg.power_window
                                           : clamp_window({center - 5, center + 5});
    result.compare_window = cfg.compare_window ? *cfg.compare_window
                                               : clamp_window({center - 10, center + 10});

    result.power_frac = power_fraction(result.spectrum, result.power_window[0],
                                       result.power_window[1]);
    result.comparison = compare(result.spectrum, result.envelope, result.compare_window[0],
                                result.compare_window[1]);
    return result;
}

inline nlohmann::ordered_json metrics_json(const RunResult& r) {
    nlohmann::ordered_json j;
    auto& d = j["design"];
    d["lambda0_mm"] = r.design.lambda0_m * 1e3;
    d["lambda_g_mm"] = r.design.lambda_g_m * 1e3;
    d["r_i_computed_mm"] = r.design.r_i_m * 1e3;
    d["r_s_mm"] = r.design.r_s_m * 1e3;
    d["beta_rad_per_m"] = r.design.beta_rad_per_m;
    d["k_rad_per_m"] = r.design.k_rad_per_m;
    d["n_elements"] = r.design.n_elements;
    d["multimode"] = r.design.multimode;
    if (r.design.reference_r_i_m) {
        d["reference_r_i_mm"] = *r.design.reference_r_i_m * 1e3;
        d["reference_r_i_mismatch"] = r.design.reference_mismatch;
    }

    auto& m = j["metrics"];
    m["theta_peak_deg"] = r.metrics.theta_peak_deg;
    m["phi_peak_deg"] = r.metrics.phi_peak_deg;
    m["divergence_angle_deg"] = r.metrics.divergence_angle_deg;
    if (std::isnan(r.metrics.hpbw_theta_deg)) {
        m["hpbw_theta_deg"] = nullptr;  // mainlobe clipped by the theta boundary
    } else {
        m["hpbw_theta_deg"] = r.metrics.hpbw_theta_deg;
    }
    m["hpbw_phi_deg"] = r.metrics.hpbw_phi_deg;
    m["directivity_dbi"] = r.metrics.directivity_dbi;
    m["l_e"] = r.metrics.l_e;
    m["phase_slope"] = r.metrics.phase_slope;
    m["phase_period_deg"] =
        r.metrics.phase_slope != 0.0 ? 360.0 / std::abs(r.metrics.phase_slope) : 0.0;
    m["phase_rms_deg"] = r.metrics.phase_rms_deg;
    m["mainlobe_phi_window_deg"] = {r.metrics.mainlobe_phi_deg[0], r.metrics.mainlobe_phi_deg[1]};
    m["cut_theta_deg"] = r.metrics.cut_theta_deg;

    auto& s = j["spectrum"];
    s["theta0_deg"] = r.theta0_deg_used;
    s["l_min"] = r.l_range[0];
    s["l_max"] = r.l_range[1];
    s["power_fraction"]["l_window"] = {r.power_window[0], r.power_window[1]};
    s["power_fraction"]["value"] = r.power_frac;
    s["envelope_rf_comparison"]["l_window"] = {r.compare_window[0], r.compare_window[1]};
    s["envelope_rf_comparison"]["correlation"] = r.comparison.correlation;
    s["envelope_rf_comparison"]["rmse"] = r.comparison.rmse;

    auto& notes = j["notes"];
    notes.push_back("directivity integrates the upper hemisphere only (theta <= 90 deg)");
    notes.push_back(std::string("element pattern: ") +
                    (r.config.element_pattern == ElementPattern::cosine ? "cos" : "isotropic"));
    if (r.design.multimode)
        notes.push_back("wide wall admits higher-order modes (a_w >= lambda0)");
    return j;
}

inline std::string sweep_csv(const RunConfig& base, const std::string& parameter,
                             const std::vector<double>& values) {
    if (values.empty()) throw config_error("sweep: empty value list");

    auto apply = [&](RunConfig cfg, double v) {
        auto as_int = [&](const char* what) {
            if (v != std::floor(v))
                throw config_error(std::string("sweep: ") + what + " requires integer values");
            return static_cast<int>(v);
        };
        if (parameter == "frequency_hz") cfg.frequency_hz = v;
        else if (parameter == "a_w_mm") cfg.a_w_mm = v;
        else if (parameter == "b_w_mm") cfg.b_w_mm = v;
        else if (parameter == "h_s_mm") cfg.h_s_mm = v;
        else if (parameter == "l_center") cfg.l_center = as_int("l_center");
        else if (parameter == "phi_s_deg") cfg.phi_s_deg = v;
        else if (parameter == "phi_c_deg") cfg.phi_c_deg = v;
        else if (parameter == "direction") cfg.direction = as_int("direction");
        else if (parameter == "elements") cfg.elements = as_int("elements");
        else if (parameter == "theta0_deg") cfg.theta0_deg = v;
        else if (parameter == "metrics_cut_deg") cfg.metrics_cut_deg = v;
        else throw config_error("sweep: unknown parameter '" + parameter + "'");
        return cfg;
    };

    std::string out = parameter +
                      ",theta_peak_deg,phi_peak_deg,hpbw_theta_deg,hpbw_phi_deg,directivity_dbi,"
                      "l_e,phase_slope,phase_rms_deg,power_fraction,correlation,rmse\n";
    for (double v : values) {
        const RunResult r = run_pipeline(apply(base, v));
        out += detail::fmt("%.10g", v);
        out += ',';
        out += detail::fmt("%.10g", r.metrics.theta_peak_deg);
        out += ',';
        out += detail::fmt("%.10g", r.metrics.phi_peak_deg);
        out += ',';
        out += detail::fmt("%.10g", r.metrics.hpbw_theta_deg);
        out += ',';
        out += detail::fmt("%.10g", r.metrics.hpbw_phi_deg);
        out += ',';
        out += detail::fmt("%.10g", r.metrics.directivity_dbi);
        out += ',';
        out += std::to_string(r.metrics.l_e);
        out += ',';
        out += detail::fmt("%.10g", r.metrics.phase_slope);
        out += ',';
        out += detail::fmt("%.10g", r.metrics.phase_rms_deg);
        out += ',';
        out += detail::fmt("%.10g", r.power_frac);
        out += ',';
        out += detail::fmt("%.10g", r.comparison.correlation);
        out += ',';
        out += detail::fmt("%.10g", r.comparison.rmse);
        out += '\n';
    }
    return out;
}

}  // namespace patsim
