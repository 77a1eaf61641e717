// SPDX-License-Identifier: Apache-2.0
//
// patsim command line: design | run | sweep | envelope | compare.
// Exit codes: 0 success, 2 config error, 3 numeric/domain error, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "patsim/pipeline.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<double> frequency_hz, a_w_mm, b_w_mm, h_s_mm, phi_s_deg, phi_c_deg;
    std::optional<double> dtheta_deg, dphi_deg, reference_r_i_mm;
    std::optional<int> l_center, direction;
    std::optional<std::string> elements, theta0_deg, metrics_cut_deg, element_pattern;
    std::optional<std::string> l_range, power_window, compare_window, output_dir;
};

void add_config_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd->add_option("--frequency-hz", o.frequency_hz, "operating frequency in Hz");
    cmd->add_option("--a-w-mm", o.a_w_mm, "waveguide wide wall, mm");
    cmd->add_option("--b-w-mm", o.b_w_mm, "waveguide narrow wall, mm");
    cmd->add_option("--h-s-mm", o.h_s_mm, "slot width, mm");
    cmd->add_option("--l-center", o.l_center, "center OAM order (|l| >= 1)");
    cmd->add_option("--phi-s-deg", o.phi_s_deg, "arc span, degrees in (0, 360]");
    cmd->add_option("--phi-c-deg", o.phi_c_deg, "arc center azimuth, degrees");
    cmd->add_option("--direction", o.direction, "traveling direction, +1 or -1");
    cmd->add_option("--elements", o.elements, "element count or 'auto'");
    cmd->add_option("--dtheta-deg", o.dtheta_deg, "theta grid step, degrees");
    cmd->add_option("--dphi-deg", o.dphi_deg, "phi grid step, degrees");
    cmd->add_option("--l-range", o.l_range, "'auto' or 'lmin,lmax'");
    cmd->add_option("--theta0-deg", o.theta0_deg, "'peak' or a fixed decomposition angle, degrees");
    cmd->add_option("--metrics-cut-deg", o.metrics_cut_deg,
                    "'peak' or a fixed theta cut for the phi metrics, degrees");
    cmd->add_option("--element-pattern", o.element_pattern, "'isotropic' or 'cos'");
    cmd->add_option("--power-window", o.power_window, "'auto' or 'lmin,lmax'");
    cmd->add_option("--compare-window", o.compare_window, "'auto' or 'lmin,lmax'");
    cmd->add_option("--reference-ri-mm", o.reference_r_i_mm,
                    "reference inner radius to compare against, mm");
    cmd->add_option("--out-dir", o.output_dir, "output directory for run artifacts");
}

std::array<int, 2> parse_pair(const std::string& text, const std::string& what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw patsim::config_error(what + ": expected 'min,max', got '" + text + "'");
    try {
        const int lo = std::stoi(text.substr(0, comma));
        const int hi = std::stoi(text.substr(comma + 1));
        return {lo, hi};
    } catch (const std::exception&) {
        throw patsim::config_error(what + ": expected 'min,max', got '" + text + "'");
    }
}

patsim::RunConfig resolve_config(const Overrides& o) {
    patsim::RunConfig base;
    if (o.config_path) base = patsim::load_config_file(*o.config_path);

    nlohmann::ordered_json j = patsim::emit_config(base);
    if (o.frequency_hz) j["frequency_hz"] = *o.frequency_hz;
    if (o.a_w_mm) j["a_w_mm"] = *o.a_w_mm;
    if (o.b_w_mm) j["b_w_mm"] = *o.b_w_mm;
    if (o.h_s_mm) j["h_s_mm"] = *o.h_s_mm;
    if (o.l_center) j["l_center"] = *o.l_center;
    if (o.phi_s_deg) j["phi_s_deg"] = *o.phi_s_deg;
    if (o.phi_c_deg) j["phi_c_deg"] = *o.phi_c_deg;
    if (o.direction) j["direction"] = *o.direction;
    if (o.dtheta_deg) j["dtheta_deg"] = *o.dtheta_deg;
    if (o.dphi_deg) j["dphi_deg"] = *o.dphi_deg;
    if (o.reference_r_i_mm) j["reference_r_i_mm"] = *o.reference_r_i_mm;
    if (o.output_dir) j["output_dir"] = *o.output_dir;
    if (o.element_pattern) j["element_pattern"] = *o.element_pattern;
    if (o.elements) {
        if (*o.elements == "auto") j["elements"] = "auto";
        else {
            try { j["elements"] = std::stoi(*o.elements); }
            catch (const std::exception&) {
                throw patsim::config_error("--elements: expected an integer or 'auto'");
            }
        }
    }
    if (o.theta0_deg) {
        if (*o.theta0_deg == "peak") j["theta0_deg"] = "peak";
        else {
            try { j["theta0_deg"] = std::stod(*o.theta0_deg); }
            catch (const std::exception&) {
                throw patsim::config_error("--theta0-deg: expected a number or 'peak'");
            }
        }
    }
    if (o.metrics_cut_deg) {
        if (*o.metrics_cut_deg == "peak") j["metrics_cut_deg"] = "peak";
        else {
            try { j["metrics_cut_deg"] = std::stod(*o.metrics_cut_deg); }
            catch (const std::exception&) {
                throw patsim::config_error("--metrics-cut-deg: expected a number or 'peak'");
            }
        }
    }
    if (o.l_range) {
        if (*o.l_range == "auto") j["l_range"] = "auto";
        else j["l_range"] = parse_pair(*o.l_range, "--l-range");
    }
    if (o.power_window) {
        if (*o.power_window == "auto") j["power_window"] = "auto";
        else j["power_window"] = parse_pair(*o.power_window, "--power-window");
    }
    if (o.compare_window) {
        if (*o.compare_window == "auto") j["compare_window"] = "auto";
        else j["compare_window"] = parse_pair(*o.compare_window, "--compare-window");
    }
    return patsim::parse_config(nlohmann::json(j));
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::string cell;
    std::istringstream in(text);
    while (std::getline(in, cell, ',')) {
        if (cell.empty()) continue;
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw patsim::config_error("--values: '" + cell + "' is not a number");
        }
    }
    return values;
}

int run_design(const Overrides& o, const std::optional<std::string>& emit_path) {
    const patsim::RunConfig cfg = resolve_config(o);
    const patsim::DesignReport report = patsim::design(cfg);
    if (emit_path) {
        const std::string text = patsim::emit_config(cfg).dump(2) + "\n";
        if (*emit_path == "-") std::cout << text;
        else patsim::write_text_file(*emit_path, text);
        return 0;
    }
    std::cout << patsim::design_report_text(cfg, report);
    return 0;
}

int run_run(const Overrides& o) {
    const patsim::RunConfig cfg = resolve_config(o);
    const patsim::RunResult result = patsim::run_pipeline(cfg);

    const std::filesystem::path dir(cfg.output_dir);
    const auto far_path = dir / "far_field.csv";
    const auto spec_path = dir / "spectrum.csv";
    const auto metrics_path = dir / "metrics.json";
    patsim::write_text_file(far_path, patsim::far_field_csv(result.grid));
    patsim::write_text_file(spec_path, patsim::spectrum_csv(result.spectrum));
    patsim::write_text_file(metrics_path, patsim::metrics_json(result).dump(2) + "\n");

    std::cout << "wrote " << far_path.string() << "\n"
              << "wrote " << spec_path.string() << "\n"
              << "wrote " << metrics_path.string() << "\n";
    std::printf("l_e=%d theta_peak=%.4g deg hpbw_theta=%.4g deg hpbw_phi=%.4g deg "
                "directivity=%.4g dBi power_fraction=%.4g correlation=%.4g\n",
                result.metrics.l_e, result.metrics.theta_peak_deg, result.metrics.hpbw_theta_deg,
                result.metrics.hpbw_phi_deg, result.metrics.directivity_dbi, result.power_frac,
                result.comparison.correlation);
    return 0;
}

int run_sweep(const Overrides& o, const std::string& parameter, const std::string& values_text,
              const std::optional<std::string>& out_path) {
    const patsim::RunConfig cfg = resolve_config(o);
    const std::vector<double> values = parse_value_list(values_text);
    const std::string csv = patsim::sweep_csv(cfg, parameter, values);
    if (out_path && *out_path != "-") {
        patsim::write_text_file(*out_path, csv);
        std::cout << "wrote " << *out_path << "\n";
    } else {
        std::cout << csv;
    }
    return 0;
}

int run_envelope(const Overrides& o, bool optical, const std::optional<std::string>& out_path) {
    const patsim::RunConfig cfg = resolve_config(o);
    if (!cfg.theta0_deg && !optical)
        throw patsim::config_error(
            "envelope: --theta0-deg must be a fixed angle (no simulated peak available here)");

    const patsim::DesignReport report = patsim::design(cfg);
    const int center = cfg.equivalent_center();
    std::array<int, 2> range{};
    if (cfg.l_range) {
        range = *cfg.l_range;
    } else {
        const int half = patsim::default_mode_half_span(patsim::constants::deg_to_rad(cfg.phi_s_deg));
        range = {std::max(center - half, -patsim::bessel_max_order),
                 std::min(center + half, patsim::bessel_max_order)};
    }

    patsim::OamSpectrum envelope;
    if (optical) {
        envelope = patsim::envelope_optical(patsim::constants::deg_to_rad(cfg.phi_s_deg), center,
                                            range[0], range[1]);
    } else {
        envelope = patsim::envelope_rf(patsim::constants::deg_to_rad(cfg.phi_s_deg), center,
                                       report.k_rad_per_m, report.r_s_m,
                                       patsim::constants::deg_to_rad(*cfg.theta0_deg), range[0],
                                       range[1]);
    }
    const std::string csv = patsim::spectrum_csv(envelope);
    if (out_path && *out_path != "-") {
        patsim::write_text_file(*out_path, csv);
        std::cout << "wrote " << *out_path << "\n";
    } else {
        std::cout << csv;
    }
    return 0;
}

int run_compare(const std::string& path_a, const std::string& path_b,
                const std::optional<std::string>& window_text) {
    const patsim::OamSpectrum a = patsim::read_spectrum_csv(path_a);
    const patsim::OamSpectrum b = patsim::read_spectrum_csv(path_b);
    std::array<int, 2> window{std::max(a.l_min, b.l_min), std::min(a.l_max, b.l_max)};
    if (window_text) window = parse_pair(*window_text, "--window");
    const patsim::SpectrumComparison c = patsim::compare(a, b, window[0], window[1]);
    std::printf("l_window=[%d,%d] correlation=%.12g rmse=%.12g\n", window[0], window[1],
                c.correlation, c.rmse);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partial-arc traveling-wave OAM mode-group simulator"};
    app.require_subcommand(1);

    Overrides o;

    auto* design_cmd = app.add_subcommand("design", "waveguide and arc design report");
    add_config_options(design_cmd, o);
    std::optional<std::string> emit_path;
    design_cmd->add_option("--emit-config", emit_path,
                           "write the resolved config as JSON ('-' for stdout)")
        ->expected(0, 1)
        ->default_str("-");

    auto* run_cmd = app.add_subcommand("run", "synthesize the far field and analyze it");
    add_config_options(run_cmd, o);

    auto* sweep_cmd = app.add_subcommand("sweep", "run the pipeline over a parameter list");
    add_config_options(sweep_cmd, o);
    std::string sweep_param;
    std::string sweep_values;
    std::optional<std::string> sweep_out;
    sweep_cmd->add_option("--param", sweep_param, "config field to sweep")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep_cmd->add_option("--out", sweep_out, "output CSV path ('-' for stdout)");

    auto* env_cmd = app.add_subcommand("envelope", "closed-form spectrum envelope as CSV");
    add_config_options(env_cmd, o);
    bool env_optical = false;
    std::optional<std::string> env_out;
    env_cmd->add_flag("--optical", env_optical, "angular-restriction envelope without the Bessel factor");
    env_cmd->add_option("--out", env_out, "output CSV path ('-' for stdout)");

    auto* cmp_cmd = app.add_subcommand("compare", "compare two spectrum CSV files");
    std::string cmp_a, cmp_b;
    std::optional<std::string> cmp_window;
    cmp_cmd->add_option("--a", cmp_a, "first spectrum CSV")->required();
    cmp_cmd->add_option("--b", cmp_b, "second spectrum CSV")->required();
    cmp_cmd->add_option("--window", cmp_window, "'lmin,lmax' (default: common range)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "patsim: error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        if (design_cmd->parsed()) {
            const bool emit = design_cmd->count("--emit-config") > 0;
            return run_design(o, emit ? std::optional<std::string>(emit_path.value_or("-"))
                                      : std::nullopt);
        }
        if (run_cmd->parsed()) return run_run(o);
        if (sweep_cmd->parsed()) return run_sweep(o, sweep_param, sweep_values, sweep_out);
        if (env_cmd->parsed()) return run_envelope(o, env_optical, env_out);
        if (cmp_cmd->parsed()) return run_compare(cmp_a, cmp_b, cmp_window);
    } catch (const patsim::config_error& e) {
        std::cerr << "patsim: error: config: " << e.what() << "\n";
        return 2;
    } catch (const patsim::domain_error& e) {
        std::cerr << "patsim: error: domain: " << e.what() << "\n";
        return 3;
    } catch (const patsim::io_error& e) {
        std::cerr << "patsim: error: io: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "patsim: error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
