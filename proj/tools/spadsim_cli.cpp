/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Command line front end. Everything goes through the public C API.
 */

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spadsim/spadsim.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

[[noreturn]] void fail(const char* what) {
    std::fprintf(stderr, "error: %s\n", what);
    std::exit(kExitRuntime);
}

void require_ok(spadsim_status status) {
    if (status != SPADSIM_OK) fail(spadsim_last_error());
}

int default_threads() {
    if (const char* env = std::getenv("SPADSIM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

struct ConfigArgs {
    std::string config_path;
    double exposure_s = std::nan("");

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "sensor config file (key=value)")
            ->required();
        cmd->add_option("--exposure-s", exposure_s,
                        "exposure time in seconds (overrides config)");
    }

    spadsim_config load() const {
        spadsim_config cfg = spadsim_config_default();
        require_ok(spadsim_config_load(config_path.c_str(), &cfg));
        if (!std::isnan(exposure_s)) cfg.exposure_s = exposure_s;
        if (std::isnan(cfg.exposure_s))
            fail("exposure not set (use exposure_s in the config or --exposure-s)");
        return cfg;
    }
};

struct GridArgs {
    double flux_min = 1e3;
    double flux_max = 1e12;
    int points = 200;

    void attach(CLI::App* cmd) {
        cmd->add_option("--flux-min", flux_min, "lowest flux in photons/s")
            ->capture_default_str();
        cmd->add_option("--flux-max", flux_max, "highest flux in photons/s")
            ->capture_default_str();
        cmd->add_option("--points", points, "number of log-spaced grid points")
            ->capture_default_str();
    }
};

std::vector<double> parse_list(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string item =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) {
            char* end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (end == item.c_str() || *end != '\0') {
                std::string msg = std::string("bad value in ") + what + ": " + item;
                fail(msg.c_str());
            }
            out.push_back(v);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) fail((std::string(what) + " is empty").c_str());
    return out;
}

// ---- snr-curve ---------------------------------------------------------------

int cmd_snr_curve(const std::string& sensor, const ConfigArgs& cfg_args, const GridArgs& grid,
                  const std::string& out_path) {
    const spadsim_config cfg = cfg_args.load();
    spadsim_curve* curve = nullptr;
    require_ok(spadsim_snr_curve(sensor.c_str(), &cfg, cfg.exposure_s, grid.flux_min,
                                 grid.flux_max, grid.points, &curve));
    require_ok(spadsim_curve_write_csv(curve, out_path.c_str()));
    spadsim_curve_free(curve);
    std::printf("wrote %s (%d points, model=%s)\n", out_path.c_str(), grid.points,
                sensor.c_str());
    return 0;
}

// ---- noise-breakdown ---------------------------------------------------------

int cmd_noise_breakdown(const ConfigArgs& cfg_args, const GridArgs& grid, bool jitter,
                        const std::string& out_path) {
    const spadsim_config cfg = cfg_args.load();
    std::FILE* out = std::fopen(out_path.c_str(), "w");
    if (!out) fail(("cannot open for writing: " + out_path).c_str());
    std::fprintf(out,
                 "flux_photons_per_s,bias_dark,bias_afterpulse,var_shot,var_quantization,"
                 "rmse\n");
    for (int i = 0; i < grid.points; ++i) {
        const double t = grid.points == 1 ? 0.0
                                          : static_cast<double>(i) / (grid.points - 1);
        const double flux =
            std::exp(std::log(grid.flux_min) +
                     t * (std::log(grid.flux_max) - std::log(grid.flux_min)));
        spadsim_rmse_breakdown row;
        require_ok(spadsim_spad_rmse_breakdown(&cfg, cfg.exposure_s, flux, jitter ? 1 : 0,
                                               &row));
        std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", flux, row.bias_dark,
                     row.bias_afterpulse, row.var_shot, row.var_quantization, row.rmse);
    }
    std::fclose(out);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

// ---- exposure-sweep ----------------------------------------------------------

int cmd_exposure_sweep(const std::string& sensor, const ConfigArgs& cfg_args,
                       const std::string& exposures, const GridArgs& grid,
                       const std::string& out_prefix) {
    spadsim_config cfg = cfg_args.load();
    for (double exposure : parse_list(exposures, "--exposures-s")) {
        spadsim_curve* curve = nullptr;
        require_ok(spadsim_snr_curve(sensor.c_str(), &cfg, exposure, grid.flux_min,
                                     grid.flux_max, grid.points, &curve));
        char suffix[48];
        std::snprintf(suffix, sizeof suffix, "_T%g.csv", exposure);
        const std::string path = out_prefix + suffix;
        require_ok(spadsim_curve_write_csv(curve, path.c_str()));
        spadsim_curve_free(curve);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

// ---- simulate-trace ----------------------------------------------------------

int cmd_simulate_trace(const ConfigArgs& cfg_args, double flux, std::uint64_t seed,
                       const std::string& out_path) {
    const spadsim_config cfg = cfg_args.load();
    spadsim_trace* trace = nullptr;
    require_ok(spadsim_simulate_spad_trace(&cfg, cfg.exposure_s, flux, seed, 0, &trace));
    require_ok(spadsim_trace_write_csv(trace, out_path.c_str()));
    const size_t n = spadsim_trace_size(trace);
    double flux_hat = 0.0;
    if (spadsim_trace_estimate(trace, &cfg, &flux_hat) == SPADSIM_OK)
        std::printf("detections=%zu flux_hat=%.10g\n", n, flux_hat);
    else
        std::printf("detections=%zu flux_hat=n/a (%s)\n", n, spadsim_last_error());
    spadsim_trace_free(trace);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

// ---- validate ----------------------------------------------------------------

int cmd_validate(const ConfigArgs& cfg_args, long long trials, const std::string& fluxes,
                 std::uint64_t seed, int threads, const std::string& out_path) {
    const spadsim_config cfg = cfg_args.load();
    const std::vector<double> grid = parse_list(fluxes, "--fluxes");

    spadsim_trials* result = nullptr;
    require_ok(spadsim_run_trials("spad", &cfg, cfg.exposure_s, grid.data(), grid.size(),
                                  trials, seed, threads, &result));
    if (!out_path.empty()) require_ok(spadsim_trials_write_csv(result, out_path.c_str()));

    bool all_pass = true;
    std::printf("%-12s %-14s %14s %14s %10s  %s\n", "flux", "metric", "measured", "expected",
                "tol", "verdict");
    for (size_t i = 0; i < spadsim_trials_size(result); ++i) {
        spadsim_trial_stats row;
        require_ok(spadsim_trials_row(result, i, &row));
        double mean_expected, var_expected, rmse_expected;
        require_ok(spadsim_spad_expected_counts(&cfg, cfg.exposure_s, row.flux,
                                                &mean_expected));
        require_ok(spadsim_spad_count_variance(&cfg, cfg.exposure_s, row.flux, &var_expected));
        spadsim_rmse_breakdown breakdown;
        require_ok(spadsim_spad_rmse_breakdown(&cfg, cfg.exposure_s, row.flux, 0, &breakdown));
        rmse_expected = breakdown.rmse;

        const double se = std::sqrt(row.var_count / static_cast<double>(row.trials));
        const double mean_tol = 3.0 * se;
        const bool mean_ok = std::abs(row.mean_count - mean_expected) <= mean_tol;
        const double var_tol = 0.10 * var_expected;
        const bool var_ok = std::abs(row.var_count - var_expected) <= var_tol;
        double snr_mc, snr_model;
        require_ok(spadsim_snr_db(row.flux, row.rmse_flux_hat, &snr_mc));
        require_ok(spadsim_snr_db(row.flux, rmse_expected, &snr_model));
        const bool snr_ok = std::abs(snr_mc - snr_model) <= 1.0;

        std::printf("%-12.4g %-14s %14.6g %14.6g %10.3g  %s\n", row.flux, "mean_count",
                    row.mean_count, mean_expected, mean_tol, mean_ok ? "PASS" : "FAIL");
        std::printf("%-12.4g %-14s %14.6g %14.6g %10.3g  %s\n", row.flux, "var_count",
                    row.var_count, var_expected, var_tol, var_ok ? "PASS" : "FAIL");
        std::printf("%-12.4g %-14s %14.6g %14.6g %10.3g  %s\n", row.flux, "snr_db", snr_mc,
                    snr_model, 1.0, snr_ok ? "PASS" : "FAIL");
        all_pass = all_pass && mean_ok && var_ok && snr_ok;
    }
    spadsim_trials_free(result);
    if (!all_pass) fail("validation failed");
    return 0;
}

// ---- render ------------------------------------------------------------------

int cmd_render(const ConfigArgs& cfg_args, const std::string& input,
               const std::string& sensor, std::uint64_t seed, double key, bool fast,
               int threads, double rescale_ratio, double peak_flux,
               const std::string& out_prefix) {
    const spadsim_config cfg = cfg_args.load();
    require_ok(spadsim_render(input.c_str(), sensor.c_str(), &cfg, cfg.exposure_s, seed, key,
                              fast ? 1 : 0, threads, rescale_ratio, peak_flux,
                              out_prefix.c_str()));
    std::printf("wrote %s_toned.png %s_flux.pfm %s_summary.csv\n", out_prefix.c_str(),
                out_prefix.c_str(), out_prefix.c_str());
    return 0;
}

// ---- dynamic-range -----------------------------------------------------------

int cmd_dynamic_range(const std::string& curve_path, double threshold_db) {
    spadsim_curve* curve = nullptr;
    require_ok(spadsim_curve_read_csv(curve_path.c_str(), &curve));
    double ratio = 0.0;
    int found = 0;
    require_ok(spadsim_dynamic_range(curve, threshold_db, &ratio, &found));
    spadsim_curve_free(curve);
    if (found)
        std::printf("%.10g\n", ratio);
    else
        std::printf("none\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spadsim: photon-counting sensor models, simulators, and HDR imaging"};
    app.require_subcommand(1);
    app.footer("Units: seconds, photons/second, electrons, decibels.\n"
               "SPADSIM_THREADS sets the default worker thread count.");

    // snr-curve
    auto* snr = app.add_subcommand("snr-curve", "write an SNR-vs-flux CSV for one sensor model");
    std::string snr_sensor;
    ConfigArgs snr_cfg;
    GridArgs snr_grid;
    std::string snr_out;
    snr->add_option("--sensor", snr_sensor, "spad|spad-exact|spad-jitter|conventional|qis")
        ->required()
        ->check(CLI::IsMember({"spad", "spad-exact", "spad-jitter", "conventional", "qis"}));
    snr_cfg.attach(snr);
    snr_grid.attach(snr);
    snr->add_option("--out", snr_out, "output CSV path")->required();

    // noise-breakdown
    auto* nb = app.add_subcommand("noise-breakdown",
                                  "write per-flux SPAD error components to CSV");
    ConfigArgs nb_cfg;
    GridArgs nb_grid;
    bool nb_jitter = false;
    std::string nb_out;
    nb_cfg.attach(nb);
    nb_grid.attach(nb);
    nb->add_flag("--jitter-corrected", nb_jitter, "apply the dead-time jitter shot term");
    nb->add_option("--out", nb_out, "output CSV path")->required();

    // exposure-sweep
    auto* sweep = app.add_subcommand("exposure-sweep",
                                     "write one SNR CSV per exposure time");
    std::string sweep_sensor = "spad";
    ConfigArgs sweep_cfg;
    std::string sweep_exposures;
    GridArgs sweep_grid;
    std::string sweep_prefix;
    sweep->add_option("--sensor", sweep_sensor, "spad|spad-exact|spad-jitter|conventional|qis")
        ->check(CLI::IsMember({"spad", "spad-exact", "spad-jitter", "conventional", "qis"}))
        ->capture_default_str();
    sweep_cfg.attach(sweep);
    sweep->add_option("--exposures-s", sweep_exposures,
                      "comma-separated exposure times in seconds")
        ->required();
    sweep_grid.attach(sweep);
    sweep->add_option("--out-prefix", sweep_prefix, "output prefix; files get _T<exposure>.csv")
        ->required();

    // simulate-trace
    auto* trace = app.add_subcommand("simulate-trace",
                                     "simulate one SPAD exposure and write timestamps");
    ConfigArgs trace_cfg;
    double trace_flux = 0.0;
    std::uint64_t trace_seed = 0;
    std::string trace_out;
    trace_cfg.attach(trace);
    trace->add_option("--flux", trace_flux, "incident flux in photons/s")->required();
    trace->add_option("--seed", trace_seed, "master seed")->capture_default_str();
    trace->add_option("--out", trace_out, "output CSV path (header t_s)")->required();

    // validate
    auto* val = app.add_subcommand("validate",
                                   "compare SPAD Monte Carlo against the analytic model");
    ConfigArgs val_cfg;
    long long val_trials = 10000;
    std::string val_fluxes = "1e6,1e7,1e8,1e9";
    std::uint64_t val_seed = 0;
    int val_threads = default_threads();
    std::string val_out;
    val_cfg.attach(val);
    val->add_option("--trials", val_trials, "Monte Carlo trials per flux point")
        ->capture_default_str();
    val->add_option("--fluxes", val_fluxes, "comma-separated flux list in photons/s")
        ->capture_default_str();
    val->add_option("--seed", val_seed, "master seed")->capture_default_str();
    val->add_option("--threads", val_threads, "worker threads")->capture_default_str();
    val->add_option("--out", val_out, "optional trial-statistics CSV path");

    // render
    auto* render = app.add_subcommand("render",
                                      "simulate a capture of a PFM scene and write outputs");
    ConfigArgs render_cfg;
    std::string render_input, render_sensor, render_prefix;
    std::uint64_t render_seed = 0;
    double render_key = 0.18;
    bool render_fast = false;
    int render_threads = default_threads();
    double render_ratio = 0.0, render_peak = 0.0;
    render->add_option("--input", render_input, "input PFM flux image")->required();
    render->add_option("--sensor", render_sensor, "spad|conventional|qis")
        ->required()
        ->check(CLI::IsMember({"spad", "conventional", "qis"}));
    render_cfg.attach(render);
    render->add_option("--seed", render_seed, "master seed")->capture_default_str();
    render->add_option("--key", render_key, "tone-map key (dimensionless)")
        ->capture_default_str();
    render->add_flag("--fast", render_fast,
                     "sample the exact count distribution (spad, p_ap=0, jitter 0)");
    render->add_option("--threads", render_threads, "worker threads")->capture_default_str();
    render->add_option("--rescale-ratio", render_ratio,
                       "rescale scene dynamic range to this ratio (with --peak-flux)");
    render->add_option("--peak-flux", render_peak, "peak flux in photons/s after rescale");
    render->add_option("--out-prefix", render_prefix, "output prefix")->required();

    // dynamic-range
    auto* dr = app.add_subcommand("dynamic-range",
                                  "print the flux ratio above an SNR threshold");
    std::string dr_curve;
    double dr_threshold = 30.0;
    dr->add_option("--curve", dr_curve, "SNR curve CSV path")->required();
    dr->add_option("--threshold-db", dr_threshold, "SNR threshold in dB")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (snr->parsed()) return cmd_snr_curve(snr_sensor, snr_cfg, snr_grid, snr_out);
    if (nb->parsed()) return cmd_noise_breakdown(nb_cfg, nb_grid, nb_jitter, nb_out);
    if (sweep->parsed())
        return cmd_exposure_sweep(sweep_sensor, sweep_cfg, sweep_exposures, sweep_grid,
                                  sweep_prefix);
    if (trace->parsed()) return cmd_simulate_trace(trace_cfg, trace_flux, trace_seed, trace_out);
    if (val->parsed())
        return cmd_validate(val_cfg, val_trials, val_fluxes, val_seed, val_threads, val_out);
    if (render->parsed()) {
        if ((render_ratio > 0.0) != (render_peak > 0.0))
            fail("--rescale-ratio and --peak-flux must be given together");
        return cmd_render(render_cfg, render_input, render_sensor, render_seed, render_key,
                          render_fast, render_threads, render_ratio, render_peak,
                          render_prefix);
    }
    if (dr->parsed()) return cmd_dynamic_range(dr_curve, dr_threshold);
    return kExitUsage;
}
