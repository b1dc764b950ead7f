/*
 * This file is part of spadsim
 * Copyright 2026 spadsim contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "core/config_file.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace spadsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& value, const std::string& key) {
    const char* text = value.c_str();
    char* end = nullptr;
    const double parsed = std::strtod(text, &end);
    if (end == text || *end != '\0' || !std::isfinite(parsed))
        throw ConfigError("config value for '" + key + "' is not a finite number");
    return parsed;
}

double required(const std::optional<double>& field, const char* key) {
    if (!field) throw ConfigError(std::string("config missing key '") + key + "'");
    return *field;
}

}  // namespace

SpadConfig ConfigFile::spad() const {
    SpadConfig cfg;
    cfg.quantum_efficiency = required(q, "q");
    cfg.dead_time_s = required(tau_d_s, "tau_d_s");
    cfg.dark_rate_hz = dark_rate_hz.value_or(0.0);
    cfg.afterpulse_prob = p_ap.value_or(0.0);
    cfg.jitter_sigma_s = jitter_sigma_s.value_or(0.0);
    return cfg;
}

ConventionalConfig ConfigFile::conventional() const {
    ConventionalConfig cfg;
    cfg.quantum_efficiency = required(q, "q");
    const double wells = required(fwc, "fwc");
    if (!(wells >= 1.0) || wells != std::floor(wells))
        throw ConfigError("fwc must be a positive integer");
    cfg.full_well_e = static_cast<long long>(wells);
    cfg.read_noise_e = read_noise_e.value_or(0.0);
    return cfg;
}

QisConfig ConfigFile::qis() const {
    QisConfig cfg;
    cfg.quantum_efficiency = required(q, "q");
    cfg.bin_width_s = required(qis_tau_b_s, "qis_tau_b_s");
    cfg.read_noise_e = read_noise_e.value_or(0.0);
    return cfg;
}

Exposure ConfigFile::exposure() const { return Exposure{required(exposure_s, "exposure_s")}; }

ConfigFile parse_config(std::istream& in) {
    ConfigFile out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
        const std::string key = trim(line.substr(0, eq));
        const double value = parse_number(trim(line.substr(eq + 1)), key);

        std::optional<double>* slot = nullptr;
        if (key == "q") slot = &out.q;
        else if (key == "tau_d_s") slot = &out.tau_d_s;
        else if (key == "dark_rate_hz") slot = &out.dark_rate_hz;
        else if (key == "p_ap") slot = &out.p_ap;
        else if (key == "jitter_sigma_s") slot = &out.jitter_sigma_s;
        else if (key == "exposure_s") slot = &out.exposure_s;
        else if (key == "fwc") slot = &out.fwc;
        else if (key == "read_noise_e") slot = &out.read_noise_e;
        else if (key == "qis_tau_b_s") slot = &out.qis_tau_b_s;
        else throw ConfigError("unknown config key '" + key + "'");

        if (slot->has_value()) throw ConfigError("duplicate config key '" + key + "'");
        *slot = value;
    }
    return out;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace spadsim
