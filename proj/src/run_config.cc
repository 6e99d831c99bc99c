// Copyright 2026 The su11 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "su11/run_config.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace su11 {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string &key, const std::string &text) {
    const char *begin = text.c_str();
    char *end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(key, "expected a finite number, got '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string &key, const std::string &text) {
    const char *begin = text.c_str();
    char *end = nullptr;
    errno = 0;
    long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    }
    return v;
}

struct Bounds {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double v) const {
        bool above = lo_open ? v > lo : v >= lo;
        bool below = hi_open ? v < hi : v <= hi;
        return above && below;
    }
    std::string describe() const {
        return std::string(lo_open ? "(" : "[") + format_double(lo) + ", " + format_double(hi) +
               (hi_open ? ")" : "]");
    }
};

constexpr double kInf = std::numeric_limits<double>::infinity();
const Bounds kUnit{0, 1};
const Bounds kNonNegative{0, kInf};
const Bounds kPositive{0, kInf, true};
const Bounds kAny{};

struct Entry {
    std::string key;
    std::function<std::string(const RunConfig &)> get;
    std::function<void(RunConfig &, const std::string &)> set;
};

Entry real(std::string key, double RunConfig::*field, Bounds b) {
    return {key, [field](const RunConfig &c) { return format_double(c.*field); },
            [key, field, b](RunConfig &c, const std::string &v) {
                double x = parse_double(key, v);
                if (!b.contains(x)) {
                    throw ConfigError(key, "value " + v + " outside " + b.describe());
                }
                c.*field = x;
            }};
}

Entry detector_real(std::string key, double DetectorModel::*field, Bounds b) {
    return {key, [field](const RunConfig &c) { return format_double(c.detector.*field); },
            [key, field, b](RunConfig &c, const std::string &v) {
                double x = parse_double(key, v);
                if (!b.contains(x)) {
                    throw ConfigError(key, "value " + v + " outside " + b.describe());
                }
                c.detector.*field = x;
            }};
}

Entry integer(std::string key, int RunConfig::*field, long long lo, long long hi) {
    return {key, [field](const RunConfig &c) { return std::to_string(c.*field); },
            [key, field, lo, hi](RunConfig &c, const std::string &v) {
                long long x = parse_int(key, v);
                if (x < lo || x > hi) {
                    throw ConfigError(key, "value " + v + " outside [" + std::to_string(lo) + ", " +
                                               std::to_string(hi) + "]");
                }
                c.*field = static_cast<int>(x);
            }};
}

Entry optional_real(std::string key, std::optional<double> RunConfig::*field, Bounds b) {
    return {key,
            [field](const RunConfig &c) {
                return (c.*field).has_value() ? format_double(*(c.*field)) : std::string("auto");
            },
            [key, field, b](RunConfig &c, const std::string &v) {
                if (v == "auto") {
                    c.*field = std::nullopt;
                    return;
                }
                double x = parse_double(key, v);
                if (!b.contains(x)) {
                    throw ConfigError(key, "value " + v + " outside " + b.describe());
                }
                c.*field = x;
            }};
}

const std::vector<Entry> &entries() {
    static const std::vector<Entry> table = {
        real("interferometer.r1", &RunConfig::r1, kNonNegative),
        real("interferometer.r2_abs", &RunConfig::r2_abs, kNonNegative),
        real("interferometer.mu", &RunConfig::mu, kUnit),
        real("interferometer.eta", &RunConfig::eta, kUnit),
        optional_real("interferometer.nu", &RunConfig::nu, kUnit),
        optional_real("interferometer.n_inside", &RunConfig::n_inside, kPositive),
        real("interferometer.visibility", &RunConfig::visibility, {0, 1, true, false}),
        real("interferometer.detector_noise", &RunConfig::detector_noise, kNonNegative),
        detector_real("detector.gain", &DetectorModel::gain, kPositive),
        detector_real("detector.knee", &DetectorModel::knee, kPositive),
        detector_real("detector.deficit", &DetectorModel::deficit, {0, 1, false, true}),
        detector_real("detector.noise_linear", &DetectorModel::noise_linear, kNonNegative),
        detector_real("detector.noise_dark", &DetectorModel::noise_dark, kNonNegative),
        real("pump.mean_energy_uj", &RunConfig::pump_mean_energy_uj, kPositive),
        real("pump.g2", &RunConfig::pump_g2, {1, kInf}),
        real("pump.gain_exponent", &RunConfig::pump_gain_exponent, kNonNegative),
        real("pump.monitor_r", &RunConfig::pump_monitor_r, kNonNegative),
        real("pump.monitor_photons", &RunConfig::pump_monitor_photons, kPositive),
        real("scan.lambda_p_nm", &RunConfig::lambda_p_nm, kPositive),
        real("scan.delta_n_air", &RunConfig::delta_n_air, kPositive),
        real("scan.phi0_rad", &RunConfig::phi0_rad, kAny),
        real("scan.start_mm", &RunConfig::scan_start_mm, kAny),
        real("scan.stop_mm", &RunConfig::scan_stop_mm, kAny),
        integer("scan.points", &RunConfig::scan_points, 3, 1000000),
        integer("scan.n_pulses", &RunConfig::scan_n_pulses, 100, 100000000),
        real("scan.window_lo", &RunConfig::window_lo, kAny),
        real("scan.window_hi", &RunConfig::window_hi, kAny),
        real("sweep.eta_min", &RunConfig::sweep_eta_min, {0, 1, true, false}),
        real("sweep.eta_max", &RunConfig::sweep_eta_max, {0, 1, true, false}),
        integer("sweep.eta_points", &RunConfig::sweep_eta_points, 1, 1000000),
        integer("fringe.grid", &RunConfig::fringe_grid, 5, 100000000),
        {"run.seed", [](const RunConfig &c) { return std::to_string(c.seed); },
         [](RunConfig &c, const std::string &v) {
             const char *begin = v.c_str();
             char *end = nullptr;
             errno = 0;
             unsigned long long x = std::strtoull(begin, &end, 10);
             if (end == begin || *end != '\0' || errno == ERANGE || v.front() == '-') {
                 throw ConfigError("run.seed", "expected an unsigned 64-bit integer, got '" + v + "'");
             }
             c.seed = x;
         }},
    };
    return table;
}

}  // namespace

InterferometerConfig RunConfig::interferometer() const {
    InterferometerConfig cfg;
    cfg.r1 = r1;
    cfg.r2_abs = r2_abs;
    cfg.mu = mu;
    cfg.eta = eta;
    cfg.visibility = visibility;
    cfg.detector_noise = detector_noise;
    cfg.nu = nu.has_value() ? *nu : InterferometerConfig::nu_for(r1, *n_inside);
    return cfg;
}

double RunConfig::resolved_n_inside() const {
    return n_inside.has_value() ? *n_inside : interferometer().n_inside();
}

PumpModel RunConfig::pump() const {
    PumpModel pm;
    pm.mean_energy = pump_mean_energy_uj;
    pm.sigma_energy = PumpModel::sigma_for_g2(pump_mean_energy_uj, pump_g2);
    pm.gain_exponent = pump_gain_exponent;
    pm.monitor_r = pump_monitor_r;
    pm.monitor_photons = pump_monitor_photons;
    return pm;
}

PhaseCalibration RunConfig::phase() const {
    return {period(lambda_p_nm * 1e-6, delta_n_air), phi0_rad};
}

ScanOptions RunConfig::scan_options() const {
    ScanOptions opt;
    opt.phase = phase();
    opt.n_pulses = static_cast<std::size_t>(scan_n_pulses);
    opt.window = {window_lo, window_hi};
    opt.seed = seed;
    for (int k = 0; k + 1 < scan_points; k++) {
        opt.positions_mm.push_back(scan_start_mm +
                                   (scan_stop_mm - scan_start_mm) * k / (scan_points - 1));
    }
    opt.positions_mm.push_back(scan_stop_mm);
    return opt;
}

std::vector<double> RunConfig::eta_grid() const {
    std::vector<double> etas;
    if (sweep_eta_points == 1) {
        etas.push_back(sweep_eta_max);
        return etas;
    }
    for (int k = 0; k + 1 < sweep_eta_points; k++) {
        etas.push_back(sweep_eta_min + (sweep_eta_max - sweep_eta_min) * k / (sweep_eta_points - 1));
    }
    etas.push_back(sweep_eta_max);
    return etas;
}

void RunConfig::validate() const {
    if (nu.has_value() == n_inside.has_value()) {
        throw ConfigError("interferometer.nu",
                          "exactly one of interferometer.nu and interferometer.n_inside must be auto");
    }
    if (n_inside.has_value()) {
        if (r1 == 0) {
            throw ConfigError("interferometer.r1", "must be positive when n_inside is given");
        }
        double derived = InterferometerConfig::nu_for(r1, *n_inside);
        if (derived > 1) {
            throw ConfigError("interferometer.n_inside",
                              "exceeds sinh^2(r1): implied nu = " + format_double(derived) + " > 1");
        }
    }
    if (detector.noise_dark < detector.noise_linear) {
        throw ConfigError("detector.noise_dark", "must be at least detector.noise_linear");
    }
    if (!(scan_stop_mm > scan_start_mm)) {
        throw ConfigError("scan.stop_mm", "must exceed scan.start_mm");
    }
    if (!(window_hi > window_lo)) {
        throw ConfigError("scan.window_hi", "must exceed scan.window_lo");
    }
    if (sweep_eta_points > 1 && !(sweep_eta_max > sweep_eta_min)) {
        throw ConfigError("sweep.eta_max", "must exceed sweep.eta_min");
    }
}

RunConfig parse_run_config(const std::string &text) {
    std::map<std::string, const Entry *> by_key;
    for (const auto &e : entries()) {
        by_key[e.key] = &e;
    }
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            throw ConfigError(key, "unknown key (line " + std::to_string(line_no) + ")");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(key, "repeated key (line " + std::to_string(line_no) + ")");
        }
        if (value.empty()) {
            throw ConfigError(key, "missing value (line " + std::to_string(line_no) + ")");
        }
        it->second->set(c, value);
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("", "cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_run_config(buf.str());
}

std::string serialize(const RunConfig &c) {
    std::string out;
    for (const auto &e : entries()) {
        out += e.key + " = " + e.get(c) + "\n";
    }
    return out;
}

bool operator==(const RunConfig &a, const RunConfig &b) {
    return serialize(a) == serialize(b);
}

std::string config_hash(const RunConfig &c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace su11
