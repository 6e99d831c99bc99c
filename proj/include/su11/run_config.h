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

#ifndef SU11_RUN_CONFIG_H
#define SU11_RUN_CONFIG_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "su11/analysis.h"
#include "su11/detection.h"
#include "su11/interferometer.h"
#include "su11/montecarlo.h"

namespace su11 {

/// Invalid configuration; `key` names the offending entry when there is one.
struct ConfigError : std::runtime_error {
    ConfigError(std::string key, const std::string &message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key(std::move(key)) {}
    std::string key;
};

/// Everything one CLI run needs, as a flat key/value document.
///
/// Grammar: one `key = value` per line, `#` starts a comment, blank lines are
/// ignored. Unknown and repeated keys are rejected. Exactly one of
/// interferometer.nu and interferometer.n_inside is `auto`; the other fixes it
/// through n_inside = nu sinh^2 r1. The defaults are the red loss-tolerance
/// configuration (r1 = 2.1, |r2| = 5.2, 4.5 photons inside).
struct RunConfig {
    double r1 = 2.1;
    double r2_abs = 5.2;
    double mu = 0.97;
    double eta = 0.77;
    std::optional<double> nu;  // nullopt: auto
    std::optional<double> n_inside = 4.5;
    double visibility = 0.97;
    double detector_noise = 1000.0;

    DetectorModel detector;

    double pump_mean_energy_uj = 20.0;
    double pump_g2 = 1.00001;
    double pump_gain_exponent = 0.5;
    double pump_monitor_r = 5.0;
    double pump_monitor_photons = 1e5;

    double lambda_p_nm = 400.0;
    double delta_n_air = kDefaultAirDispersion;
    double phi0_rad = 0.0;
    double scan_start_mm = 0.0;
    double scan_stop_mm = 26.5;
    int scan_points = 33;
    int scan_n_pulses = 6000;
    double window_lo = 98500.0;
    double window_hi = 101500.0;

    double sweep_eta_min = 0.1;
    double sweep_eta_max = 1.0;
    int sweep_eta_points = 10;

    int fringe_grid = 256;
    std::uint64_t seed = 1;

    /// Resolved interferometer parameters (nu filled in).
    InterferometerConfig interferometer() const;
    double resolved_n_inside() const;
    PumpModel pump() const;
    PhaseCalibration phase() const;
    ScanOptions scan_options() const;
    std::vector<double> eta_grid() const;

    /// Cross-field checks; throws ConfigError.
    void validate() const;
};

RunConfig parse_run_config(const std::string &text);
RunConfig load_run_config(const std::string &path);
/// Canonical text form; parse_run_config(serialize(c)) == c.
std::string serialize(const RunConfig &c);
bool operator==(const RunConfig &a, const RunConfig &b);

/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig &c);

}  // namespace su11

#endif
