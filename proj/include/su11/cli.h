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

#ifndef SU11_CLI_H
#define SU11_CLI_H

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "su11/analysis.h"
#include "su11/run_config.h"

namespace su11 {

/// Malformed or unusable input data (CSV files, fit preconditions).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

// Column layouts of the emitted files. These are part of the file format.
inline constexpr const char *kFringeHeader = "phi_rad,mean_photons,noise_photons,sensitivity_rad,singular";
inline constexpr const char *kSweepHeader = "eta,delta_phi_min_rad,snl_rad,ratio,phi_opt_rad";
inline constexpr const char *kScanHeader =
    "position_mm,phi_rad,n_pulses_kept,n_pulses_total,mean_photons,std_photons";

/// Model fringe on config.fringe_grid phases covering [-pi/2, pi/2).
std::string fringe_csv(const RunConfig &config);
std::string sweep_csv(const RunConfig &config);

struct MonteCarloOutput {
    std::string scan_csv;
    std::string summary_json;
};
MonteCarloOutput montecarlo_output(const RunConfig &config);

struct FitInputs {
    double eta;
    double mu;
    double n_inside;
    std::optional<double> n2;
};
/// Reads phi_rad and mean_photons (and, when both present, std_photons and
/// n_pulses_kept for weights). Throws DataError with the offending line number.
std::vector<FringePoint> parse_fringe_csv(const std::string &text);
std::string fit_json(const std::string &csv_text, const FitInputs &inputs);

/// Writes via a temporary file in the same directory and a rename.
void write_file_atomic(const std::string &path, const std::string &content);

/// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace su11

#endif
