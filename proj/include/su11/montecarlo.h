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

#ifndef SU11_MONTECARLO_H
#define SU11_MONTECARLO_H

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "su11/analysis.h"
#include "su11/detection.h"
#include "su11/fringe_scan.h"
#include "su11/interferometer.h"

namespace su11 {

/// Pump pulse-energy statistics and their coupling to the parametric gains.
///
/// Gains scale as (E / mean_energy)^gain_exponent; 0.5 means r follows the
/// pump field amplitude. The post-selection monitor is a high-gain PDC reading
/// monitor_photons * exp(2 monitor_r ((E / mean_energy)^gain_exponent - 1)).
struct PumpModel {
    double mean_energy = 20.0;  // uJ
    double sigma_energy = 0.0;  // uJ
    double gain_exponent = 0.5;
    double monitor_r = 5.0;
    double monitor_photons = 1e5;

    void validate() const;
    /// sigma_energy = mean_energy sqrt(g2 - 1) for Gaussian energies.
    static double sigma_for_g2(double mean_energy, double g2);
    double gain_scale(double energy) const;
    double monitor_mean(double energy) const;
};

struct PulseRecord {
    double pump_energy;
    double monitor_reading;
    double signal_reading;
};

struct Window {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

/// Raised when the post-selection window rejects every pulse at a position.
struct EmptyWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double sample_pump(const PumpModel &pm, std::mt19937_64 &rng);

/// g2(0) = <I^2> / <I>^2, evaluated as 1 + var / mean^2 with a centered second pass.
double g2(std::span<const double> intensities);

/// Keeps records with monitor_reading in [lo, hi], order preserved.
std::vector<PulseRecord> post_select(std::span<const PulseRecord> records, Window window);

struct ScanOptions {
    std::vector<double> positions_mm;
    PhaseCalibration phase;
    std::size_t n_pulses = 4000;
    Window window;
    std::uint64_t seed = 0;
    /// Sample the Gaussian-state photon variance (off only for diagnostics).
    bool quantum_noise = true;
};

struct ScanResult {
    FringeScan scan;
    /// g2 of all simulated pump energies.
    double pump_g2 = 1;
    double kept_fraction = 1;
};

/// Simulates n_pulses pulses per position. Each position draws from its own
/// random stream derived from (seed, position index), so results do not
/// depend on evaluation order.
ScanResult run_scan(const InterferometerConfig &cfg, const PumpModel &pm, const DetectorModel &dm,
                    const ScanOptions &options);

/// Per-pulse records for one phase setting; used by run_scan.
std::vector<PulseRecord> simulate_pulses(const InterferometerConfig &cfg, const PumpModel &pm,
                                         const DetectorModel &dm, double phi, std::size_t n_pulses,
                                         std::mt19937_64 &rng, bool quantum_noise = true);

/// Seed of the random stream owned by unit `index` of a run seeded with `seed`.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

/// Phase sensitivity estimated from scan data: central-difference slopes of
/// the per-position means and the per-position std as noise. Endpoints use
/// one-sided differences and are flagged. delta_phi_sigma propagates the
/// sampling error of the std and of the slope. Needs at least 3 rows.
SensitivityCurve estimate_sensitivity(const FringeScan &scan);

struct EstimatedOptimum {
    double phi_opt = std::numeric_limits<double>::quiet_NaN();
    double delta_phi_min = std::numeric_limits<double>::infinity();
    double sigma = std::numeric_limits<double>::infinity();
};
/// Smallest estimated sensitivity over interior, non-singular points.
EstimatedOptimum best_estimate(std::span<const SensitivityPoint> curve);

}  // namespace su11

#endif
