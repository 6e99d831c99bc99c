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

#ifndef SU11_INTERFEROMETER_H
#define SU11_INTERFEROMETER_H

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "su11/gaussian_state.h"

namespace su11 {

/// Physical parameters of one unseeded SU(1,1) interferometer.
///
/// The chain is vacuum -> DOPA1 squeeze r1 (theta = 0) -> internal loss mu ->
/// phase phi -> DOPA2 squeeze |r2| (theta = pi) -> loss eta * nu. All
/// transmissions are in [0, 1]; detector_noise is an rms photon count.
struct InterferometerConfig {
    double r1 = 2.1;
    double r2_abs = 5.2;
    double mu = 0.97;
    double eta = 0.77;
    double nu = 1.0;
    double visibility = 1.0;
    double detector_noise = 0.0;

    void validate() const;
    /// Photons inside the interferometer in the filtered mode, nu sinh^2 r1.
    double n_inside() const;
    /// Transmission nu that makes nu sinh^2 r1 equal n_inside.
    static double nu_for(double r1, double n_inside);
};

/// Detector noise (rms photons) as a function of the observed mean photon number.
using DetectorNoise = std::function<double(double)>;

/// Output amplitude S(phi) = sinh r1 cosh r2 e^{-i phi} - cosh r1 sinh r2 e^{i phi}.
std::complex<double> s_amplitude(double r1, double r2_abs, double phi);
/// |S(phi)|^2 = sinh^2(r2 - r1) + sinh(2 r1) sinh(2 r2) sin^2 phi.
double s_amplitude_sq(double r1, double r2_abs, double phi);

/// Mean output photon number, eta nu [mu |S|^2 + (1 - mu) sinh^2 r2].
double mean_output_closed(const InterferometerConfig &cfg, double phi);
/// d/dphi of mean_output_closed.
double mean_output_slope(const InterferometerConfig &cfg, double phi);

/// High-gain form eta mu n_inside e^{2 r2} sin^2 phi + background.
///
/// Valid when both gains are large (see kHighGainThreshold). With n_inside =
/// nu sinh^2 r1 and background = eta nu (1 - mu) e^{2 r2} / 4 it deviates
/// from mean_output_closed by at most kApproxErrorConstant e^{-2 min(r1, r2)}
/// times the bright-fringe value.
double mean_output_approx(const InterferometerConfig &cfg, double phi, double n_inside,
                          double background);
inline constexpr double kHighGainThreshold = 1.5;
inline constexpr double kApproxErrorConstant = 4.0;
bool in_high_gain_regime(const InterferometerConfig &cfg);

GaussianState output_state(const InterferometerConfig &cfg, double phi);

/// Total fringe background B implied by the visibility, V = A / (A + 2B) with
/// A = eta mu n_inside e^{2 r2}. Throws for V outside (0, 1].
double visibility_background(const InterferometerConfig &cfg, double n_inside);
/// Background light on top of the model's own dark-fringe floor, so that the
/// observed fringe has total background visibility_background(). Treated as
/// Poissonian: it adds equally to the mean and to the variance.
double excess_background(const InterferometerConfig &cfg);

struct OutputMoments {
    double mean = 0;          // observed mean: quantum + excess background
    double quantum_var = 0;   // photon-number variance of the Gaussian output
    double background = 0;    // excess background (mean == variance)
};
OutputMoments output_moments(const InterferometerConfig &cfg, double phi);

/// Total rms noise sqrt(quantum_var + background + detector^2).
double output_noise(const InterferometerConfig &cfg, double phi);
double output_noise(const InterferometerConfig &cfg, double phi, const DetectorNoise &detector);

/// Slopes below this (photons/rad) mark a stationary point.
inline constexpr double kSlopeFloor = 1e-9;

struct SensitivityPoint {
    double phi = 0;
    double mean_out = 0;
    double noise = 0;
    double slope = 0;
    double delta_phi = std::numeric_limits<double>::infinity();
    bool singular = false;
    // Set only for curves estimated from data.
    bool one_sided = false;
    double delta_phi_sigma = 0;
};
using SensitivityCurve = std::vector<SensitivityPoint>;

SensitivityPoint sensitivity_point(const InterferometerConfig &cfg, double phi);
SensitivityPoint sensitivity_point(const InterferometerConfig &cfg, double phi,
                                   const DetectorNoise &detector);
/// Error-propagation phase sensitivity noise / |slope|; +inf at stationary points.
double sensitivity(const InterferometerConfig &cfg, double phi);

struct SensitivityOptimum {
    double phi_opt = std::numeric_limits<double>::quiet_NaN();
    double delta_phi_min = std::numeric_limits<double>::infinity();
};
inline constexpr int kMinSearchGrid = 2048;

/// Best sensitivity over phi in (0, pi/2]: coarse grid, then golden-section
/// refinement of the bracketing cell to 1e-7 rad.
SensitivityOptimum min_sensitivity(const InterferometerConfig &cfg, int grid = kMinSearchGrid);
SensitivityOptimum min_sensitivity(const InterferometerConfig &cfg, const DetectorNoise &detector,
                                   int grid = kMinSearchGrid);

/// Shot-noise-limited sensitivity 1 / (2 sqrt(n_inside)).
double snl(double n_inside);
/// Single-mode limit 1 / (2 sinh r1).
double single_mode_limit(double r1);

struct SweepRow {
    double eta;
    double delta_phi_min;
    double snl;
    double ratio;
    double phi_opt;
};
std::vector<SweepRow> sweep_eta(const InterferometerConfig &cfg, std::span<const double> etas,
                                double n_inside);

}  // namespace su11

#endif
