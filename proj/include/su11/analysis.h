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

#ifndef SU11_ANALYSIS_H
#define SU11_ANALYSIS_H

#include <span>
#include <stdexcept>

#include "su11/fringe_scan.h"

namespace su11 {

/// Raised when the fringe fit does not converge within kFitIterationCap.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultPumpWavelengthMm = 400e-6;
/// n_air(400 nm) - n_air(800 nm) giving a 52 mm fringe period.
inline constexpr double kDefaultAirDispersion = 1.5385e-5;
inline constexpr int kFitIterationCap = 200;
inline constexpr double kFitTolerance = 1e-10;

/// Air-gap interference period 2 lambda_p / delta_n (same length unit as lambda_p).
double period(double lambda_p, double delta_n_air);

/// Maps crystal separation to phase: phi = phi0 + pi d / D.
struct PhaseCalibration {
    double period_mm = 52.0;
    double phi0 = 0.0;
};
double distance_to_phase(double d_mm, double period_mm, double phi0 = 0.0);

struct FringePoint {
    double phi;
    double mean;
    /// Standard error of `mean`; zero means unweighted.
    double sigma = 0;
};

/// Fitted A sin^2(phi - phi0) + B with standard errors.
///
/// r2_abs = ln(A / (eta mu n_inside)) / 2 is the high-gain estimate; it is NaN
/// unless eta, mu and n_inside are all positive.
struct FitResult {
    double amplitude = 0;
    double background = 0;
    double phase_offset = 0;
    double r2_abs = 0;
    double amplitude_err = 0;
    double background_err = 0;
    double phase_offset_err = 0;
    double r2_abs_err = 0;
    double residual_norm = 0;
    int iterations = 0;
    bool weighted = false;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit with analytic Jacobian.
/// phase_offset is reported in [-pi/2, pi/2). With per-point sigmas the
/// covariance is absolute; without, it is scaled by the reduced chi^2.
/// Throws ConvergenceError after max_iterations without convergence.
FitResult fit_fringe(std::span<const FringePoint> points, double eta, double mu, double n_inside,
                     int max_iterations = kFitIterationCap);
FitResult fit_fringe(const FringeScan &scan, double eta, double mu, double n_inside);

struct GainEstimate {
    double r1;
    double nu;
    /// False when nu > 1, i.e. the photon numbers cannot come from one mode.
    bool consistent;
};
/// r1 = asinh(sqrt(n_inside / n2) sinh r2), nu = n_inside / sinh^2 r1.
GainEstimate extract_gains(double n_inside, double n2, double r2_abs);

/// Gains and mode transmission from the exact fringe amplitude
/// A = 4 eta mu nu sinh r1 cosh r1 sinh r2 cosh r2 together with
/// n_inside = nu sinh^2 r1 and n2 = nu sinh^2 r2. Free of the high-gain bias
/// of FitResult::r2_abs (about ln(coth r1) / 2).
struct ExactGains {
    double r1;
    double r2_abs;
    double nu;
    double r2_abs_err;
};
ExactGains solve_exact_gains(double amplitude, double amplitude_err, double eta, double mu,
                             double n_inside, double n2);

/// Fringe contrast A / (A + 2B).
double visibility(double amplitude, double background);

}  // namespace su11

#endif
