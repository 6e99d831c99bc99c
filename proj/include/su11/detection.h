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

#ifndef SU11_DETECTION_H
#define SU11_DETECTION_H

#include <random>

namespace su11 {

/// Charge-integrating photodiode: calibration curve and additive noise.
///
/// Above `knee` photons the response is linear with slope `gain`. Below it the
/// slope drops to gain * (1 - deficit (1 - N/knee)^2), which matches value and
/// slope at the knee and keeps the curve strictly increasing for deficit < 1.
/// The rms noise is noise_linear above the knee and rises quadratically to
/// noise_dark at zero flux.
struct DetectorModel {
    double gain = 1.0;
    double knee = 2000.0;
    double deficit = 0.5;
    double noise_linear = 290.0;
    double noise_dark = 1000.0;

    void validate() const;
};

/// Pulse area for a given mean photon number. Throws for negative input.
double response(const DetectorModel &m, double photons);
double response_slope(const DetectorModel &m, double photons);
/// Offset of the linear asymptote, response = gain * N + offset above the knee.
double linear_offset(const DetectorModel &m);
/// Inverse of response(), by safeguarded Newton iteration below the knee.
double invert_response(const DetectorModel &m, double area);

double noise_at(const DetectorModel &m, double photons);

/// One detector reading: Gaussian with mean true_mean and variance
/// true_var + noise_at(true_mean)^2. Readings are pedestal-subtracted charge
/// and may be negative.
double sample_reading(const DetectorModel &m, double true_mean, double true_var,
                      std::mt19937_64 &rng);

}  // namespace su11

#endif
