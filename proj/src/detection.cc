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

#include "su11/detection.h"

#include <cmath>
#include <stdexcept>

namespace su11 {

void DetectorModel::validate() const {
    if (!(gain > 0) || !std::isfinite(gain)) {
        throw std::invalid_argument("detector gain must be positive");
    }
    if (!(knee > 0) || !std::isfinite(knee)) {
        throw std::invalid_argument("detector knee must be positive");
    }
    if (!(deficit >= 0 && deficit < 1)) {
        throw std::invalid_argument("detector deficit must lie in [0, 1)");
    }
    if (!(noise_linear >= 0) || !(noise_dark >= noise_linear)) {
        throw std::invalid_argument("detector noise must satisfy 0 <= noise_linear <= noise_dark");
    }
}

double response(const DetectorModel &m, double photons) {
    if (!(photons >= 0)) {
        throw std::invalid_argument("detector response needs a non-negative photon number");
    }
    if (photons >= m.knee) {
        return m.gain * photons + linear_offset(m);
    }
    double u = 1 - photons / m.knee;
    return m.gain * (photons - m.deficit * m.knee * (1 - u * u * u) / 3);
}

double response_slope(const DetectorModel &m, double photons) {
    if (photons >= m.knee) {
        return m.gain;
    }
    double u = 1 - photons / m.knee;
    return m.gain * (1 - m.deficit * u * u);
}

double linear_offset(const DetectorModel &m) {
    return -m.gain * m.deficit * m.knee / 3;
}

double invert_response(const DetectorModel &m, double area) {
    if (!(area >= 0)) {
        throw std::invalid_argument("pulse area below the zero-photon response");
    }
    double at_knee = response(m, m.knee);
    if (area >= at_knee) {
        return (area - linear_offset(m)) / m.gain;
    }
    double lo = 0;
    double hi = m.knee;
    double n = area / m.gain;
    for (int iter = 0; iter < 200; iter++) {
        double f = response(m, n) - area;
        if (std::abs(f) <= 1e-14 * std::max(area, 1e-300)) {
            break;
        }
        if (f > 0) {
            hi = n;
        } else {
            lo = n;
        }
        double next = n - f / response_slope(m, n);
        n = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
    }
    return n;
}

double noise_at(const DetectorModel &m, double photons) {
    if (photons >= m.knee) {
        return m.noise_linear;
    }
    double u = 1 - std::max(photons, 0.0) / m.knee;
    return m.noise_linear + (m.noise_dark - m.noise_linear) * u * u;
}

double sample_reading(const DetectorModel &m, double true_mean, double true_var,
                      std::mt19937_64 &rng) {
    if (!(true_var >= 0)) {
        throw std::invalid_argument("reading variance must be non-negative");
    }
    double noise = noise_at(m, true_mean);
    double sd = std::sqrt(true_var + noise * noise);
    if (sd == 0) {
        return true_mean;
    }
    std::normal_distribution<double> dist(true_mean, sd);
    return dist(rng);
}

}  // namespace su11
