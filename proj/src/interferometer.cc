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

#include "su11/interferometer.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace su11 {

namespace {

void require_unit(double v, const char *name) {
    if (!(v >= 0 && v <= 1)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                    std::to_string(v));
    }
}

double constant_noise(const InterferometerConfig &cfg, double) {
    return cfg.detector_noise;
}

template <typename Noise>
SensitivityPoint evaluate_point(const InterferometerConfig &cfg, double phi, const Noise &noise) {
    SensitivityPoint pt;
    pt.phi = phi;
    OutputMoments m = output_moments(cfg, phi);
    pt.mean_out = m.mean;
    double detector = noise(m.mean);
    pt.noise = std::sqrt(m.quantum_var + m.background + detector * detector);
    pt.slope = mean_output_slope(cfg, phi);
    if (std::abs(pt.slope) < kSlopeFloor) {
        pt.singular = true;
    } else {
        pt.delta_phi = pt.noise / std::abs(pt.slope);
    }
    return pt;
}

template <typename Noise>
SensitivityOptimum minimize(const InterferometerConfig &cfg, const Noise &noise, int grid) {
    if (grid < 3) {
        throw std::invalid_argument("sensitivity search grid needs at least 3 points");
    }
    const double step = std::numbers::pi / 2 / grid;
    auto value = [&](double phi) { return evaluate_point(cfg, phi, noise).delta_phi; };

    int best = -1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= grid; k++) {
        double v = value(k * step);
        if (v < best_value) {
            best_value = v;
            best = k;
        }
    }
    SensitivityOptimum opt;
    if (best < 0) {
        return opt;
    }

    double lo = (best - 1) * step;
    double hi = std::min(best + 1, grid) * step;
    if (lo <= 0) {
        lo = 0.5 * step * 1e-3;
    }
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = value(a);
    double fb = value(b);
    while (hi - lo > 1e-7) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = value(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = value(b);
        }
    }
    double mid = 0.5 * (lo + hi);
    double fmid = value(mid);
    opt.phi_opt = best * step;
    opt.delta_phi_min = best_value;
    if (fmid < opt.delta_phi_min) {
        opt.phi_opt = mid;
        opt.delta_phi_min = fmid;
    }
    return opt;
}

}  // namespace

void InterferometerConfig::validate() const {
    if (!std::isfinite(r1) || r1 < 0) {
        throw std::invalid_argument("r1 must be finite and non-negative");
    }
    if (!std::isfinite(r2_abs) || r2_abs < 0) {
        throw std::invalid_argument("r2_abs must be finite and non-negative");
    }
    require_unit(mu, "mu");
    require_unit(eta, "eta");
    require_unit(nu, "nu");
    require_unit(visibility, "visibility");
    if (!std::isfinite(detector_noise) || detector_noise < 0) {
        throw std::invalid_argument("detector_noise must be finite and non-negative");
    }
}

double InterferometerConfig::n_inside() const {
    double s = std::sinh(r1);
    return nu * s * s;
}

double InterferometerConfig::nu_for(double r1, double n_inside) {
    double s = std::sinh(r1);
    if (s == 0) {
        throw std::invalid_argument("n_inside cannot be reached with r1 = 0");
    }
    return n_inside / (s * s);
}

std::complex<double> s_amplitude(double r1, double r2_abs, double phi) {
    using namespace std::complex_literals;
    return std::sinh(r1) * std::cosh(r2_abs) * std::exp(-1i * phi) -
           std::cosh(r1) * std::sinh(r2_abs) * std::exp(1i * phi);
}

double s_amplitude_sq(double r1, double r2_abs, double phi) {
    double dark = std::sinh(r2_abs - r1);
    double s = std::sin(phi);
    return dark * dark + std::sinh(2 * r1) * std::sinh(2 * r2_abs) * s * s;
}

double mean_output_closed(const InterferometerConfig &cfg, double phi) {
    double s2 = std::sinh(cfg.r2_abs);
    return cfg.eta * cfg.nu *
           (cfg.mu * s_amplitude_sq(cfg.r1, cfg.r2_abs, phi) + (1 - cfg.mu) * s2 * s2);
}

double mean_output_slope(const InterferometerConfig &cfg, double phi) {
    return cfg.eta * cfg.nu * cfg.mu * std::sinh(2 * cfg.r1) * std::sinh(2 * cfg.r2_abs) *
           std::sin(2 * phi);
}

double mean_output_approx(const InterferometerConfig &cfg, double phi, double n_inside,
                          double background) {
    double s = std::sin(phi);
    return cfg.eta * cfg.mu * n_inside * std::exp(2 * cfg.r2_abs) * s * s + background;
}

bool in_high_gain_regime(const InterferometerConfig &cfg) {
    return cfg.r1 >= kHighGainThreshold && cfg.r2_abs >= kHighGainThreshold;
}

GaussianState output_state(const InterferometerConfig &cfg, double phi) {
    GaussianState s = apply_squeeze(vacuum(), SqueezeParams(cfg.r1, 0.0));
    s = apply_loss(s, cfg.mu);
    s = apply_rotation(s, phi);
    s = apply_squeeze(s, SqueezeParams(cfg.r2_abs, std::numbers::pi));
    return apply_loss(s, cfg.eta * cfg.nu);
}

double visibility_background(const InterferometerConfig &cfg, double n_inside) {
    if (!(cfg.visibility > 0 && cfg.visibility <= 1)) {
        throw std::invalid_argument("visibility must lie in (0, 1]");
    }
    double amplitude = cfg.eta * cfg.mu * n_inside * std::exp(2 * cfg.r2_abs);
    return amplitude * (1 - cfg.visibility) / (2 * cfg.visibility);
}

double excess_background(const InterferometerConfig &cfg) {
    if (cfg.visibility == 1) {
        return 0;
    }
    double excess = visibility_background(cfg, cfg.n_inside()) - mean_output_closed(cfg, 0);
    return excess > 0 ? excess : 0.0;
}

OutputMoments output_moments(const InterferometerConfig &cfg, double phi) {
    OutputMoments m;
    m.background = excess_background(cfg);
    m.mean = mean_output_closed(cfg, phi) + m.background;
    m.quantum_var = photon_var(output_state(cfg, phi));
    return m;
}

double output_noise(const InterferometerConfig &cfg, double phi) {
    return sensitivity_point(cfg, phi).noise;
}

double output_noise(const InterferometerConfig &cfg, double phi, const DetectorNoise &detector) {
    return sensitivity_point(cfg, phi, detector).noise;
}

SensitivityPoint sensitivity_point(const InterferometerConfig &cfg, double phi) {
    return evaluate_point(cfg, phi, [&](double mean) { return constant_noise(cfg, mean); });
}

SensitivityPoint sensitivity_point(const InterferometerConfig &cfg, double phi,
                                   const DetectorNoise &detector) {
    return evaluate_point(cfg, phi, detector);
}

double sensitivity(const InterferometerConfig &cfg, double phi) {
    return sensitivity_point(cfg, phi).delta_phi;
}

SensitivityOptimum min_sensitivity(const InterferometerConfig &cfg, int grid) {
    return minimize(cfg, [&](double mean) { return constant_noise(cfg, mean); }, grid);
}

SensitivityOptimum min_sensitivity(const InterferometerConfig &cfg, const DetectorNoise &detector,
                                   int grid) {
    return minimize(cfg, detector, grid);
}

double snl(double n_inside) {
    if (!(n_inside > 0)) {
        throw std::invalid_argument("shot-noise limit needs a positive photon number");
    }
    return 1 / (2 * std::sqrt(n_inside));
}

double single_mode_limit(double r1) {
    return 1 / (2 * std::sinh(r1));
}

std::vector<SweepRow> sweep_eta(const InterferometerConfig &cfg, std::span<const double> etas,
                                double n_inside) {
    double limit = snl(n_inside);
    std::vector<SweepRow> rows;
    rows.reserve(etas.size());
    for (double eta : etas) {
        if (!(eta > 0 && eta <= 1)) {
            throw std::invalid_argument("sweep transmissions must lie in (0, 1]");
        }
        InterferometerConfig c = cfg;
        c.eta = eta;
        SensitivityOptimum opt = min_sensitivity(c);
        rows.push_back({eta, opt.delta_phi_min, limit, opt.delta_phi_min / limit, opt.phi_opt});
    }
    return rows;
}

}  // namespace su11
