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

#include "su11/analysis.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace su11 {

void FringeScan::validate() const {
    for (std::size_t k = 0; k < rows.size(); k++) {
        if (rows[k].n_pulses_kept > rows[k].n_pulses_total) {
            throw std::invalid_argument("scan row keeps more pulses than it recorded");
        }
        if (k > 0 && !(rows[k].position_mm > rows[k - 1].position_mm)) {
            throw std::invalid_argument("scan positions must be strictly increasing");
        }
    }
}

double period(double lambda_p, double delta_n_air) {
    if (!(lambda_p > 0) || !(delta_n_air > 0)) {
        throw std::invalid_argument("period needs positive wavelength and dispersion");
    }
    return 2 * lambda_p / delta_n_air;
}

double distance_to_phase(double d_mm, double period_mm, double phi0) {
    if (!(period_mm > 0)) {
        throw std::invalid_argument("fringe period must be positive");
    }
    return phi0 + std::numbers::pi * d_mm / period_mm;
}

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_half_pi(double phi) {
    // Into [-pi/2, pi/2): sin^2 is pi-periodic.
    double w = std::fmod(phi + kPi / 2, kPi);
    if (w < 0) {
        w += kPi;
    }
    return w - kPi / 2;
}

struct Residuals {
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    double chi2;
};

Residuals evaluate(std::span<const FringePoint> pts, const std::vector<double> &w,
                   const Eigen::Vector3d &p) {
    Residuals out;
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    out.r.resize(n);
    out.jac.resize(n, 3);
    for (Eigen::Index i = 0; i < n; i++) {
        double x = pts[i].phi - p(2);
        double s = std::sin(x);
        double model = p(0) * s * s + p(1);
        out.r(i) = (pts[i].mean - model) * w[i];
        // Jacobian of the model (not the residual).
        out.jac(i, 0) = s * s * w[i];
        out.jac(i, 1) = w[i];
        out.jac(i, 2) = -p(0) * std::sin(2 * x) * w[i];
    }
    out.chi2 = out.r.squaredNorm();
    return out;
}

}  // namespace

FitResult fit_fringe(std::span<const FringePoint> points, double eta, double mu, double n_inside,
                     int max_iterations) {
    if (points.size() < 5) {
        throw std::invalid_argument("fringe fit needs at least 5 points, got " +
                                    std::to_string(points.size()));
    }
    for (const auto &pt : points) {
        if (!std::isfinite(pt.phi) || !std::isfinite(pt.mean) || !std::isfinite(pt.sigma) ||
            pt.sigma < 0) {
            throw std::invalid_argument("fringe fit data must be finite with sigma >= 0");
        }
    }
    auto [min_it, max_it] = std::minmax_element(
        points.begin(), points.end(),
        [](const FringePoint &a, const FringePoint &b) { return a.phi < b.phi; });
    double span = max_it->phi - min_it->phi;
    if (!(span > 0)) {
        throw std::invalid_argument("fringe fit data has no spread in phase");
    }
    if (span < kPi / 2 - 1e-9) {
        throw std::invalid_argument("fringe fit data must span at least half a period");
    }

    bool weighted = std::all_of(points.begin(), points.end(),
                                [](const FringePoint &p) { return p.sigma > 0; });
    std::vector<double> w(points.size(), 1.0);
    if (weighted) {
        for (std::size_t i = 0; i < points.size(); i++) {
            w[i] = 1 / points[i].sigma;
        }
    }

    auto [lo_it, hi_it] = std::minmax_element(
        points.begin(), points.end(),
        [](const FringePoint &a, const FringePoint &b) { return a.mean < b.mean; });
    Eigen::Vector3d p(hi_it->mean - lo_it->mean, lo_it->mean, lo_it->phi);
    if (!(p(0) > 0)) {
        throw std::invalid_argument("fringe fit data is flat");
    }

    Residuals cur = evaluate(points, w, p);
    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    double scale_a = std::abs(p(0));
    for (; iter < max_iterations; iter++) {
        Eigen::Matrix3d jtj = cur.jac.transpose() * cur.jac;
        Eigen::Vector3d jtr = cur.jac.transpose() * cur.r;
        Eigen::Matrix3d damped = jtj;
        damped.diagonal() *= 1 + lambda;
        Eigen::Vector3d step = damped.ldlt().solve(jtr);
        Eigen::Vector3d trial = p + step;
        Residuals next = evaluate(points, w, trial);
        if (next.chi2 <= cur.chi2) {
            p = trial;
            cur = std::move(next);
            lambda = std::max(lambda / 10, 1e-12);
            Eigen::Vector3d scale(std::max(std::abs(p(0)), 1e-300),
                                  std::max(std::abs(p(1)), 1e-6 * scale_a), 1.0);
            if ((step.array().abs() / scale.array()).maxCoeff() <= kFitTolerance) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10;
            if (lambda > 1e16) {
                // No downhill step at machine precision: already at the minimum.
                converged = true;
                break;
            }
        }
    }
    if (!converged) {
        throw ConvergenceError("fringe fit did not converge within " +
                               std::to_string(max_iterations) + " iterations");
    }

    if (p(0) < 0) {
        p(1) += p(0);
        p(0) = -p(0);
        p(2) -= kPi / 2;
    }
    p(2) = wrap_half_pi(p(2));
    cur = evaluate(points, w, p);

    Eigen::Matrix3d cov = (cur.jac.transpose() * cur.jac).inverse();
    auto dof = static_cast<double>(points.size()) - 3;
    if (!weighted && dof > 0) {
        cov *= cur.chi2 / dof;
    }

    FitResult out;
    out.amplitude = p(0);
    out.background = p(1);
    out.phase_offset = p(2);
    out.amplitude_err = std::sqrt(std::max(cov(0, 0), 0.0));
    out.background_err = std::sqrt(std::max(cov(1, 1), 0.0));
    out.phase_offset_err = std::sqrt(std::max(cov(2, 2), 0.0));
    out.residual_norm = std::sqrt(cur.chi2);
    out.iterations = iter + 1;
    out.weighted = weighted;
    if (eta > 0 && mu > 0 && n_inside > 0) {
        out.r2_abs = 0.5 * std::log(out.amplitude / (eta * mu * n_inside));
        out.r2_abs_err = 0.5 * out.amplitude_err / out.amplitude;
    } else {
        out.r2_abs = std::numeric_limits<double>::quiet_NaN();
        out.r2_abs_err = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

FitResult fit_fringe(const FringeScan &scan, double eta, double mu, double n_inside) {
    std::vector<FringePoint> pts;
    pts.reserve(scan.rows.size());
    for (const auto &row : scan.rows) {
        double sigma = 0;
        if (row.n_pulses_kept > 1 && row.std_photons > 0) {
            sigma = row.std_photons / std::sqrt(static_cast<double>(row.n_pulses_kept));
        }
        pts.push_back({row.phi, row.mean_photons, sigma});
    }
    return fit_fringe(pts, eta, mu, n_inside);
}

GainEstimate extract_gains(double n_inside, double n2, double r2_abs) {
    if (!(n_inside > 0) || !(n2 > 0) || !(r2_abs > 0)) {
        throw std::invalid_argument("gain extraction needs positive n_inside, n2 and r2_abs");
    }
    double s2 = std::sinh(r2_abs);
    double r1 = std::asinh(std::sqrt(n_inside / n2) * s2);
    double s1 = std::sinh(r1);
    double nu = n_inside / (s1 * s1);
    return {r1, nu, nu <= 1};
}

ExactGains solve_exact_gains(double amplitude, double amplitude_err, double eta, double mu,
                             double n_inside, double n2) {
    if (!(amplitude > 0) || !(eta > 0) || !(mu > 0) || !(n_inside > 0) || !(n2 > 0)) {
        throw std::invalid_argument("exact gain solve needs positive inputs");
    }
    const double n_sum = n_inside + n2;
    const double n_prod = n_inside * n2;
    // (1 + n_inside t)(1 + n2 t) = q^2 with t = 1 / nu.
    auto solve_t = [&](double a) {
        double q = a / (4 * eta * mu * std::sqrt(n_prod));
        double excess = q * q - 1;
        if (!(excess > 0)) {
            throw std::invalid_argument("fringe amplitude too small for the given photon numbers");
        }
        return 2 * excess / (n_sum + std::sqrt(n_sum * n_sum + 4 * n_prod * excess));
    };
    double t = solve_t(amplitude);
    ExactGains out;
    out.nu = 1 / t;
    out.r1 = std::asinh(std::sqrt(n_inside * t));
    out.r2_abs = std::asinh(std::sqrt(n2 * t));
    out.r2_abs_err = 0;
    if (amplitude_err > 0) {
        double h = 1e-6 * amplitude;
        double up = std::asinh(std::sqrt(n2 * solve_t(amplitude + h)));
        double down = std::asinh(std::sqrt(n2 * solve_t(amplitude - h)));
        out.r2_abs_err = std::abs(up - down) / (2 * h) * amplitude_err;
    }
    return out;
}

double visibility(double amplitude, double background) {
    if (!(amplitude > 0) || !(background >= 0)) {
        throw std::invalid_argument("visibility needs A > 0 and B >= 0");
    }
    return amplitude / (amplitude + 2 * background);
}

}  // namespace su11
