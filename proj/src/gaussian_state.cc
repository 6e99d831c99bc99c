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

#include "su11/gaussian_state.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace su11 {

namespace {

Eigen::Matrix2d symmetrized(const Eigen::Matrix2d &m) {
    Eigen::Matrix2d out = m;
    double off = 0.5 * (m(0, 1) + m(1, 0));
    out(0, 1) = off;
    out(1, 0) = off;
    return out;
}

void require_finite(double v, const char *what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

}  // namespace

double GaussianState::det() const {
    return cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0);
}

void GaussianState::validate(double tol) const {
    if (!mean.allFinite() || !cov.allFinite()) {
        throw std::invalid_argument("Gaussian state has non-finite entries");
    }
    if (cov(0, 1) != cov(1, 0)) {
        throw std::invalid_argument("covariance matrix is not symmetric");
    }
    if (cov(0, 0) <= 0 || cov(1, 1) <= 0 || det() <= 0) {
        throw std::invalid_argument("covariance matrix is not positive definite");
    }
    if (det() < 1 - tol) {
        throw std::invalid_argument("covariance matrix violates the uncertainty bound: det=" +
                                    std::to_string(det()));
    }
}

SqueezeParams::SqueezeParams(double r, double theta) : r_(r), theta_(theta) {
    require_finite(r, "squeeze magnitude");
    require_finite(theta, "squeeze phase");
    if (r < 0) {
        throw std::invalid_argument("squeeze magnitude must be non-negative");
    }
    constexpr double two_pi = 2 * std::numbers::pi;
    theta_ = std::fmod(theta, two_pi);
    if (theta_ < 0) {
        theta_ += two_pi;
    }
    if (theta_ >= two_pi) {
        theta_ = 0;
    }
}

GaussianState vacuum() {
    return GaussianState{};
}

Eigen::Matrix2d squeeze_matrix(const SqueezeParams &p) {
    // R(theta/2) diag(e^r, e^-r) R(theta/2)^T, written out so that the
    // diagonal entries never come from a difference of large numbers.
    double half = 0.5 * p.theta();
    double c = std::cos(half);
    double s = std::sin(half);
    double grow = std::exp(p.r());
    double shrink = std::exp(-p.r());
    Eigen::Matrix2d m;
    m(0, 0) = c * c * grow + s * s * shrink;
    m(1, 1) = s * s * grow + c * c * shrink;
    m(0, 1) = c * s * (grow - shrink);
    m(1, 0) = m(0, 1);
    return m;
}

Eigen::Matrix2d rotation_matrix(double phi) {
    double c = std::cos(phi);
    double s = std::sin(phi);
    Eigen::Matrix2d m;
    m << c, s, -s, c;
    return m;
}

GaussianState apply_symplectic(const GaussianState &s, const Eigen::Matrix2d &m) {
    GaussianState out;
    out.mean = m * s.mean;
    out.cov = symmetrized(m * s.cov * m.transpose());
    return out;
}

GaussianState apply_squeeze(const GaussianState &s, const SqueezeParams &p) {
    return apply_symplectic(s, squeeze_matrix(p));
}

GaussianState apply_rotation(const GaussianState &s, double phi) {
    require_finite(phi, "rotation angle");
    return apply_symplectic(s, rotation_matrix(phi));
}

GaussianState apply_loss(const GaussianState &s, double eta) {
    if (!(eta >= 0 && eta <= 1)) {
        throw std::invalid_argument("loss transmission must lie in [0, 1]");
    }
    GaussianState out;
    out.mean = std::sqrt(eta) * s.mean;
    out.cov = eta * s.cov;
    out.cov(0, 0) += 1 - eta;
    out.cov(1, 1) += 1 - eta;
    return out;
}

double photon_mean(const GaussianState &s) {
    double n = (s.cov.trace() - 2) / 4 + s.mean.squaredNorm() / 4;
    return n < 0 ? 0.0 : n;
}

double photon_var(const GaussianState &s) {
    // Var(n) = (Tr(V^2) - 2) / 8 + m^T V m / 4 with vacuum V = I.
    const auto &v = s.cov;
    double tr_v2 = v(0, 0) * v(0, 0) + v(1, 1) * v(1, 1) + 2 * v(0, 1) * v(1, 0);
    double var = (tr_v2 - 2) / 8 + s.mean.dot(v * s.mean) / 4;
    return var < 0 ? 0.0 : var;
}

namespace {

// det(cov) - 1, with values inside the rounding error of det() treated as a
// pure state. The fidelity depends on the square root of this excess, so
// rounding noise alone would otherwise shift it by ~1e-9.
double purity_excess(const GaussianState &s) {
    double scale = s.cov.cwiseAbs().maxCoeff();
    double tol = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale * scale);
    double excess = s.det() - 1;
    return excess <= tol ? 0.0 : excess;
}

}  // namespace

double fidelity(const GaussianState &a, const GaussianState &b) {
    Eigen::Matrix2d sum = a.cov + b.cov;
    double det_sum = sum(0, 0) * sum(1, 1) - sum(0, 1) * sum(1, 0);
    double mixed = purity_excess(a) * purity_excess(b);
    Eigen::Vector2d d = a.mean - b.mean;
    double exponent = d.squaredNorm() == 0 ? 0.0 : -0.5 * d.dot(sum.inverse() * d);
    double f = 2 / (std::sqrt(det_sum + mixed) - std::sqrt(mixed)) * std::exp(exponent);
    if (f > 1) {
        f = 1;
    }
    return f < 0 ? 0.0 : f;
}

double wigner(const GaussianState &s, double x, double p) {
    Eigen::Matrix2d sigma = 0.5 * s.cov;
    Eigen::Vector2d u(x - s.mean(0) / std::numbers::sqrt2, p - s.mean(1) / std::numbers::sqrt2);
    double det = sigma(0, 0) * sigma(1, 1) - sigma(0, 1) * sigma(1, 0);
    double q = u.dot(sigma.inverse() * u);
    return std::exp(-0.5 * q) / (2 * std::numbers::pi * std::sqrt(det));
}

}  // namespace su11
