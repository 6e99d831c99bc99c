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

#ifndef SU11_GAUSSIAN_STATE_H
#define SU11_GAUSSIAN_STATE_H

#include <Eigen/Dense>

namespace su11 {

/// Single-mode Gaussian state in the (x, p) quadrature basis.
///
/// Quadratures are x = a + a^dag and p = -i (a - a^dag), so the vacuum has
/// unit variance in both (cov = identity). The mean vector is in the same
/// units, i.e. a coherent amplitude alpha has mean (2 Re alpha, 2 Im alpha).
struct GaussianState {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();

    double det() const;
    /// Throws std::invalid_argument unless cov is symmetric, positive definite
    /// and satisfies det(cov) >= 1 - tol.
    void validate(double tol = 1e-9) const;
};

/// Squeeze magnitude r >= 0 and phase theta, normalized into [0, 2 pi).
///
/// The squeeze operator is exp(r/2 (e^{i theta} a^dag^2 - e^{-i theta} a^2)),
/// whose Heisenberg action is a -> a cosh r + e^{i theta} a^dag sinh r. The
/// anti-squeezed quadrature lies at angle theta/2 in the phase plane; for
/// theta = 0 the x variance grows as e^{2r}.
class SqueezeParams {
   public:
    SqueezeParams(double r, double theta = 0.0);
    double r() const { return r_; }
    double theta() const { return theta_; }

   private:
    double r_;
    double theta_;
};

GaussianState vacuum();

/// Symplectic matrix of the squeeze operator described on SqueezeParams.
Eigen::Matrix2d squeeze_matrix(const SqueezeParams &p);
/// Symplectic matrix of the phase shift exp(-i phi n), i.e. a -> a e^{-i phi}.
Eigen::Matrix2d rotation_matrix(double phi);

GaussianState apply_symplectic(const GaussianState &s, const Eigen::Matrix2d &m);
GaussianState apply_squeeze(const GaussianState &s, const SqueezeParams &p);
GaussianState apply_rotation(const GaussianState &s, double phi);

/// Pure-loss (attenuation) channel: cov -> eta cov + (1 - eta) I.
GaussianState apply_loss(const GaussianState &s, double eta);

double photon_mean(const GaussianState &s);
double photon_var(const GaussianState &s);

/// Uhlmann fidelity between two single-mode Gaussian states, in [0, 1].
double fidelity(const GaussianState &a, const GaussianState &b);

/// Wigner function at phase-space point (x, p).
///
/// The arguments use the hbar = 1 scaling where the vacuum quadrature
/// variance is 1/2 (x_here = x_quadrature / sqrt 2). With that choice the
/// vacuum peaks at 1/pi and the function integrates to one over (x, p).
double wigner(const GaussianState &s, double x, double p);

}  // namespace su11

#endif
