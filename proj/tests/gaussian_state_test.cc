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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "su11/fock_state.h"

using namespace su11;

namespace {

constexpr double kPi = std::numbers::pi;

GaussianState squeezed(double r, double theta = 0) {
    return apply_squeeze(vacuum(), SqueezeParams(r, theta));
}

// Random pure or mixed state reachable by squeezes, rotations and loss.
GaussianState random_state(std::mt19937_64 &rng, bool pure) {
    std::uniform_real_distribution<double> r(0, 1);
    std::uniform_real_distribution<double> angle(0, 2 * kPi);
    std::uniform_real_distribution<double> t(0.05, 1);
    GaussianState s = squeezed(r(rng), angle(rng));
    s = apply_rotation(s, angle(rng));
    if (!pure) {
        s = apply_loss(s, t(rng));
    }
    return apply_squeeze(s, SqueezeParams(r(rng), angle(rng)));
}

double max_abs_diff(const GaussianState &a, const GaussianState &b) {
    return std::max((a.cov - b.cov).cwiseAbs().maxCoeff(), (a.mean - b.mean).cwiseAbs().maxCoeff());
}

}  // namespace

TEST(gaussian_state, vacuum_definition) {
    GaussianState v = vacuum();
    EXPECT_EQ(v.mean, Eigen::Vector2d::Zero());
    EXPECT_EQ(v.cov, Eigen::Matrix2d::Identity());
    EXPECT_EQ(photon_mean(v), 0);
    EXPECT_EQ(photon_var(v), 0);
    v.validate();
}

TEST(gaussian_state, squeeze_params_normalize_phase) {
    EXPECT_NEAR(SqueezeParams(1, -kPi / 2).theta(), 3 * kPi / 2, 1e-15);
    EXPECT_NEAR(SqueezeParams(1, 5 * kPi).theta(), kPi, 1e-12);
    EXPECT_THROW(SqueezeParams{-0.1}, std::invalid_argument);
    EXPECT_THROW(SqueezeParams{NAN}, std::invalid_argument);
    EXPECT_THROW(SqueezeParams{INFINITY}, std::invalid_argument);
    EXPECT_THROW((SqueezeParams{1, INFINITY}), std::invalid_argument);
}

TEST(gaussian_state, squeeze_zero_is_identity) {
    std::mt19937_64 rng(7);
    GaussianState s = random_state(rng, false);
    EXPECT_LE(max_abs_diff(apply_squeeze(s, SqueezeParams(0, 1.3)), s), 1e-15);
}

TEST(gaussian_state, squeeze_theta_zero_stretches_x) {
    GaussianState s = squeezed(1);
    EXPECT_NEAR(s.cov(0, 0), std::exp(2.0), 1e-13);
    EXPECT_NEAR(s.cov(1, 1), std::exp(-2.0), 1e-15);
    EXPECT_EQ(s.cov(0, 1), 0);
    EXPECT_NEAR(s.det(), 1, 1e-14);

    PhotonStats oracle = photon_stats_fock(squeezed_vacuum_fock(1, 0));
    EXPECT_NEAR(photon_mean(s), oracle.mean, 1e-6);
    EXPECT_NEAR(photon_var(s), oracle.var, 1e-6);
}

TEST(gaussian_state, squeeze_inverse_pair) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(0, 2);
    std::uniform_real_distribution<double> angle(0, 2 * kPi);
    for (int trial = 0; trial < 200; trial++) {
        GaussianState s = random_state(rng, trial % 2 == 0);
        s.mean = Eigen::Vector2d(0.3, -0.7);
        SqueezeParams p(r(rng), angle(rng));
        GaussianState back = apply_squeeze(apply_squeeze(s, p), SqueezeParams(p.r(), p.theta() + kPi));
        // Rounding is relative to the largest intermediate covariance entry.
        double scale = apply_squeeze(s, p).cov.cwiseAbs().maxCoeff();
        ASSERT_LE(max_abs_diff(back, s), 1e-14 * std::max(1.0, scale * scale)) << "trial " << trial;
    }
}

TEST(gaussian_state, rotation) {
    std::mt19937_64 rng(3);
    GaussianState s = random_state(rng, false);
    EXPECT_LE(max_abs_diff(apply_rotation(s, 0), s), 0);

    GaussianState turned = apply_rotation(squeezed(1), kPi / 2);
    EXPECT_NEAR(turned.cov(0, 0), std::exp(-2.0), 1e-15);
    EXPECT_NEAR(turned.cov(1, 1), std::exp(2.0), 1e-13);
    EXPECT_NEAR(turned.cov(0, 1), 0, 1e-15);

    std::uniform_real_distribution<double> angle(-10, 10);
    for (int k = 0; k < 100; k++) {
        double phi = angle(rng);
        ASSERT_NEAR(photon_mean(apply_rotation(s, phi)), photon_mean(s), 1e-12);
    }
    EXPECT_THROW(apply_rotation(s, NAN), std::invalid_argument);
}

TEST(gaussian_state, loss_channel) {
    std::mt19937_64 rng(5);
    GaussianState s = random_state(rng, true);
    EXPECT_EQ(max_abs_diff(apply_loss(s, 1), s), 0);
    GaussianState gone = apply_loss(s, 0);
    EXPECT_EQ(gone.cov, Eigen::Matrix2d::Identity());
    EXPECT_EQ(gone.mean, Eigen::Vector2d::Zero());
    EXPECT_THROW(apply_loss(s, -0.01), std::invalid_argument);
    EXPECT_THROW(apply_loss(s, 1.01), std::invalid_argument);
    EXPECT_THROW(apply_loss(s, NAN), std::invalid_argument);

    FockState oracle = apply_loss_fock(squeezed_vacuum_fock(1, 0), 0.5);
    double expected = 0.5 * std::sinh(1.0) * std::sinh(1.0);
    EXPECT_NEAR(photon_mean(apply_loss(squeezed(1), 0.5)), expected, 1e-12);
    EXPECT_NEAR(photon_stats_fock(oracle).mean, expected, 1e-8);
}

TEST(gaussian_state, photon_mean_of_squeezed_vacuum) {
    GaussianState s = squeezed(1.5);
    PhotonStats oracle = photon_stats_fock(squeezed_vacuum_fock(1.5, 0));
    EXPECT_NEAR(photon_mean(s), oracle.mean, 1e-6);
    EXPECT_NEAR(photon_mean(s), 4.534, 1e-3);
    // Filtered-mode transmission 0.375 gives the 1.7 photons inside the interferometer.
    EXPECT_NEAR(photon_mean(apply_loss(s, 0.375)), 1.70, 0.005);
}

TEST(gaussian_state, photon_var_matches_oracle) {
    PhotonStats oracle = photon_stats_fock(squeezed_vacuum_fock(1, 0));
    EXPECT_NEAR(photon_var(squeezed(1)), oracle.var, 1e-6);
    EXPECT_NEAR(photon_var(squeezed(1)), 6.577, 1e-3);

    GaussianState thermal;
    thermal.cov = 3 * Eigen::Matrix2d::Identity();
    EXPECT_NEAR(photon_mean(thermal), 1, 1e-15);
    PhotonStats thermal_oracle = photon_stats_fock(FockState::thermal(1, 256));
    EXPECT_NEAR(photon_var(thermal), thermal_oracle.var, 1e-6);
}

TEST(gaussian_state, coherent_moments) {
    // alpha = 1.5 + 0.5i: mean n = |alpha|^2 = Var n.
    GaussianState c;
    c.mean = Eigen::Vector2d(3.0, 1.0);
    EXPECT_NEAR(photon_mean(c), 2.5, 1e-15);
    EXPECT_NEAR(photon_var(c), 2.5, 1e-15);
}

TEST(gaussian_state, phase_conventions_match_fock) {
    // Squeeze, rotate, squeeze at a generic angle: only consistent
    // conventions reproduce the oracle's photon statistics.
    const int cutoff = 96;
    const double r_a = 0.5, r_b = 0.4, phi = 0.7, theta = 1.1;
    Eigen::VectorXcd psi = squeeze_unitary(r_a, 0, cutoff).col(0);
    for (int n = 0; n < cutoff; n++) {
        psi(n) *= std::polar(1.0, -phi * n);
    }
    psi = squeeze_unitary(r_b, theta, cutoff) * psi;
    PhotonStats oracle = photon_stats(psi.cwiseAbs2());

    GaussianState s = apply_squeeze(apply_rotation(squeezed(r_a), phi), SqueezeParams(r_b, theta));
    EXPECT_NEAR(photon_mean(s), oracle.mean, 1e-9);
    EXPECT_NEAR(photon_var(s), oracle.var, 1e-9);
}

TEST(gaussian_state, fidelity_basics) {
    std::mt19937_64 rng(13);
    GaussianState a = random_state(rng, false);
    GaussianState b = random_state(rng, true);
    EXPECT_NEAR(fidelity(a, a), 1, 1e-12);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-14);
    EXPECT_GE(fidelity(a, b), 0);
    EXPECT_LT(fidelity(a, b), 1);

    // Overlap |<0|S(1)|0>|^2 from the oracle.
    double overlap = squeezed_vacuum_fock(1, 0).rho(0, 0).real();
    EXPECT_NEAR(fidelity(vacuum(), squeezed(1)), overlap, 1e-6);
    EXPECT_NEAR(overlap, 1 / std::cosh(1.0), 1e-9);
}

TEST(gaussian_state, fidelity_of_displaced_states_matches_overlap) {
    // |<alpha|beta>|^2 = exp(-|alpha - beta|^2).
    GaussianState a, b;
    a.mean = Eigen::Vector2d(2 * 0.3, 2 * 0.1);
    b.mean = Eigen::Vector2d(2 * -0.2, 2 * 0.4);
    EXPECT_NEAR(fidelity(a, b), std::exp(-(0.25 + 0.09)), 1e-14);
}

TEST(gaussian_state, wigner) {
    EXPECT_NEAR(wigner(vacuum(), 0, 0), 1 / kPi, 1e-15);
    EXPECT_NEAR(wigner(squeezed(1), 0, 0), 1 / kPi, 1e-13);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3; trial++) {
        GaussianState s = random_state(rng, trial == 0);
        const double extent = 25, h = 0.025;
        double total = 0;
        for (double x = -extent; x <= extent; x += h) {
            for (double p = -extent; p <= extent; p += h) {
                total += wigner(s, x, p);
            }
        }
        EXPECT_NEAR(total * h * h, 1, 1e-3) << "trial " << trial;
    }
}

TEST(gaussian_state, symplectic_purity_property) {
    // det(cov) is computed from entries of size up to e^{2 sum r}, so the
    // total squeezing is bounded to keep cancellation below the tolerance.
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> r(0, 1);
    std::uniform_real_distribution<double> angle(0, 2 * kPi);
    for (int trial = 0; trial < 500; trial++) {
        GaussianState s = vacuum();
        for (int op = 0; op < 6; op++) {
            s = (op % 2 == 0) ? apply_squeeze(s, SqueezeParams(r(rng), angle(rng)))
                              : apply_rotation(s, angle(rng));
            ASSERT_EQ(s.cov(0, 1), s.cov(1, 0));
        }
        ASSERT_NEAR(s.det(), 1, 1e-9) << "trial " << trial;
        s.validate();
    }
}

TEST(gaussian_state, loss_properties) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> t(0, 1);
    for (int trial = 0; trial < 500; trial++) {
        GaussianState s = random_state(rng, trial % 3 == 0);
        double a = t(rng), b = t(rng);
        ASSERT_LE(max_abs_diff(apply_loss(apply_loss(s, a), b), apply_loss(s, a * b)), 1e-12);
        ASSERT_NEAR(photon_mean(apply_loss(s, a)), a * photon_mean(s), 1e-12);
        apply_loss(s, a).validate();
    }
}

TEST(gaussian_state, fidelity_invariance_property) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> r(0, 1.5);
    std::uniform_real_distribution<double> angle(0, 2 * kPi);
    for (int trial = 0; trial < 500; trial++) {
        GaussianState a = random_state(rng, trial % 2 == 0);
        GaussianState b = random_state(rng, trial % 3 == 0);
        double before = fidelity(a, b);
        Eigen::Matrix2d op = trial % 2 == 0 ? squeeze_matrix(SqueezeParams(r(rng), angle(rng)))
                                            : rotation_matrix(angle(rng));
        double after = fidelity(apply_symplectic(a, op), apply_symplectic(b, op));
        ASSERT_NEAR(after, before, 1e-9) << "trial " << trial;
        ASSERT_EQ(fidelity(apply_loss(a, 0), apply_loss(b, 0)), 1.0);
    }
}

TEST(gaussian_state, fidelity_invariance_under_strong_axis_squeeze) {
    for (double r1 : {0.5, 1.5, 2.6}) {
        for (double dphi : {0.01, 0.5, 2.0}) {
            for (double eta : {1.0, 0.5}) {
                GaussianState a = apply_loss(apply_rotation(squeezed(r1), 0.3), eta);
                GaussianState b = apply_loss(apply_rotation(squeezed(r1), 0.3 + dphi), eta);
                double before = fidelity(a, b);
                for (double r2 = 0; r2 <= 6; r2 += 0.5) {
                    SqueezeParams p(r2, kPi);
                    ASSERT_NEAR(fidelity(apply_squeeze(a, p), apply_squeeze(b, p)), before, 1e-9)
                        << "r1=" << r1 << " dphi=" << dphi << " r2=" << r2;
                }
            }
        }
    }
}

TEST(gaussian_state, oracle_equivalence_grid) {
    for (double r : {0.25, 0.5, 1.0, 1.5}) {
        Eigen::VectorXd p = populations(squeezed_vacuum_fock(r, 0));
        for (double eta : {0.25, 0.5, 0.77, 1.0}) {
            PhotonStats oracle = photon_stats(lossy_populations(p, eta));
            GaussianState s = apply_loss(squeezed(r), eta);
            EXPECT_NEAR(photon_mean(s), oracle.mean, 1e-6) << "r=" << r << " eta=" << eta;
            EXPECT_NEAR(photon_var(s), oracle.var, 1e-6) << "r=" << r << " eta=" << eta;
        }
    }
}

TEST(gaussian_state, validate_rejects_unphysical) {
    GaussianState s;
    s.cov = 0.5 * Eigen::Matrix2d::Identity();
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.cov << 2, 0.1, 0.2, 2;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.cov << -1, 0, 0, -1;
    EXPECT_THROW(s.validate(), std::invalid_argument);
}
