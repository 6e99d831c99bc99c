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

#ifndef SU11_FOCK_STATE_H
#define SU11_FOCK_STATE_H

#include <Eigen/Dense>
#include <stdexcept>
#include <span>
#include <vector>

namespace su11 {

/// Raised when a requested state does not fit inside the Fock cutoff.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Truncated Fock-basis density operator on {|0>, ..., |d-1>}.
///
/// `leakage` is the reported probability that lies beyond the cutoff: exact
/// for squeezed vacua, and the population of the top levels after a generic
/// unitary.
struct FockState {
    Eigen::MatrixXcd rho;
    double leakage = 0;

    int cutoff() const { return static_cast<int>(rho.rows()); }
    static FockState number_state(int n, int cutoff);
    static FockState thermal(double mean_photons, int cutoff);
};

struct PhotonStats {
    double mean;
    double var;
};

inline constexpr int kDefaultCutoff = 256;
inline constexpr double kMaxLeakage = 1e-8;

/// Exact probability that a squeezed vacuum of magnitude r has n >= cutoff.
double squeezed_vacuum_tail(double r, int cutoff);

/// Unitary exp(r/2 (e^{i theta} a^dag^2 - e^{-i theta} a^2)) on the truncated space.
Eigen::MatrixXcd squeeze_unitary(double r, double theta, int cutoff);

/// Squeezed vacuum built by exponentiating the truncated squeeze generator.
/// Throws TruncationError when the exact tail beyond the cutoff exceeds kMaxLeakage,
/// and std::invalid_argument for cutoff < 16.
FockState squeezed_vacuum_fock(double r, double theta, int cutoff = kDefaultCutoff);

FockState apply_unitary(const FockState &s, const Eigen::MatrixXcd &u);
/// Phase shift exp(-i phi n).
FockState apply_rotation_fock(const FockState &s, double phi);
/// Amplitude damping with transmission eta, evaluated as the Kraus sum
/// sum_k K_k rho K_k^dag with K_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|.
FockState apply_loss_fock(const FockState &s, double eta);

/// Diagonal of rho (photon-number distribution).
Eigen::VectorXd populations(const FockState &s);
/// Photon-number distribution after the loss channel, computed from populations
/// alone (the damping channel is phase covariant).
Eigen::VectorXd lossy_populations(const Eigen::VectorXd &p, double eta);

PhotonStats photon_stats_fock(const FockState &s);
PhotonStats photon_stats(const Eigen::VectorXd &populations);

/// The interferometer chain squeeze r1 -> loss mu -> phase phi -> squeeze r2
/// (theta = pi) -> loss, evaluated in the Fock basis.
///
/// The state after the internal loss is kept as its Kraus branches
/// K_k |psi>. The second squeeze would push the state past any practical
/// cutoff once r1 + r2 exceeds about 1.5, so it is applied to the number
/// operator instead: N -> b^dag b with b = a cosh r2 - a^dag sinh r2. The
/// moments of b^dag b are exact on the truncated intermediate state, whose
/// leakage only depends on r1.
class FockChain {
   public:
    FockChain(double r1, double mu, int cutoff = kDefaultCutoff);

    /// Output photon-number mean and variance after the second squeeze
    /// r2_abs and the final loss eta_nu.
    PhotonStats output_stats(double phi, double r2_abs, double eta_nu) const;
    /// Same, for several final transmissions at once.
    std::vector<PhotonStats> output_stats(double phi, double r2_abs, std::span<const double> eta_nu) const;
    std::size_t branch_count() const { return branches_.size(); }
    double leakage() const { return leakage_; }

   private:
    std::vector<Eigen::VectorXcd> branches_;
    double leakage_;
};

/// Trace distance 0.5 ||a - b||_1.
double trace_distance(const FockState &a, const FockState &b);

}  // namespace su11

#endif
