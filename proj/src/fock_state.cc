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

#include "su11/fock_state.h"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

namespace su11 {

namespace {

void check_cutoff(int cutoff) {
    if (cutoff < 16) {
        throw std::invalid_argument("Fock cutoff must be at least 16, got " + std::to_string(cutoff));
    }
}

// Table of log C(n, k) for 0 <= k <= n < d, indexed [n * d + k].
std::vector<double> log_binomials(int d) {
    std::vector<double> log_fact(d);
    for (int n = 1; n < d; n++) {
        log_fact[n] = log_fact[n - 1] + std::log(static_cast<double>(n));
    }
    std::vector<double> table(static_cast<size_t>(d) * d, 0.0);
    for (int n = 0; n < d; n++) {
        for (int k = 0; k <= n; k++) {
            table[static_cast<size_t>(n) * d + k] = log_fact[n] - log_fact[k] - log_fact[n - k];
        }
    }
    return table;
}

double edge_population(const Eigen::MatrixXcd &rho) {
    int d = static_cast<int>(rho.rows());
    int band = std::max(1, d / 16);
    double total = 0;
    for (int n = d - band; n < d; n++) {
        total += rho(n, n).real();
    }
    return total;
}

}  // namespace

FockState FockState::number_state(int n, int cutoff) {
    if (n < 0 || n >= cutoff) {
        throw std::invalid_argument("number state outside the cutoff");
    }
    FockState s;
    s.rho = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    s.rho(n, n) = 1;
    return s;
}

FockState FockState::thermal(double mean_photons, int cutoff) {
    if (mean_photons < 0) {
        throw std::invalid_argument("thermal mean photon number must be non-negative");
    }
    FockState s;
    s.rho = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    double ratio = mean_photons / (1 + mean_photons);
    double p = 1 / (1 + mean_photons);
    double total = 0;
    for (int n = 0; n < cutoff; n++) {
        s.rho(n, n) = p;
        total += p;
        p *= ratio;
    }
    s.leakage = 1 - total;
    return s;
}

double squeezed_vacuum_tail(double r, int cutoff) {
    // P(2k) = (2k)! / (2^k k!)^2 tanh^{2k} r / cosh r; summed in-range, the
    // complement is the tail. Long double keeps 1 - sum meaningful near 1e-12.
    long double t2 = std::tanh(static_cast<long double>(r));
    t2 *= t2;
    long double p = 1 / std::cosh(static_cast<long double>(r));
    long double inside = 0;
    for (int k = 0; 2 * k < cutoff; k++) {
        inside += p;
        p *= t2 * (2 * k + 1) / (2.0L * (k + 1));
    }
    long double tail = 1 - inside;
    return tail < 0 ? 0.0 : static_cast<double>(tail);
}

Eigen::MatrixXcd squeeze_unitary(double r, double theta, int cutoff) {
    check_cutoff(cutoff);
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    std::complex<double> phase = std::polar(0.5 * r, theta);
    for (int n = 0; n + 2 < cutoff; n++) {
        // <n+2| a^dag^2 |n> = sqrt((n+1)(n+2))
        double amp = std::sqrt((n + 1.0) * (n + 2.0));
        gen(n + 2, n) += phase * amp;
        gen(n, n + 2) -= std::conj(phase) * amp;
    }
    return gen.exp();
}

namespace {

Eigen::VectorXcd squeezed_vacuum_vector(double r, double theta, int cutoff, double *leakage) {
    check_cutoff(cutoff);
    if (!std::isfinite(r) || r < 0) {
        throw std::invalid_argument("squeeze magnitude must be finite and non-negative");
    }
    double tail = squeezed_vacuum_tail(r, cutoff);
    if (tail > kMaxLeakage) {
        throw TruncationError("squeezed vacuum r=" + std::to_string(r) + " leaks " +
                              std::to_string(tail) + " beyond cutoff " + std::to_string(cutoff));
    }
    *leakage = tail;
    return squeeze_unitary(r, theta, cutoff).col(0);
}

}  // namespace

FockState squeezed_vacuum_fock(double r, double theta, int cutoff) {
    FockState s;
    Eigen::VectorXcd psi = squeezed_vacuum_vector(r, theta, cutoff, &s.leakage);
    s.rho = psi * psi.adjoint();
    return s;
}

FockState apply_unitary(const FockState &s, const Eigen::MatrixXcd &u) {
    FockState out;
    out.rho = u * s.rho * u.adjoint();
    out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
    out.leakage = std::max(s.leakage, edge_population(out.rho));
    return out;
}

FockState apply_rotation_fock(const FockState &s, double phi) {
    FockState out = s;
    int d = s.cutoff();
    for (int m = 0; m < d; m++) {
        for (int n = 0; n < d; n++) {
            out.rho(m, n) *= std::polar(1.0, -phi * (m - n));
        }
    }
    return out;
}

FockState apply_loss_fock(const FockState &s, double eta) {
    if (!(eta >= 0 && eta <= 1)) {
        throw std::invalid_argument("loss transmission must lie in [0, 1]");
    }
    int d = s.cutoff();
    FockState out;
    out.leakage = s.leakage;
    out.rho = Eigen::MatrixXcd::Zero(d, d);
    if (eta == 1) {
        out.rho = s.rho;
        return out;
    }
    if (eta == 0) {
        out.rho(0, 0) = s.rho.trace();
        return out;
    }
    double log_eta = std::log(eta);
    double log_loss = std::log1p(-eta);
    auto lb = log_binomials(d);
    auto log_binomial = [&](int n, int k) { return lb[static_cast<size_t>(n) * d + k]; };
    // (K_k rho K_k^dag)_{mn} = sqrt(C(m+k,k) C(n+k,k) eta^{m+n} (1-eta)^{2k}) rho_{m+k,n+k}
    for (int m = 0; m < d; m++) {
        for (int n = 0; n < d; n++) {
            std::complex<double> acc = 0;
            for (int k = 0; m + k < d && n + k < d; k++) {
                double lw = 0.5 * (log_binomial(m + k, k) + log_binomial(n + k, k)) +
                            0.5 * (m + n) * log_eta + k * log_loss;
                acc += std::exp(lw) * s.rho(m + k, n + k);
            }
            out.rho(m, n) = acc;
        }
    }
    return out;
}

Eigen::VectorXd populations(const FockState &s) {
    return s.rho.diagonal().real();
}

Eigen::VectorXd lossy_populations(const Eigen::VectorXd &p, double eta) {
    if (!(eta >= 0 && eta <= 1)) {
        throw std::invalid_argument("loss transmission must lie in [0, 1]");
    }
    int d = static_cast<int>(p.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
    if (eta == 1) {
        return p;
    }
    if (eta == 0) {
        out(0) = p.sum();
        return out;
    }
    double log_eta = std::log(eta);
    double log_loss = std::log1p(-eta);
    auto lb = log_binomials(d);
    auto log_binomial = [&](int n, int k) { return lb[static_cast<size_t>(n) * d + k]; };
    for (int m = 0; m < d; m++) {
        double acc = 0;
        for (int k = 0; m + k < d; k++) {
            acc += std::exp(log_binomial(m + k, k) + m * log_eta + k * log_loss) * p(m + k);
        }
        out(m) = acc;
    }
    return out;
}

PhotonStats photon_stats(const Eigen::VectorXd &p) {
    double total = p.sum();
    double mean = 0;
    for (int n = 0; n < p.size(); n++) {
        mean += n * p(n);
    }
    mean /= total;
    double var = 0;
    for (int n = 0; n < p.size(); n++) {
        var += (n - mean) * (n - mean) * p(n);
    }
    var /= total;
    return {mean < 0 ? 0.0 : mean, var < 0 ? 0.0 : var};
}

PhotonStats photon_stats_fock(const FockState &s) {
    return photon_stats(populations(s));
}

FockChain::FockChain(double r1, double mu, int cutoff) {
    if (!(mu >= 0 && mu <= 1)) {
        throw std::invalid_argument("loss transmission must lie in [0, 1]");
    }
    Eigen::VectorXcd psi = squeezed_vacuum_vector(r1, 0.0, cutoff, &leakage_);
    if (mu == 1) {
        branches_.push_back(psi);
        return;
    }
    auto lb = log_binomials(cutoff);
    double remaining = psi.squaredNorm();
    for (int k = 0; k < cutoff && remaining > 1e-18; k++) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff);
        for (int m = 0; m + k < cutoff; m++) {
            double lw = lb[static_cast<size_t>(m + k) * cutoff + k] +
                        (m == 0 ? 0.0 : m * std::log(mu)) + (k == 0 ? 0.0 : k * std::log1p(-mu));
            v(m) = std::sqrt(std::exp(lw)) * psi(m + k);
        }
        remaining -= v.squaredNorm();
        branches_.push_back(std::move(v));
    }
}

PhotonStats FockChain::output_stats(double phi, double r2_abs, double eta_nu) const {
    return output_stats(phi, r2_abs, std::span<const double>(&eta_nu, 1)).front();
}

std::vector<PhotonStats> FockChain::output_stats(double phi, double r2_abs,
                                                 std::span<const double> eta_nu) const {
    for (double t : eta_nu) {
        if (!(t >= 0 && t <= 1)) {
            throw std::invalid_argument("loss transmission must lie in [0, 1]");
        }
    }
    if (!(r2_abs >= 0) || !std::isfinite(r2_abs)) {
        throw std::invalid_argument("second gain must be finite and non-negative");
    }
    const double ch = std::cosh(r2_abs), sh = std::sinh(r2_abs);
    const int d = static_cast<int>(branches_.front().size());
    const int padded = d + 3;
    std::vector<double> root(padded + 1);
    for (int n = 0; n <= padded; n++) {
        root[n] = std::sqrt(static_cast<double>(n));
    }
    Eigen::VectorXcd phase(d);
    for (int n = 0; n < d; n++) {
        phase(n) = std::polar(1.0, -phi * n);
    }
    Eigen::VectorXcd v(padded), w(padded), x(padded);
    double norm = 0, first = 0, second = 0;
    for (const auto &branch : branches_) {
        v.setZero();
        v.head(d) = branch.cwiseProduct(phase);
        // w = b v, x = b^dag w, with b = c a - s a^dag.
        for (int n = 0; n < padded; n++) {
            std::complex<double> up = n + 1 < padded ? v(n + 1) * root[n + 1] : 0.0;
            std::complex<double> down = n > 0 ? v(n - 1) * root[n] : 0.0;
            w(n) = ch * up - sh * down;
        }
        for (int n = 0; n < padded; n++) {
            std::complex<double> down = n > 0 ? w(n - 1) * root[n] : 0.0;
            std::complex<double> up = n + 1 < padded ? w(n + 1) * root[n + 1] : 0.0;
            x(n) = ch * down - sh * up;
        }
        norm += v.squaredNorm();
        first += w.squaredNorm();
        second += x.squaredNorm();
    }
    double mean = first / norm;
    double var = second / norm - mean * mean;
    std::vector<PhotonStats> out;
    out.reserve(eta_nu.size());
    for (double t : eta_nu) {
        out.push_back({t * mean, t * t * var + t * (1 - t) * mean});
    }
    return out;
}

double trace_distance(const FockState &a, const FockState &b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.rho - b.rho, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace su11
