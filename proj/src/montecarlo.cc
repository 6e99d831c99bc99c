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

#include "su11/montecarlo.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace su11 {

void PumpModel::validate() const {
    if (!(mean_energy > 0) || !std::isfinite(mean_energy)) {
        throw std::invalid_argument("pump mean energy must be positive");
    }
    if (!(sigma_energy >= 0) || !std::isfinite(sigma_energy)) {
        throw std::invalid_argument("pump energy sigma must be non-negative");
    }
    if (!(gain_exponent >= 0) || !(monitor_r >= 0) || !(monitor_photons > 0)) {
        throw std::invalid_argument("pump coupling parameters out of range");
    }
}

double PumpModel::sigma_for_g2(double mean_energy, double g2) {
    if (!(g2 >= 1)) {
        throw std::invalid_argument("pump g2 must be at least 1");
    }
    return mean_energy * std::sqrt(g2 - 1);
}

double PumpModel::gain_scale(double energy) const {
    return std::pow(energy / mean_energy, gain_exponent);
}

double PumpModel::monitor_mean(double energy) const {
    return monitor_photons * std::exp(2 * monitor_r * (gain_scale(energy) - 1));
}

double sample_pump(const PumpModel &pm, std::mt19937_64 &rng) {
    if (pm.sigma_energy == 0) {
        return pm.mean_energy;
    }
    std::normal_distribution<double> dist(pm.mean_energy, pm.sigma_energy);
    double e = dist(rng);
    // Clamp to a tiny positive energy; irrelevant for realistic sigma.
    return e > 0 ? e : 1e-12 * pm.mean_energy;
}

double g2(std::span<const double> intensities) {
    if (intensities.empty()) {
        throw std::invalid_argument("g2 needs at least one intensity");
    }
    double sum = 0;
    for (double v : intensities) {
        if (!(v >= 0)) {
            throw std::invalid_argument("g2 intensities must be non-negative");
        }
        sum += v;
    }
    double n = static_cast<double>(intensities.size());
    double mean = sum / n;
    if (!(mean > 0)) {
        throw std::invalid_argument("g2 needs a nonzero mean intensity");
    }
    double acc = 0;
    for (double v : intensities) {
        acc += (v - mean) * (v - mean);
    }
    return 1 + acc / n / (mean * mean);
}

std::vector<PulseRecord> post_select(std::span<const PulseRecord> records, Window window) {
    if (!(window.lo < window.hi)) {
        throw std::invalid_argument("post-selection window needs lo < hi");
    }
    std::vector<PulseRecord> kept;
    for (const auto &r : records) {
        if (r.monitor_reading >= window.lo && r.monitor_reading <= window.hi) {
            kept.push_back(r);
        }
    }
    return kept;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over the combined key.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<PulseRecord> simulate_pulses(const InterferometerConfig &cfg, const PumpModel &pm,
                                         const DetectorModel &dm, double phi, std::size_t n_pulses,
                                         std::mt19937_64 &rng, bool quantum_noise) {
    std::vector<PulseRecord> records;
    records.reserve(n_pulses);
    const OutputMoments nominal = output_moments(cfg, phi);
    for (std::size_t k = 0; k < n_pulses; k++) {
        double energy = sample_pump(pm, rng);
        OutputMoments m = nominal;
        if (energy != pm.mean_energy) {
            InterferometerConfig pulse = cfg;
            double scale = pm.gain_scale(energy);
            pulse.r1 *= scale;
            pulse.r2_abs *= scale;
            m = output_moments(pulse, phi);
        }
        double var = m.background + (quantum_noise ? m.quantum_var : 0.0);
        double monitor_mean = pm.monitor_mean(energy);
        PulseRecord rec;
        rec.pump_energy = energy;
        rec.monitor_reading = sample_reading(dm, monitor_mean, monitor_mean, rng);
        rec.signal_reading = sample_reading(dm, m.mean, var, rng);
        records.push_back(rec);
    }
    return records;
}

ScanResult run_scan(const InterferometerConfig &cfg, const PumpModel &pm, const DetectorModel &dm,
                    const ScanOptions &options) {
    cfg.validate();
    pm.validate();
    dm.validate();
    if (options.n_pulses < 100) {
        throw std::invalid_argument("run_scan needs at least 100 pulses per position");
    }
    if (!(options.window.lo < options.window.hi)) {
        throw std::invalid_argument("post-selection window needs lo < hi");
    }

    ScanResult result;
    std::vector<double> energies;
    energies.reserve(options.positions_mm.size() * options.n_pulses);
    std::size_t kept_total = 0;
    std::size_t pulses_total = 0;
    for (std::size_t i = 0; i < options.positions_mm.size(); i++) {
        double position = options.positions_mm[i];
        double phi = distance_to_phase(position, options.phase.period_mm, options.phase.phi0);
        std::mt19937_64 rng(derive_stream_seed(options.seed, i));
        auto records =
            simulate_pulses(cfg, pm, dm, phi, options.n_pulses, rng, options.quantum_noise);
        for (const auto &r : records) {
            energies.push_back(r.pump_energy);
        }
        auto kept = post_select(records, options.window);
        if (kept.empty()) {
            throw EmptyWindowError("post-selection window kept no pulses at position " +
                                   std::to_string(position) + " mm");
        }
        double sum = 0;
        for (const auto &r : kept) {
            sum += r.signal_reading;
        }
        double n = static_cast<double>(kept.size());
        double mean = sum / n;
        double acc = 0;
        for (const auto &r : kept) {
            acc += (r.signal_reading - mean) * (r.signal_reading - mean);
        }
        ScanRow row;
        row.position_mm = position;
        row.phi = phi;
        row.n_pulses_kept = kept.size();
        row.n_pulses_total = records.size();
        row.mean_photons = mean;
        row.std_photons = kept.size() > 1 ? std::sqrt(acc / (n - 1)) : 0.0;
        result.scan.rows.push_back(row);
        kept_total += kept.size();
        pulses_total += records.size();
    }
    result.scan.validate();
    if (!energies.empty()) {
        result.pump_g2 = g2(energies);
    }
    result.kept_fraction =
        pulses_total == 0 ? 1.0 : static_cast<double>(kept_total) / static_cast<double>(pulses_total);
    return result;
}

SensitivityCurve estimate_sensitivity(const FringeScan &scan) {
    const auto &rows = scan.rows;
    if (rows.size() < 3) {
        throw std::invalid_argument("sensitivity estimate needs at least 3 scan positions");
    }
    auto sem2 = [](const ScanRow &r) {
        return r.n_pulses_kept > 0 ? r.std_photons * r.std_photons / static_cast<double>(r.n_pulses_kept)
                                   : 0.0;
    };
    SensitivityCurve curve;
    curve.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); i++) {
        std::size_t lo = i == 0 ? 0 : i - 1;
        std::size_t hi = i + 1 == rows.size() ? i : i + 1;
        double dphi = rows[hi].phi - rows[lo].phi;
        SensitivityPoint pt;
        pt.phi = rows[i].phi;
        pt.mean_out = rows[i].mean_photons;
        pt.noise = rows[i].std_photons;
        pt.slope = (rows[hi].mean_photons - rows[lo].mean_photons) / dphi;
        pt.one_sided = (i == 0 || i + 1 == rows.size());
        if (std::abs(pt.slope) < kSlopeFloor) {
            pt.singular = true;
            pt.delta_phi_sigma = std::numeric_limits<double>::infinity();
        } else {
            pt.delta_phi = pt.noise / std::abs(pt.slope);
            double slope_var = (sem2(rows[hi]) + sem2(rows[lo])) / (dphi * dphi);
            double n = static_cast<double>(rows[i].n_pulses_kept);
            double rel2 = (n > 1 ? 1 / (2 * (n - 1)) : 0.0) + slope_var / (pt.slope * pt.slope);
            pt.delta_phi_sigma = pt.delta_phi * std::sqrt(rel2);
        }
        curve.push_back(pt);
    }
    return curve;
}

EstimatedOptimum best_estimate(std::span<const SensitivityPoint> curve) {
    EstimatedOptimum best;
    for (const auto &pt : curve) {
        if (pt.singular || pt.one_sided) {
            continue;
        }
        if (pt.delta_phi < best.delta_phi_min) {
            best.phi_opt = pt.phi;
            best.delta_phi_min = pt.delta_phi;
            best.sigma = pt.delta_phi_sigma;
        }
    }
    return best;
}

}  // namespace su11
