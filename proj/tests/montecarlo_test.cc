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
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"

using namespace su11;

namespace {

constexpr double kPi = std::numbers::pi;

InterferometerConfig high_gain_setup() {
    InterferometerConfig c;
    c.r1 = 2.1;
    c.r2_abs = 5.2;
    c.mu = 0.97;
    c.eta = 0.77;
    c.nu = InterferometerConfig::nu_for(2.1, 4.8);
    c.visibility = 0.97;
    c.detector_noise = 1000;
    return c;
}

PumpModel experiment_pump() {
    PumpModel pm;
    pm.sigma_energy = PumpModel::sigma_for_g2(pm.mean_energy, 1.00001);
    return pm;
}

std::vector<double> positions(double start, double stop, int n) {
    std::vector<double> out;
    for (int k = 0; k < n; k++) {
        out.push_back(start + (stop - start) * k / (n - 1));
    }
    return out;
}

}  // namespace

TEST(montecarlo, pump_model) {
    PumpModel pm;
    EXPECT_NO_THROW(pm.validate());
    EXPECT_EQ(pm.gain_scale(pm.mean_energy), 1);
    EXPECT_EQ(pm.monitor_mean(pm.mean_energy), pm.monitor_photons);
    EXPECT_NEAR(pm.gain_scale(4 * pm.mean_energy), 2, 1e-15);
    EXPECT_NEAR(PumpModel::sigma_for_g2(20, 1.00001), 20 * std::sqrt(1e-5), 1e-10);
    EXPECT_EQ(PumpModel::sigma_for_g2(20, 1), 0);
    EXPECT_THROW(PumpModel::sigma_for_g2(20, 0.9), std::invalid_argument);
    pm.mean_energy = 0;
    EXPECT_THROW(pm.validate(), std::invalid_argument);
    pm = PumpModel{};
    pm.sigma_energy = -1;
    EXPECT_THROW(pm.validate(), std::invalid_argument);
}

TEST(montecarlo, sample_pump) {
    PumpModel pm;
    std::mt19937_64 rng(1);
    EXPECT_EQ(sample_pump(pm, rng), 20);

    pm.sigma_energy = 0.5;
    std::mt19937_64 a(9), b(9);
    EXPECT_EQ(sample_pump(pm, a), sample_pump(pm, b));

    const int n = 1000000;
    double sum = 0;
    for (int k = 0; k < n; k++) {
        double e = sample_pump(pm, rng);
        ASSERT_GT(e, 0);
        sum += e;
    }
    EXPECT_NEAR(sum / n, 20, 5 * pm.sigma_energy / std::sqrt(n));
}

TEST(montecarlo, g2_examples) {
    std::vector<double> constant(1000, 3.7);
    EXPECT_EQ(g2(constant), 1);

    std::mt19937_64 rng(2);
    const int n = 1000000;
    std::vector<double> gaussian(n);
    std::normal_distribution<double> normal(20, 20 * 5e-4);
    for (double &x : gaussian) {
        x = normal(rng);
    }
    // sd(g2 - 1) = sqrt(2 / n) (sigma / mean)^2 for Gaussian intensities.
    EXPECT_NEAR(g2(gaussian) - 1, 2.5e-7, 5 * std::sqrt(2.0 / n) * 2.5e-7);

    std::vector<double> thermal(n);
    std::exponential_distribution<double> expo(0.25);
    for (double &x : thermal) {
        x = expo(rng);
    }
    // Thermal light: <I^2>/<I>^2 = 2; sd of the estimate is about sqrt(20 / n).
    EXPECT_NEAR(g2(thermal), 2, 5 * std::sqrt(20.0 / n));
}

TEST(montecarlo, g2_errors) {
    std::vector<double> empty;
    EXPECT_THROW(g2(empty), std::invalid_argument);
    std::vector<double> zeros(5, 0.0);
    EXPECT_THROW(g2(zeros), std::invalid_argument);
    std::vector<double> negative = {1, -1, 2};
    EXPECT_THROW(g2(negative), std::invalid_argument);
}

TEST(montecarlo, post_select_examples) {
    std::vector<PulseRecord> records = {{20, 5, 1}, {20, 3, 2}, {20, 9, 3}, {20, 4, 4}};
    auto all = post_select(records, {0, 10});
    ASSERT_EQ(all.size(), records.size());
    for (size_t k = 0; k < all.size(); k++) {
        EXPECT_EQ(all[k].signal_reading, records[k].signal_reading);
    }
    auto one = post_select(records, {9, 9 + 1e-9});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].signal_reading, 3);
    auto some = post_select(records, {3.5, 5});
    ASSERT_EQ(some.size(), 2u);
    EXPECT_EQ(some[0].signal_reading, 1);
    EXPECT_EQ(some[1].signal_reading, 4);
}

TEST(montecarlo, post_selection_narrows_signal) {
    InterferometerConfig c = high_gain_setup();
    PumpModel pm;
    pm.sigma_energy = PumpModel::sigma_for_g2(pm.mean_energy, 1.0001);
    DetectorModel dm;
    auto spread = [](const std::vector<PulseRecord> &r) {
        double mean = 0, acc = 0;
        for (const auto &x : r) {
            mean += x.signal_reading;
        }
        mean /= static_cast<double>(r.size());
        for (const auto &x : r) {
            acc += (x.signal_reading - mean) * (x.signal_reading - mean);
        }
        return std::sqrt(acc / static_cast<double>(r.size() - 1));
    };
    const double m = pm.monitor_photons;
    const Window window = {m - 1500, m + 1500};

    // Pump-dominated readings: the window removes most of the spread.
    std::mt19937_64 rng(3);
    auto records = simulate_pulses(c, pm, dm, 0.4, 20000, rng, false);
    auto kept = post_select(records, window);
    ASSERT_GT(kept.size(), 1000u);
    EXPECT_LT(spread(kept), 0.5 * spread(records));

    // With thermal-like quantum noise the gain is small but still present.
    std::mt19937_64 rng2(3);
    records = simulate_pulses(c, pm, dm, 0.4, 200000, rng2);
    EXPECT_LT(spread(post_select(records, window)), spread(records));

    // No pump fluctuations: the window only discards monitor noise.
    pm.sigma_energy = 0;
    std::mt19937_64 rng3(3);
    records = simulate_pulses(c, pm, dm, 0.4, 20000, rng3, false);
    kept = post_select(records, window);
    EXPECT_NEAR(spread(kept), spread(records), 0.05 * spread(records));
}

TEST(montecarlo, degenerate_noiseless_scan) {
    InterferometerConfig c = high_gain_setup();
    c.visibility = 1;
    DetectorModel dm;
    dm.noise_linear = dm.noise_dark = 0;
    ScanOptions opt;
    opt.positions_mm = positions(0, 26, 14);
    opt.n_pulses = 100;
    opt.quantum_noise = false;
    opt.window = {0, 1e300};
    ScanResult r = run_scan(c, PumpModel{}, dm, opt);
    ASSERT_EQ(r.scan.rows.size(), 14u);
    for (const auto &row : r.scan.rows) {
        double expected = mean_output_closed(c, row.phi);
        EXPECT_NEAR(row.mean_photons, expected, 1e-12 * expected);
        EXPECT_NEAR(row.std_photons, 0, 1e-9 * expected);
        EXPECT_EQ(row.n_pulses_kept, 100u);
    }
    EXPECT_EQ(r.pump_g2, 1);
    EXPECT_EQ(r.kept_fraction, 1);
}

TEST(montecarlo, full_window_is_no_post_selection) {
    ScanOptions opt;
    opt.positions_mm = positions(0, 20, 5);
    opt.n_pulses = 500;
    opt.seed = 4;
    ScanResult open = run_scan(high_gain_setup(), PumpModel{}, DetectorModel{}, opt);
    opt.window = {-1e300, 1e300};
    ScanResult wide = run_scan(high_gain_setup(), PumpModel{}, DetectorModel{}, opt);
    EXPECT_EQ(open.kept_fraction, 1);
    for (size_t k = 0; k < open.scan.rows.size(); k++) {
        EXPECT_EQ(open.scan.rows[k].mean_photons, wide.scan.rows[k].mean_photons);
        EXPECT_EQ(open.scan.rows[k].std_photons, wide.scan.rows[k].std_photons);
        EXPECT_EQ(open.scan.rows[k].n_pulses_kept, open.scan.rows[k].n_pulses_total);
    }
}

TEST(montecarlo, experiment_scan_matches_model) {
    InterferometerConfig c = high_gain_setup();
    ScanOptions opt;
    opt.positions_mm = positions(-26, 26, 41);
    opt.n_pulses = 4000;
    opt.seed = 5;
    opt.window = {98500, 101500};
    ScanResult r = run_scan(c, experiment_pump(), DetectorModel{}, opt);
    int outside = 0;
    for (const auto &row : r.scan.rows) {
        double expected = output_moments(c, row.phi).mean;
        double sem = row.std_photons / std::sqrt(static_cast<double>(row.n_pulses_kept));
        if (std::abs(row.mean_photons - expected) > 5 * sem) {
            outside++;
        }
    }
    EXPECT_EQ(outside, 0);
    FitResult fit = fit_fringe(r.scan, c.eta, c.mu, c.n_inside());
    EXPECT_NEAR(visibility(fit.amplitude, fit.background), 0.97, 0.01);
    EXPECT_NEAR(r.pump_g2, 1.00001, 1e-6);
}

TEST(montecarlo, scan_errors) {
    ScanOptions opt;
    opt.positions_mm = positions(0, 10, 3);
    opt.n_pulses = 99;
    EXPECT_THROW(run_scan(high_gain_setup(), PumpModel{}, DetectorModel{}, opt), std::invalid_argument);
    opt.n_pulses = 100;
    opt.window = {5, 5};
    EXPECT_THROW(run_scan(high_gain_setup(), PumpModel{}, DetectorModel{}, opt), std::invalid_argument);
    opt.window = {0, 10};
    EXPECT_THROW(run_scan(high_gain_setup(), PumpModel{}, DetectorModel{}, opt), EmptyWindowError);
}

TEST(montecarlo, determinism) {
    ScanOptions opt;
    opt.positions_mm = positions(0, 26, 9);
    opt.n_pulses = 300;
    opt.seed = 77;
    opt.window = {98500, 101500};
    ScanResult a = run_scan(high_gain_setup(), experiment_pump(), DetectorModel{}, opt);
    ScanResult b = run_scan(high_gain_setup(), experiment_pump(), DetectorModel{}, opt);
    for (size_t k = 0; k < a.scan.rows.size(); k++) {
        EXPECT_EQ(a.scan.rows[k].mean_photons, b.scan.rows[k].mean_photons);
        EXPECT_EQ(a.scan.rows[k].std_photons, b.scan.rows[k].std_photons);
        EXPECT_EQ(a.scan.rows[k].n_pulses_kept, b.scan.rows[k].n_pulses_kept);
    }
    EXPECT_EQ(a.pump_g2, b.pump_g2);

    // Each position owns its stream: dropping later positions leaves earlier rows unchanged.
    opt.positions_mm.resize(4);
    ScanResult c = run_scan(high_gain_setup(), experiment_pump(), DetectorModel{}, opt);
    for (size_t k = 0; k < 4; k++) {
        EXPECT_EQ(c.scan.rows[k].mean_photons, a.scan.rows[k].mean_photons);
    }

    opt.seed = 78;
    ScanResult d = run_scan(high_gain_setup(), experiment_pump(), DetectorModel{}, opt);
    EXPECT_NE(d.scan.rows[0].mean_photons, c.scan.rows[0].mean_photons);
}

TEST(montecarlo, derived_streams_are_distinct) {
    std::vector<std::uint64_t> seen;
    for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
        for (std::uint64_t i = 0; i < 100; i++) {
            seen.push_back(derive_stream_seed(seed, i));
        }
    }
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
    EXPECT_EQ(derive_stream_seed(5, 7), derive_stream_seed(5, 7));
}

TEST(montecarlo, estimator_converges_at_large_n) {
    InterferometerConfig c = high_gain_setup();
    DetectorModel dm;
    ScanOptions opt;
    opt.positions_mm = {3, 9, 18};
    opt.n_pulses = 100000;
    opt.seed = 6;
    ScanResult r = run_scan(c, PumpModel{}, dm, opt);
    for (const auto &row : r.scan.rows) {
        OutputMoments m = output_moments(c, row.phi);
        double noise = noise_at(dm, m.mean);
        double var = m.quantum_var + m.background + noise * noise;
        double n = static_cast<double>(row.n_pulses_kept);
        EXPECT_NEAR(row.mean_photons, m.mean, 5 * std::sqrt(var / n)) << row.phi;
        // Sample std of a Gaussian has sd sigma / sqrt(2 n).
        EXPECT_NEAR(row.std_photons, std::sqrt(var), 5 * std::sqrt(var / (2 * n))) << row.phi;
    }
}

TEST(montecarlo, estimate_sensitivity_on_noiseless_scan) {
    InterferometerConfig c = high_gain_setup();
    c.visibility = 1;
    FringeScan scan;
    const int n = 2001;
    for (int k = 0; k < n; k++) {
        ScanRow row;
        row.phi = -0.2 + 1.8 * k / (n - 1);
        row.position_mm = row.phi;
        row.n_pulses_kept = row.n_pulses_total = 4000;
        row.mean_photons = mean_output_closed(c, row.phi);
        row.std_photons = output_noise(c, row.phi);
        scan.rows.push_back(row);
    }
    SensitivityCurve curve = estimate_sensitivity(scan);
    ASSERT_EQ(curve.size(), scan.rows.size());
    EXPECT_TRUE(curve.front().one_sided);
    EXPECT_TRUE(curve.back().one_sided);
    int compared = 0;
    for (const auto &pt : curve) {
        if (pt.one_sided || std::abs(pt.phi) < 0.05 || std::abs(pt.phi - kPi / 2) < 0.05) {
            continue;
        }
        double analytic = sensitivity(c, pt.phi);
        ASSERT_LE(std::abs(pt.delta_phi - analytic), 0.01 * analytic) << pt.phi;
        compared++;
    }
    EXPECT_GT(compared, 1500);
}

TEST(montecarlo, estimate_sensitivity_flags) {
    FringeScan flat;
    for (int k = 0; k < 5; k++) {
        flat.rows.push_back({static_cast<double>(k), 0.1 * k, 100, 100, 42.0, 3.0});
    }
    for (const auto &pt : estimate_sensitivity(flat)) {
        EXPECT_TRUE(pt.singular);
        EXPECT_TRUE(std::isinf(pt.delta_phi));
    }
    EXPECT_TRUE(std::isinf(best_estimate(estimate_sensitivity(flat)).delta_phi_min));

    flat.rows.resize(2);
    EXPECT_THROW(estimate_sensitivity(flat), std::invalid_argument);
}

TEST(montecarlo, best_estimate_skips_endpoints) {
    std::vector<SensitivityPoint> curve(3);
    curve[0].delta_phi = 0.01;
    curve[0].one_sided = true;
    curve[1].delta_phi = 0.2;
    curve[1].phi = 1;
    curve[1].delta_phi_sigma = 0.02;
    curve[2].singular = true;
    EstimatedOptimum best = best_estimate(curve);
    EXPECT_EQ(best.delta_phi_min, 0.2);
    EXPECT_EQ(best.phi_opt, 1);
    EXPECT_EQ(best.sigma, 0.02);
}

TEST(montecarlo, estimated_minimum_matches_model) {
    InterferometerConfig c = high_gain_setup();
    DetectorModel dm;
    ScanOptions opt;
    opt.positions_mm = positions(0, 26.5, 33);
    opt.n_pulses = 4000;
    opt.seed = 8;
    opt.window = {98500, 101500};
    ScanResult r = run_scan(c, experiment_pump(), dm, opt);
    EstimatedOptimum est = best_estimate(estimate_sensitivity(r.scan));
    DetectorNoise noise = [&](double n) { return noise_at(dm, n); };
    SensitivityOptimum model = min_sensitivity(c, noise);
    EXPECT_LE(std::abs(est.delta_phi_min - model.delta_phi_min), 3 * est.sigma)
        << est.delta_phi_min << " vs " << model.delta_phi_min << " sigma " << est.sigma;
}
