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

#include "su11/cli.h"

#include <CLI11.hpp>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <sstream>

#include "su11/interferometer.h"
#include "su11/montecarlo.h"

namespace su11 {

namespace {

std::string num(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string meta_block(const std::string &command, const RunConfig &config,
                       const std::vector<std::pair<std::string, std::string>> &extra = {}) {
    std::string out = "# meta: command=" + command + "\n";
    out += "# meta: seed=" + std::to_string(config.seed) + "\n";
    out += "# meta: config_hash=" + config_hash(config) + "\n";
    for (const auto &[k, v] : extra) {
        out += "# meta: " + k + "=" + v + "\n";
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

double parse_cell(const std::string &cell, const std::string &column, int line_no) {
    const char *begin = cell.c_str();
    char *end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (cell.empty() || end == begin || *end != '\0' || errno == ERANGE) {
        throw DataError("line " + std::to_string(line_no) + ": column '" + column +
                        "' is not a number: '" + cell + "'");
    }
    return v;
}

}  // namespace

std::string fringe_csv(const RunConfig &config) {
    InterferometerConfig cfg = config.interferometer();
    cfg.validate();
    std::string out = meta_block("fringe", config, {{"grid", std::to_string(config.fringe_grid)}});
    out += std::string(kFringeHeader) + "\n";
    const int n = config.fringe_grid;
    for (int k = 0; k < n; k++) {
        double phi = -std::numbers::pi / 2 + std::numbers::pi * k / n;
        SensitivityPoint pt = sensitivity_point(cfg, phi);
        out += num(phi) + "," + num(pt.mean_out) + "," + num(pt.noise) + "," + num(pt.delta_phi) +
               "," + (pt.singular ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_csv(const RunConfig &config) {
    InterferometerConfig cfg = config.interferometer();
    cfg.validate();
    auto etas = config.eta_grid();
    auto rows = sweep_eta(cfg, etas, config.resolved_n_inside());
    std::string out = meta_block("sweep", config);
    out += std::string(kSweepHeader) + "\n";
    for (const auto &r : rows) {
        out += num(r.eta) + "," + num(r.delta_phi_min) + "," + num(r.snl) + "," + num(r.ratio) + "," +
               num(r.phi_opt) + "\n";
    }
    return out;
}

MonteCarloOutput montecarlo_output(const RunConfig &config) {
    InterferometerConfig cfg = config.interferometer();
    cfg.validate();
    PumpModel pm = config.pump();
    const DetectorModel &dm = config.detector;
    ScanOptions options = config.scan_options();
    ScanResult result = run_scan(cfg, pm, dm, options);

    MonteCarloOutput out;
    out.scan_csv = meta_block("montecarlo", config,
                              {{"n_pulses", std::to_string(options.n_pulses)},
                               {"window_lo", num(options.window.lo)},
                               {"window_hi", num(options.window.hi)}});
    out.scan_csv += std::string(kScanHeader) + "\n";
    for (const auto &row : result.scan.rows) {
        out.scan_csv += num(row.position_mm) + "," + num(row.phi) + "," +
                        std::to_string(row.n_pulses_kept) + "," + std::to_string(row.n_pulses_total) +
                        "," + num(row.mean_photons) + "," + num(row.std_photons) + "\n";
    }

    auto curve = estimate_sensitivity(result.scan);
    EstimatedOptimum est = best_estimate(curve);
    SensitivityOptimum model =
        min_sensitivity(cfg, [&dm](double mean) { return noise_at(dm, mean); });

    nlohmann::ordered_json j;
    j["seed"] = config.seed;
    j["config_hash"] = config_hash(config);
    j["g2"] = result.pump_g2;
    j["kept_fraction"] = result.kept_fraction;
    j["delta_phi_min_rad"] = est.delta_phi_min;
    j["delta_phi_min_sigma_rad"] = est.sigma;
    j["phi_opt_rad"] = est.phi_opt;
    j["analytic_delta_phi_min_rad"] = model.delta_phi_min;
    j["analytic_phi_opt_rad"] = model.phi_opt;
    j["snl_rad"] = snl(config.resolved_n_inside());
    out.summary_json = j.dump(2) + "\n";
    return out;
}

std::vector<FringePoint> parse_fringe_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    std::map<std::string, std::size_t> column;
    std::vector<FringePoint> points;
    bool weighted = false;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto cells = split_csv_line(line);
        if (header.empty()) {
            header = cells;
            for (std::size_t i = 0; i < header.size(); i++) {
                column[header[i]] = i;
            }
            for (const char *required : {"phi_rad", "mean_photons"}) {
                if (!column.count(required)) {
                    throw DataError("line " + std::to_string(line_no) + ": missing column '" +
                                    required + "'");
                }
            }
            weighted = column.count("std_photons") && column.count("n_pulses_kept");
            continue;
        }
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
        }
        FringePoint pt{};
        pt.phi = parse_cell(cells[column["phi_rad"]], "phi_rad", line_no);
        pt.mean = parse_cell(cells[column["mean_photons"]], "mean_photons", line_no);
        if (weighted) {
            double sd = parse_cell(cells[column["std_photons"]], "std_photons", line_no);
            double kept = parse_cell(cells[column["n_pulses_kept"]], "n_pulses_kept", line_no);
            pt.sigma = (kept > 0 && sd > 0) ? sd / std::sqrt(kept) : 0.0;
        }
        points.push_back(pt);
    }
    if (header.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": missing header row");
    }
    return points;
}

std::string fit_json(const std::string &csv_text, const FitInputs &inputs) {
    auto points = parse_fringe_csv(csv_text);
    FitResult fit;
    try {
        fit = fit_fringe(points, inputs.eta, inputs.mu, inputs.n_inside);
    } catch (const std::invalid_argument &e) {
        throw DataError(e.what());
    }
    nlohmann::ordered_json j;
    j["amplitude"] = fit.amplitude;
    j["amplitude_err"] = fit.amplitude_err;
    j["background"] = fit.background;
    j["background_err"] = fit.background_err;
    j["phase_offset_rad"] = fit.phase_offset;
    j["phase_offset_err_rad"] = fit.phase_offset_err;
    j["r2_abs"] = fit.r2_abs;
    j["r2_abs_err"] = fit.r2_abs_err;
    j["visibility"] = visibility(fit.amplitude, std::max(fit.background, 0.0));
    j["residual_norm"] = fit.residual_norm;
    j["iterations"] = fit.iterations;
    j["weighted"] = fit.weighted;
    if (inputs.n2.has_value()) {
        try {
            GainEstimate g = extract_gains(inputs.n_inside, *inputs.n2, fit.r2_abs);
            j["r1"] = g.r1;
            j["nu"] = g.nu;
            j["gains_consistent"] = g.consistent;
            ExactGains ex = solve_exact_gains(fit.amplitude, fit.amplitude_err, inputs.eta,
                                              inputs.mu, inputs.n_inside, *inputs.n2);
            j["exact"] = {{"r1", ex.r1}, {"r2_abs", ex.r2_abs}, {"nu", ex.nu},
                          {"r2_abs_err", ex.r2_abs_err}};
        } catch (const std::invalid_argument &e) {
            throw DataError(e.what());
        }
    }
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::string &path, const std::string &content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw DataError("cannot write '" + tmp.string() + "'");
        }
        f << content;
        if (!f.flush()) {
            throw DataError("cannot write '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, target);
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Unbalanced SU(1,1) interferometer simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::optional<int> grid;
    app.add_option("--config", config_path, "Run configuration (key = value)");
    app.add_option("--seed", seed, "Random seed (overrides run.seed)");
    app.add_option("--out", out_path, "Output file (default: stdout)");
    app.add_option("--grid", grid, "Fringe grid points or sweep eta points")->check(CLI::Range(1, 100000000));

    auto *fringe = app.add_subcommand("fringe", "Model fringe and sensitivity per phase");
    auto *sweep = app.add_subcommand("sweep", "Best sensitivity against detection transmission");
    auto *mc = app.add_subcommand("montecarlo", "Pulse-ensemble fringe scan");
    std::string summary_path;
    mc->add_option("--summary", summary_path, "Summary JSON path (default: <out>.summary.json)");
    auto *fit = app.add_subcommand("fit", "Fit a fringe CSV");
    std::string scan_path;
    std::optional<double> eta, mu, n_inside, n2;
    fit->add_option("--scan", scan_path, "Fringe CSV to fit")->required();
    fit->add_option("--eta", eta, "Detection transmission");
    fit->add_option("--mu", mu, "Internal transmission");
    fit->add_option("--n-inside", n_inside, "Photons inside the interferometer");
    fit->add_option("--n2", n2, "Photons emitted by the second crystal alone");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    auto emit = [&](const std::string &content) {
        if (out_path.empty()) {
            out << content;
        } else {
            write_file_atomic(out_path, content);
        }
    };

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (seed) {
            config.seed = *seed;
        }
        if (grid) {
            if (sweep->parsed()) {
                config.sweep_eta_points = *grid;
            } else if (*grid < 5) {
                throw ConfigError("--grid", "needs at least 5 points");
            } else {
                config.fringe_grid = *grid;
            }
        }
        config.validate();

        if (fringe->parsed()) {
            emit(fringe_csv(config));
        } else if (sweep->parsed()) {
            emit(sweep_csv(config));
        } else if (mc->parsed()) {
            MonteCarloOutput result = montecarlo_output(config);
            emit(result.scan_csv);
            if (!summary_path.empty()) {
                write_file_atomic(summary_path, result.summary_json);
            } else if (!out_path.empty()) {
                write_file_atomic(out_path + ".summary.json", result.summary_json);
            } else {
                err << result.summary_json;
            }
        } else if (fit->parsed()) {
            std::ifstream f(scan_path);
            if (!f) {
                throw DataError("cannot open scan file '" + scan_path + "'");
            }
            std::stringstream buf;
            buf << f.rdbuf();
            FitInputs inputs{eta.value_or(config.eta), mu.value_or(config.mu),
                             n_inside.value_or(config.resolved_n_inside()), n2};
            emit(fit_json(buf.str(), inputs));
        }
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError &e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DataError &e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const EmptyWindowError &e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace su11
