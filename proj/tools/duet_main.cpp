// duet: simulate and analyze single-photon interference from an entangled
// atom pair sharing a common optical mode.
//
// Subcommands: fringe, delay-scan, fit, budget, calibrate, g2. Point data is
// written as CSV, fits and reports as JSON; everything is deterministic for
// a fixed --seed.

#include <CLI11.hpp>
#include <json.hpp>

#include "duet/calibration.hpp"
#include "duet/config.hpp"
#include "duet/emission.hpp"
#include "duet/estimation.hpp"
#include "duet/gradiometry.hpp"
#include "duet/io.hpp"
#include "duet/montecarlo.hpp"
#include "duet/quantum.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli_seed,
                           const std::optional<std::uint64_t>& config_seed) {
    if (cli_seed) return *cli_seed;
    if (config_seed) return *config_seed;
    std::random_device device;
    const std::uint64_t seed =
        (static_cast<std::uint64_t>(device()) << 32) | static_cast<std::uint64_t>(device());
    std::cout << "seed: " << seed << "\n";
    return seed;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> grid;
    grid.reserve(points);
    for (std::size_t i = 0; i < points; ++i)
        grid.push_back(points > 1 ? lo + (hi - lo) * static_cast<double>(i) /
                                             static_cast<double>(points - 1)
                                  : lo);
    return grid;
}

// Accepts plain radians or small multiples of pi ("pi/2", "3pi/2", "2pi").
double parse_phase(const std::string& text) {
    const std::string trimmed = text;
    const auto pi_pos = trimmed.find("pi");
    if (pi_pos == std::string::npos) return std::stod(trimmed);
    double factor = 1.0;
    if (pi_pos > 0) factor = std::stod(trimmed.substr(0, pi_pos));
    double divisor = 1.0;
    const auto slash = trimmed.find('/', pi_pos);
    if (slash != std::string::npos) divisor = std::stod(trimmed.substr(slash + 1));
    return factor * M_PI / divisor;
}

void write_json(const json& document, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << document.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << document.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + out_path);
}

json fit_to_json(const duet::FringeFit& fit) {
    json document;
    document["mean_level"] = fit.mean_level;
    document["mean_level_err"] = fit.mean_level_err;
    document["visibility"] = fit.visibility;
    document["visibility_raw"] = fit.visibility_raw;
    document["visibility_err"] = fit.visibility_err;
    document["phase_offset_rad"] = fit.phase_offset_rad;
    document["phase_offset_err"] = fit.phase_offset_err;
    document["chi2"] = fit.chi2;
    document["dof"] = fit.dof;
    document["bootstrap_used"] = fit.bootstrap_used;
    document["residuals"] = fit.residuals;
    json covariance = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array();
        for (int j = 0; j < 3; ++j) row.push_back(fit.covariance(i, j));
        covariance.push_back(row);
    }
    document["covariance"] = covariance;
    return document;
}

duet::CalibrationTable load_table(const duet::RunConfig& config, const std::string& override_path,
                                  std::string& source) {
    if (!override_path.empty()) {
        source = override_path;
        return duet::CalibrationTable::from_csv(override_path);
    }
    const std::string configured = config.resolved_table_path();
    if (!configured.empty()) {
        source = configured;
        return duet::CalibrationTable::from_csv(configured);
    }
    source = "builtin";
    return duet::CalibrationTable::measured_anchors();
}

int cmd_fringe(const std::string& config_path, std::size_t points, std::uint64_t heralds,
               const std::optional<std::uint64_t>& cli_seed, unsigned threads,
               const std::string& out_path) {
    const duet::RunConfig config = duet::load_run_config(config_path);
    const std::uint64_t seed = resolve_seed(cli_seed, config.seed);

    const auto grid = linspace(0.0, 2.0 * M_PI, points);
    const auto records = duet::simulate_fringe_scan(config.sequence, config.herald,
                                                    config.emission, grid, heralds, seed, threads);

    const duet::DensityMatrix rho = duet::heralded_state(config.herald);
    const double concurrence = duet::concurrence_mixed(rho);
    const double p_sep = config.emission.kappa;
    const auto dashed =
        duet::predicted_fringe_from_concurrence(concurrence, config.emission.kappa, grid);

    duet::CsvTable table;
    table.headers = {"delta_phi_rad", "p_witness",  "p_err", "r_relative",
                     "n_heralds",     "n_witness", "p_model", "p_from_concurrence"};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double n = static_cast<double>(records[i].n_heralds);
        const double k = static_cast<double>(records[i].n_witness);
        const double p_hat = k / n;
        const double p_err = std::sqrt(std::max(k, 1.0)) / n;
        table.rows.push_back({grid[i], p_hat, p_err, duet::relative_probability(p_hat, p_sep),
                              n, k, duet::witness_probability(rho, grid[i], config.emission),
                              dashed[i]});
    }
    duet::write_csv(out_path, table);
    return 0;
}

int cmd_delay_scan(const std::string& config_path, const std::string& dphi_text,
                   const std::optional<double>& gradient_mt_per_m, double tau_max_ms,
                   std::size_t points, std::uint64_t heralds,
                   const std::optional<std::uint64_t>& cli_seed, unsigned threads,
                   const std::string& out_path) {
    const duet::RunConfig config = duet::load_run_config(config_path);
    const std::uint64_t seed = resolve_seed(cli_seed, config.seed);
    const double delta_phi_set = parse_phase(dphi_text);

    duet::GradiometerConfig gradiometer = config.gradiometer;
    if (gradient_mt_per_m) gradiometer.gradient_t_per_m = *gradient_mt_per_m * 1e-3;

    const auto taus = linspace(0.0, tau_max_ms * 1e-3, points);
    auto phase_fn = [&](double tau) { return duet::gradient_phase(tau, gradiometer); };
    const auto records = duet::simulate_delay_scan(config.sequence, config.herald, config.emission,
                                                   taus, delta_phi_set, phase_fn, heralds, seed,
                                                   threads);

    // Model curve with the fringe mean and visibility implied by the herald
    // model, so that the expectation matches the Monte Carlo mean exactly.
    const double f1 = config.herald.single_excitation_fraction;
    const double f0 = config.herald.zero_excitation_fraction;
    const double level = f1 + 2.0 * f0;
    const double visibility = config.herald.coherence * f1 / level;
    const auto expectation = duet::delay_scan_expectation(
        taus, delta_phi_set, visibility, config.emission.kappa * level, gradiometer);

    duet::CsvTable table;
    table.headers = {"tau_ms", "p_witness", "p_err", "expectation"};
    std::vector<double> rates;
    std::vector<double> sigmas;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double n = static_cast<double>(records[i].n_heralds);
        const double k = static_cast<double>(records[i].n_witness);
        rates.push_back(k / n);
        sigmas.push_back(std::sqrt(std::max(k, 1.0)) / n);
        table.rows.push_back({taus[i] * 1e3, rates.back(), sigmas.back(), expectation[i]});
    }
    duet::write_csv(out_path, table);

    json sidecar;
    sidecar["delta_phi_set_rad"] = delta_phi_set;
    sidecar["gradient_mT_per_m"] = gradiometer.gradient_t_per_m * 1e3;
    try {
        const duet::OscillationFit fit = duet::fit_oscillation(taus, rates, sigmas);
        sidecar["oscillation_detected"] = fit.oscillation_detected;
        if (fit.oscillation_detected) {
            sidecar["period_ms"] = fit.period_s * 1e3;
            sidecar["period_err_ms"] = fit.period_err_s * 1e3;
            sidecar["amplitude"] = fit.amplitude;
            sidecar["mean"] = fit.mean;
            sidecar["implied_gradient_mT_per_m"] =
                duet::gradient_from_period(fit.period_s, gradiometer) * 1e3;
        }
    } catch (const std::exception& e) {
        sidecar["oscillation_detected"] = false;
        sidecar["fit_error"] = e.what();
    }
    std::filesystem::path sidecar_path(out_path);
    sidecar_path.replace_extension();
    write_json(sidecar, sidecar_path.string() + ".fit.json");
    return 0;
}

int cmd_fit(const std::string& data_path, const std::string& out_path) {
    const duet::FringeDataset data = duet::FringeDataset::from_csv(data_path);
    const duet::FringeFit fit = duet::fit_fringe(data);
    json document = fit_to_json(fit);
    const duet::ValueWithError concurrence = duet::concurrence_from_fringe(fit);
    document["concurrence_wit"] = concurrence.value;
    document["concurrence_wit_err"] = concurrence.error;
    document["n_points"] = data.size();
    write_json(document, out_path);
    return 0;
}

int cmd_budget(const std::string& config_path, const std::string& out_path) {
    const duet::RunConfig config = duet::load_run_config(config_path);
    const duet::RateBudget rates = duet::rate_budget(config.sequence, config.emission.kappa);

    json document;
    document["herald_probability_per_attempt"] = duet::herald_probability(config.sequence);
    document["herald_rate_hz"] = rates.herald_rate_hz;
    document["witness_rate_per_min"] = rates.witness_rate_per_min;
    document["efficiency_product"] = duet::efficiency_product(config.efficiency);
    document["configured_eta"] = config.sequence.eta;
    document["efficiency_product_over_eta"] =
        duet::efficiency_product(config.efficiency) / config.sequence.eta;
    document["kappa"] = config.emission.kappa;
    document["kappa_collection_factor"] = config.emission.collection_factor();
    const double attempt_s = config.sequence.pump_time_s + config.sequence.excitation_pulse_s;
    document["implied_min_sequence_duration_us"] =
        (config.sequence.cooling_time_s +
         config.sequence.attempts_per_sequence * attempt_s) * 1e6;
    document["sequence_period_us"] = 1e6 / config.sequence.sequence_rate_hz;
    write_json(document, out_path);
    return 0;
}

int cmd_calibrate(const std::string& config_path, const std::string& table_path,
                  std::size_t samples, const std::string& out_path) {
    const duet::RunConfig config = duet::load_run_config(config_path);
    std::string source;
    const duet::CalibrationTable table = load_table(config, table_path, source);

    const double wavelength = config.optics.wavelength_m;
    const double k = 2.0 * M_PI / wavelength;
    duet::RampConfig window;
    window.duration_s = table.last_tau();
    auto motion = [&](double t) {
        const double tau = std::clamp(t, table.first_tau(), table.last_tau());
        return duet::delay_to_phase(tau, table) / (2.0 * k);
    };

    const duet::MichelsonTrace trace = duet::michelson_trace(window, motion, wavelength, samples);
    const duet::UnwrappedPhase phase = duet::phase_from_trace(trace);

    json anchors_tau = json::array();
    json anchors_phase = json::array();
    json recovered = json::array();
    json errors = json::array();
    double max_error = 0.0;
    for (std::size_t i = 0; i < table.tau_s.size(); ++i) {
        const double value = phase.at(table.tau_s[i]);
        const double error = std::abs(value - table.phase_rad[i]);
        max_error = std::max(max_error, error);
        anchors_tau.push_back(table.tau_s[i] * 1e6);
        anchors_phase.push_back(table.phase_rad[i]);
        recovered.push_back(value);
        errors.push_back(error);
    }

    json document;
    document["table"] = source;
    document["anchors_tau_us"] = anchors_tau;
    document["anchors_phase_rad"] = anchors_phase;
    document["recovered_phase_rad"] = recovered;
    document["abs_error_rad"] = errors;
    document["max_abs_error_rad"] = max_error;
    document["tolerance_rad"] = 2.0 * M_PI / 100.0;
    document["pass"] = max_error < 2.0 * M_PI / 100.0;
    write_json(document, out_path);
    return 0;
}

int cmd_g2(const std::optional<double>& indistinguishability, const std::string& out_path) {
    json document;
    document["g2_at_m0"] = duet::g2_zero(0.0);
    document["g2_at_m1"] = duet::g2_zero(1.0);
    if (indistinguishability) {
        document["indistinguishability"] = *indistinguishability;
        document["g2_zero"] = duet::g2_zero(*indistinguishability);
    }
    write_json(document, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-atom single-photon interference simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string data_path;
    std::string table_path;
    std::string dphi_text = "0";
    std::size_t points = 9;
    std::uint64_t heralds = 20000;
    unsigned threads = 1;
    double tau_max_ms = 20.0;
    std::size_t samples = 4096;
    std::optional<std::uint64_t> seed;
    std::optional<double> gradient;
    std::optional<double> indistinguishability;

    auto* fringe = app.add_subcommand("fringe", "Simulate the witness-photon fringe");
    fringe->add_option("config", config_path, "JSON run configuration")->required();
    fringe->add_option("--points", points, "Phase points over [0, 2 pi]")
        ->check(CLI::Range(std::size_t{3}, std::size_t{100000}));
    fringe->add_option("--heralds", heralds, "Heralds per phase point")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    fringe->add_option("--seed", seed, "64-bit seed (entropy when omitted)");
    fringe->add_option("--threads", threads, "Worker threads (result-invariant)");
    fringe->add_option("--out", out_path, "Output CSV path")->required();

    auto* delay = app.add_subcommand("delay-scan", "Scan the herald-witness delay");
    delay->add_option("config", config_path, "JSON run configuration")->required();
    delay->add_option("--dphi", dphi_text, "Mirror phase setting (rad, or e.g. pi/2)");
    delay->add_option("--gradient", gradient, "Magnetic gradient in mT/m (overrides config)");
    delay->add_option("--tau-max-ms", tau_max_ms, "Largest delay in ms")
        ->check(CLI::PositiveNumber);
    delay->add_option("--points", points, "Delay points")
        ->check(CLI::Range(std::size_t{5}, std::size_t{100000}));
    delay->add_option("--heralds", heralds, "Heralds per delay point")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    delay->add_option("--seed", seed, "64-bit seed (entropy when omitted)");
    delay->add_option("--threads", threads, "Worker threads (result-invariant)");
    delay->add_option("--out", out_path, "Output CSV path")->required();

    auto* fit = app.add_subcommand("fit", "Fit a fringe dataset CSV");
    fit->add_option("data", data_path, "CSV with delta_phi_rad, n_heralds, n_witness")->required();
    fit->add_option("--out", out_path, "Output JSON path (stdout when omitted)");

    auto* budget = app.add_subcommand("budget", "Report rates and the efficiency budget");
    budget->add_option("config", config_path, "JSON run configuration")->required();
    budget->add_option("--out", out_path, "Output JSON path (stdout when omitted)");

    auto* calibrate = app.add_subcommand("calibrate", "Round-trip check of a delay-phase table");
    calibrate->add_option("config", config_path, "JSON run configuration")->required();
    calibrate->add_option("--table", table_path, "Calibration table CSV (overrides config)");
    calibrate->add_option("--samples", samples, "Michelson trace samples")
        ->check(CLI::Range(std::size_t{16}, std::size_t{1000000}));
    calibrate->add_option("--out", out_path, "Output JSON path (stdout when omitted)");

    auto* g2 = app.add_subcommand("g2", "Indistinguishability model endpoints");
    g2->add_option("--indistinguishability", indistinguishability,
                   "Evaluate g2(0) at this M in [0, 1]");
    g2->add_option("--out", out_path, "Output JSON path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fringe->parsed())
            return cmd_fringe(config_path, points, heralds, seed, threads, out_path);
        if (delay->parsed())
            return cmd_delay_scan(config_path, dphi_text, gradient, tau_max_ms, points, heralds,
                                  seed, threads, out_path);
        if (fit->parsed()) return cmd_fit(data_path, out_path);
        if (budget->parsed()) return cmd_budget(config_path, out_path);
        if (calibrate->parsed()) return cmd_calibrate(config_path, table_path, samples, out_path);
        if (g2->parsed()) return cmd_g2(indistinguishability, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
